//! The four prime conditions and the certificate scan: supersingularity,
//! mod-p surjectivity, the size threshold p > max(2d+2, exponent), and
//! j not congruent to 0 or 1728.
//!
//! The exponent of Gal(L/Q) cannot be computed from an infinite extension;
//! it enters as a user-supplied input alongside the local-degree bound d
//! (both finite whenever the local degrees are uniformly bounded).

use crate::bounds::{final_bound_log, LogScaleValue};
use crate::elliptic::{trace_of_frobenius, Curve};
use crate::error::{Error, Result};
use crate::galois_image::{certify_surjective_cached, CertStatus, Certification, TraceCache};
use crate::primes::primes_up_to;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P1Report {
    pub pass: bool,
    pub a_p: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P3Report {
    pub pass: bool,
    pub threshold: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P4Report {
    pub pass: bool,
    pub j_mod_p: Option<u64>,
}

/// Evaluation of all four conditions at one prime. Failures are recorded,
/// never raised; `all_pass` requires good reduction as well.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub p: u64,
    pub good_reduction: bool,
    #[serde(rename = "p1")]
    pub p1_supersingular: P1Report,
    #[serde(rename = "p2")]
    pub p2_surjective: Certification,
    #[serde(rename = "p3")]
    pub p3_size: P3Report,
    #[serde(rename = "p4")]
    pub p4_j_ok: P4Report,
    pub all_pass: bool,
}

/// A certified prime: the condition report plus the headline floor in
/// log scale.
#[derive(Clone, Debug, Serialize)]
pub struct PrimeCertificate {
    pub curve: [String; 5],
    pub p: u64,
    pub d: u32,
    pub exponent: u32,
    #[serde(rename = "conditions")]
    pub report: ConditionReport,
    #[serde(rename = "bound", serialize_with = "ser_bound")]
    pub bound_log: LogScaleValue,
}

fn ser_bound<S: serde::Serializer>(
    b: &LogScaleValue,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Bound", 1)?;
    st.serialize_field("ln_value", &b.ln_f64())?;
    st.end()
}

pub fn check_conditions(
    curve: &Curve,
    p: u64,
    d: u32,
    exponent: u32,
    ell_max: u64,
) -> Result<ConditionReport> {
    let mut cache = TraceCache::new(curve);
    check_conditions_cached(&mut cache, p, d, exponent, ell_max)
}

/// Strict size threshold: the prime must exceed max(2d+2, exponent).
fn p3_threshold(d: u32, exponent: u32) -> u64 {
    (2 * d as u64 + 2).max(exponent as u64)
}

pub fn check_conditions_cached(
    cache: &mut TraceCache<'_>,
    p: u64,
    d: u32,
    exponent: u32,
    ell_max: u64,
) -> Result<ConditionReport> {
    if d == 0 || exponent == 0 {
        return Err(Error::Domain("d and exponent must be positive".into()));
    }
    let curve = cache.curve;
    let good_reduction = p >= 2 && curve.has_good_reduction(p);
    let threshold = p3_threshold(d, exponent);
    let p3 = P3Report {
        pass: p > threshold,
        threshold,
    };

    let countable = good_reduction && p >= 5;
    let p1 = if countable {
        let a_p = trace_of_frobenius(curve, p)?;
        P1Report {
            pass: a_p == 0,
            a_p: Some(a_p),
        }
    } else {
        P1Report {
            pass: false,
            a_p: None,
        }
    };
    let p2 = if countable {
        certify_surjective_cached(cache, p, ell_max)?
    } else {
        Certification {
            status: CertStatus::Inconclusive,
            witnesses: vec![],
            primes_consumed: 0,
        }
    };
    let p4 = if countable {
        let j = curve.j_mod(p)?;
        P4Report {
            pass: j != 0 && j != 1728 % p,
            j_mod_p: Some(j),
        }
    } else {
        P4Report {
            pass: false,
            j_mod_p: None,
        }
    };

    let all_pass = good_reduction
        && p1.pass
        && p2.status == CertStatus::Certified
        && p3.pass
        && p4.pass;
    Ok(ConditionReport {
        p,
        good_reduction,
        p1_supersingular: p1,
        p2_surjective: p2,
        p3_size: p3,
        p4_j_ok: p4,
        all_pass,
    })
}

/// Why the scan rejected each prime. A prime can fail several conditions
/// at once; every failing condition is tallied.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FailureHistogram {
    pub scanned: u64,
    pub bad_reduction: u64,
    pub p1: u64,
    pub p2: u64,
    pub p3: u64,
    pub p4: u64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FindOutcome {
    Found(Box<PrimeCertificate>),
    NotFound(FailureHistogram),
}

/// Ascending scan for the smallest prime p <= p_max passing all four
/// conditions. Bad-reduction primes are skipped and tallied separately
/// rather than counted as condition failures.
pub fn find_prime(
    curve: &Curve,
    d: u32,
    exponent: u32,
    p_max: u64,
    ell_max: u64,
) -> Result<FindOutcome> {
    if p_max < 5 {
        return Err(Error::Domain(format!("p_max = {p_max} must be at least 5")));
    }
    let mut cache = TraceCache::new(curve);
    let mut hist = FailureHistogram::default();
    for p in primes_up_to(p_max) {
        hist.scanned += 1;
        if !curve.has_good_reduction(p) {
            hist.bad_reduction += 1;
            continue;
        }
        let report = check_conditions_cached(&mut cache, p, d, exponent, ell_max)?;
        if report.all_pass {
            let bound_log = final_bound_log(p)?;
            return Ok(FindOutcome::Found(Box::new(PrimeCertificate {
                curve: [
                    curve.a1.to_string(),
                    curve.a2.to_string(),
                    curve.a3.to_string(),
                    curve.a4.to_string(),
                    curve.a6.to_string(),
                ],
                p,
                d,
                exponent,
                report,
                bound_log,
            })));
        }
        if !report.p1_supersingular.pass {
            hist.p1 += 1;
        }
        if report.p2_surjective.status != CertStatus::Certified {
            hist.p2 += 1;
        }
        if !report.p3_size.pass {
            hist.p3 += 1;
        }
        if !report.p4_j_ok.pass {
            hist.p4 += 1;
        }
    }
    Ok(FindOutcome::NotFound(hist))
}
