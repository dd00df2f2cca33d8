//! Certification that the mod-p image of Galois is all of GL2(F_p), from
//! Frobenius characteristic-polynomial data, together with an exhaustive
//! small-p soundness oracle for the criterion itself.
//!
//! Each Frobenius class at a good prime ell gives the pair (a_ell, ell)
//! = (trace, det) of its matrix mod p. Three witness flags jointly rule
//! out every maximal-subgroup family that has full determinant image:
//! nonsquare discriminant with nonzero trace kills Borel and split-Cartan
//! normalizer containment, a nonzero-square discriminant with nonzero
//! trace kills the nonsplit-Cartan normalizer, and a trace/det invariant
//! outside the projective-order-{1,2,3,4,5} locus kills the exceptional
//! groups. The oracle below verifies, for p in {5, 7}, that no proper
//! subgroup with full determinant attains all three flags.

use crate::elliptic::{trace_of_frobenius, Curve};
use crate::error::{Error, Result};
use crate::gl2_core::{proper_subgroup_classes, ElemSet, Gl2Table};
use crate::primes::{inv_mod, is_prime, mul_mod, primes_up_to};
use serde::Serialize;
use std::collections::HashMap;

/// The three Frobenius witness booleans. Monotone: folding new data only
/// flips flags from false to true.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FlagTriple {
    pub nonsquare_disc: bool,
    pub square_disc: bool,
    pub exceptional_breaker: bool,
}

impl FlagTriple {
    pub fn all(&self) -> bool {
        self.nonsquare_disc && self.square_disc && self.exceptional_breaker
    }

    pub fn fold(&mut self, other: FlagTriple) {
        self.nonsquare_disc |= other.nonsquare_disc;
        self.square_disc |= other.square_disc;
        self.exceptional_breaker |= other.exceptional_breaker;
    }
}

/// Flags of a single characteristic polynomial x^2 - t x + d over F_p.
pub fn charpoly_flags(t: i64, d: u64, p: u64) -> Result<FlagTriple> {
    if p < 5 || !is_prime(p) {
        return Err(Error::UnsupportedPrime(p));
    }
    if d.is_multiple_of(p) {
        return Err(Error::Domain("determinant datum is zero mod p".into()));
    }
    let tr = t.rem_euclid(p as i64) as u64;
    Ok(flags_from_residues(tr, d % p, p))
}

fn flags_from_residues(t: u64, d: u64, p: u64) -> FlagTriple {
    debug_assert!(t < p && d < p && d != 0);
    let disc = (mul_mod(t, t, p) + p - mul_mod(4 % p, d, p) % p) % p;
    let legendre = crate::algebra::legendre_u64(disc, p);
    let nonsquare_disc = t != 0 && legendre == -1;
    let square_disc = t != 0 && legendre == 1;
    let u = mul_mod(mul_mod(t, t, p), inv_mod(d, p), p);
    let exceptional_breaker = !matches!(u, 0 | 1 | 2 | 4)
        && !(mul_mod(u, u, p) + p - mul_mod(3 % p, u, p) % p + 1).is_multiple_of(p);
    FlagTriple {
        nonsquare_disc,
        square_disc,
        exceptional_breaker,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Certified,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub ell: u64,
    pub trace: i64,
    pub flag: &'static str,
}

/// Outcome of the Frobenius scan. `Certified` is a proof modulo the flag
/// criterion (machine-checked for p in {5,7} by [`flag_criterion_oracle`]);
/// `Inconclusive` is never a disproof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certification {
    pub status: CertStatus,
    pub witnesses: Vec<Witness>,
    pub primes_consumed: u64,
}

/// Memoized Frobenius traces of one curve, shared across certification
/// scans at different p.
pub struct TraceCache<'c> {
    pub curve: &'c Curve,
    traces: HashMap<u64, i64>,
}

impl<'c> TraceCache<'c> {
    pub fn new(curve: &'c Curve) -> Self {
        TraceCache {
            curve,
            traces: HashMap::new(),
        }
    }

    pub fn trace(&mut self, ell: u64) -> Result<i64> {
        if let Some(&t) = self.traces.get(&ell) {
            return Ok(t);
        }
        let t = trace_of_frobenius(self.curve, ell)?;
        self.traces.insert(ell, t);
        Ok(t)
    }
}

pub fn certify_surjective(curve: &Curve, p: u64, ell_max: u64) -> Result<Certification> {
    let mut cache = TraceCache::new(curve);
    certify_surjective_cached(&mut cache, p, ell_max)
}

/// Ascending scan over good primes ell <= ell_max (ell = p and ell in {2,3}
/// skipped), folding charpoly flags until all three are witnessed. The
/// first prime establishing each flag is recorded, making certificates
/// deterministic.
pub fn certify_surjective_cached(
    cache: &mut TraceCache<'_>,
    p: u64,
    ell_max: u64,
) -> Result<Certification> {
    if p < 5 || !is_prime(p) {
        return Err(Error::UnsupportedPrime(p));
    }
    let mut flags = FlagTriple::default();
    let mut witnesses: [Option<Witness>; 3] = [None, None, None];
    let mut consumed = 0u64;
    for ell in primes_up_to(ell_max) {
        if ell < 5 || ell == p || !cache.curve.has_good_reduction(ell) {
            continue;
        }
        if ell % p == 0 {
            continue; // degenerate determinant datum
        }
        let a = cache.trace(ell)?;
        let new = charpoly_flags(a, ell, p)?;
        consumed += 1;
        let labels = ["nonsquare_disc", "square_disc", "exceptional_breaker"];
        let bits = [new.nonsquare_disc, new.square_disc, new.exceptional_breaker];
        let had = [
            flags.nonsquare_disc,
            flags.square_disc,
            flags.exceptional_breaker,
        ];
        for i in 0..3 {
            if bits[i] && !had[i] {
                witnesses[i] = Some(Witness {
                    ell,
                    trace: a,
                    flag: labels[i],
                });
            }
        }
        flags.fold(new);
        if flags.all() {
            return Ok(Certification {
                status: CertStatus::Certified,
                witnesses: witnesses.into_iter().flatten().collect(),
                primes_consumed: consumed,
            });
        }
    }
    Ok(Certification {
        status: CertStatus::Inconclusive,
        witnesses: witnesses.into_iter().flatten().collect(),
        primes_consumed: consumed,
    })
}

/// A proper full-determinant subgroup class attaining all three flags
/// would witness unsoundness of the criterion.
#[derive(Clone, Debug, Serialize)]
pub struct OracleViolation {
    pub order: usize,
    pub sample_elements: Vec<[u64; 4]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub p: u64,
    pub subgroup_classes_checked: usize,
    pub full_det_proper_classes: usize,
    pub violations: Vec<OracleViolation>,
    pub whole_group_attains_all_flags: bool,
    pub sound: bool,
}

/// Exhaustive soundness check of the flag criterion over GL2(F_p), one
/// subgroup per conjugacy class (flag attainment and determinant image are
/// both conjugation-invariant). Feasible for p in {5, 7}.
pub fn flag_criterion_oracle(p: u64) -> Result<OracleReport> {
    if !(p == 5 || p == 7) {
        return Err(Error::UnsupportedPrime(p));
    }
    let table = Gl2Table::build(p);
    let p = table.p;
    let el_flags: Vec<FlagTriple> = (0..table.n)
        .map(|i| {
            let t = table.trace[i] as u64;
            let d = table.det[i] as u64;
            if d == 0 {
                unreachable!("GL2 elements have nonzero det")
            }
            flags_from_residues(t % p, d % p, p)
        })
        .collect();

    let attained = |set: &ElemSet| -> FlagTriple {
        let mut acc = FlagTriple::default();
        for x in set.iter() {
            acc.fold(el_flags[x as usize]);
            if acc.all() {
                break;
            }
        }
        acc
    };
    let full_det = |set: &ElemSet| -> bool {
        let mut seen = vec![false; p as usize];
        let mut count = 0;
        for x in set.iter() {
            let d = table.det[x as usize] as usize;
            if !seen[d] {
                seen[d] = true;
                count += 1;
            }
        }
        count == (p - 1) as usize
    };

    let reps = proper_subgroup_classes(&table);
    let mut violations = Vec::new();
    let mut full_det_proper = 0usize;
    for rep in &reps {
        if !full_det(rep) {
            continue;
        }
        full_det_proper += 1;
        if attained(rep).all() {
            let sample: Vec<[u64; 4]> = rep
                .iter()
                .take(4)
                .map(|i| table.els[i as usize])
                .collect();
            violations.push(OracleViolation {
                order: rep.len(),
                sample_elements: sample,
            });
        }
    }

    let mut whole = FlagTriple::default();
    for f in &el_flags {
        whole.fold(*f);
        if whole.all() {
            break;
        }
    }

    let sound = violations.is_empty() && whole.all();
    Ok(OracleReport {
        p,
        subgroup_classes_checked: reps.len(),
        full_det_proper_classes: full_det_proper,
        violations,
        whole_group_attains_all_flags: whole.all(),
        sound,
    })
}

/// Structural profile of the proper-subgroup lattice: (group order, one
/// (subgroup order, conjugate count) entry per conjugacy class). Exposed
/// so the lattice walk behind the oracle can be cross-checked against
/// Sylow theory by independent tests.
pub fn subgroup_class_profile(p: u64) -> Result<(usize, Vec<(usize, usize)>)> {
    if !(p == 5 || p == 7) {
        return Err(Error::UnsupportedPrime(p));
    }
    let table = Gl2Table::build(p);
    let reps = proper_subgroup_classes(&table);
    let profile = reps
        .iter()
        .map(|r| (r.len(), crate::gl2_core::conjugate_count(&table, r)))
        .collect();
    Ok((table.n, profile))
}
