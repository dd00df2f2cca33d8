//! Underflow-safe evaluation of the explicit bound formulas and numeric
//! verification of the inequality chains behind them.
//!
//! Quantities like p^(-5p^4) underflow any native float, so everything is
//! carried as a sign plus natural-log magnitude at configurable precision
//! (`HEIGHTFLOOR_PRECISION` decimal digits, default 50).

use crate::error::{Error, Result};
use crate::primes::is_prime;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use std::cmp::Ordering;

type Real = FBig; // binary FBig, round-to-zero with generous guard bits

/// Constant of the tame bound denominator, `5 * 2^11`. The archimedean
/// embedding-sum lemma reproduces it as `40 / delta^4` at `delta = 1/4`;
/// the acceptance suite asserts both code paths agree exactly.
pub const TAME_SUM_CONSTANT: u64 = 5 * (1 << 11);

/// Working precision in bits, from `HEIGHTFLOOR_PRECISION` decimal digits.
pub fn precision_bits() -> usize {
    let digits = std::env::var("HEIGHTFLOOR_PRECISION")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&d| (1..=10_000).contains(&d))
        .unwrap_or(50);
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 32
}

fn real_u64(v: u64, prec: usize) -> Real {
    Real::from(IBig::from(v)).with_precision(prec).value()
}

fn real_u128(v: u128, prec: usize) -> Real {
    Real::from(IBig::from(v)).with_precision(prec).value()
}

fn real_bigint(v: &BigInt, prec: usize) -> Real {
    let i: IBig = v.to_string().parse().expect("decimal digits");
    Real::from(i).with_precision(prec).value()
}

/// Sign of a log-scale value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

/// sign * exp(ln_magnitude): arithmetic for quantities far outside native
/// float range. Multiplication, powers and comparison act on the log
/// directly; addition goes through ln-sum-exp.
#[derive(Clone, Debug)]
pub struct LogScaleValue {
    sign: Sign,
    ln_mag: Real, // meaningless when sign == Zero
}

impl LogScaleValue {
    pub fn zero(prec: usize) -> Self {
        LogScaleValue {
            sign: Sign::Zero,
            ln_mag: real_u64(0, prec),
        }
    }

    pub fn from_ln(sign: Sign, ln_mag: Real) -> Self {
        LogScaleValue { sign, ln_mag }
    }

    /// A positive log-scale value from a plain f64 natural log, promoted
    /// to working precision (for floors read back from serialized
    /// certificates).
    pub fn from_ln_f64(ln: f64) -> Self {
        let prec = precision_bits();
        let v = Real::try_from(ln).expect("finite ln").with_precision(prec).value();
        LogScaleValue {
            sign: Sign::Pos,
            ln_mag: v,
        }
    }

    pub fn from_rational(q: &BigRational, prec: usize) -> Self {
        use num_traits::Zero as _;
        if q.is_zero() {
            return LogScaleValue::zero(prec);
        }
        let sign = if q.numer().sign() == num_bigint::Sign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        use num_traits::Signed as _;
        let num = real_bigint(&q.numer().abs(), prec);
        let den = real_bigint(&q.denom().abs(), prec);
        let ln = num.ln() - den.ln();
        LogScaleValue { sign, ln_mag: ln }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Natural log of the magnitude, as f64 (for reporting).
    pub fn ln_f64(&self) -> f64 {
        self.ln_mag.to_f64().value()
    }

    pub fn ln_real(&self) -> &Real {
        &self.ln_mag
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let sign = match (self.sign, rhs.sign) {
            (Sign::Zero, _) | (_, Sign::Zero) => return LogScaleValue::zero(self.ln_mag.precision()),
            (Sign::Pos, Sign::Pos) | (Sign::Neg, Sign::Neg) => Sign::Pos,
            _ => Sign::Neg,
        };
        LogScaleValue {
            sign,
            ln_mag: self.ln_mag.clone() + rhs.ln_mag.clone(),
        }
    }

    pub fn powi(&self, k: u64) -> Self {
        match self.sign {
            Sign::Zero => {
                if k == 0 {
                    LogScaleValue {
                        sign: Sign::Pos,
                        ln_mag: self.ln_mag.clone() * Real::from(IBig::from(0u8)),
                    }
                } else {
                    self.clone()
                }
            }
            s => {
                let sign = if s == Sign::Neg && k % 2 == 1 {
                    Sign::Neg
                } else {
                    Sign::Pos
                };
                LogScaleValue {
                    sign,
                    ln_mag: self.ln_mag.clone() * Real::from(IBig::from(k)),
                }
            }
        }
    }

    /// ln-sum-exp addition; exact cancellation yields zero.
    pub fn add(&self, rhs: &Self) -> Self {
        match (self.sign, rhs.sign) {
            (Sign::Zero, _) => return rhs.clone(),
            (_, Sign::Zero) => return self.clone(),
            _ => {}
        }
        let (big, small) = if self.ln_mag >= rhs.ln_mag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let delta = small.ln_mag.clone() - big.ln_mag.clone(); // <= 0
        if big.sign == small.sign {
            LogScaleValue {
                sign: big.sign,
                ln_mag: big.ln_mag.clone() + delta.exp().ln_1p(),
            }
        } else {
            let e = delta.exp();
            let one = Real::from(IBig::from(1u8)).with_precision(e.precision()).value();
            if e == one {
                return LogScaleValue::zero(self.ln_mag.precision());
            }
            LogScaleValue {
                sign: big.sign,
                ln_mag: big.ln_mag.clone() + (-e).ln_1p(),
            }
        }
    }

    /// Exponentiate back to f64 (0.0 on deep underflow). The exponential is
    /// taken at working precision so representable values round-trip to
    /// f64 accuracy.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            Sign::Zero => 0.0,
            Sign::Pos => self.ln_mag.exp().to_f64().value(),
            Sign::Neg => -self.ln_mag.exp().to_f64().value(),
        }
    }

    pub fn cmp_value(&self, rhs: &Self) -> Ordering {
        let rank = |s: Sign| match s {
            Sign::Neg => 0,
            Sign::Zero => 1,
            Sign::Pos => 2,
        };
        match rank(self.sign).cmp(&rank(rhs.sign)) {
            Ordering::Equal => match self.sign {
                Sign::Zero => Ordering::Equal,
                Sign::Pos => self.ln_mag.partial_cmp(&rhs.ln_mag).unwrap(),
                Sign::Neg => rhs.ln_mag.partial_cmp(&self.ln_mag).unwrap(),
            },
            o => o,
        }
    }
}

fn require_prime_ge5(p: u64) -> Result<()> {
    if p < 5 || !is_prime(p) {
        return Err(Error::Domain(format!("p = {p} must be a prime >= 5")));
    }
    Ok(())
}

fn ln_u64(v: u64, prec: usize) -> Real {
    real_u64(v, prec).ln()
}

/// ln(1 + e^x) at full precision.
fn ln_1p_exp(x: &Real) -> Real {
    let zero = Real::from(IBig::from(0u8)).with_precision(x.precision()).value();
    if *x <= zero {
        x.exp().ln_1p()
    } else {
        // x + ln(1 + e^-x)
        x.clone() + (-x.clone()).exp().ln_1p()
    }
}

/// ln of the headline floor (log p)^4 / p^(5 p^4), as a log-scale value.
pub fn final_bound_log(p: u64) -> Result<LogScaleValue> {
    require_prime_ge5(p)?;
    let prec = precision_bits();
    let lnp = ln_u64(p, prec);
    let four = real_u64(4, prec);
    let five_p4 = real_u128(5 * (p as u128).pow(4), prec);
    let ln = four * lnp.clone().ln() - five_p4 * lnp;
    Ok(LogScaleValue::from_ln(Sign::Pos, ln))
}

/// ln of the tame-case floor (log p / (E (1+q^E) (1+5*2^11)))^4 with q = p^2.
pub fn tame_bound_log(p: u64, cal_e: u64) -> Result<LogScaleValue> {
    require_prime_ge5(p)?;
    if cal_e == 0 {
        return Err(Error::Domain("cal_e must be positive".into()));
    }
    let prec = precision_bits();
    let lnp = ln_u64(p, prec);
    let ln_q = lnp.clone() * real_u64(2, prec);
    let ln_one_plus_qe = ln_1p_exp(&(ln_q * real_u64(cal_e, prec)));
    let inner = lnp.ln() - ln_u64(cal_e, prec) - ln_one_plus_qe - ln_u64(1 + TAME_SUM_CONSTANT, prec);
    Ok(LogScaleValue::from_ln(Sign::Pos, real_u64(4, prec) * inner))
}

/// ln of the wild-case floor (log p)^4 / (4*10^6 * p^32).
pub fn wild_bound_log(p: u64) -> Result<LogScaleValue> {
    require_prime_ge5(p)?;
    let prec = precision_bits();
    let lnp = ln_u64(p, prec);
    let ln = real_u64(4, prec) * lnp.clone().ln()
        - ln_u64(4_000_000, prec)
        - real_u64(32, prec) * lnp;
    Ok(LogScaleValue::from_ln(Sign::Pos, ln))
}

/// Exact orbit floor [K(N):Q] / (p^4 d_v).
pub fn orbit_lower_bound(deg_kn: u64, p: u64, d_v: u64) -> BigRational {
    BigRational::new(
        BigInt::from(deg_kn),
        BigInt::from(p).pow(4) * BigInt::from(d_v),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    pub name: String,
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub holds: bool,
}

/// Per-step record of the proof's inequality chain. Failing steps are
/// reported, not raised: the verifier documents the numerics as they are.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub p: u64,
    pub d: u32,
    pub exponent: u32,
    pub f_deg: u32,
    pub cal_e: u64,
    pub steps: Vec<ChainStep>,
    pub overall_holds: bool,
}

pub fn verify_chain(p: u64, d: u32, exponent: u32) -> Result<ChainReport> {
    verify_chain_with(p, d, exponent, None)
}

/// As [`verify_chain`], with an optional override for a smaller known E;
/// the default is the maximal value (q-1) * d * exponent with [F:Q_q] <= d.
pub fn verify_chain_with(p: u64, d: u32, exponent: u32, cal_e: Option<u64>) -> Result<ChainReport> {
    require_prime_ge5(p)?;
    if d == 0 || exponent == 0 {
        return Err(Error::Domain("d and exponent must be positive".into()));
    }
    let prec = precision_bits();
    let f_deg = d;
    let q_minus_1 = (p as u128) * (p as u128) - 1;
    let cal_e = match cal_e {
        Some(e) => e,
        None => u64::try_from(q_minus_1 * d as u128 * exponent as u128)
            .map_err(|_| Error::Domain("(p^2-1) d exponent exceeds u64".into()))?,
    };
    let lnp = ln_u64(p, prec);
    let ln2 = ln_u64(2, prec);
    let ln4 = ln_u64(4, prec);
    let p4 = (p as u128).pow(4);

    let mut steps = Vec::new();
    let mut push = |name: &str, lhs: Real, rhs: Real| {
        steps.push(ChainStep {
            name: name.to_string(),
            lhs_log: lhs.to_f64().value(),
            rhs_log: rhs.to_f64().value(),
            holds: lhs <= rhs,
        });
    };

    // s1: E <= p^4 / 2
    push(
        "s1_cal_e_at_most_half_p4",
        ln_u64(cal_e, prec),
        real_u64(4, prec) * lnp.clone() - ln2.clone(),
    );

    // s2: (5*2^11 (2p^2)^(1/4) + 2p^2) p^4 <= 46 p^8
    let ln_2p2 = ln2.clone() + real_u64(2, prec) * lnp.clone();
    let term1 = ln_u64(TAME_SUM_CONSTANT, prec) + ln_2p2.clone() / real_u64(4, prec);
    let lhs2 = lnsumexp(&term1, &ln_2p2) + real_u64(4, prec) * lnp.clone();
    push(
        "s2_wild_denominator_collapse",
        lhs2,
        ln_u64(46, prec) + real_u64(8, prec) * lnp.clone(),
    );

    // s3: final <= wild scaled down by (4^[F:Qq] + 1)
    let final_ln = final_bound_log(p)?.ln_real().clone();
    let wild_ln = wild_bound_log(p)?.ln_real().clone();
    let ln_4f_plus_1 = ln_1p_exp(&(ln4.clone() * real_u64(f_deg as u64, prec)));
    push("s3_final_below_scaled_wild", final_ln, wild_ln - ln_4f_plus_1);

    // s4: 4^(2p^4) p^(4p^4 + 16) <= p^(5p^4)
    let lhs4 = real_u128(2 * p4, prec) * ln4 + real_u128(4 * p4 + 16, prec) * lnp.clone();
    let rhs4 = real_u128(5 * p4, prec) * lnp;
    push("s4_tame_exponent_collapse", lhs4, rhs4);

    let overall_holds = steps.iter().all(|s| s.holds);
    Ok(ChainReport {
        p,
        d,
        exponent,
        f_deg,
        cal_e,
        steps,
        overall_holds,
    })
}

/// ln(e^a + e^b).
fn lnsumexp(a: &Real, b: &Real) -> Real {
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    big.clone() + (small.clone() - big.clone()).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn final_bound_spot_value() {
        // independent 60-digit evaluation: 4 ln ln 5 - 3125 ln 5
        let v = final_bound_log(5).unwrap();
        assert_eq!(v.sign(), Sign::Pos);
        assert!((v.ln_f64() - (-5_027.589_936_375_255)).abs() < 1e-9);
    }

    #[test]
    fn final_bound_monotone_decreasing() {
        let v5 = final_bound_log(5).unwrap();
        let v7 = final_bound_log(7).unwrap();
        assert!((v7.ln_f64() - (-23357.988420166723)).abs() < 1e-8);
        assert_eq!(v7.cmp_value(&v5), Ordering::Less);
    }

    #[test]
    fn final_bound_domain_errors() {
        assert!(final_bound_log(4).is_err());
        assert!(final_bound_log(3).is_err());
        assert!(final_bound_log(9).is_err());
    }

    #[test]
    fn tame_bound_spot_value() {
        let v = tame_bound_log(5, 24).unwrap();
        assert!((v.ln_f64() - (-356.757_372_727_732_4)).abs() < 1e-9);
        // consistency with the final max(...) collapse
        assert_eq!(
            v.cmp_value(&final_bound_log(5).unwrap()),
            Ordering::Greater
        );
        assert!(tame_bound_log(5, 0).is_err());
    }

    #[test]
    fn wild_bound_spot_value() {
        let v = wild_bound_log(5).unwrap();
        assert!((v.ln_f64() - (-64.800_278_135_666_93)).abs() < 1e-9);
        assert_eq!(
            v.cmp_value(&final_bound_log(5).unwrap()),
            Ordering::Greater
        );
        assert!(wild_bound_log(2).is_err());
    }

    #[test]
    fn orbit_bound_examples() {
        assert_eq!(orbit_lower_bound(10_000, 5, 2), BigRational::from(BigInt::from(8)));
        assert_eq!(
            orbit_lower_bound(1, 5, 1),
            BigRational::new(BigInt::from(1), BigInt::from(625))
        );
        assert_eq!(orbit_lower_bound(625, 5, 1), BigRational::from(BigInt::from(1)));
    }

    #[test]
    fn chain_p17_all_hold() {
        let r = verify_chain(17, 1, 1).unwrap();
        assert!(r.overall_holds, "{:?}", r.steps);
        assert_eq!(r.cal_e, 288);
    }

    #[test]
    fn chain_small_primes_fail_s4_only() {
        for p in [5u64, 7, 11, 13] {
            let r = verify_chain(p, 1, 1).unwrap();
            let s4 = r.steps.iter().find(|s| s.name.starts_with("s4")).unwrap();
            assert!(!s4.holds, "s4 should fail at p={p}");
            for s in r.steps.iter().filter(|s| !s.name.starts_with("s4")) {
                assert!(s.holds, "step {} should hold at p={p}", s.name);
            }
            assert!(!r.overall_holds);
        }
    }

    #[test]
    fn chain_p101_d2_exp2() {
        let r = verify_chain(101, 2, 2).unwrap();
        assert!(r.overall_holds);
    }

    #[test]
    fn logscale_roundtrip_rationals() {
        let prec = precision_bits();
        for (n, d) in [(1i64, 3i64), (-7, 2), (355, 113), (12345, 1)] {
            let q = BigRational::new(BigInt::from(n), BigInt::from(d));
            let v = LogScaleValue::from_rational(&q, prec);
            let expect = n as f64 / d as f64;
            assert!(
                (v.to_f64() - expect).abs() <= expect.abs() * 1e-15,
                "{n}/{d}"
            );
        }
    }

    #[test]
    fn logscale_addition_lnsumexp() {
        let prec = precision_bits();
        let a = LogScaleValue::from_rational(&BigRational::from(BigInt::from(3)), prec);
        let b = LogScaleValue::from_rational(&BigRational::from(BigInt::from(5)), prec);
        assert!((a.add(&b).to_f64() - 8.0).abs() < 1e-14);
        let c = LogScaleValue::from_rational(&BigRational::from(BigInt::from(-5)), prec);
        assert!((a.add(&c).to_f64() - (-2.0)).abs() < 1e-14);
        // exact cancellation
        assert_eq!(b.add(&c).sign(), Sign::Zero);
    }

    #[test]
    fn logscale_mul_pow() {
        let prec = precision_bits();
        let a = LogScaleValue::from_rational(&BigRational::new(BigInt::from(-2), BigInt::from(3)), prec);
        let sq = a.powi(2);
        assert_eq!(sq.sign(), Sign::Pos);
        assert!((sq.to_f64() - 4.0 / 9.0).abs() < 1e-15);
        let cube = a.powi(3);
        assert_eq!(cube.sign(), Sign::Neg);
        let prod = a.mul(&a).mul(&a);
        assert!((cube.to_f64() - prod.to_f64()).abs() < 1e-15);
    }
}
