//! Long Weierstrass models over Q, reduction modulo primes, point counting
//! via quadratic-character sums, and the supersingularity test.

use crate::algebra::legendre_u64;
use crate::error::{Error, Result};
use crate::primes::{inv_mod, is_prime, mul_mod};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with the standard derived
/// quantities. Construction rejects singular models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub disc: BigInt,
    /// j = c4^3 / disc in lowest terms, denominator positive.
    pub j_num: BigInt,
    pub j_den: BigInt,
}

impl Curve {
    pub fn new(a1: BigInt, a2: BigInt, a3: BigInt, a4: BigInt, a6: BigInt) -> Result<Curve> {
        let n = BigInt::from;
        let b2: BigInt = &a1 * &a1 + n(4) * &a2;
        let b4: BigInt = n(2) * &a4 + &a1 * &a3;
        let b6: BigInt = &a3 * &a3 + n(4) * &a6;
        let b8: BigInt =
            &a1 * &a1 * &a6 + n(4) * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        let disc: BigInt = n(-1) * &b2 * &b2 * &b8 - n(8) * &b4 * &b4 * &b4 - n(27) * &b6 * &b6
            + n(9) * &b2 * &b4 * &b6;
        let c4: BigInt = &b2 * &b2 - n(24) * &b4;
        let c6: BigInt = n(-1) * &b2 * &b2 * &b2 + n(36) * &b2 * &b4 - n(216) * &b6;
        debug_assert_eq!(n(4) * &b8, &b2 * &b6 - &b4 * &b4);
        debug_assert_eq!(n(1728) * &disc, &c4 * &c4 * &c4 - &c6 * &c6);
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        let c4_cubed = &c4 * &c4 * &c4;
        let g = c4_cubed.gcd(&disc);
        let (mut j_num, mut j_den) = if g.is_zero() {
            (BigInt::zero(), BigInt::from(1))
        } else {
            (&c4_cubed / &g, &disc / &g)
        };
        if j_den.is_negative() {
            j_num = -j_num;
            j_den = -j_den;
        }
        Ok(Curve {
            a1,
            a2,
            a3,
            a4,
            a6,
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            disc,
            j_num,
            j_den,
        })
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Curve> {
        Curve::new(
            BigInt::from(a[0]),
            BigInt::from(a[1]),
            BigInt::from(a[2]),
            BigInt::from(a[3]),
            BigInt::from(a[4]),
        )
    }

    /// Parse the CLI format "a1,a2,a3,a4,a6".
    pub fn parse(s: &str) -> Result<Curve> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 5 {
            return Err(Error::Domain(format!(
                "curve needs 5 comma-separated integers, got {}",
                parts.len()
            )));
        }
        let mut cs = Vec::with_capacity(5);
        for t in parts {
            let c: BigInt = t
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("bad curve coefficient {t:?}")))?;
            cs.push(c);
        }
        Curve::new(
            cs[0].clone(),
            cs[1].clone(),
            cs[2].clone(),
            cs[3].clone(),
            cs[4].clone(),
        )
    }

    pub fn has_good_reduction(&self, ell: u64) -> bool {
        !(&self.disc % BigInt::from(ell)).is_zero()
    }

    /// j mod p as a residue, for p of good reduction (then p never divides
    /// the reduced denominator, which divides the discriminant).
    pub fn j_mod(&self, p: u64) -> Result<u64> {
        let bp = BigInt::from(p);
        let den = self.j_den.mod_floor(&bp).to_u64().expect("fits");
        if den == 0 {
            return Err(Error::BadReduction(p));
        }
        let num = self.j_num.mod_floor(&bp).to_u64().expect("fits");
        Ok(mul_mod(num, inv_mod(den, p), p))
    }

    /// Short-model coefficients (A, B) of an isomorphic curve mod ell >= 5:
    /// A = -c4/48, B = -c6/864 (2 and 3 are invertible).
    pub fn short_model_mod(&self, ell: u64) -> Result<(u64, u64)> {
        if ell < 5 {
            return Err(Error::UnsupportedPrime(ell));
        }
        let bp = BigInt::from(ell);
        let c4 = self.c4.mod_floor(&bp).to_u64().expect("fits");
        let c6 = self.c6.mod_floor(&bp).to_u64().expect("fits");
        let a = mul_mod(ell - c4 % ell, inv_mod(48 % ell, ell), ell) % ell;
        let b = mul_mod(ell - c6 % ell, inv_mod(864 % ell, ell), ell) % ell;
        Ok((a, b))
    }

    /// A global integral short model y^2 = x^3 - 27 c4 x - 54 c6, isomorphic
    /// over Q; its discriminant is 2^12 3^12 disc, so reduction at any
    /// ell >= 5 agrees with the original model.
    pub fn short_model_global(&self) -> (BigInt, BigInt) {
        (-27 * &self.c4, -54 * &self.c6)
    }
}

/// A good prime together with the trace of Frobenius there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrobeniusDatum {
    pub ell: u64,
    pub trace: i64,
}

impl FrobeniusDatum {
    pub fn hasse_ok(&self) -> bool {
        (self.trace as i128).pow(2) <= 4 * self.ell as i128
    }
}

fn check_counting_prime(curve: &Curve, ell: u64) -> Result<()> {
    if ell == 2 || ell == 3 {
        return Err(Error::UnsupportedPrime(ell));
    }
    if !is_prime(ell) {
        return Err(Error::Domain(format!("{ell} is not prime")));
    }
    if !curve.has_good_reduction(ell) {
        return Err(Error::BadReduction(ell));
    }
    Ok(())
}

/// a_ell = ell + 1 - #E(F_ell), computed as -sum_x chi(x^3 + Ax + B) on the
/// completed short model. O(ell) per prime; adequate at desk scale.
pub fn trace_of_frobenius(curve: &Curve, ell: u64) -> Result<i64> {
    check_counting_prime(curve, ell)?;
    let (a, b) = curve.short_model_mod(ell)?;
    let mut sum = 0i64;
    for x in 0..ell {
        let x2 = mul_mod(x, x, ell);
        let v = (mul_mod(x2, x, ell) + mul_mod(a, x, ell) + b) % ell;
        sum += legendre_u64(v, ell) as i64;
    }
    let trace = -sum;
    debug_assert!(FrobeniusDatum { ell, trace }.hasse_ok());
    Ok(trace)
}

/// Brute-force point count over all (x, y) pairs; the independent oracle
/// for the character-sum method.
pub fn trace_by_enumeration(curve: &Curve, ell: u64) -> Result<i64> {
    check_counting_prime(curve, ell)?;
    let (a, b) = curve.short_model_mod(ell)?;
    let mut count = 1u64; // point at infinity
    for x in 0..ell {
        let x2 = mul_mod(x, x, ell);
        let rhs = (mul_mod(x2, x, ell) + mul_mod(a, x, ell) + b) % ell;
        for y in 0..ell {
            if mul_mod(y, y, ell) == rhs {
                count += 1;
            }
        }
    }
    Ok(ell as i64 + 1 - count as i64)
}

/// Supersingularity for p >= 5 of good reduction: a_p = 0.
pub fn is_supersingular(curve: &Curve, p: u64) -> Result<bool> {
    if p < 5 {
        return Err(Error::UnsupportedPrime(p));
    }
    Ok(trace_of_frobenius(curve, p)? == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> Curve {
        Curve::from_i64([0, 0, 0, 0, 1]).unwrap()
    }

    fn e37() -> Curve {
        Curve::from_i64([0, 0, 1, -1, 0]).unwrap()
    }

    #[test]
    fn invariants_j_zero() {
        let c = e1();
        assert_eq!(c.disc, BigInt::from(-432));
        assert_eq!(c.j_num, BigInt::zero());
        assert_eq!(c.j_den, BigInt::from(1));
    }

    #[test]
    fn invariants_j_1728() {
        let c = Curve::from_i64([0, 0, 0, -1, 0]).unwrap();
        assert_eq!(c.disc, BigInt::from(64));
        assert_eq!(c.j_num, BigInt::from(1728));
        assert_eq!(c.j_den, BigInt::from(1));
    }

    #[test]
    fn invariants_37a() {
        let c = e37();
        assert_eq!(c.disc, BigInt::from(37));
        assert_eq!(c.c4, BigInt::from(48));
        assert_eq!(c.j_num, BigInt::from(110592));
        assert_eq!(c.j_den, BigInt::from(37));
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(
            Curve::from_i64([0, 0, 0, 0, 0]),
            Err(Error::SingularCurve)
        ));
        // y^2 = x^3 - 3x + 2 = (x-1)^2 (x+2)
        assert!(matches!(
            Curve::from_i64([0, 0, 0, -3, 2]),
            Err(Error::SingularCurve)
        ));
    }

    #[test]
    fn parse_curve_strings() {
        assert_eq!(Curve::parse("0,0,1,-1,0").unwrap(), e37());
        assert!(Curve::parse("1,2,3").is_err());
        assert!(Curve::parse("a,b,c,d,e").is_err());
    }

    #[test]
    fn trace_spec_examples() {
        assert_eq!(trace_of_frobenius(&e1(), 5).unwrap(), 0);
        assert_eq!(trace_of_frobenius(&e1(), 7).unwrap(), -4);
        assert!(matches!(
            trace_of_frobenius(&e1(), 3),
            Err(Error::UnsupportedPrime(3))
        ));
    }

    #[test]
    fn trace_matches_enumeration() {
        for ell in [5u64, 7, 11, 13, 17, 19, 23] {
            if e37().has_good_reduction(ell) {
                assert_eq!(
                    trace_of_frobenius(&e37(), ell).unwrap(),
                    trace_by_enumeration(&e37(), ell).unwrap()
                );
            }
        }
    }

    #[test]
    fn supersingular_spec_examples() {
        assert!(is_supersingular(&e1(), 5).unwrap());
        assert!(!is_supersingular(&e1(), 7).unwrap());
        assert!(matches!(
            is_supersingular(&e1(), 2),
            Err(Error::UnsupportedPrime(2))
        ));
    }

    #[test]
    fn bad_reduction_detected() {
        assert!(matches!(
            trace_of_frobenius(&e37(), 37),
            Err(Error::BadReduction(37))
        ));
    }

    #[test]
    fn trace_invariant_under_model_choice() {
        // compute on the global integral short model and compare
        let c = e37();
        let (ga, gb) = c.short_model_global();
        let short = Curve::new(
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            ga,
            gb,
        )
        .unwrap();
        for ell in [5u64, 7, 11, 13, 41, 97] {
            assert_eq!(
                trace_of_frobenius(&c, ell).unwrap(),
                trace_of_frobenius(&short, ell).unwrap(),
                "ell={ell}"
            );
        }
    }
}
