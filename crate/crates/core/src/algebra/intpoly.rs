//! Dense univariate polynomials over Z with arbitrary-precision coefficients.
//!
//! Coefficients are stored in ascending degree order internally; every
//! external surface (parsing, display, serialization) uses the descending
//! order of the CLI format, e.g. `"1,0,-2"` for x^2 - 2.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    /// Ascending degree, no trailing zeros; empty means the zero polynomial.
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn x() -> Self {
        IntPoly::from_coeffs_asc(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::from_coeffs_asc(vec![c])
    }

    pub fn from_coeffs_asc(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_coeffs_desc(mut coeffs: Vec<BigInt>) -> Self {
        coeffs.reverse();
        IntPoly::from_coeffs_asc(coeffs)
    }

    pub fn from_i64_desc(coeffs: &[i64]) -> Self {
        IntPoly::from_coeffs_desc(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0 alongside `is_zero`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs_asc(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeffs_desc(&self) -> Vec<BigInt> {
        let mut v = self.coeffs.clone();
        v.reverse();
        v
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn neg(&self) -> Self {
        IntPoly::from_coeffs_asc(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        IntPoly::from_coeffs_asc(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        IntPoly::from_coeffs_asc(out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs_asc(out)
    }

    pub fn mul_scalar(&self, s: &BigInt) -> Self {
        IntPoly::from_coeffs_asc(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = IntPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division; `None` if `rhs` does not divide `self` over Z.
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.coeffs.len() < rhs.coeffs.len() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dq = self.coeffs.len() - rhs.coeffs.len();
        let mut quot = vec![BigInt::zero(); dq + 1];
        let lead = rhs.leading();
        for k in (0..=dq).rev() {
            let top = rem[k + rhs.degree()].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            quot[k] = q.clone();
            for (j, b) in rhs.coeffs.iter().enumerate() {
                rem[k + j] -= &q * b;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_coeffs_asc(quot))
    }

    /// Division with remainder by a monic divisor (exact over Z).
    pub fn divrem_monic(&self, rhs: &Self) -> (Self, Self) {
        assert!(rhs.is_monic(), "divisor must be monic");
        if self.coeffs.len() < rhs.coeffs.len() {
            return (IntPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dq = self.coeffs.len() - rhs.coeffs.len();
        let mut quot = vec![BigInt::zero(); dq + 1];
        for k in (0..=dq).rev() {
            let q = rem[k + rhs.degree()].clone();
            if q.is_zero() {
                continue;
            }
            quot[k] = q.clone();
            for (j, b) in rhs.coeffs.iter().enumerate() {
                rem[k + j] -= &q * b;
            }
        }
        (
            IntPoly::from_coeffs_asc(quot),
            IntPoly::from_coeffs_asc(rem),
        )
    }

    /// Pseudo-remainder: lead(rhs)^(deg f - deg g + 1) * f = q*g + r.
    pub fn pseudo_rem(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero());
        if self.coeffs.len() < rhs.coeffs.len() {
            return self.clone();
        }
        let d = rhs.degree();
        let lead = rhs.leading();
        let mut rem = self.clone();
        while !rem.is_zero() && rem.degree() >= d {
            let k = rem.degree() - d;
            let top = rem.leading();
            // rem := lead * rem - top * x^k * rhs
            let mut shifted = vec![BigInt::zero(); k];
            shifted.extend(rhs.coeffs.iter().map(|c| c * &top));
            rem = rem.mul_scalar(&lead).sub(&IntPoly::from_coeffs_asc(shifted));
        }
        rem
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::from_coeffs_asc(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Content: gcd of the coefficients with the sign of the leading term,
    /// so that `self = content * primitive_part` with a positive-leading
    /// primitive part. Zero polynomial has content 0.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if self.leading().is_negative() {
            -g
        } else {
            g
        }
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let c = self.content();
        self.div_scalar_exact(&c)
    }

    fn div_scalar_exact(&self, s: &BigInt) -> Self {
        IntPoly::from_coeffs_asc(
            self.coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(s);
                    debug_assert!(r.is_zero());
                    q
                })
                .collect(),
        )
    }

    /// Primitive gcd over Z via the subresultant PRS, positive leading term.
    pub fn gcd(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.primitive_part();
        }
        if rhs.is_zero() {
            return self.primitive_part();
        }
        let (mut a, mut b) = if self.degree() >= rhs.degree() {
            (self.primitive_part(), rhs.primitive_part())
        } else {
            (rhs.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.degree() == 0 {
            return IntPoly::one();
        }
        a
    }

    /// P(x + c), computed by Horner on the shifted variable.
    pub fn compose_x_plus(&self, c: &BigInt) -> Self {
        let shift = IntPoly::from_coeffs_asc(vec![c.clone(), BigInt::one()]);
        let mut acc = IntPoly::zero();
        for coeff in self.coeffs.iter().rev() {
            acc = acc.mul(&shift).add(&IntPoly::constant(coeff.clone()));
        }
        acc
    }

    /// Reversed coefficients: x^deg * P(1/x). The minimal polynomial of the
    /// inverse of a root, once normalized. `None` when P(0) = 0.
    pub fn reverse(&self) -> Option<Self> {
        if self.is_zero() || self.constant_term().is_zero() {
            return None;
        }
        let mut v = self.coeffs.clone();
        v.reverse();
        let p = IntPoly::from_coeffs_asc(v);
        Some(if p.leading().is_negative() { p.neg() } else { p })
    }

    /// Squared l2 norm of the coefficient vector.
    pub fn norm2_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Parse the CLI format: comma-separated descending coefficients.
    pub fn parse(s: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for part in s.split(',') {
            let t = part.trim();
            if t.is_empty() {
                return Err(Error::Domain(format!("empty coefficient in {s:?}")));
            }
            let c = BigInt::from_str(t)
                .map_err(|_| Error::Domain(format!("bad integer coefficient {t:?}")))?;
            coeffs.push(c);
        }
        Ok(IntPoly::from_coeffs_desc(coeffs))
    }

    /// The CLI serialization: comma-separated descending coefficients.
    pub fn to_desc_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs_desc()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly[{}]", self.to_desc_string())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_desc_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(desc: &[i64]) -> IntPoly {
        IntPoly::from_i64_desc(desc)
    }

    #[test]
    fn parse_and_display_round_trip() {
        let q = IntPoly::parse("1,0,-2").unwrap();
        assert_eq!(q, p(&[1, 0, -2]));
        assert_eq!(q.to_desc_string(), "1,0,-2");
        assert_eq!(q.degree(), 2);
        assert!(IntPoly::parse("1,,2").is_err());
        assert!(IntPoly::parse("x").is_err());
    }

    #[test]
    fn arithmetic_basics() {
        let a = p(&[1, -1]); // x - 1
        let b = p(&[1, 1]); // x + 1
        assert_eq!(a.mul(&b), p(&[1, 0, -1]));
        assert_eq!(a.add(&b), p(&[2, 0]));
        assert_eq!(p(&[1, 0, -1]).div_exact(&a).unwrap(), b);
        assert!(p(&[1, 0, 1]).div_exact(&a).is_none());
    }

    #[test]
    fn divrem_monic_works() {
        let f = p(&[1, 2, 3, 4]);
        let g = p(&[1, 1]);
        let (q, r) = f.divrem_monic(&g);
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.degree() < g.degree() || r.is_zero());
    }

    #[test]
    fn content_and_primitive() {
        let f = p(&[-6, 0, -9]);
        assert_eq!(f.content(), BigInt::from(-3));
        assert_eq!(f.primitive_part(), p(&[2, 0, 3]));
    }

    #[test]
    fn gcd_common_factor() {
        let f = p(&[1, -1]).mul(&p(&[1, 1])).mul(&p(&[3, 1]));
        let g = p(&[1, -1]).mul(&p(&[5, 2]));
        assert_eq!(f.gcd(&g), p(&[1, -1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[1, 1])), IntPoly::one());
    }

    #[test]
    fn compose_and_reverse() {
        // (x+1)^2 - 2 shifted back by 1: P(x-1) where P = x^2 - 2
        let f = p(&[1, 0, -2]);
        assert_eq!(f.compose_x_plus(&BigInt::from(-1)), p(&[1, -2, -1]));
        assert_eq!(f.reverse().unwrap(), p(&[2, 0, -1]));
        assert_eq!(p(&[2, 0, -1]).reverse().unwrap(), p(&[1, 0, -2]));
        assert!(IntPoly::x().reverse().is_none());
    }

    #[test]
    fn eval_horner() {
        let f = p(&[2, -3, 5]); // 2x^2 - 3x + 5
        assert_eq!(f.eval(&BigInt::from(3)), BigInt::from(14));
    }
}
