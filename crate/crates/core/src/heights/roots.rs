//! Certified complex roots of integer polynomials.
//!
//! Simultaneous Aberth iteration in f64 produces seeds; per-root Newton
//! refinement in exact dyadic arithmetic follows. Every certificate is
//! rigorous: evaluating P and P' at a dyadic point is exact integer
//! arithmetic, and the classical bound min_i |z - r_i| <= n |P(z)/P'(z)|
//! (from the partial-fraction expansion of P'/P) yields a disc around
//! each approximation that provably contains a root. Pairwise-disjoint
//! discs for a squarefree polynomial then isolate one root each.

use crate::algebra::IntPoly;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

/// One isolated root: an f64 approximation plus certified bounds on the
/// modulus of the exact root it isolates.
#[derive(Clone, Copy, Debug)]
pub struct RootBox {
    pub approx: Complex64,
    pub modulus_lo: f64,
    pub modulus_hi: f64,
}

/// Natural log of |x| for a nonzero big integer, accurate to f64 rounding.
pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    let a = x.abs();
    let bits = a.bits();
    if bits <= 53 {
        return (a.to_f64().unwrap()).ln();
    }
    let shift = bits - 53;
    let top: BigInt = a >> shift;
    (top.to_f64().unwrap()).ln() + shift as f64 * std::f64::consts::LN_2
}

fn f64_to_scaled_bigint(x: f64, scale: u32) -> BigInt {
    if x == 0.0 {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let raw_exp = ((bits >> 52) & 0x7FF) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if raw_exp == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    };
    let m = BigInt::from(mantissa) * sign;
    let e = exp + scale as i64;
    if e >= 0 {
        m << e
    } else {
        m >> (-e) as u64
    }
}

fn scaled_to_f64(x: &BigInt, scale: u32) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let neg = x.is_negative();
    let a = x.abs();
    let bits = a.bits();
    let v = if bits <= 53 {
        a.to_f64().unwrap() * (scale as f64 * -(std::f64::consts::LN_2)).exp()
    } else {
        let shift = bits - 53;
        let top = (a >> shift).to_f64().unwrap();
        top * 2f64.powi(shift as i32 - scale as i32)
    };
    if neg {
        -v
    } else {
        v
    }
}

/// (re + i im) / 2^scale
#[derive(Clone)]
struct Dyadic {
    re: BigInt,
    im: BigInt,
}

/// Complex q = a / b rounded to scale s (a at scale sa, b at scale sb with
/// sa - sb = s kept by the caller). Returns (re, im) integers at scale s.
fn complex_div_round(
    are: &BigInt,
    aim: &BigInt,
    bre: &BigInt,
    bim: &BigInt,
) -> Option<(BigInt, BigInt)> {
    let den: BigInt = bre * bre + bim * bim;
    if den.is_zero() {
        return None;
    }
    let nre: BigInt = are * bre + aim * bim;
    let nim: BigInt = aim * bre - are * bim;
    Some((round_div(&nre, &den), round_div(&nim, &den)))
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // round to nearest; b > 0 here (it is a complex norm)
    use num_integer::Integer as _;
    let two_a: BigInt = a * 2 + b;
    two_a.div_floor(&(b * 2))
}

const MAX_SCALE: u32 = 3072;

/// Isolate all complex roots with certified modulus bounds. The input must
/// be squarefree (irreducible inputs always are); the per-root relative
/// radius target is 2^-64 which comfortably certifies the 1e-12 modulus
/// contract of the height engine.
pub fn certified_roots(poly: &IntPoly) -> Result<Vec<RootBox>> {
    let n = poly.degree();
    if poly.is_zero() {
        return Err(Error::Domain("zero polynomial has no root set".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let coeffs = poly.coeffs_asc();

    if n == 1 {
        // exact rational root -a0/a1
        let num = -poly.coeff(0);
        let den = poly.coeff(1);
        let v = rational_abs_to_f64(&num, &den);
        let approx = Complex64::new(
            rational_to_f64(&num, &den),
            0.0,
        );
        return Ok(vec![RootBox {
            approx,
            modulus_lo: v * (1.0 - 1e-14),
            modulus_hi: v * (1.0 + 1e-14) + f64::MIN_POSITIVE,
        }]);
    }

    let mut seeds = aberth_seeds(coeffs)?;
    let mut scale = initial_scale();
    loop {
        match refine_and_certify(coeffs, &seeds, scale) {
            Some(boxes) => return Ok(boxes),
            None => {
                scale *= 2;
                if scale > MAX_SCALE {
                    // reseed once with a different phase before giving up
                    seeds = aberth_seeds_with_phase(coeffs, 0.7)?;
                    scale = initial_scale();
                    if let Some(boxes) = refine_and_certify(coeffs, &seeds, scale) {
                        return Ok(boxes);
                    }
                    let b2 = refine_and_certify(coeffs, &seeds, scale * 4);
                    return b2.ok_or_else(|| {
                        Error::Precision("root isolation did not converge".into())
                    });
                }
            }
        }
    }
}

fn initial_scale() -> u32 {
    let digits = std::env::var("HEIGHTFLOOR_PRECISION")
        .ok()
        .and_then(|s| s.parse::<u32>().ok())
        .filter(|&d| (1..=2000).contains(&d))
        .unwrap_or(30);
    (digits * 7 / 2).max(192)
}

fn rational_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    let ln = ln_abs_bigint(num) - ln_abs_bigint(den);
    let sign = if (num.is_negative()) == (den.is_negative()) {
        1.0
    } else {
        -1.0
    };
    if num.is_zero() {
        return 0.0;
    }
    sign * ln.exp()
}

fn rational_abs_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    (ln_abs_bigint(num) - ln_abs_bigint(den)).exp()
}

fn aberth_seeds(coeffs: &[BigInt]) -> Result<Vec<Complex64>> {
    aberth_seeds_with_phase(coeffs, 0.41)
}

fn aberth_seeds_with_phase(coeffs: &[BigInt], phase: f64) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    // normalize coefficients to f64 by the largest magnitude
    let max_ln = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .map(ln_abs_bigint)
        .fold(f64::NEG_INFINITY, f64::max);
    let c: Vec<f64> = coeffs
        .iter()
        .map(|x| {
            if x.is_zero() {
                0.0
            } else {
                let v = (ln_abs_bigint(x) - max_ln).exp();
                if x.is_negative() {
                    -v
                } else {
                    v
                }
            }
        })
        .collect();
    // Fujiwara bound: 2 max_k |a_{n-k}/a_n|^(1/k), within a factor 2 of
    // the largest root modulus even for wildly scaled coefficients
    let an = c[n].abs();
    let radius = 2.0
        * (1..=n)
            .map(|k| (c[n - k].abs() / an).powf(1.0 / k as f64))
            .fold(f64::MIN_POSITIVE, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + phase) / n as f64;
            Complex64::from_polar(radius * (0.3 + 0.7 * (k as f64 + 1.0) / n as f64), theta)
        })
        .collect();

    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for i in (0..=n).rev() {
            dp = dp * x + p;
            p = p * x + c[i];
        }
        (p, dp)
    };

    // non-convergence here is not fatal: the certificate stage decides
    // whether the seeds were good enough and escalates otherwise
    for _ in 0..1000 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if !p.re.is_finite() || !p.im.is_finite() {
                z[i] *= 0.75;
                max_step = f64::INFINITY;
                continue;
            }
            if dp.norm_sqr() == 0.0 {
                z[i] += Complex64::new(1e-6, 1e-6);
                max_step = f64::INFINITY;
                continue;
            }
            let w = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let d = z[i] - zj;
                    if d.norm_sqr() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let corr = if denom.norm_sqr() > 0.0 { w / denom } else { w };
            z[i] -= corr;
            max_step = max_step.max(corr.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-13 {
            break;
        }
    }
    Ok(z)
}

/// Newton-refine every seed at the given dyadic scale, then attempt a full
/// certificate. Returns None when radii are too large or discs overlap.
fn refine_and_certify(coeffs: &[BigInt], seeds: &[Complex64], scale: u32) -> Option<Vec<RootBox>> {
    let n = coeffs.len() - 1;
    let mut pts: Vec<Dyadic> = seeds
        .iter()
        .map(|z| Dyadic {
            re: f64_to_scaled_bigint(z.re, scale),
            im: f64_to_scaled_bigint(z.im, scale),
        })
        .collect();

    let dcoeffs: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();

    let newton_rounds = 4 + (scale / 96);
    for p in pts.iter_mut() {
        for _ in 0..newton_rounds {
            let (pre, pim, ps) = horner_exact(coeffs, p, scale);
            let (dre, dim, ds) = horner_exact(&dcoeffs, p, scale);
            // delta = P(z)/P'(z); align scales: P at scale ps, P' at ds,
            // quotient at scale ps - ds = s
            debug_assert_eq!(ps - ds, scale);
            match complex_div_round(&pre, &pim, &dre, &dim) {
                Some((qre, qim)) => {
                    p.re -= qre;
                    p.im -= qim;
                }
                None => break,
            }
        }
    }

    // certified radii
    let mut radii: Vec<BigInt> = Vec::with_capacity(n);
    for p in &pts {
        let (pre, pim, _) = horner_exact(coeffs, p, scale);
        let (dre, dim, _) = horner_exact(&dcoeffs, p, scale);
        let p2: BigInt = &pre * &pre + &pim * &pim;
        let d2: BigInt = &dre * &dre + &dim * &dim;
        let dsq = d2.sqrt(); // floor sqrt: lower bound on |P'|
        if dsq.is_zero() {
            return None;
        }
        let psq = p2.sqrt() + 1; // upper bound on |P|
        // r * 2^scale <= n * psq * 2^scale / (dsq * 2^scale) ... both values
        // carry the same residual scale factors, which cancel except for
        // the caller-maintained offset of exactly `scale`.
        let r = (BigInt::from(n as u64) * psq) / &dsq + 1;
        radii.push(r);
    }

    // disjointness and radius targets
    let target_shift = 64u32; // relative radius 2^-64
    for i in 0..n {
        let mi: BigInt = &pts[i].re * &pts[i].re + &pts[i].im * &pts[i].im;
        let mod_i = mi.sqrt(); // ~ |z_i| * 2^scale
        let limit = (&mod_i >> target_shift) + (BigInt::from(1) << (scale - target_shift));
        if radii[i] > limit {
            return None;
        }
        for j in 0..i {
            let dre = &pts[i].re - &pts[j].re;
            let dim = &pts[i].im - &pts[j].im;
            let dist2: BigInt = &dre * &dre + &dim * &dim;
            let rsum = &radii[i] + &radii[j];
            if dist2 <= &rsum * &rsum {
                return None;
            }
        }
    }

    // extract f64 boxes with directed slack for the conversions
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let m2: BigInt = &pts[i].re * &pts[i].re + &pts[i].im * &pts[i].im;
        let ms = m2.sqrt();
        let lo_int: BigInt = &ms - &radii[i];
        let hi_int: BigInt = &ms + &radii[i] + 1;
        let lo = (scaled_to_f64(&lo_int.max(BigInt::zero()), scale) * (1.0 - 1e-14)).max(0.0);
        let hi = scaled_to_f64(&hi_int, scale) * (1.0 + 1e-14) + f64::MIN_POSITIVE;
        out.push(RootBox {
            approx: Complex64::new(
                scaled_to_f64(&pts[i].re, scale),
                scaled_to_f64(&pts[i].im, scale),
            ),
            modulus_lo: lo,
            modulus_hi: hi,
        });
    }
    Some(out)
}

/// Exact Horner evaluation; returns integers representing the value at
/// scale `deg * s` (where deg = coeffs.len() - 1).
fn horner_exact(coeffs: &[BigInt], z: &Dyadic, s: u32) -> (BigInt, BigInt, u32) {
    let n = coeffs.len() - 1;
    let mut re = coeffs[n].clone();
    let mut im = BigInt::zero();
    let mut cur = 0u32;
    for i in (0..n).rev() {
        let nre: BigInt = &re * &z.re - &im * &z.im;
        let nim: BigInt = &re * &z.im + &im * &z.re;
        cur += s;
        re = nre + (&coeffs[i] << cur);
        im = nim;
    }
    (re, im, cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(desc: &[i64]) -> IntPoly {
        IntPoly::from_i64_desc(desc)
    }

    #[test]
    fn linear_exact() {
        let boxes = certified_roots(&poly(&[2, -3])).unwrap();
        assert_eq!(boxes.len(), 1);
        assert!((boxes[0].modulus_lo - 1.5).abs() < 1e-12);
        assert!((boxes[0].modulus_hi - 1.5).abs() < 1e-12);
    }

    #[test]
    fn sqrt2_moduli() {
        let boxes = certified_roots(&poly(&[1, 0, -2])).unwrap();
        assert_eq!(boxes.len(), 2);
        for b in &boxes {
            assert!(b.modulus_lo <= 2f64.sqrt() && 2f64.sqrt() <= b.modulus_hi);
            assert!(b.modulus_hi - b.modulus_lo < 1e-12);
        }
    }

    #[test]
    fn cyclotomic_on_unit_circle() {
        // x^2 - x + 1: primitive 6th roots of unity
        let boxes = certified_roots(&poly(&[1, -1, 1])).unwrap();
        for b in &boxes {
            assert!(b.modulus_lo <= 1.0 && 1.0 <= b.modulus_hi);
            assert!(b.modulus_hi - b.modulus_lo < 1e-12);
        }
    }

    #[test]
    fn degree_ten_lehmer() {
        // Lehmer's polynomial: 8 roots on the unit circle, one inside,
        // one outside (the Salem number 1.17628...)
        let p = poly(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let boxes = certified_roots(&p).unwrap();
        assert_eq!(boxes.len(), 10);
        let mut outside = 0;
        let mut log_mahler = 0.0;
        for b in &boxes {
            if b.modulus_lo > 1.0 {
                outside += 1;
                log_mahler += ((b.modulus_lo + b.modulus_hi) / 2.0).ln();
            }
        }
        assert_eq!(outside, 1);
        assert!((log_mahler - 1.176_280_818_259_917_6_f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn ln_abs_bigint_large() {
        let big = BigInt::from(10).pow(50);
        assert!((ln_abs_bigint(&big) - 50.0 * 10f64.ln()).abs() < 1e-9);
        assert!((ln_abs_bigint(&BigInt::from(-8)) - 8f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn f64_dyadic_round_trip() {
        for v in [0.0, 1.0, -2.5, 1e-8, 12345.6789, -1e12] {
            let b = f64_to_scaled_bigint(v, 200);
            let back = scaled_to_f64(&b, 200);
            assert!(
                (back - v).abs() <= v.abs() * 1e-15,
                "{v} -> {back}"
            );
        }
    }
}
