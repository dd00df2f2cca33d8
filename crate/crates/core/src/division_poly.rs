//! Division polynomials, torsion x-coordinate minimal polynomials, and the
//! empirical harness comparing sampled torsion-field heights against a
//! certified floor.
//!
//! Everything is computed on a short model y^2 = x^3 + Ax + B: the curve's
//! own (a4, a6) when it is already in that form, otherwise the integral
//! completed model (-27 c4, -54 c6), whose coordinates still generate
//! subfields of the torsion field.

use crate::algebra::{factor_over_z, IntPoly};
use crate::bounds::LogScaleValue;
use crate::elliptic::Curve;
use crate::error::{Error, Result};
use crate::heights::{is_root_of_unity, weil_height, AlgebraicNumber, HeightValue};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::collections::HashSet;

/// Default level cap; keeps factorization desk-scale.
pub const DEFAULT_CAP: u32 = 12;

/// Short-model coefficients used for psi computations.
pub fn short_model(curve: &Curve) -> (BigInt, BigInt) {
    if curve.a1.is_zero() && curve.a2.is_zero() && curve.a3.is_zero() {
        (curve.a4.clone(), curve.a6.clone())
    } else {
        curve.short_model_global()
    }
}

/// The x-polynomials w_N with psi_N = w_N (N odd) and psi_N = 2y w_N
/// (N even), by the standard recurrences with (2y)^2 reduced to
/// 4(x^3 + Ax + B).
fn w_sequence(a: &BigInt, b: &BigInt, n_max: u32) -> Vec<IntPoly> {
    let f4 = IntPoly::from_coeffs_asc(vec![4 * b, 4 * a, BigInt::zero(), BigInt::from(4)]);
    let f4_sq = f4.mul(&f4);
    let mut w: Vec<IntPoly> = Vec::with_capacity(n_max as usize + 1);
    w.push(IntPoly::zero()); // w_0
    w.push(IntPoly::one()); // w_1
    if n_max >= 2 {
        w.push(IntPoly::one()); // w_2
    }
    if n_max >= 3 {
        // 3x^4 + 6Ax^2 + 12Bx - A^2
        w.push(IntPoly::from_coeffs_asc(vec![
            -(a * a),
            12 * b,
            6 * a,
            BigInt::zero(),
            BigInt::from(3),
        ]));
    }
    if n_max >= 4 {
        // 2(x^6 + 5Ax^4 + 20Bx^3 - 5A^2x^2 - 4ABx - 8B^2 - A^3)
        w.push(IntPoly::from_coeffs_asc(vec![
            -16 * b * b - 2 * a * a * a,
            -8 * a * b,
            -10 * a * a,
            40 * b,
            10 * a,
            BigInt::zero(),
            BigInt::from(2),
        ]));
    }
    for n in 5..=n_max as usize {
        let m = n / 2;
        let next = if n % 2 == 1 {
            if m % 2 == 0 {
                f4_sq
                    .mul(&w[m + 2])
                    .mul(&w[m].pow(3))
                    .sub(&w[m - 1].mul(&w[m + 1].pow(3)))
            } else {
                w[m + 2]
                    .mul(&w[m].pow(3))
                    .sub(&f4_sq.mul(&w[m - 1]).mul(&w[m + 1].pow(3)))
            }
        } else {
            let inner = w[m + 2]
                .mul(&w[m - 1].pow(2))
                .sub(&w[m - 2].mul(&w[m + 1].pow(2)));
            w[m].mul(&inner)
        };
        w.push(next);
    }
    w
}

/// The N-torsion x-coordinate polynomial: psi_N itself for odd N, and
/// (x^3 + Ax + B) * (psi_N / 2y) for even N, so the three order-2
/// x-coordinates are included and psi_M divides psi_N whenever M | N.
pub fn division_polynomial(curve: &Curve, n: u32) -> Result<IntPoly> {
    division_polynomial_capped(curve, n, DEFAULT_CAP)
}

pub fn division_polynomial_capped(curve: &Curve, n: u32, cap: u32) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::Domain("torsion level must be positive".into()));
    }
    if n > cap {
        return Err(Error::Cap { n, cap });
    }
    let (a, b) = short_model(curve);
    let w = w_sequence(&a, &b, n);
    let wn = w[n as usize].clone();
    if n % 2 == 1 {
        Ok(wn)
    } else {
        let two_torsion =
            IntPoly::from_coeffs_asc(vec![b.clone(), a.clone(), BigInt::zero(), BigInt::from(1)]);
        Ok(two_torsion.mul(&wn))
    }
}

/// Irreducible factors of the N-torsion x-polynomial, optionally
/// deduplicated against every lower level (factors shared with proper
/// divisors of N dropped).
pub fn torsion_x_minpolys(curve: &Curve, n: u32, dedup_lower: bool) -> Result<Vec<AlgebraicNumber>> {
    torsion_x_minpolys_capped(curve, n, dedup_lower, DEFAULT_CAP)
}

pub fn torsion_x_minpolys_capped(
    curve: &Curve,
    n: u32,
    dedup_lower: bool,
    cap: u32,
) -> Result<Vec<AlgebraicNumber>> {
    let poly = division_polynomial_capped(curve, n, cap)?;
    let mut lower: HashSet<IntPoly> = HashSet::new();
    if dedup_lower {
        for m in 1..n {
            if n.is_multiple_of(m) {
                let fs = factor_over_z(&division_polynomial_capped(curve, m, cap)?)?;
                for (f, _) in fs.factors {
                    if f.degree() >= 1 {
                        lower.insert(f);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for (f, _) in factor_over_z(&poly)?.factors {
        if f.degree() >= 1 && !lower.contains(&f) {
            out.push(AlgebraicNumber::from_irreducible(f));
        }
    }
    Ok(out)
}

/// One sampled element of the torsion field with its height. `excluded`
/// marks the elements the height floor does not constrain: zero and
/// roots of unity, exactly the Kronecker-zero-height locus.
#[derive(Clone, Debug, Serialize)]
pub struct HeightSample {
    pub level: u32,
    #[serde(serialize_with = "ser_minpoly")]
    pub minpoly: IntPoly,
    pub derived_from: &'static str,
    pub height: HeightValue,
    pub excluded: bool,
}

fn ser_minpoly<S: serde::Serializer>(p: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_desc_string())
}

/// Torsion x-coordinates for every level N <= n_max, enriched with the
/// shifted (x+1) and inverted (1/x) elements; the floor covers the whole
/// multiplicative group of the field, not just coordinate generators.
pub fn build_samples(curve: &Curve, n_max: u32, cap: u32) -> Result<Vec<HeightSample>> {
    let mut seen: HashSet<IntPoly> = HashSet::new();
    let mut out = Vec::new();
    for n in 1..=n_max {
        for base in torsion_x_minpolys_capped(curve, n, false, cap)? {
            let mut variants: Vec<(&'static str, IntPoly)> =
                vec![("x", base.minpoly().clone())];
            let shifted = base.minpoly().compose_x_plus(&BigInt::from(-1));
            variants.push(("x+1", shifted.primitive_part()));
            if let Some(rev) = base.minpoly().reverse() {
                variants.push(("1/x", rev.primitive_part()));
            }
            for (tag, poly) in variants {
                let poly = if poly.leading() < BigInt::zero() {
                    poly.neg()
                } else {
                    poly
                };
                if !seen.insert(poly.clone()) {
                    continue;
                }
                let alg = AlgebraicNumber::from_irreducible(poly);
                let height = weil_height(&alg)?;
                let excluded = alg.is_zero_element() || is_root_of_unity(&alg).is_some();
                out.push(HeightSample {
                    level: n,
                    minpoly: alg.minpoly().clone(),
                    derived_from: tag,
                    height,
                    excluded,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FloorViolation {
    pub level: u32,
    pub minpoly: String,
    pub height_nats: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FloorReport {
    pub samples: usize,
    pub excluded: usize,
    pub min_positive_height: f64,
    /// ln(min positive height) - ln(bound): the expected slack is about
    /// 5 p^4 ln p, the bound being astronomically small.
    pub ln_margin: f64,
    pub violations: Vec<FloorViolation>,
}

/// Compare every non-excluded sample against a certified floor given in
/// log scale.
pub fn verify_height_floor(
    samples: &[HeightSample],
    bound_log: &LogScaleValue,
) -> Result<FloorReport> {
    let kept: Vec<&HeightSample> = samples.iter().filter(|s| !s.excluded).collect();
    if kept.is_empty() {
        return Err(Error::Domain(
            "no non-excluded samples to compare against the floor".into(),
        ));
    }
    let bound_ln = bound_log.ln_f64();
    let mut min_positive = f64::INFINITY;
    let mut violations = Vec::new();
    for s in &kept {
        if s.height.nats < min_positive {
            min_positive = s.height.nats;
        }
        if s.height.nats.ln() < bound_ln {
            violations.push(FloorViolation {
                level: s.level,
                minpoly: s.minpoly.to_desc_string(),
                height_nats: s.height.nats,
            });
        }
    }
    Ok(FloorReport {
        samples: samples.len(),
        excluded: samples.len() - kept.len(),
        min_positive_height: min_positive,
        ln_margin: min_positive.ln() - bound_ln,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::final_bound_log;

    fn e1() -> Curve {
        Curve::from_i64([0, 0, 0, 0, 1]).unwrap()
    }

    fn e37() -> Curve {
        Curve::from_i64([0, 0, 1, -1, 0]).unwrap()
    }

    fn p(desc: &[i64]) -> IntPoly {
        IntPoly::from_i64_desc(desc)
    }

    #[test]
    fn spec_examples_small_levels() {
        assert_eq!(division_polynomial(&e1(), 1).unwrap(), IntPoly::one());
        assert_eq!(division_polynomial(&e1(), 2).unwrap(), p(&[1, 0, 0, 1]));
        assert_eq!(
            division_polynomial(&e1(), 3).unwrap(),
            p(&[3, 0, 0, 12, 0])
        );
    }

    #[test]
    fn goldens_levels_4_to_6() {
        // frozen from an independent symbolic run of the recurrences
        assert_eq!(
            division_polynomial(&e1(), 4).unwrap(),
            p(&[2, 0, 0, 42, 0, 0, 24, 0, 0, -16])
        );
        assert_eq!(
            division_polynomial(&e1(), 5).unwrap(),
            p(&[5, 0, 0, 380, 0, 0, -240, 0, 0, -1600, 0, 0, -256])
        );
        assert_eq!(
            division_polynomial(&e1(), 6).unwrap(),
            p(&[3, 0, 0, 675, 0, 0, -2016, 0, 0, -24960, 0, 0, -27648, 0, 0, -11520, 0, 0, -6144, 0])
        );
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            division_polynomial_capped(&e1(), 13, 12),
            Err(Error::Cap { n: 13, cap: 12 })
        ));
        assert!(division_polynomial(&e1(), 0).is_err());
    }

    #[test]
    fn odd_degree_formula() {
        for n in [3u32, 5, 7, 9, 11] {
            let d = division_polynomial(&e1(), n).unwrap();
            assert_eq!(d.degree(), ((n * n - 1) / 2) as usize, "n={n}");
        }
        // even levels: 3 + (N^2-4)/2
        for n in [2u32, 4, 6, 8] {
            let d = division_polynomial(&e1(), n).unwrap();
            assert_eq!(d.degree(), (3 + (n * n - 4) / 2) as usize, "n={n}");
        }
    }

    #[test]
    fn torsion_minpolys_spec_examples() {
        let m3 = torsion_x_minpolys(&e1(), 3, false).unwrap();
        let polys: Vec<&IntPoly> = m3.iter().map(|a| a.minpoly()).collect();
        assert_eq!(polys, vec![&p(&[1, 0]), &p(&[1, 0, 0, 4])]);

        let m2 = torsion_x_minpolys(&e1(), 2, false).unwrap();
        let polys: Vec<&IntPoly> = m2.iter().map(|a| a.minpoly()).collect();
        assert_eq!(polys, vec![&p(&[1, 1]), &p(&[1, -1, 1])]);
    }

    #[test]
    fn divisor_levels_divide() {
        for (m, n) in [(2u32, 4u32), (3, 6)] {
            let big = division_polynomial(&e1(), n).unwrap();
            for f in torsion_x_minpolys(&e1(), m, false).unwrap() {
                assert!(
                    big.div_exact(f.minpoly()).is_some(),
                    "factor {} of level {m} should divide level {n}",
                    f.minpoly()
                );
            }
        }
    }

    #[test]
    fn dedup_drops_lower_levels() {
        let all = torsion_x_minpolys(&e1(), 6, false).unwrap();
        let fresh = torsion_x_minpolys(&e1(), 6, true).unwrap();
        assert!(fresh.len() < all.len());
        let lower2 = torsion_x_minpolys(&e1(), 2, false).unwrap();
        for f in &fresh {
            assert!(!lower2.iter().any(|g| g.minpoly() == f.minpoly()));
        }
    }

    #[test]
    fn samples_exclude_zero_and_torsion_units() {
        // level 3 of y^2 = x^3 + 1 contains x = 0 and the shift of -1
        let samples = build_samples(&e1(), 3, 12).unwrap();
        let zero = samples
            .iter()
            .find(|s| s.minpoly == p(&[1, 0]))
            .expect("x = 0 sample present");
        assert!(zero.excluded);
        assert!(zero.height.nats.abs() < 1e-9);
        // h(root of x^3+4) = (2/3) ln 2
        let c = samples
            .iter()
            .find(|s| s.minpoly == p(&[1, 0, 0, 4]))
            .unwrap();
        assert!((c.height.nats - 2.0 * std::f64::consts::LN_2 / 3.0).abs() < 1e-9);
        // Kronecker consistency on every sample
        for s in &samples {
            assert_eq!(s.excluded, s.height.nats.abs() <= 1e-9, "{:?}", s.minpoly);
        }
    }

    #[test]
    fn floor_report_spec_example() {
        let samples = build_samples(&e1(), 3, 12).unwrap();
        let bound = final_bound_log(5).unwrap();
        let r = verify_height_floor(&samples, &bound).unwrap();
        assert!(r.violations.is_empty());
        assert!((r.min_positive_height - 2.0 * std::f64::consts::LN_2 / 3.0).abs() < 1e-6);
        assert!(r.ln_margin > 5000.0);
    }

    #[test]
    fn artificial_floor_flags_violations() {
        let samples = build_samples(&e1(), 3, 12).unwrap();
        // an artificial bound of 1 (ln = 0) sits above every small height
        let one = LogScaleValue::from_rational(
            &num_rational::BigRational::from(BigInt::from(1)),
            64,
        );
        let r = verify_height_floor(&samples, &one).unwrap();
        assert!(!r.violations.is_empty());
    }

    #[test]
    fn empty_sample_set_rejected() {
        let bound = final_bound_log(5).unwrap();
        assert!(matches!(
            verify_height_floor(&[], &bound),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn full_level_cap_factors_and_heights() {
        // level 12 is the default cap: degree 73, splits cleanly, and
        // every factor's height certifies
        for (curve, degrees) in [
            (e1(), vec![1usize, 1, 1, 2, 2, 2, 3, 3, 4, 4, 6, 8, 12, 24]),
            (e37(), vec![3, 4, 6, 12, 48]),
        ] {
            let d = division_polynomial(&curve, 12).unwrap();
            assert_eq!(d.degree(), 73);
            let fs = torsion_x_minpolys(&curve, 12, false).unwrap();
            let got: Vec<usize> = fs.iter().map(|f| f.degree()).collect();
            assert_eq!(got, degrees);
            for f in &fs {
                let h = crate::heights::weil_height(f).unwrap();
                assert!(h.abs_error <= 1e-10);
            }
        }
    }

    #[test]
    fn e37_uses_completed_model() {
        let (a, b) = short_model(&e37());
        assert_eq!(a, BigInt::from(-1296));
        assert_eq!(b, BigInt::from(11664));
        // min positive height over N <= 6 frozen from an independent run
        let samples = build_samples(&e37(), 6, 12).unwrap();
        let bound = final_bound_log(17).unwrap();
        let r = verify_height_floor(&samples, &bound).unwrap();
        assert!(r.violations.is_empty());
        assert!((r.min_positive_height - 3.121_420_818_082_813).abs() < 1e-8);
    }
}
