//! Randomized invariants: factorization reassembly, power-minimal-polynomial
//! height scaling, point-count method agreement, Kronecker consistency.

use heightfloor::algebra::{factor_over_z, power_minpoly, IntPoly};
use heightfloor::elliptic::{trace_by_enumeration, trace_of_frobenius, Curve, FrobeniusDatum};
use heightfloor::heights::{cyclotomic, is_root_of_unity, weil_height, AlgebraicNumber};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn poly_from(coeffs: Vec<i64>) -> IntPoly {
    IntPoly::from_coeffs_desc(coeffs.into_iter().map(BigInt::from).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // content * prod factors^mult reassembles the input (degree <= 12,
    // coefficients up to 1e6)
    #[test]
    fn factor_reassembly(coeffs in proptest::collection::vec(-1_000_000i64..=1_000_000, 2..=13)) {
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        let f = poly_from(coeffs);
        prop_assume!(!f.is_zero() && f.degree() >= 1);
        let fac = factor_over_z(&f).unwrap();
        let mut acc = IntPoly::constant(fac.content.clone());
        for (q, m) in &fac.factors {
            prop_assert!(q.leading() > BigInt::zero());
            prop_assert_eq!(q.content(), BigInt::one());
            acc = acc.mul(&q.pow(*m));
        }
        prop_assert_eq!(acc, f);
    }

    // deterministic output ordering: factoring twice gives identical results
    #[test]
    fn factor_deterministic(coeffs in proptest::collection::vec(-500i64..=500, 2..=9)) {
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        let f = poly_from(coeffs);
        prop_assume!(!f.is_zero());
        let a = factor_over_z(&f).unwrap();
        let b = factor_over_z(&f).unwrap();
        prop_assert_eq!(a, b);
    }
}

/// 50 seeded random irreducibles: deg(minpoly of beta^k) divides deg(P) and
/// h(beta^k) = k h(beta) within 1e-9.
#[test]
fn power_minpoly_height_scaling() {
    let mut rng = StdRng::seed_from_u64(20260810);
    let mut done = 0;
    while done < 50 {
        let deg = rng.gen_range(1..=6usize);
        let coeffs: Vec<i64> = (0..=deg)
            .map(|i| {
                if i == deg {
                    rng.gen_range(1..=9)
                } else {
                    rng.gen_range(-50..=50)
                }
            })
            .collect();
        let p = IntPoly::from_coeffs_asc(coeffs.into_iter().map(BigInt::from).collect());
        if p.degree() == 0 {
            continue;
        }
        let alg = match AlgebraicNumber::new(p) {
            Ok(a) => a,
            Err(_) => continue, // reducible draw; try again
        };
        if alg.is_zero_element() {
            continue;
        }
        let k = rng.gen_range(1..=5u32);
        let q = power_minpoly(alg.minpoly(), k).unwrap();
        assert_eq!(
            alg.degree() % q.degree(),
            0,
            "degree of {} does not divide {}",
            q,
            alg.minpoly()
        );
        let h_base = weil_height(&alg).unwrap();
        let h_pow = weil_height(&AlgebraicNumber::new(q).unwrap()).unwrap();
        assert!(
            (h_pow.nats - k as f64 * h_base.nats).abs() < 1e-9,
            "h identity failed: k={k} base={} pow={}",
            h_base.nats,
            h_pow.nats
        );
        done += 1;
    }
}

/// Character sum vs brute-force enumeration on random curves, all good
/// primes up to 200, with the Hasse bound checked on the way.
#[test]
fn point_count_two_methods() {
    let mut rng = StdRng::seed_from_u64(37);
    let primes: Vec<u64> = heightfloor::primes::primes_up_to(200)
        .into_iter()
        .filter(|&p| p >= 5)
        .collect();
    let mut curves = 0;
    while curves < 20 {
        let a = [
            rng.gen_range(-3i64..=3),
            rng.gen_range(-3i64..=3),
            rng.gen_range(-3i64..=3),
            rng.gen_range(-20i64..=20),
            rng.gen_range(-20i64..=20),
        ];
        let curve = match Curve::from_i64(a) {
            Ok(c) => c,
            Err(_) => continue,
        };
        for &ell in &primes {
            if !curve.has_good_reduction(ell) {
                continue;
            }
            let fast = trace_of_frobenius(&curve, ell).unwrap();
            let slow = trace_by_enumeration(&curve, ell).unwrap();
            assert_eq!(fast, slow, "curve {a:?}, ell={ell}");
            assert!(
                FrobeniusDatum { ell, trace: fast }.hasse_ok(),
                "Hasse bound violated: curve {a:?}, ell={ell}, a={fast}"
            );
        }
        curves += 1;
    }
}

/// a_ell does not depend on which completed model the count runs on.
#[test]
fn trace_model_invariance() {
    let mut rng = StdRng::seed_from_u64(41);
    let mut checked = 0;
    while checked < 10 {
        let a = [
            rng.gen_range(-2i64..=2),
            rng.gen_range(-2i64..=2),
            rng.gen_range(-2i64..=2),
            rng.gen_range(-9i64..=9),
            rng.gen_range(-9i64..=9),
        ];
        if a[0] == 0 && a[2] == 0 {
            continue; // want models that genuinely need completion
        }
        let curve = match Curve::from_i64(a) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let (ga, gb) = curve.short_model_global();
        let short = Curve::new(
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            ga,
            gb,
        )
        .unwrap();
        for ell in [5u64, 7, 11, 13, 17] {
            if curve.has_good_reduction(ell) {
                assert_eq!(
                    trace_of_frobenius(&curve, ell).unwrap(),
                    trace_of_frobenius(&short, ell).unwrap(),
                    "curve {a:?}, ell={ell}"
                );
            }
        }
        checked += 1;
    }
}

/// h = 0 exactly on roots of unity: all cyclotomics up to order 60 and 100
/// random non-cyclotomic irreducibles.
#[test]
fn kronecker_zero_height_locus() {
    for m in 1..=60u64 {
        let a = AlgebraicNumber::new(cyclotomic(m)).unwrap();
        assert_eq!(is_root_of_unity(&a), Some(m));
        let h = weil_height(&a).unwrap();
        assert!(h.nats.abs() <= 1e-9, "order {m}: h = {}", h.nats);
    }
    let mut rng = StdRng::seed_from_u64(60);
    let mut done = 0;
    while done < 100 {
        let deg = rng.gen_range(1..=8usize);
        let coeffs: Vec<i64> = (0..=deg)
            .map(|i| {
                if i == deg {
                    rng.gen_range(1..=20)
                } else {
                    rng.gen_range(-100..=100)
                }
            })
            .collect();
        let p = IntPoly::from_coeffs_asc(coeffs.into_iter().map(BigInt::from).collect());
        if p.degree() == 0 {
            continue;
        }
        let alg = match AlgebraicNumber::new(p) {
            Ok(a) => a,
            Err(_) => continue,
        };
        if is_root_of_unity(&alg).is_some() || alg.is_zero_element() {
            continue;
        }
        let h = weil_height(&alg).unwrap();
        assert!(h.nats > 1e-9, "non-torsion {} has h = {}", alg.minpoly(), h.nats);
        assert!(h.nats >= 0.0);
        done += 1;
    }
}

/// Steps s1-s3 hold for every prime up to 1e4 at the maximal admissible
/// d = (p-2)/2 and exponent = p; s4 holds exactly from 17 on.
#[test]
fn chain_sweep_full_range() {
    use heightfloor::bounds::verify_chain;
    use rayon::prelude::*;
    let primes: Vec<u64> = heightfloor::primes::primes_up_to(10_000)
        .into_iter()
        .filter(|&p| p >= 5)
        .collect();
    primes.par_iter().for_each(|&p| {
        let d = ((p - 2) / 2).max(1) as u32;
        let exp = p as u32;
        let r = verify_chain(p, d, exp).unwrap();
        for s in &r.steps {
            if s.name.starts_with("s4") {
                assert_eq!(s.holds, p >= 17, "s4 at p={p}");
            } else {
                assert!(s.holds, "step {} failed at p={p} d={d} exp={exp}", s.name);
            }
        }
    });
}

/// The headline floor is strictly decreasing in p across all primes up
/// to 1e4.
#[test]
fn final_bound_strictly_decreasing() {
    use heightfloor::bounds::final_bound_log;
    let mut prev = f64::INFINITY;
    for p in heightfloor::primes::primes_up_to(10_000).into_iter().filter(|&p| p >= 5) {
        let v = final_bound_log(p).unwrap().ln_f64();
        assert!(v < prev, "bound not strictly decreasing at p={p}");
        prev = v;
    }
}

/// Independent structural cross-check of the subgroup-lattice walk that
/// powers the flag-criterion oracle: Sylow subgroup classes must be unique
/// per prime with conjugate counts obeying the Sylow congruences, and the
/// Sylow-p count in GL2(F_p) must be p + 1 (one per Borel).
#[test]
fn subgroup_lattice_sylow_consistency() {
    use heightfloor::galois_image::subgroup_class_profile;
    for p in [5u64, 7] {
        let (n, classes) = subgroup_class_profile(p).unwrap();
        // |GL2(F_p)| = (p^2-1)(p^2-p)
        assert_eq!(n as u64, (p * p - 1) * (p * p - p));
        for (q, e) in prime_factorization(n as u64) {
            let sylow_order = q.pow(e) as usize;
            let sylows: Vec<&(usize, usize)> =
                classes.iter().filter(|(order, _)| *order == sylow_order).collect();
            assert_eq!(sylows.len(), 1, "Sylow-{q} classes at p={p}");
            let count = sylows[0].1 as u64;
            assert_eq!(count % q, 1 % q, "Sylow-{q} congruence at p={p}");
            assert_eq!((n as u64 / q.pow(e)) % count, 0, "Sylow-{q} index at p={p}");
            if q == p {
                assert_eq!(count, p + 1, "Sylow-p count must be p+1 at p={p}");
            }
        }
        // every class order divides the group order (Lagrange, recomputed)
        for (order, _) in &classes {
            assert_eq!(n % order, 0);
        }
    }
}

fn prime_factorization(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            let mut e = 0;
            while n % q == 0 {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
