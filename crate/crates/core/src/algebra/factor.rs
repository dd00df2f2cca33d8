//! Factorization over Z: squarefree decomposition (Yun), factorization
//! modulo a good small prime (Cantor-Zassenhaus), quadratic Hensel lifting
//! on a factor tree, and Zassenhaus subset recombination.
//!
//! Inputs here stay at desk scale (degree <= ~80), so the classical
//! exponential recombination is adequate and no LLL step is needed.

use super::intpoly::IntPoly;
use super::modpoly::{factor_squarefree_monic, ModPoly};
use crate::error::{Error, Result};
use crate::primes::primes_up_to;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// `content * prod factors[i].0 ^ factors[i].1` reassembles the input.
/// Factors are primitive, irreducible over Q, positive leading coefficient,
/// ordered by (degree, descending-coefficient lexicographic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

pub fn factor_over_z(poly: &IntPoly) -> Result<Factored> {
    if poly.is_zero() {
        return Err(Error::Domain("cannot factor the zero polynomial".into()));
    }
    let content = poly.content();
    let prim = poly.primitive_part();
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    for (sqfree, mult) in yun_squarefree(&prim) {
        if sqfree.degree() == 0 {
            continue;
        }
        for f in factor_squarefree_over_z(&sqfree) {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| {
        (a.0.degree(), a.0.coeffs_desc(), a.1).cmp(&(b.0.degree(), b.0.coeffs_desc(), b.1))
    });
    Ok(Factored { content, factors })
}

/// Yun's algorithm on a primitive polynomial with positive leading term.
/// Returns pairwise-coprime squarefree parts with their multiplicities.
fn yun_squarefree(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    if f.degree() == 0 {
        return vec![(f.clone(), 1)];
    }
    let df = f.derivative();
    let g = f.gcd(&df);
    if g.degree() == 0 {
        return vec![(f.clone(), 1)];
    }
    let mut out = Vec::new();
    let mut b = f.div_exact(&g).expect("gcd divides");
    let mut c = df.div_exact(&g).expect("gcd divides f'");
    let mut d = c.sub(&b.derivative());
    let mut i = 1u32;
    while b.degree() >= 1 {
        let a = b.gcd(&d);
        if a.degree() >= 1 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("a divides b");
        c = d.div_exact(&a).expect("a divides d");
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Factor a primitive squarefree polynomial with positive leading term.
fn factor_squarefree_over_z(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.degree();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![f.clone()];
    }
    // Monicize: m(x) = lc^(n-1) * f(x/lc) is monic over Z with the same
    // splitting; a factor G of m maps back to primitive_part(G(lc*x)).
    let lc = f.leading();
    let m = monicize(f);

    // Choose the good prime with the fewest modular factors among a sample.
    let candidates = good_primes(&m, 5);
    let (p, modular) = candidates
        .into_iter()
        .min_by_key(|(p, v)| (v.len(), *p))
        .expect("at least one good prime exists");
    if modular.len() == 1 {
        return vec![f.clone()]; // irreducible mod p => irreducible over Q
    }

    // Lift to p^k > 2*B with B a factor-coefficient bound for m.
    let bound = factor_coeff_bound(&m);
    let target: BigInt = bound * 2 + 1;
    let mut pk = BigInt::from(p);
    let mut lifts = 0u32;
    while pk < target {
        pk = &pk * &pk;
        lifts += 1;
    }
    let lifted = hensel_lift_tree(&m, &modular, p, lifts);
    let modulus = pk;

    // Zassenhaus subset recombination on the monic lifted factors.
    let mut remaining: Vec<IntPoly> = lifted;
    let mut m_rest = m;
    let mut monic_factors: Vec<IntPoly> = Vec::new();
    let mut card = 1usize;
    while 2 * card <= remaining.len() {
        let mut found = None;
        'subsets: for subset in Subsets::new(remaining.len(), card) {
            let cand = product_mod_symmetric(&remaining, &subset, &modulus);
            // cheap filter: the candidate constant term must divide m(0)
            let c0 = cand.constant_term();
            let m0 = m_rest.constant_term();
            if !m0.is_zero() && !c0.is_zero() && !(&m0 % &c0).is_zero() {
                continue;
            }
            if let Some(quot) = m_rest.div_exact(&cand) {
                monic_factors.push(cand);
                m_rest = quot;
                found = Some(subset);
                break 'subsets;
            }
        }
        match found {
            Some(subset) => {
                let keep: Vec<IntPoly> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g.clone())
                    .collect();
                remaining = keep;
            }
            None => card += 1,
        }
    }
    if m_rest.degree() >= 1 {
        monic_factors.push(m_rest);
    }

    // Map factors of m back to primitive factors of f.
    monic_factors
        .into_iter()
        .map(|g| substitute_scale(&g, &lc).primitive_part())
        .collect()
}

fn monicize(f: &IntPoly) -> IntPoly {
    let n = f.degree();
    let lc = f.leading();
    // coefficient of x^i becomes a_i * lc^(n-1-i); the top term becomes 1
    let mut coeffs = Vec::with_capacity(n + 1);
    for i in 0..n {
        coeffs.push(f.coeff(i) * lc.pow((n - 1 - i) as u32));
    }
    coeffs.push(BigInt::one());
    IntPoly::from_coeffs_asc(coeffs)
}

/// G(lc * x): scales roots back down by lc.
fn substitute_scale(g: &IntPoly, lc: &BigInt) -> IntPoly {
    let mut coeffs = Vec::with_capacity(g.degree() + 1);
    let mut power = BigInt::one();
    for i in 0..=g.degree() {
        coeffs.push(g.coeff(i) * &power);
        power *= lc;
    }
    IntPoly::from_coeffs_asc(coeffs)
}

/// Small odd primes where m stays squarefree, with their modular factors.
fn good_primes(m: &IntPoly, want: usize) -> Vec<(u64, Vec<ModPoly>)> {
    let mut out = Vec::new();
    for limit in [2_000u64, 100_000] {
        for p in primes_up_to(limit).into_iter().skip(1) {
            if (m.leading() % BigInt::from(p)).is_zero() {
                continue; // cannot happen for monic m, kept for safety
            }
            let fp = reduce_mod(m, p);
            if fp.degree() != m.degree() {
                continue;
            }
            if fp.gcd(&fp.derivative()).degree() != 0 {
                continue;
            }
            let factors = factor_squarefree_monic(&fp.make_monic());
            out.push((p, factors));
            if out.len() >= want {
                return out;
            }
        }
        if !out.is_empty() {
            return out;
        }
    }
    out
}

fn reduce_mod(f: &IntPoly, p: u64) -> ModPoly {
    use num_traits::ToPrimitive;
    let bp = BigInt::from(p);
    ModPoly::new(
        p,
        f.coeffs_asc()
            .iter()
            .map(|c| c.mod_floor(&bp).to_u64().expect("residue fits u64"))
            .collect(),
    )
}

/// Mignotte-style bound on coefficients of any factor of monic m.
fn factor_coeff_bound(m: &IntPoly) -> BigInt {
    let n = m.degree();
    let norm = m.norm2_sq().sqrt() + 1;
    binomial(n, n / 2) * norm
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..k.min(n - k) {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    b
}

// ---------------------------------------------------------------------------
// Hensel lifting on a balanced factor tree
// ---------------------------------------------------------------------------

struct TreeNode {
    product: IntPoly, // mod current modulus, symmetric range, monic
    // children with Bezout pair s*left + t*right = 1 (mod modulus)
    children: Option<(Box<TreeNode>, Box<TreeNode>, IntPoly, IntPoly)>,
}

/// Lift the monic factorization of a monic m from mod p to mod p^(2^lifts).
fn hensel_lift_tree(m: &IntPoly, modular: &[ModPoly], p: u64, lifts: u32) -> Vec<IntPoly> {
    let mut root = build_tree(modular, p);
    let mut modulus = BigInt::from(p);
    for _ in 0..lifts {
        let next = &modulus * &modulus;
        lift_node(&mut root, m, &next);
        modulus = next;
    }
    let mut leaves = Vec::new();
    collect_leaves(root, &mut leaves);
    leaves
}

fn build_tree(factors: &[ModPoly], p: u64) -> TreeNode {
    assert!(!factors.is_empty());
    if factors.len() == 1 {
        return TreeNode {
            product: lift_symmetric(&factors[0]),
            children: None,
        };
    }
    let mid = factors.len() / 2;
    let left = build_tree(&factors[..mid], p);
    let right = build_tree(&factors[mid..], p);
    let lp = reduce_mod(&left.product, p);
    let rp = reduce_mod(&right.product, p);
    let (g, s, t) = lp.extended_gcd(&rp);
    assert_eq!(g.degree(), 0, "modular factors must be pairwise coprime");
    let product = lift_symmetric(&lp.mul(&rp));
    TreeNode {
        product,
        children: Some((
            Box::new(left),
            Box::new(right),
            lift_symmetric(&s),
            lift_symmetric(&t),
        )),
    }
}

fn collect_leaves(node: TreeNode, out: &mut Vec<IntPoly>) {
    match node.children {
        None => out.push(node.product),
        Some((l, r, _, _)) => {
            collect_leaves(*l, out);
            collect_leaves(*r, out);
        }
    }
}

/// One quadratic Hensel step for the node's (g, h, s, t), then recurse so the
/// children lift against the node's refreshed child products.
fn lift_node(node: &mut TreeNode, target: &IntPoly, q2: &BigInt) {
    if let Some((left, right, s, t)) = node.children.as_mut() {
        let g = &left.product;
        let h = &right.product;
        // e = target - g*h (mod q^2)
        let e = reduce_sym(&target.sub(&g.mul(h)), q2);
        // (quo, rem) = (s*e) divrem h; h is monic
        let se = reduce_sym(&s.mul(&e), q2);
        let (quo, rem) = divrem_monic_mod(&se, h, q2);
        let g_new = reduce_sym(&g.add(&t.mul(&e)).add(&quo.mul(g)), q2);
        let h_new = reduce_sym(&h.add(&rem), q2);
        debug_assert!(g_new.is_monic() && h_new.is_monic());
        // Bezout update: b = s*g' + t*h' - 1 (mod q^2)
        let b = reduce_sym(&s.mul(&g_new).add(&t.mul(&h_new)).sub(&IntPoly::one()), q2);
        let sb = reduce_sym(&s.mul(&b), q2);
        let (c, d) = divrem_monic_mod(&sb, &h_new, q2);
        let s_new = reduce_sym(&s.sub(&d), q2);
        let t_new = reduce_sym(&t.sub(&t.mul(&b)).sub(&c.mul(&g_new)), q2);
        left.product = g_new.clone();
        right.product = h_new.clone();
        *s = s_new;
        *t = t_new;
        node.product = reduce_sym(&g_new.mul(&h_new), q2);
        lift_node(left, &g_new, q2);
        lift_node(right, &h_new, q2);
    } else {
        node.product = reduce_sym(target, q2);
    }
}

/// Coefficients reduced into the symmetric range (-m/2, m/2].
fn reduce_sym(f: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m / 2;
    IntPoly::from_coeffs_asc(
        f.coeffs_asc()
            .iter()
            .map(|c| {
                let mut r = c.mod_floor(m);
                if r > half {
                    r -= m;
                }
                r
            })
            .collect(),
    )
}

fn lift_symmetric(f: &ModPoly) -> IntPoly {
    let m = BigInt::from(f.p);
    let half = BigInt::from(f.p / 2);
    IntPoly::from_coeffs_asc(
        f.coeffs()
            .iter()
            .map(|&c| {
                let v = BigInt::from(c);
                if v > half {
                    v - &m
                } else {
                    v
                }
            })
            .collect(),
    )
}

/// Division with remainder by a monic divisor, coefficients mod m symmetric.
fn divrem_monic_mod(f: &IntPoly, h: &IntPoly, m: &BigInt) -> (IntPoly, IntPoly) {
    let (q, r) = f.divrem_monic(h);
    (reduce_sym(&q, m), reduce_sym(&r, m))
}

fn product_mod_symmetric(factors: &[IntPoly], subset: &[usize], modulus: &BigInt) -> IntPoly {
    let mut acc = IntPoly::one();
    for &i in subset {
        acc = reduce_sym(&acc.mul(&factors[i]), modulus);
    }
    acc
}

/// Ascending-lexicographic k-subsets of 0..n.
struct Subsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Subsets { n, current }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.clone()?;
        let k = cur.len();
        let mut next = cur.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - (k - i) {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(desc: &[i64]) -> IntPoly {
        IntPoly::from_i64_desc(desc)
    }

    fn reassemble(f: &Factored) -> IntPoly {
        let mut acc = IntPoly::constant(f.content.clone());
        for (q, m) in &f.factors {
            acc = acc.mul(&q.pow(*m));
        }
        acc
    }

    #[test]
    fn spec_example_difference_of_squares() {
        let f = factor_over_z(&p(&[1, 0, -1])).unwrap();
        assert_eq!(f.content, BigInt::one());
        assert_eq!(f.factors, vec![(p(&[1, -1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn spec_example_irreducible_quadratic() {
        let f = factor_over_z(&p(&[1, 0, 1])).unwrap();
        assert_eq!(f.content, BigInt::one());
        assert_eq!(f.factors, vec![(p(&[1, 0, 1]), 1)]);
    }

    #[test]
    fn spec_example_with_content() {
        // 3x^4 + 12x = 3 * x * (x^3 + 4)
        let f = factor_over_z(&p(&[3, 0, 0, 12, 0])).unwrap();
        assert_eq!(f.content, BigInt::from(3));
        assert_eq!(f.factors, vec![(p(&[1, 0]), 1), (p(&[1, 0, 0, 4]), 1)]);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(
            factor_over_z(&IntPoly::zero()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn multiplicities_via_yun() {
        // (x-1)^2 (x+2)^3 * 5
        let f = p(&[1, -1]).pow(2).mul(&p(&[1, 2]).pow(3)).mul_scalar(&5.into());
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(fac.content, BigInt::from(5));
        assert_eq!(fac.factors, vec![(p(&[1, -1]), 2), (p(&[1, 2]), 3)]);
        assert_eq!(reassemble(&fac), f);
    }

    #[test]
    fn nonmonic_products() {
        // (2x+1)(3x-5)(x^2+x+7)
        let f = p(&[2, 1]).mul(&p(&[3, -5])).mul(&p(&[1, 1, 7]));
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(reassemble(&fac), f);
        assert_eq!(fac.factors.len(), 3);
        for (q, _) in &fac.factors {
            assert!(q.leading() > BigInt::zero());
            assert_eq!(q.content(), BigInt::one());
        }
    }

    #[test]
    fn negative_leading_content() {
        let f = p(&[-2, 0, 2]); // -2(x-1)(x+1)
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(fac.content, BigInt::from(-2));
        assert_eq!(reassemble(&fac), f);
    }

    #[test]
    fn cyclotomic_like_splitting() {
        // x^4 - 1 = (x-1)(x+1)(x^2+1)
        let fac = factor_over_z(&p(&[1, 0, 0, 0, -1])).unwrap();
        assert_eq!(
            fac.factors,
            vec![(p(&[1, -1]), 1), (p(&[1, 1]), 1), (p(&[1, 0, 1]), 1)]
        );
    }

    #[test]
    fn swinnerton_dyer_two_primes() {
        // minimal polynomial of sqrt(2)+sqrt(3): x^4 - 10x^2 + 1,
        // irreducible over Q but splits mod every prime
        let fac = factor_over_z(&p(&[1, 0, -10, 0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(p(&[1, 0, -10, 0, 1]), 1)]);
    }

    #[test]
    fn subset_iterator_order() {
        let all: Vec<Vec<usize>> = Subsets::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }
}
