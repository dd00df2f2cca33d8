//! Polynomials over F_p for small odd primes p, plus Cantor-Zassenhaus
//! factorization of squarefree inputs. This backs the mod-p stage of the
//! integer factorization pipeline.

use crate::primes::{inv_mod, mul_mod};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dense polynomial over F_p, ascending coefficients, trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModPoly {
    pub p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        ModPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        ModPoly::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (self.coeff(i) + rhs.coeff(i)) % self.p;
        }
        ModPoly::new(self.p, out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (self.coeff(i) + self.p - rhs.coeff(i)) % self.p;
        }
        ModPoly::new(self.p, out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return ModPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        ModPoly::new(self.p, out)
    }

    pub fn mul_scalar(&self, s: u64) -> Self {
        ModPoly::new(
            self.p,
            self.coeffs.iter().map(|&c| mul_mod(c, s, self.p)).collect(),
        )
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.mul_scalar(inv_mod(self.leading(), self.p))
    }

    pub fn divrem(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero());
        if self.coeffs.len() < rhs.coeffs.len() {
            return (ModPoly::zero(self.p), self.clone());
        }
        let p = self.p;
        let inv_lead = inv_mod(rhs.leading(), p);
        let mut rem = self.coeffs.clone();
        let dq = self.coeffs.len() - rhs.coeffs.len();
        let mut quot = vec![0u64; dq + 1];
        for k in (0..=dq).rev() {
            let q = mul_mod(rem[k + rhs.degree()], inv_lead, p);
            if q == 0 {
                continue;
            }
            quot[k] = q;
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - mul_mod(q, b, p)) % p;
            }
        }
        (ModPoly::new(p, quot), ModPoly::new(p, rem))
    }

    pub fn rem(&self, rhs: &Self) -> Self {
        self.divrem(rhs).1
    }

    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Extended Euclid: returns (g, s, t) monic with s*self + t*rhs = g.
    pub fn extended_gcd(&self, rhs: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (ModPoly::one(p), ModPoly::zero(p));
        let (mut t0, mut t1) = (ModPoly::zero(p), ModPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let ns = s0.sub(&q.mul(&s1));
            let nt = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = inv_mod(r0.leading(), p);
        (r0.mul_scalar(c), s0.mul_scalar(c), t0.mul_scalar(c))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return ModPoly::zero(self.p);
        }
        ModPoly::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, (i as u64) % self.p, self.p))
                .collect(),
        )
    }

    /// self^e mod m, with a u64 exponent.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = ModPoly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// self^e mod m with a big exponent given as little-endian bits.
    fn pow_mod_bits(&self, bits: &[bool], m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = ModPoly::one(self.p);
        for (i, &b) in bits.iter().enumerate() {
            if b {
                acc = acc.mul(&base).rem(m);
            }
            if i + 1 < bits.len() {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, x, self.p) + c) % self.p;
        }
        acc
    }
}

/// (p^d - 1) / 2 as little-endian bits; p odd so the numerator is even.
fn cz_exponent_bits(p: u64, d: usize) -> Vec<bool> {
    // big integer p^d - 1 over u32 limbs, then halve
    let mut limbs: Vec<u64> = vec![1];
    for _ in 0..d {
        let mut carry = 0u64;
        for l in limbs.iter_mut() {
            let v = *l as u128 * p as u128 + carry as u128;
            *l = (v & 0xFFFF_FFFF) as u64;
            carry = (v >> 32) as u64;
        }
        while carry > 0 {
            limbs.push(carry & 0xFFFF_FFFF);
            carry >>= 32;
        }
    }
    // subtract 1
    let mut i = 0;
    loop {
        if limbs[i] > 0 {
            limbs[i] -= 1;
            break;
        }
        limbs[i] = 0xFFFF_FFFF;
        i += 1;
    }
    // halve
    let mut bits = Vec::new();
    let mut all: Vec<bool> = Vec::new();
    for l in &limbs {
        for b in 0..32 {
            all.push((l >> b) & 1 == 1);
        }
    }
    while all.last() == Some(&false) {
        all.pop();
    }
    bits.extend(all.iter().skip(1));
    if bits.is_empty() {
        bits.push(false);
    }
    bits
}

/// Factor a squarefree monic polynomial over F_p into monic irreducibles.
/// Deterministic across runs: the equal-degree splitting draws from a
/// fixed-seed ChaCha stream.
pub fn factor_squarefree_monic(f: &ModPoly) -> Vec<ModPoly> {
    assert!(f.leading() == 1);
    let p = f.p;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1dea);
    let mut out = Vec::new();

    // distinct-degree decomposition
    let mut h = ModPoly::x(p); // x^(p^d) mod f, iterated
    let mut rest = f.clone();
    let mut d = 0usize;
    let mut stages: Vec<(usize, ModPoly)> = Vec::new();
    while !rest.is_zero() && rest.degree() >= 1 {
        d += 1;
        if 2 * d > rest.degree() {
            stages.push((rest.degree(), rest.clone()));
            break;
        }
        h = h.pow_mod(p, &rest);
        let g = h.sub(&ModPoly::x(p)).gcd(&rest);
        if g.degree() >= 1 {
            stages.push((d, g.clone()));
            rest = rest.divrem(&g).0.make_monic();
            h = h.rem(&rest);
        }
    }

    // equal-degree splitting per stage
    for (d, prod) in stages {
        let mut queue = vec![prod];
        while let Some(g) = queue.pop() {
            if g.degree() == d {
                out.push(g.make_monic());
                continue;
            }
            let bits = cz_exponent_bits(p, d);
            loop {
                let deg = g.degree();
                let mut coeffs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
                coeffs.push(1);
                let r = ModPoly::new(p, coeffs);
                let t = r.pow_mod_bits(&bits, &g).sub(&ModPoly::one(p));
                let w = t.gcd(&g);
                if w.degree() >= 1 && w.degree() < g.degree() {
                    let other = g.divrem(&w).0.make_monic();
                    queue.push(w);
                    queue.push(other);
                    break;
                }
            }
        }
    }
    out.sort_by(|a, b| (a.degree(), a.coeffs()).cmp(&(b.degree(), b.coeffs())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_and_gcd() {
        let p = 7;
        let f = ModPoly::new(p, vec![1, 0, 1]).mul(&ModPoly::new(p, vec![3, 1]));
        let g = ModPoly::new(p, vec![3, 1]);
        let (q, r) = f.divrem(&g);
        assert!(r.is_zero());
        assert_eq!(q, ModPoly::new(p, vec![1, 0, 1]));
        assert_eq!(f.gcd(&g), g.make_monic());
    }

    #[test]
    fn extended_gcd_bezout() {
        let p = 13;
        let a = ModPoly::new(p, vec![2, 0, 1]); // x^2 + 2
        let b = ModPoly::new(p, vec![5, 1]); // x + 5
        let (g, s, t) = a.extended_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert_eq!(g.degree(), 0);
    }

    #[test]
    fn cz_factors_product_of_linears() {
        // (x-1)(x-2)(x-3) over F_11
        let p = 11;
        let f = ModPoly::new(p, vec![10, 1])
            .mul(&ModPoly::new(p, vec![9, 1]))
            .mul(&ModPoly::new(p, vec![8, 1]));
        let fs = factor_squarefree_monic(&f);
        assert_eq!(fs.len(), 3);
        let mut prod = ModPoly::one(p);
        for q in &fs {
            assert_eq!(q.degree(), 1);
            prod = prod.mul(q);
        }
        assert_eq!(prod, f);
    }

    #[test]
    fn cz_mixed_degrees() {
        // x^2 + 1 irreducible over F_7 (since -1 is not a QR mod 7)
        let p = 7;
        let f = ModPoly::new(p, vec![1, 0, 1]).mul(&ModPoly::new(p, vec![3, 1]));
        let fs = factor_squarefree_monic(&f);
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].degree(), 1);
        assert_eq!(fs[1].degree(), 2);
    }

    #[test]
    fn exponent_bits_small() {
        // (5^2 - 1)/2 = 12 = 0b1100
        let bits = cz_exponent_bits(5, 2);
        let val: u64 = bits
            .iter()
            .enumerate()
            .map(|(i, &b)| if b { 1u64 << i } else { 0 })
            .sum();
        assert_eq!(val, 12);
        // (3^5 - 1)/2 = 121
        let bits = cz_exponent_bits(3, 5);
        let val: u64 = bits
            .iter()
            .enumerate()
            .map(|(i, &b)| if b { 1u64 << i } else { 0 })
            .sum();
        assert_eq!(val, 121);
    }
}
