//! Minimal polynomial of beta^k from the minimal polynomial of beta.
//!
//! Uses the scaled companion matrix D = lc * C (an integer matrix whose
//! eigenvalues are lc*beta_j), takes its k-th power, and reads off the
//! characteristic polynomial with Faddeev-LeVerrier, which only performs
//! exact integer divisions. Substituting back x -> lc^k x yields
//! lc^(kn) * prod (x - beta_j^k) up to content, whose single distinct
//! irreducible factor is the answer.

use super::factor::factor_over_z;
use super::intpoly::IntPoly;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn power_minpoly(p: &IntPoly, k: u32) -> Result<IntPoly> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    if p.is_zero() || p.degree() == 0 {
        return Err(Error::Domain("minimal polynomial must be nonconstant".into()));
    }
    let n = p.degree();
    let lc = p.leading();

    // D[i][j], row i column j: D e_j = lc * e_{j+1} for j < n-1,
    // D e_{n-1} = -(a_0, ..., a_{n-1}).
    let mut d = vec![vec![BigInt::zero(); n]; n];
    for j in 0..n - 1 {
        d[j + 1][j] = lc.clone();
    }
    for (i, row) in d.iter_mut().enumerate() {
        row[n - 1] = -p.coeff(i);
    }

    let e = mat_pow(&d, k);
    let char_coeffs = charpoly_faddeev_leverrier(&e);

    // R(x) = chi(lc^k * x): coefficient of x^i picks up (lc^k)^i.
    let scale = lc.pow(k);
    let mut power = BigInt::one();
    let mut coeffs = Vec::with_capacity(n + 1);
    for c in char_coeffs.iter() {
        coeffs.push(c * &power);
        power *= &scale;
    }
    let r = IntPoly::from_coeffs_asc(coeffs).primitive_part();

    let factored = factor_over_z(&r)?;
    if factored.factors.len() != 1 {
        return Err(Error::Domain(
            "input was not irreducible: power polynomial split".into(),
        ));
    }
    Ok(factored.factors[0].0.clone())
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += aik * &b[k][j];
                }
            }
        }
    }
    out
}

fn mat_pow(m: &[Vec<BigInt>], mut k: u32) -> Vec<Vec<BigInt>> {
    let n = m.len();
    let mut acc: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut base = m.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = mat_mul(&base, &base);
        }
    }
    acc
}

/// Characteristic polynomial of an integer matrix, ascending coefficients,
/// monic. All divisions in the recurrence are exact over Z.
fn charpoly_faddeev_leverrier(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut cs = vec![BigInt::zero(); n + 1];
    cs[n] = BigInt::one();
    let mut c_prev = -trace(&m);
    cs[n - 1] = c_prev.clone();
    for j in 2..=n {
        // M <- A * (M + c_{j-1} I)
        let mut shifted = m.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += &c_prev;
        }
        m = mat_mul(a, &shifted);
        let t = trace(&m);
        let cj = -t / BigInt::from(j as u64);
        cs[n - j] = cj.clone();
        c_prev = cj;
    }
    cs
}

fn trace(m: &[Vec<BigInt>]) -> BigInt {
    m.iter().enumerate().map(|(i, row)| row[i].clone()).sum()
}
