//! Exact integer, rational, and mod-p arithmetic: the foundation layer.

mod factor;
mod intpoly;
mod modpoly;
mod power;

pub use factor::{factor_over_z, Factored};
pub use intpoly::IntPoly;
pub use modpoly::ModPoly;
pub use power::power_minpoly;

use crate::error::{Error, Result};
use crate::primes::{is_prime, pow_mod};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Legendre symbol (a/p) for an odd prime p, via Euler's criterion.
pub fn legendre_symbol(a: &BigInt, p: u64) -> Result<i32> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    let r = a.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits");
    Ok(legendre_u64(r, p))
}

/// Same as [`legendre_symbol`] for an already reduced residue.
pub(crate) fn legendre_u64(a: u64, p: u64) -> i32 {
    let r = a % p;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(legendre_symbol(&BigInt::from(0), 5).unwrap(), 0);
        assert_eq!(legendre_symbol(&BigInt::from(4), 7).unwrap(), 1);
        assert_eq!(legendre_symbol(&BigInt::from(2), 5).unwrap(), -1);
    }

    #[test]
    fn rejects_non_odd_primes() {
        assert!(legendre_symbol(&BigInt::from(3), 2).is_err());
        assert!(legendre_symbol(&BigInt::from(3), 9).is_err());
        assert!(legendre_symbol(&BigInt::from(3), 1).is_err());
    }

    #[test]
    fn euler_criterion_exhaustive_small() {
        // against direct square enumeration for p <= 97
        for p in crate::primes::primes_up_to(97).into_iter().filter(|&p| p > 2) {
            let mut squares = std::collections::HashSet::new();
            for x in 0..p {
                squares.insert(x * x % p);
            }
            for a in 0..p {
                let expect = if a == 0 {
                    0
                } else if squares.contains(&a) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_u64(a, p), expect, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn negative_arguments_reduced() {
        // -1 is a square mod 5 (2^2 = 4 = -1), not mod 7
        assert_eq!(legendre_symbol(&BigInt::from(-1), 5).unwrap(), 1);
        assert_eq!(legendre_symbol(&BigInt::from(-1), 7).unwrap(), -1);
    }
}
