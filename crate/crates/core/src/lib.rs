//! Certified arithmetic for explicit height floors over elliptic-curve
//! torsion fields: prime-condition certification, exact Weil heights,
//! division polynomials, underflow-safe bound evaluation, and exhaustive
//! verification of the small-field GL2 lemmas the bounds rest on.

pub mod algebra;
pub mod bounds;
pub mod division_poly;
pub mod elliptic;
pub mod error;
pub mod galois_image;
pub mod gl2_lab;
pub mod heights;
pub mod prime_cert;
pub mod primes;

pub(crate) mod gl2_core;

pub use error::{Error, Result};
