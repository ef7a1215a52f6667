//! Exact-arithmetic construction and analysis of linear and constacyclic codes
//! over finite commutative Frobenius rings.
//!
//! The crate works with three families of rings, all finite, commutative and
//! Frobenius:
//!
//! * chain rings `Z_{p^s}` and their Galois extensions `GR(p^s, m)`,
//!   including the residue fields `F_{p^m}` as the case `s = 1`;
//! * the local (non-chain) algebras `R_m = F2[u_1, ..., u_m] / (u_i^2)`;
//! * CRT composites of the above with pairwise coprime characteristics,
//!   e.g. `Z15 = Z3 x Z5`.
//!
//! On top of the ring arithmetic it provides matrix algebra with standard
//! forms, duals and LCD (linear complementary dual) decisions for linear
//! codes, Hensel-lifted factorisations of `X^n - gamma`, constacyclic code
//! enumeration, and exact minimum Lee/Hamming distance search.  The
//! `lcdring` binary exposes all of it as reproducible command-line
//! experiments with JSON/CSV output.
//!
//! A guided tour lives in the `book/` directory of the repository; every
//! code snippet there is compiled and run as a doc-test of this crate.

pub mod code;
pub mod consta;
pub mod distance;
pub mod linalg;
pub mod poly;
pub mod ring;
pub mod serial;

pub mod cli;

mod util;

#[cfg(doctest)]
mod book;

pub use code::LinearCode;
pub use consta::ConstacyclicCode;
pub use distance::{DistanceReport, DistanceStatus, SearchStrategy, WeightKind};
pub use linalg::{RingMatrix, StandardForm};
pub use poly::{FactorSet, RingPoly};
pub use ring::{Epimorphism, Ring, RingElement};

/// Errors shared by the whole crate.
///
/// Structural misuse (mixing elements of different rings, conformability of
/// matrix shapes) panics instead: those are programming errors, not data.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("not a prime: {0}")]
    NotPrime(u64),
    #[error("modulus is not basic irreducible: {0}")]
    ReducibleModulus(String),
    #[error("composite characteristics are not pairwise coprime")]
    NonCoprime,
    #[error("unsupported ring for this operation: {0}")]
    UnsupportedRing(String),
    #[error("non-unit: {0}")]
    NonUnit(String),
    #[error("repeated-root parameters: gcd(n, q) != 1 for n = {n}, q = {q}")]
    RepeatedRoot { n: usize, q: u64 },
    #[error("{0} does not divide {1}")]
    NotDivisor(String, String),
    #[error("code is not free")]
    NotFree,
    #[error("code is not LCD")]
    NotLcd,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
