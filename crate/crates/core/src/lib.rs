//! Sidon sequences that are asymptotic bases of order 3, built from
//! irreducible polynomials over a prime field, together with exhaustive
//! and statistical verifiers for each property of the construction.
//!
//! Module map:
//!
//! * [`ffpoly`]: arithmetic in `F_q[t]`, irreducibility, enumeration, CRT
//! * [`unitgroup`]: generators and discrete logarithms modulo `g`
//! * [`auxset`]: the auxiliary pair `(p, A)` and its verifiers
//! * [`gbase`]: the mixed-radix base `b_i`
//! * [`builder`]: moduli, `F_k`, and the integers `n_f`
//! * [`analyzer`]: Sidon checks, collision attribution, decompositions,
//!   representation counts
//! * [`equidist`]: triple-product counts in residue classes

pub mod analyzer;
pub mod auxset;
pub mod builder;
pub mod equidist;
pub mod error;
pub mod ffpoly;
pub mod format;
pub mod gbase;
pub mod rng;
pub(crate) mod serde_big;
pub mod unitgroup;

pub use error::{Error, Result};
pub use ffpoly::{Poly, PrimeModulus};
