//! Exact-arithmetic toolkit for locally conformal Kähler (LCK) structures on
//! metric Lie algebras.
//!
//! The crate works with finite-dimensional real Lie algebras given by
//! structure constants, equipped with an inner product `g` and a compatible
//! almost complex structure `J`. On top of that it provides the invariant
//! exterior calculus (wedge, differential, codifferential, Levi-Civita
//! connection), the Lee/anti-Lee data of a Hermitian structure, predicates for
//! Kähler / LCK / Vaisman / integrable-LCK / conformal-symplectic conditions,
//! constructions of the known model families by semidirect products, an exact
//! classifier in dimension four, and a search routine for derivation pairs
//! satisfying the membership conditions.
//!
//! Everything is generic over the scalar backend: exact rationals by default,
//! tolerance-compared floats on request.

pub mod analysis;
pub mod construct;
pub mod doc;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod hermitian;
pub mod lie;
pub mod linalg;
pub mod scalar;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Flt, Rat, Scalar};
