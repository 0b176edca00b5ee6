//! Exact symbolic engine for quantum principal bundles on quantum projective
//! spaces.
//!
//! The crate builds the quantized coordinate rings `O_q(M_n)`, `O_q(GL_n)`,
//! `O_q(SL_n)`, the quantum parabolic `O_q(P)`, the torus `O(T^{n-1})` and the
//! quantum projective ring, together with their Hopf/comodule structure maps,
//! Ore localizations at the column elements `d_i = a_{i1}`, the chartwise
//! sheaf model with its cleaving maps, and the diagonal 2-cocycle twists that
//! produce the multiparametric variants.  Everything is verified mechanically
//! by reduction to canonical normal forms; there is no floating point
//! anywhere.
//!
//! Module map:
//! - [`coeff`]: the commutative coefficient ring (rationals, Laurent `q`,
//!   formal phases `g[j,k]`).
//! - [`freealg`]: words, noncommutative polynomials, tensor polynomials, and
//!   the text grammar.
//! - [`rewrite`]: oriented rewrite systems, normal forms, bounded completion
//!   and local-confluence certification.
//! - [`qgroups`]: the presented algebras, quantum determinants and minors,
//!   `Δ`, `ε`, `S` and the parabolic projection `π`.
//! - [`localization`]: Ore localization at the sets `{d_i^r}`, coactions on
//!   localizations, coinvariants.
//! - [`linalg`]: fraction-free exact linear algebra over the coefficient
//!   ring.
//! - [`bundle`]: the sheaf of comodule algebras, cleaving maps, trivialization
//!   and canonical-map checks, crossed cocycles.
//! - [`twist`]: torus weights, the diagonal bicharacter, the `Γ`/`Σ` twisted
//!   products, multiparametric presentations and the twist theorems.
//! - [`report`]: plain check/report types shared by the verification suites.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bundle;
pub mod coeff;
pub mod freealg;
pub mod linalg;
pub mod localization;
pub mod qgroups;
pub mod report;
pub mod rewrite;
pub mod twist;
pub mod util;

mod error;

pub use error::Error;

/// Convenient alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
