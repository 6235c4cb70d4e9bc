//! Exact spectral geometry of weighted projective planes CP²(N₁,N₂,N₃).
//!
//! The plane carries three isolated cyclic singularities of orders N₁, N₂,
//! N₃ (pairwise coprime). Its heat-trace invariants for the Laplacian on 0-
//! and 1-forms are closed forms in the weights, and — going the other way —
//! the invariants determine the weights. This crate implements both
//! directions with exact arithmetic wherever the mathematics is exact:
//!
//! * [`exact`] — GMP/MPFR-backed rationals and multiprecision floats,
//!   factorization, continued-fraction reconstruction, integer cubic roots.
//! * [`topology`] — weight triples, symmetric data (p, q, r, s), the Chern
//!   numbers b = ∫c₁², c = ∫c₂ = χ, d = b − 2c, and the localization suite
//!   for a chosen Kähler class.
//! * [`trig`] — the singular heat-trace sum T, cotangent-square sums,
//!   higher-dimensional Dedekind sums, and the Donnelly fixed-point factor.
//! * [`heat`] — the form-degree coefficients, the forward heat coefficients
//!   𝔞₀, 𝔞₁, 𝔞₂, and the extraction formulas that invert them.
//! * [`recovery`] — hearing the weights: from the Chern numbers, from the
//!   0-/1-form spectra, from b alone for prime weights, or from b plus the
//!   Euler characteristic.
//! * [`extremal`] — the moment polytope, the extremal scalar curvature, two
//!   independent exact routes to ∫τ², and the extremality detector.
//!
//! Everything is pure and deterministic at a fixed precision; values are
//! immutable after construction, so concurrent use needs no coordination.
//!
//! ## Quick start
//!
//! ```
//! use wpp::recovery::recover_from_bcd;
//! use wpp::topology::{chern_numbers, WeightTriple};
//!
//! let w = WeightTriple::new(1, 2, 3)?;
//! let ch = chern_numbers(&w);            // b = 6, c = 11/6, d = 7/3
//! let report = recover_from_bcd(&ch.b, &ch.c, &ch.d)?;
//! assert_eq!(report.weights, w);         // the weights are heard back
//! assert_eq!(report.cubic_roots, vec![3, 4, 5]);
//! # Ok::<(), wpp::Error>(())
//! ```

pub mod error;
pub mod exact;
pub mod extremal;
pub mod heat;
pub mod recovery;
pub mod topology;
pub mod trig;

pub use error::{Error, Result};
