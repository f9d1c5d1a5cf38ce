//! Order relations for state convertibility and the entropy scales they induce.
//!
//! A state of a finite system is reduced to its spectrum: a probability vector,
//! optionally annotated with conserved-quantity labels (energies, particle
//! numbers, angular momenta). Four order relations — plain majorization and its
//! heat-bath, heat-plus-particle, and angular-momentum rescalings — are all
//! expressed as one comparison of concave Lorenz curves built from rescaled
//! step functions. On top of the orders sit:
//!
//! - closed-form entropy and free-energy functionals ([`entropy`]),
//! - an entropy scale fixed by a pair of gauge states, computed by a λ-search
//!   against the order relation and checked against its closed form ([`scale`]),
//! - constructive doubly-stochastic certificates for convertibility
//!   ([`certificates`]),
//! - a randomized harness that checks the order axioms the construction rests
//!   on ([`axioms`]).
//!
//! The crate is `no_std`-compatible (`alloc` required): disable default
//! features and enable `libm` for float math without the standard library.
//!
//! # Direction convention
//!
//! <div class="warning">
//!
//! `precedes(a, b)` means "a can be transformed into b": a's Lorenz curve lies
//! on or above b's everywhere. In much of the majorization literature the same
//! relation is written with the symbol pointing the other way ("a majorizes
//! b"). Public names here always say `precedes` / "can transform into"; no
//! public item is named after the bare word "majorizes".
//!
//! </div>

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("adiabat requires either the `std` or the `libm` feature");

pub mod axioms;
pub mod certificates;
pub mod entropy;
pub mod hermitian;
mod math;
pub mod orders;
pub mod scale;
pub mod spectra;

mod error;

pub use error::{Error, Result};
pub use orders::{Comparability, Relation, Tag};
pub use spectra::{LabeledState, LorenzCurve, Reservoir, Spectrum, WeightedSpectrum};

/// Entries at or below this magnitude are treated as exact zeros when counting
/// rank or support weight. Rank and support are discontinuous in the
/// eigenvalues; pinning the threshold makes the discontinuity testable.
pub const ZERO_EPS: f64 = 1e-12;

/// Absolute tolerance on cumulative probabilities in curve comparisons.
pub const CURVE_TOL: f64 = 1e-12;

/// Largest deviation of an input probability vector from unit sum that is
/// silently renormalized; anything worse is rejected.
pub const NORM_TOL: f64 = 1e-9;
