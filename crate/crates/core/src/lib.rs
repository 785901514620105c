//! # photon-cycle
//!
//! Single-mode bosonic states obtained by adding `p` photons and then
//! subtracting `q` photons (`a^q a†^p ρ a^p a†^q`), or by performing the two
//! operations in the reverse order (`a†^p a^q ρ a†^q a^p`), starting from a
//! thermal or an even coherent (cat) seed.
//!
//! Every observable is available along two independent routes:
//!
//! - **Oracle**: a truncated Fock-space density matrix is built, the ladder
//!   operators are applied exactly, and the photon-number distribution,
//!   Wigner function (displaced-parity sum) and Mandel `Q` are read off.
//! - **Closed form**: hypergeometric / Laguerre / two-variable Hermite
//!   expressions evaluated directly from the seed parameters.
//!
//! The two routes are cross-checked by the test suite and by the CLI's
//! `validate` command.
//!
//! ## Modules
//!
//! - [`special`]: log-factorial, `2F1`/`3F2` series, Laguerre and two-variable
//!   Hermite polynomials.
//! - [`fock`]: density matrices, ladder-operator transforms, moments, trace
//!   distance and cutoff selection.
//! - [`states`]: thermal and even-coherent seeds, closed-form normalization.
//! - [`observables`]: photon-number distribution, Wigner function, Mandel `Q`.
//! - [`figures`]: parameter sets of the seven reference figures.
//! - [`literal`]: closed forms exactly as originally printed, kept to measure
//!   their known defects against the oracle.

#![forbid(unsafe_code)]

mod error;

pub mod figures;
pub mod fock;
pub mod literal;
pub mod observables;
pub mod special;
pub mod states;

pub use error::{Error, Result};
pub use fock::{
    apply_annihilation, apply_creation, choose_cutoff, moment, trace_distance, transform,
    DensityMatrix, NormalizationRecord, OpSequence, Order, PureState, HARD_CEILING,
};
pub use observables::{
    ecs_moments_closed, mandel_q, mandel_q_closed, mandel_q_closed_thermal, pnd, pnd_closed,
    wigner, wigner_closed, wigner_grid, wigner_grid_for_state, ClosedPnd, ClosedWigner,
    GridParams, PhasePoint, QResult, WignerEvaluator, WignerGrid,
};
pub use states::{even_coherent, norm_closed, thermal, Family, Prepared, StateSpec};

pub use num_complex::Complex64;

/// Default tail tolerance used to truncate seed states.
pub const DEFAULT_TAIL_TOL: f64 = 1e-14;

/// Crate version, recorded in generated manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
