//! Photon-number distribution, Wigner function and Mandel `Q`, each along
//! the Fock-space oracle and the closed-form route.

mod mandel;
mod pnd;
mod wigner;

pub use mandel::{ecs_moments_closed, mandel_q, mandel_q_closed, mandel_q_closed_thermal, QResult};
pub use pnd::{pnd, pnd_closed, ClosedPnd};
pub use wigner::{
    wigner, wigner_closed, wigner_grid, wigner_grid_for_state, ClosedWigner, GridParams, PhasePoint,
    WignerEvaluator, WignerGrid,
};

pub(crate) use wigner::binomial_weight;
