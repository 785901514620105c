use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{moment, DensityMatrix, OpSequence, Order};
use crate::special::{gauss_2f1, hyper_3f2, Hyper2F1Args, Hyper3F2Args};
use crate::states::{ecs_trace_factor, StateSpec};

/// Mean photon numbers at or below this make `Q` undefined.
const MIN_MEAN: f64 = 1e-12;

/// Mandel `Q` together with the moments it was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QResult {
    pub q: f64,
    pub mean_n: f64,
    pub second_factorial_moment: f64,
}

impl QResult {
    pub fn from_moments(mean_n: f64, second_factorial_moment: f64) -> Result<Self> {
        if !(mean_n > MIN_MEAN) {
            return Err(Error::UndefinedQ { mean: mean_n });
        }
        Ok(Self {
            q: second_factorial_moment / mean_n - mean_n,
            mean_n,
            second_factorial_moment,
        })
    }
}

/// `Q = ⟨a†² a²⟩ / ⟨a† a⟩ - ⟨a† a⟩` from the Fock populations.
pub fn mandel_q(state: &DensityMatrix) -> Result<QResult> {
    QResult::from_moments(moment(state, 1), moment(state, 2))
}

/// Closed-form `Q` of a transformed thermal state.
///
/// The add-then-subtract form needs `p - q >= 2` and the subtract-then-add
/// form needs `p >= 2`; otherwise a hypergeometric lower parameter is a
/// nonpositive integer and [`Error::SingularParameter`] is returned.
pub fn mandel_q_closed_thermal(nbar: f64, seq: OpSequence) -> Result<f64> {
    StateSpec::thermal(nbar)?;
    let x = nbar / (1.0 + nbar);
    let (p, q) = (seq.p as f64, seq.q as f64);
    match seq.order {
        Order::AddThenSubtract => {
            let f = |c: f64| {
                gauss_2f1(Hyper2F1Args {
                    a: 1.0 + p,
                    b: 1.0 + p,
                    c,
                    x,
                })
            };
            let lower = f(p - q - 1.0)?;
            let mid = f(p - q)?;
            let upper = f(1.0 + p - q)?;
            Ok((p - q - 1.0) * lower / mid - (p - q) * mid / upper)
        }
        Order::SubtractThenAdd => {
            let g = |b2: f64| {
                hyper_3f2(Hyper3F2Args {
                    a1: 1.0 + p,
                    a2: 1.0 + p,
                    a3: 1.0 + q,
                    b1: 1.0,
                    b2,
                    x,
                })
            };
            let lower = g(p - 1.0)?;
            let mid = g(p)?;
            let base = gauss_2f1(Hyper2F1Args {
                a: 1.0 + q,
                b: 1.0 + p,
                c: 1.0,
                x,
            })?;
            Ok((p - 1.0) * lower / mid - p * mid / base)
        }
    }
}

/// Closed-form `(⟨a† a⟩, ⟨a†² a²⟩)` of a transformed even coherent state.
pub fn ecs_moments_closed(alpha: Complex64, seq: OpSequence) -> Result<(f64, f64)> {
    StateSpec::even_coherent(alpha)?;
    let z = alpha.norm_sqr();
    let (p, q) = (seq.p, seq.q);
    let (base, first, second) = match seq.order {
        Order::AddThenSubtract => (
            ecs_trace_factor(p, q, z, 1.0),
            ecs_trace_factor(p, q + 1, z, 1.0),
            ecs_trace_factor(p, q + 2, z, 1.0),
        ),
        Order::SubtractThenAdd => {
            // a^q maps the cat onto |α⟩ + (-1)^q |-α⟩; only that sign survives
            let s = if q % 2 == 0 { 1.0 } else { -1.0 };
            (
                ecs_trace_factor(p, 0, z, s),
                ecs_trace_factor(p, 1, z, s),
                ecs_trace_factor(p, 2, z, s),
            )
        }
    };
    if !(base > 0.0) || (seq.order == Order::SubtractThenAdd && q > 0 && z == 0.0) {
        return Err(Error::NullState);
    }
    Ok((first / base, second / base))
}

/// Closed-form `Q` for either family.
pub fn mandel_q_closed(spec: &StateSpec, seq: OpSequence) -> Result<f64> {
    match *spec {
        StateSpec::Thermal { nbar } => mandel_q_closed_thermal(nbar, seq),
        StateSpec::EvenCoherent { alpha } => {
            let (mean, second) = ecs_moments_closed(alpha, seq)?;
            Ok(QResult::from_moments(mean, second)?.q)
        }
    }
}
