use crate::error::Result;
use crate::fock::{DensityMatrix, OpSequence, Order};
use crate::special::lf;
use crate::states::{norm_closed, StateSpec};

/// Photon-number distribution `p(n) = ρ(n, n)`.
pub fn pnd(state: &DensityMatrix) -> Vec<f64> {
    state.populations()
}

/// Closed-form photon-number distribution with the normalization constant
/// evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct ClosedPnd {
    spec: StateSpec,
    seq: OpSequence,
    log_prefactor: f64,
}

impl ClosedPnd {
    pub fn new(spec: StateSpec, seq: OpSequence) -> Result<Self> {
        let n_const = norm_closed(&spec, seq)?;
        let log_prefactor = match spec {
            StateSpec::Thermal { nbar } => n_const.ln() - nbar.ln_1p(),
            StateSpec::EvenCoherent { alpha } => {
                let z = alpha.norm_sqr();
                (2.0 * n_const).ln() - z - (-2.0 * z).exp().ln_1p()
            }
        };
        Ok(Self {
            spec,
            seq,
            log_prefactor,
        })
    }

    /// `p(n)`; zero whenever `|n⟩` is unreachable.
    pub fn prob(&self, n: usize) -> f64 {
        let (p, q) = (self.seq.p, self.seq.q);
        // seed index feeding output index n
        let Some(m) = (n + q).checked_sub(p) else {
            return 0.0;
        };
        let log_core = match (self.spec, self.seq.order) {
            (StateSpec::Thermal { nbar }, Order::AddThenSubtract) => {
                log_power(nbar / (1.0 + nbar), m) + 2.0 * lf(n + q) - lf(n) - lf(m)
            }
            (StateSpec::Thermal { nbar }, Order::SubtractThenAdd) => {
                if n < p {
                    return 0.0;
                }
                log_power(nbar / (1.0 + nbar), m) + lf(n) + lf(m) - 2.0 * lf(n - p)
            }
            (StateSpec::EvenCoherent { alpha }, order) => {
                if m % 2 == 1 {
                    return 0.0;
                }
                let z = alpha.norm_sqr();
                match order {
                    Order::AddThenSubtract => log_power(z, m) + 2.0 * lf(n + q) - lf(n) - 2.0 * lf(m),
                    Order::SubtractThenAdd => {
                        if n < p {
                            return 0.0;
                        }
                        log_power(z, m) + lf(n) - 2.0 * lf(n - p)
                    }
                }
            }
        };
        (self.log_prefactor + log_core).exp()
    }

    /// `[p(0), ..., p(n_max)]`.
    pub fn distribution(&self, n_max: usize) -> Vec<f64> {
        (0..=n_max).map(|n| self.prob(n)).collect()
    }
}

/// `ln(x^m)` with `0^0 = 1`.
fn log_power(x: f64, m: usize) -> f64 {
    if m == 0 {
        0.0
    } else {
        m as f64 * x.ln()
    }
}

/// Closed-form probability of `n` photons in the transformed state.
pub fn pnd_closed(spec: &StateSpec, seq: OpSequence, n: usize) -> Result<f64> {
    Ok(ClosedPnd::new(*spec, seq)?.prob(n))
}
