//! Seed states and closed-form normalization constants.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{choose_cutoff, transform, DensityMatrix, NormalizationRecord, OpSequence, Order, PureState};
use crate::special::{gauss_2f1, laguerre, lf, Hyper2F1Args, MAX_SERIES_TERMS, QUIET_TERMS, TERM_RTOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Thermal,
    EvenCoherent,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Thermal => "thermal",
            Family::EvenCoherent => "ecs",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Seed-state parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    /// Thermal state with mean photon number `nbar`.
    Thermal { nbar: f64 },
    /// Even coherent state `|α⟩ + |-α⟩` (normalized).
    EvenCoherent { alpha: Complex64 },
}

impl StateSpec {
    pub fn thermal(nbar: f64) -> Result<Self> {
        let spec = StateSpec::Thermal { nbar };
        spec.validate()?;
        Ok(spec)
    }

    pub fn even_coherent(alpha: Complex64) -> Result<Self> {
        let spec = StateSpec::EvenCoherent { alpha };
        spec.validate()?;
        Ok(spec)
    }

    pub fn family(&self) -> Family {
        match self {
            StateSpec::Thermal { .. } => Family::Thermal,
            StateSpec::EvenCoherent { .. } => Family::EvenCoherent,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StateSpec::Thermal { nbar } if !(nbar >= 0.0 && nbar.is_finite()) => {
                Err(Error::Domain(format!("mean photon number {nbar} must be finite and >= 0")))
            }
            StateSpec::EvenCoherent { alpha } if !(alpha.re.is_finite() && alpha.im.is_finite()) => {
                Err(Error::Domain(format!("coherent amplitude {alpha} must be finite")))
            }
            _ => Ok(()),
        }
    }

    /// Natural log of the unnormalized seed population of `|m⟩`
    /// (`-inf` when it vanishes).
    pub(crate) fn log_weight(&self, m: usize) -> f64 {
        match *self {
            StateSpec::Thermal { nbar } => {
                let x = nbar / (1.0 + nbar);
                match (m, x > 0.0) {
                    (0, _) => 0.0,
                    (_, true) => m as f64 * x.ln(),
                    (_, false) => f64::NEG_INFINITY,
                }
            }
            StateSpec::EvenCoherent { alpha } => {
                let z = alpha.norm_sqr();
                if m % 2 == 1 {
                    f64::NEG_INFINITY
                } else if m == 0 {
                    0.0
                } else if z > 0.0 {
                    m as f64 * z.ln() - lf(m)
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// Seed density on the block `0..=cutoff`.
    pub fn seed(&self, cutoff: usize) -> Result<DensityMatrix> {
        match *self {
            StateSpec::Thermal { nbar } => thermal(nbar, cutoff),
            StateSpec::EvenCoherent { alpha } => {
                self.validate()?;
                Ok(even_coherent(alpha, cutoff).density())
            }
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Thermal { nbar } => write!(f, "thermal(nbar={nbar})"),
            StateSpec::EvenCoherent { alpha } => write!(f, "ecs(alpha={}{:+}i)", alpha.re, alpha.im),
        }
    }
}

/// Thermal density `n̄^n / (1+n̄)^(n+1)`, renormalized on `0..=cutoff`.
pub fn thermal(nbar: f64, cutoff: usize) -> Result<DensityMatrix> {
    StateSpec::Thermal { nbar }.validate()?;
    let x = nbar / (1.0 + nbar);
    let mut pops = Vec::with_capacity(cutoff + 1);
    let mut w = 1.0 - x;
    for _ in 0..=cutoff {
        pops.push(w);
        w *= x;
    }
    let total: f64 = pops.iter().sum();
    pops.iter_mut().for_each(|p| *p /= total);
    Ok(DensityMatrix::diagonal(&pops))
}

/// Even coherent state amplitudes, renormalized on `0..=cutoff`.
pub fn even_coherent(alpha: Complex64, cutoff: usize) -> PureState {
    let z = alpha.norm_sqr();
    let (r, theta) = alpha.to_polar();
    let amplitudes: Vec<Complex64> = (0..=cutoff)
        .map(|n| {
            if n % 2 == 1 {
                Complex64::new(0.0, 0.0)
            } else if n == 0 {
                Complex64::new(1.0, 0.0)
            } else if z == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                let modulus = (n as f64 * r.ln() - 0.5 * lf(n)).exp();
                Complex64::from_polar(modulus, n as f64 * theta)
            }
        })
        .collect();
    PureState::new(amplitudes)
        .and_then(|s| s.normalized())
        .expect("vacuum amplitude keeps the state nonzero")
}

/// `L_k(-z) + s e^{-2z} L_k(z)`.
pub fn l_sup(k: usize, z: f64, s: f64) -> f64 {
    laguerre(k, -z) + s * (-2.0 * z).exp() * laguerre(k, z)
}

/// `Σ_{m=0}^{k} (-1)^m (k!)² (p+k-m)! / (m! ((k-m)!)²) · [L_{p+k-m}(-z) + s e^{-2z} L_{p+k-m}(z)]`.
///
/// `ecs_trace_factor(p, q, z, 1) / (1 + e^{-2z})` is the trace of
/// `a^q a†^p ρ a^p a†^q` for the even coherent state `ρ`.
pub fn ecs_trace_factor(p: usize, k: usize, z: f64, s: f64) -> f64 {
    (0..=k)
        .map(|m| {
            let coeff = (2.0 * lf(k) + lf(p + k - m) - lf(m) - 2.0 * lf(k - m)).exp();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * coeff * l_sup(p + k - m, z, s)
        })
        .sum()
}

/// Closed-form normalization constant (reciprocal trace of the transformed
/// operator).
pub fn norm_closed(spec: &StateSpec, seq: OpSequence) -> Result<f64> {
    spec.validate()?;
    let (p, q) = (seq.p, seq.q);
    let value = match (*spec, seq.order) {
        (StateSpec::Thermal { nbar }, Order::AddThenSubtract) => {
            let x = nbar / (1.0 + nbar);
            if p >= q {
                let f = gauss_2f1(Hyper2F1Args {
                    a: 1.0 + p as f64,
                    b: 1.0 + p as f64,
                    c: 1.0 + (p - q) as f64,
                    x,
                })?;
                (1.0 + nbar) * (lf(p - q) - 2.0 * lf(p)).exp() / f
            } else {
                (1.0 + nbar) / added_subtracted_series(p, q, x)?
            }
        }
        (StateSpec::Thermal { nbar }, Order::SubtractThenAdd) => {
            let x = nbar / (1.0 + nbar);
            let f = gauss_2f1(Hyper2F1Args {
                a: 1.0 + q as f64,
                b: 1.0 + p as f64,
                c: 1.0,
                x,
            })?;
            (1.0 + nbar) * x.powi(-(q as i32)) / ((lf(p) + lf(q)).exp() * f)
        }
        (StateSpec::EvenCoherent { alpha }, Order::AddThenSubtract) => {
            let z = alpha.norm_sqr();
            (1.0 + (-2.0 * z).exp()) / ecs_trace_factor(p, q, z, 1.0)
        }
        (StateSpec::EvenCoherent { alpha }, Order::SubtractThenAdd) => {
            let z = alpha.norm_sqr();
            let s = if q % 2 == 0 { 1.0 } else { -1.0 };
            let e = (-2.0 * z).exp();
            (1.0 + e) / ((lf(p)).exp() * z.powi(q as i32) * (laguerre(p, -z) + s * e * laguerre(p, z)))
        }
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NullState)
    }
}

/// `Σ_{n >= q-p} x^n ((n+p)!)² / (n! (n+p-q)!)` for `p < q`.
fn added_subtracted_series(p: usize, q: usize, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::NullState);
    }
    let lx = x.ln();
    let start = q - p;
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut quiet = 0;
    for n in start..start + MAX_SERIES_TERMS {
        let term = (n as f64 * lx + 2.0 * lf(n + p) - lf(n) - lf(n + p - q)).exp();
        sum += term;
        if !sum.is_finite() {
            return Err(Error::NonConvergence { terms: n - start + 1 });
        }
        // only count quiet terms once the series is past its peak
        if term < prev && term < TERM_RTOL * sum {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        prev = term;
    }
    Err(Error::NonConvergence {
        terms: MAX_SERIES_TERMS,
    })
}

/// A seed truncated, transformed and normalized, with its bookkeeping.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub spec: StateSpec,
    pub seq: OpSequence,
    /// Cutoff of the seed before the transform enlarged it by `p`.
    pub seed_cutoff: usize,
    pub state: DensityMatrix,
    pub record: NormalizationRecord,
}

impl Prepared {
    /// Chooses the cutoff from `tail_tol` and builds the transformed state.
    pub fn new(spec: StateSpec, seq: OpSequence, tail_tol: f64) -> Result<Self> {
        let cutoff = choose_cutoff(&spec, seq, tail_tol)?;
        Self::with_cutoff(spec, seq, cutoff)
    }

    pub fn with_cutoff(spec: StateSpec, seq: OpSequence, seed_cutoff: usize) -> Result<Self> {
        let seed = spec.seed(seed_cutoff)?;
        let (state, record) = transform(&seed, seq)?;
        let record = match norm_closed(&spec, seq) {
            Ok(n) => record.with_closed_form(n),
            Err(_) => record,
        };
        Ok(Self {
            spec,
            seq,
            seed_cutoff,
            state,
            record,
        })
    }

    /// Highest Fock index of the transformed state.
    pub fn cutoff(&self) -> usize {
        self.state.cutoff()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn thermal_populations() {
        let rho = thermal(1.0, 60).unwrap();
        assert!((rho.get(0, 0).re - 0.5).abs() < 1e-12);
        assert!((rho.get(1, 1).re - 0.25).abs() < 1e-12);
        assert_eq!(thermal(0.0, 5).unwrap().populations(), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let rho = thermal(0.25, 60).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-14);
        let pops = rho.populations();
        for n in 0..30 {
            assert_relative_eq!(pops[n + 1] / pops[n], 0.2, max_relative = 1e-13);
        }
        assert!(thermal(-0.1, 5).is_err());
    }

    #[test]
    fn even_coherent_amplitudes() {
        let psi = even_coherent(Complex64::new(0.0, 0.0), 6);
        assert_eq!(psi.amplitudes()[0], Complex64::new(1.0, 0.0));
        let psi = even_coherent(Complex64::new(1.0, 0.0), 60);
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        let e = (-1.0_f64).exp();
        let expected = 4.0 * e / (2.0 + 2.0 * e * e);
        assert_relative_eq!(psi.amplitudes()[0].norm_sqr(), expected, max_relative = 1e-12);
        let psi = even_coherent(Complex64::new(0.7, -1.1), 60);
        for (n, c) in psi.amplitudes().iter().enumerate() {
            if n % 2 == 1 {
                assert_eq!(c.norm(), 0.0);
            }
        }
        let rho = psi.density();
        for m in 0..=60 {
            for n in 0..=60 {
                if m % 2 == 1 || n % 2 == 1 {
                    assert_eq!(rho.get(m, n).norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn identity_constants_are_one() {
        let specs = [
            StateSpec::thermal(0.25).unwrap(),
            StateSpec::thermal(1.0).unwrap(),
            StateSpec::even_coherent(Complex64::new(1.0, 0.0)).unwrap(),
            StateSpec::even_coherent(Complex64::new(0.3, 1.2)).unwrap(),
        ];
        for spec in specs {
            for order in Order::BOTH {
                let n = norm_closed(&spec, OpSequence::new(0, 0, order)).unwrap();
                assert_relative_eq!(n, 1.0, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn thermal_constant_matches_trace() {
        let spec = StateSpec::thermal(0.25).unwrap();
        let seq = OpSequence::add_then_subtract(4, 2);
        let prepared = Prepared::new(spec, seq, 1e-14).unwrap();
        assert!(prepared.record.relative_deviation.unwrap() < 1e-9);
    }

    #[test]
    fn vacuum_constants() {
        let vac = StateSpec::thermal(0.0).unwrap();
        // a^2 a†^3 |0⟩ = sqrt(3!) sqrt(3!/1!) |1⟩, squared norm 36
        let n = norm_closed(&vac, OpSequence::add_then_subtract(3, 2)).unwrap();
        assert_relative_eq!(n, 1.0 / 36.0, max_relative = 1e-14);
        assert_eq!(norm_closed(&vac, OpSequence::add_then_subtract(1, 2)), Err(Error::NullState));
        assert_eq!(norm_closed(&vac, OpSequence::subtract_then_add(1, 2)), Err(Error::NullState));
    }

    #[test]
    fn log_weights_vanish_where_expected() {
        let ecs = StateSpec::even_coherent(Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(ecs.log_weight(3), f64::NEG_INFINITY);
        assert_eq!(ecs.log_weight(0), 0.0);
        let vac = StateSpec::thermal(0.0).unwrap();
        assert_eq!(vac.log_weight(1), f64::NEG_INFINITY);
    }
}
