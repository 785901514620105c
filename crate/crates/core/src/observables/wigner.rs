//! Wigner function by the displaced-parity sum
//! `W(β) = (2/π) Σ_k (-1)^k ⟨k| D(-β) ρ D(β) |k⟩`, and the closed forms.

use std::f64::consts::FRAC_2_PI;
use std::f64::consts::PI;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{choose_cutoff, DensityMatrix, OpSequence, Order, HARD_CEILING};
use crate::observables::pnd::ClosedPnd;
use crate::special::{hermite2_table, laguerre_sequence, lf};
use crate::states::{norm_closed, Prepared, StateSpec};
use crate::DEFAULT_TAIL_TOL;

/// Populations at or below this are outside the effective support.
const SUPPORT_FLOOR: f64 = 1e-30;
/// Eigenvalues at or below this magnitude are dropped.
const EIGEN_FLOOR: f64 = 1e-15;
/// Allowed mismatch between the trace and the displaced-basis mass.
const TAIL_TOL: f64 = 1e-12;

/// Phase-space point `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub beta: Complex64,
}

impl PhasePoint {
    pub fn new(re: f64, im: f64) -> Self {
        Self {
            beta: Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for PhasePoint {
    fn from(beta: Complex64) -> Self {
        Self { beta }
    }
}

/// Rectangular grid specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridParams {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub points_per_axis: usize,
}

impl GridParams {
    /// `[min, max]²` with `points` samples per axis.
    pub fn square(min: f64, max: f64, points: usize) -> Self {
        Self {
            re_min: min,
            re_max: max,
            im_min: min,
            im_max: max,
            points_per_axis: points,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points_per_axis < 2 {
            return Err(Error::Domain("a grid needs at least 2 points per axis".into()));
        }
        let bounds = [self.re_min, self.re_max, self.im_min, self.im_max];
        if bounds.iter().any(|v| !v.is_finite()) || self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(Error::Domain("grid bounds must be finite with min < max".into()));
        }
        Ok(())
    }

    pub fn re_step(&self) -> f64 {
        (self.re_max - self.re_min) / (self.points_per_axis - 1) as f64
    }

    pub fn im_step(&self) -> f64 {
        (self.im_max - self.im_min) / (self.points_per_axis - 1) as f64
    }

    pub fn re(&self, i: usize) -> f64 {
        self.re_min + i as f64 * self.re_step()
    }

    pub fn im(&self, j: usize) -> f64 {
        self.im_min + j as f64 * self.im_step()
    }

    /// Point at flat index `idx` (imaginary part outer, real part inner).
    pub fn point(&self, idx: usize) -> PhasePoint {
        let n = self.points_per_axis;
        PhasePoint::new(self.re(idx % n), self.im(idx / n))
    }

    pub fn len(&self) -> usize {
        self.points_per_axis * self.points_per_axis
    }

    pub fn is_empty(&self) -> bool {
        self.points_per_axis == 0
    }
}

impl Default for GridParams {
    fn default() -> Self {
        Self::square(-3.0, 3.0, 81)
    }
}

/// Wigner values on a grid, imaginary part outer and real part inner.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub params: GridParams,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Value at column `i` (real axis) and row `j` (imaginary axis).
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.params.points_per_axis + i]
    }

    fn trapezoid(&self, f: impl Fn(f64) -> f64) -> f64 {
        let n = self.params.points_per_axis;
        let edge = |i: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for j in 0..n {
            for i in 0..n {
                total += edge(i) * edge(j) * f(self.at(i, j));
            }
        }
        total * self.params.re_step() * self.params.im_step()
    }

    /// Trapezoidal integral of `W` over the grid.
    pub fn integral(&self) -> f64 {
        self.trapezoid(|w| w)
    }

    /// Trapezoidal integral of `max(-W, 0)`.
    pub fn negative_volume(&self) -> f64 {
        self.trapezoid(|w| (-w).max(0.0))
    }
}

#[derive(Debug, Clone)]
enum Factors {
    /// `ρ = Σ_m λ_m |m⟩⟨m|`.
    Diagonal(Vec<(usize, f64)>),
    /// `ρ = Σ_j λ_j |v_j⟩⟨v_j|`.
    Eigen(Vec<(f64, Vec<Complex64>)>),
}

/// Oracle evaluator with the state factored once.
#[derive(Debug, Clone)]
pub struct WignerEvaluator {
    factors: Factors,
    support: usize,
    trace: f64,
}

impl WignerEvaluator {
    pub fn new(state: &DensityMatrix) -> Self {
        let pops = state.populations();
        let support = pops.iter().rposition(|p| *p > SUPPORT_FLOOR).unwrap_or(0);
        if state.max_coherence() == 0.0 {
            let diag: Vec<(usize, f64)> = pops
                .iter()
                .enumerate()
                .take(support + 1)
                .filter(|(_, p)| **p != 0.0)
                .map(|(m, p)| (m, *p))
                .collect();
            let trace = diag.iter().map(|(_, p)| p).sum();
            return Self {
                factors: Factors::Diagonal(diag),
                support,
                trace,
            };
        }
        let block = state.hermitian_part().view((0, 0), (support + 1, support + 1)).into_owned();
        let eig = SymmetricEigen::new(block);
        let mut pairs: Vec<(f64, Vec<Complex64>)> = eig
            .eigenvalues
            .iter()
            .zip(eig.eigenvectors.column_iter())
            .filter(|(l, _)| l.abs() > EIGEN_FLOOR)
            .map(|(l, v)| (*l, v.iter().copied().collect()))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let trace = pairs.iter().map(|(l, _)| l).sum();
        Self {
            factors: Factors::Eigen(pairs),
            support,
            trace,
        }
    }

    /// Highest Fock index carrying population above `1e-30`.
    pub fn support(&self) -> usize {
        self.support
    }

    pub fn eval(&self, pt: PhasePoint) -> Result<f64> {
        let g = pt.beta.norm_sqr();
        if g == 0.0 {
            let parity = self.parity_and_mass(|k, m| if k == m { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }, self.support).0;
            return Ok(FRAC_2_PI * parity);
        }
        let c = self.support as f64;
        let r = g.sqrt();
        let mut rows = self.support + (g + 8.0 * r * (2.0 * c + 1.0).sqrt() + 8.0 * r).ceil() as usize + 12;
        rows = rows.min(HARD_CEILING);
        loop {
            let table = DisplacementTable::new(-pt.beta, rows, self.support);
            let (parity, mass) = self.parity_and_mass(|k, m| table.get(k, m), rows);
            let tail = (self.trace - mass).abs();
            if tail < TAIL_TOL {
                return Ok(FRAC_2_PI * parity);
            }
            if rows >= HARD_CEILING {
                return Err(Error::CutoffInadequate { tail });
            }
            rows = (rows * 3 / 2).min(HARD_CEILING);
        }
    }

    /// `(Σ_k (-1)^k M_kk, Σ_k M_kk)` for `M = D ρ D†` with `D` given
    /// elementwise on rows `0..=rows`.
    fn parity_and_mass(&self, d: impl Fn(usize, usize) -> Complex64, rows: usize) -> (f64, f64) {
        let mut parity = 0.0;
        let mut mass = 0.0;
        let mut accumulate = |weight: f64, amp: &dyn Fn(usize) -> Complex64| {
            let mut even = 0.0;
            let mut odd = 0.0;
            for k in 0..=rows {
                let a = amp(k).norm_sqr();
                if k % 2 == 0 {
                    even += a;
                } else {
                    odd += a;
                }
            }
            parity += weight * (even - odd);
            mass += weight * (even + odd);
        };
        match &self.factors {
            Factors::Diagonal(diag) => {
                for &(m, lambda) in diag {
                    accumulate(lambda, &|k| d(k, m));
                }
            }
            Factors::Eigen(pairs) => {
                for (lambda, v) in pairs {
                    accumulate(*lambda, &|k| v.iter().enumerate().map(|(m, c)| d(k, m) * c).sum());
                }
            }
        }
        (parity, mass)
    }
}

/// `⟨k|D(γ)|m⟩` for `k <= rows`, `m <= cols`.
struct DisplacementTable {
    cols: usize,
    values: Vec<Complex64>,
}

impl DisplacementTable {
    fn new(gamma: Complex64, rows: usize, cols: usize) -> Self {
        let g = gamma.norm_sqr();
        let (r, theta) = gamma.to_polar();
        let ln_r = r.ln();
        let max_offset = rows.max(cols);
        let n_max = cols.min(rows);
        // lag[d][n] = L_n^(d)(|γ|²)
        let lag: Vec<Vec<f64>> = (0..=max_offset)
            .map(|d| laguerre_sequence(n_max, d as f64, g))
            .collect();
        let mut values = vec![Complex64::new(0.0, 0.0); (rows + 1) * (cols + 1)];
        for k in 0..=rows {
            for m in 0..=cols {
                let (lo, hi) = if k >= m { (m, k) } else { (k, m) };
                let d = hi - lo;
                let modulus = (0.5 * (lf(lo) - lf(hi)) + d as f64 * ln_r - 0.5 * g).exp() * lag[d][lo];
                let phase = if k >= m {
                    Complex64::from_polar(1.0, d as f64 * theta)
                } else {
                    // (-γ*)^d
                    Complex64::from_polar(1.0, d as f64 * (PI - theta))
                };
                values[k * (cols + 1) + m] = phase * modulus;
            }
        }
        Self { cols, values }
    }

    fn get(&self, k: usize, m: usize) -> Complex64 {
        self.values[k * (self.cols + 1) + m]
    }
}

/// Oracle Wigner value of `state` at `pt`.
pub fn wigner(state: &DensityMatrix, pt: PhasePoint) -> Result<f64> {
    WignerEvaluator::new(state).eval(pt)
}

/// Oracle Wigner grid of `state`; values do not depend on thread count.
pub fn wigner_grid_for_state(state: &DensityMatrix, params: GridParams) -> Result<WignerGrid> {
    params.validate()?;
    let evaluator = WignerEvaluator::new(state);
    let values = (0..params.len())
        .into_par_iter()
        .map(|idx| evaluator.eval(params.point(idx)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(WignerGrid { params, values })
}

/// Oracle Wigner grid of the transformed seed.
pub fn wigner_grid(spec: &StateSpec, seq: OpSequence, params: GridParams, tail_tol: f64) -> Result<WignerGrid> {
    let prepared = Prepared::new(*spec, seq, tail_tol)?;
    wigner_grid_for_state(&prepared.state, params)
}

/// Closed-form Wigner evaluator with constants computed once.
#[derive(Debug, Clone)]
pub enum ClosedWigner {
    /// `W = (2/π) e^{-2|β|²} Σ_n p(n) (-1)^n L_n(4|β|²)` over the closed PND.
    Thermal { probs: Vec<f64> },
    Ecs {
        alpha: Complex64,
        seq: OpSequence,
        n_const: f64,
    },
}

impl ClosedWigner {
    pub fn new(spec: StateSpec, seq: OpSequence) -> Result<Self> {
        match spec {
            StateSpec::Thermal { .. } => {
                let n_max = choose_cutoff(&spec, seq, DEFAULT_TAIL_TOL)? + seq.p;
                let probs = ClosedPnd::new(spec, seq)?.distribution(n_max);
                Ok(ClosedWigner::Thermal { probs })
            }
            StateSpec::EvenCoherent { alpha } => Ok(ClosedWigner::Ecs {
                alpha,
                seq,
                n_const: norm_closed(&spec, seq)?,
            }),
        }
    }

    pub fn eval(&self, pt: PhasePoint) -> f64 {
        let beta = pt.beta;
        match self {
            ClosedWigner::Thermal { probs } => {
                let y = 4.0 * beta.norm_sqr();
                let lag = laguerre_sequence(probs.len() - 1, 0.0, y);
                let sum: f64 = probs
                    .iter()
                    .zip(&lag)
                    .enumerate()
                    .map(|(n, (p, l))| if n % 2 == 0 { p * l } else { -p * l })
                    .sum();
                FRAC_2_PI * (-0.5 * y).exp() * sum
            }
            ClosedWigner::Ecs { alpha, seq, n_const } => ecs_closed(*alpha, *seq, *n_const, beta),
        }
    }
}

/// `(-1)^n (p!)² / (n! ((p-n)!)²)`.
pub(crate) fn binomial_weight(p: usize, n: usize) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * (2.0 * lf(p) - lf(n) - 2.0 * lf(p - n)).exp()
}

fn ecs_closed(alpha: Complex64, seq: OpSequence, n_const: f64, beta: Complex64) -> f64 {
    let i = Complex64::i();
    let (p, q) = (seq.p, seq.q);
    let z = alpha.norm_sqr();
    let ac = alpha.conj();
    let minus = i * (2.0 * beta - alpha);
    let plus = i * (2.0 * beta + alpha);
    let w_minus = (-2.0 * (alpha - beta).norm_sqr()).exp();
    let w_plus = (-2.0 * (alpha + beta).norm_sqr()).exp();
    let w_mid = (-2.0 * beta.norm_sqr()).exp();
    let rotor = (2.0 * (alpha * beta.conj() - ac * beta)).exp();
    let e2 = (-2.0 * z).exp();
    match seq.order {
        Order::AddThenSubtract => {
            let h1 = hermite2_table(p, q, minus, i * ac);
            let h2 = hermite2_table(p, q, plus, -i * ac);
            let h3 = hermite2_table(p, q, minus, -i * ac);
            let h4 = hermite2_table(p, q, plus, i * ac);
            let sum: f64 = (0..=p)
                .map(|n| {
                    let row = p - n;
                    let direct = h1[row][q].norm_sqr() * w_minus + h2[row][q].norm_sqr() * w_plus;
                    let cross = 2.0 * w_mid * (h3[row][q] * h4[row][q].conj() * rotor).re;
                    binomial_weight(p, n) * (direct + cross)
                })
                .sum();
            n_const / (PI * (1.0 + e2)) * sum
        }
        Order::SubtractThenAdd => {
            let s = if q % 2 == 0 { 1.0 } else { -1.0 };
            let sum: f64 = (0..=p)
                .map(|n| {
                    let g1 = minus.powu((p - n) as u32);
                    let g2 = plus.powu((p - n) as u32);
                    let direct = g1.norm_sqr() * w_minus + g2.norm_sqr() * w_plus;
                    let cross = s * 2.0 * w_mid * (g1 * g2.conj() * rotor).re;
                    binomial_weight(p, n) * (direct + cross)
                })
                .sum();
            n_const * z.powi(q as i32) / (PI * (1.0 + e2)) * sum
        }
    }
}

/// Closed-form Wigner value of the transformed seed at `pt`.
pub fn wigner_closed(spec: &StateSpec, seq: OpSequence, pt: PhasePoint) -> Result<f64> {
    Ok(ClosedWigner::new(*spec, seq)?.eval(pt))
}
