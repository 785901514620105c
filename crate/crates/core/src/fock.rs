//! Truncated Fock-space states and the photon addition / subtraction
//! transforms. This is the numerical oracle every closed form is checked
//! against: ladder operators act exactly on the retained block, so the only
//! approximation is the truncation of the seed.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::lf;
use crate::states::StateSpec;

/// Highest Fock index any state may carry.
pub const HARD_CEILING: usize = 4096;

/// Raw traces at or below this value are treated as the null operator.
const NULL_TRACE: f64 = 1e-300;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Single-mode density operator on the Fock block `0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_matrix(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() == 0 {
            return Err(Error::Domain(format!(
                "density matrix must be square and non-empty, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.nrows() > HARD_CEILING + 1 {
            return Err(Error::CutoffOverflow {
                requested: data.nrows() - 1,
                ceiling: HARD_CEILING,
            });
        }
        Ok(Self { data })
    }

    /// Diagonal density with the given populations (not renormalized).
    pub fn diagonal(populations: &[f64]) -> Self {
        assert!(!populations.is_empty(), "at least one population required");
        let n = populations.len();
        let mut data = DMatrix::from_element(n, n, ZERO);
        for (i, &p) in populations.iter().enumerate() {
            data[(i, i)] = Complex64::new(p, 0.0);
        }
        Self { data }
    }

    pub fn vacuum(cutoff: usize) -> Self {
        Self::fock(0, cutoff)
    }

    /// `|n⟩⟨n|` on the block `0..=max(n, cutoff)`.
    pub fn fock(n: usize, cutoff: usize) -> Self {
        let mut populations = vec![0.0; cutoff.max(n) + 1];
        populations[n] = 1.0;
        Self::diagonal(&populations)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &PureState) -> Self {
        let v = &state.amplitudes;
        Self {
            data: v * v.adjoint(),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.data.nrows() - 1
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// `ρ(m, n)`; zero outside the retained block.
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        if m < self.dim() && n < self.dim() {
            self.data[(m, n)]
        } else {
            ZERO
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.data[(i, i)].re).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.data[(i, i)].re).collect()
    }

    /// Largest `|ρ(m, n) - conj(ρ(n, m))|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest off-diagonal modulus.
    pub fn max_coherence(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.data[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = SymmetricEigen::new(self.hermitian_part())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        values.sort_by(f64::total_cmp);
        values
    }

    pub(crate) fn hermitian_part(&self) -> DMatrix<Complex64> {
        (&self.data + self.data.adjoint()) * Complex64::new(0.5, 0.0)
    }

    /// Divides by the trace; returns the normalized state and the old trace.
    pub fn normalized(&self) -> Result<(Self, f64)> {
        let trace = self.trace();
        if !(trace > NULL_TRACE) || !trace.is_finite() {
            return Err(Error::NullState);
        }
        Ok((self.scaled(1.0 / trace), trace))
    }

    pub(crate) fn scaled(&self, factor: f64) -> Self {
        Self {
            data: &self.data * Complex64::new(factor, 0.0),
        }
    }

    /// Zero-pads the block up to `cutoff` (no-op if already larger).
    pub fn padded(&self, cutoff: usize) -> Self {
        if cutoff <= self.cutoff() {
            return self.clone();
        }
        let n = cutoff + 1;
        let mut data = DMatrix::from_element(n, n, ZERO);
        data.view_mut((0, 0), (self.dim(), self.dim())).copy_from(&self.data);
        Self { data }
    }
}

/// Pure state `Σ c_n |n⟩` on the block `0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Domain("pure state needs at least one amplitude".into()));
        }
        Ok(Self {
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if !(norm > 0.0) {
            return Err(Error::NullState);
        }
        Ok(Self {
            amplitudes: &self.amplitudes / Complex64::new(norm, 0.0),
        })
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

/// Which ladder operator acts first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    /// `a^q a†^p ρ a^p a†^q`: add `p` photons, then subtract `q`.
    AddThenSubtract,
    /// `a†^p a^q ρ a†^q a^p`: subtract `q` photons, then add `p`.
    SubtractThenAdd,
}

impl Order {
    pub const BOTH: [Order; 2] = [Order::AddThenSubtract, Order::SubtractThenAdd];

    /// Short label, `sa` or `as`.
    pub fn label(self) -> &'static str {
        match self {
            Order::AddThenSubtract => "sa",
            Order::SubtractThenAdd => "as",
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sa" | "add-then-subtract" => Ok(Order::AddThenSubtract),
            "as" | "subtract-then-add" => Ok(Order::SubtractThenAdd),
            other => Err(Error::Domain(format!("unknown order '{other}' (expected sa or as)"))),
        }
    }
}

/// `p` photons added and `q` subtracted, in the given order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpSequence {
    pub p: usize,
    pub q: usize,
    pub order: Order,
}

impl OpSequence {
    pub fn new(p: usize, q: usize, order: Order) -> Self {
        Self { p, q, order }
    }

    pub fn add_then_subtract(p: usize, q: usize) -> Self {
        Self::new(p, q, Order::AddThenSubtract)
    }

    pub fn subtract_then_add(p: usize, q: usize) -> Self {
        Self::new(p, q, Order::SubtractThenAdd)
    }

    pub fn is_identity(&self) -> bool {
        self.p == 0 && self.q == 0
    }

    /// Natural log of the factor by which `|m⟩⟨m|` is weighted; `None` when
    /// the sequence annihilates `|m⟩`.
    pub(crate) fn log_gain(&self, m: usize) -> Option<f64> {
        let (p, q) = (self.p, self.q);
        match self.order {
            Order::AddThenSubtract => {
                (m + p >= q).then(|| 2.0 * lf(m + p) - lf(m) - lf(m + p - q))
            }
            Order::SubtractThenAdd => (m >= q).then(|| lf(m) + lf(m - q + p) - 2.0 * lf(m - q)),
        }
    }
}

impl fmt::Display for OpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(p={}, q={})", self.order, self.p, self.q)
    }
}

/// Trace of the transformed operator before renormalization, optionally
/// compared with a closed-form normalization constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationRecord {
    pub raw_trace: f64,
    pub closed_form_value: Option<f64>,
    pub relative_deviation: Option<f64>,
}

impl NormalizationRecord {
    pub fn new(raw_trace: f64) -> Self {
        Self {
            raw_trace,
            closed_form_value: None,
            relative_deviation: None,
        }
    }

    /// Normalization constant implied by the oracle, `1 / raw_trace`.
    pub fn constant(&self) -> f64 {
        1.0 / self.raw_trace
    }

    /// Attaches a closed-form constant `N`; the deviation is `|N·raw_trace - 1|`.
    pub fn with_closed_form(mut self, value: f64) -> Self {
        self.closed_form_value = Some(value);
        self.relative_deviation = Some((value * self.raw_trace - 1.0).abs());
        self
    }
}

/// `a†^p ρ a^p` on a block enlarged by `p` (unnormalized).
pub fn apply_creation(state: &DensityMatrix, p: usize) -> Result<DensityMatrix> {
    if p == 0 {
        return Ok(state.clone());
    }
    let requested = state.cutoff() + p;
    if requested > HARD_CEILING {
        return Err(Error::CutoffOverflow {
            requested,
            ceiling: HARD_CEILING,
        });
    }
    let dim = state.dim();
    // ⟨m+p| a†^p |m⟩ = sqrt((m+p)!/m!)
    let gain: Vec<f64> = (0..dim)
        .map(|m| (0.5 * (lf(m + p) - lf(m))).exp())
        .collect();
    let mut out = DMatrix::from_element(dim + p, dim + p, ZERO);
    for n in 0..dim {
        for m in 0..dim {
            out[(m + p, n + p)] = state.data[(m, n)] * (gain[m] * gain[n]);
        }
    }
    Ok(DensityMatrix { data: out })
}

/// `a^q ρ a†^q` on the same block (unnormalized); components below `|q⟩` vanish.
pub fn apply_annihilation(state: &DensityMatrix, q: usize) -> DensityMatrix {
    if q == 0 {
        return state.clone();
    }
    let dim = state.dim();
    let mut out = DMatrix::from_element(dim, dim, ZERO);
    if q < dim {
        // ⟨m-q| a^q |m⟩ = sqrt(m!/(m-q)!)
        let gain: Vec<f64> = (q..dim)
            .map(|m| (0.5 * (lf(m) - lf(m - q))).exp())
            .collect();
        for n in q..dim {
            for m in q..dim {
                out[(m - q, n - q)] = state.data[(m, n)] * (gain[m - q] * gain[n - q]);
            }
        }
    }
    DensityMatrix { data: out }
}

/// Applies the sequence and renormalizes to unit trace.
///
/// Each stage is renormalized before the next so intermediate values stay in
/// range; the record's `raw_trace` is the product of the stage traces.
pub fn transform(state: &DensityMatrix, seq: OpSequence) -> Result<(DensityMatrix, NormalizationRecord)> {
    let first = match seq.order {
        Order::AddThenSubtract => apply_creation(state, seq.p)?,
        Order::SubtractThenAdd => apply_annihilation(state, seq.q),
    };
    let (first, t1) = first.normalized()?;
    let second = match seq.order {
        Order::AddThenSubtract => apply_annihilation(&first, seq.q),
        Order::SubtractThenAdd => apply_creation(&first, seq.p)?,
    };
    let (out, t2) = second.normalized()?;
    let raw_trace = t1 * t2;
    if !(raw_trace > NULL_TRACE) {
        return Err(Error::NullState);
    }
    Ok((out, NormalizationRecord::new(raw_trace)))
}

/// Factorial moment `⟨a†^k a^k⟩ = Σ_n ρ(n,n) n!/(n-k)!`.
pub fn moment(state: &DensityMatrix, k: usize) -> f64 {
    (k..state.dim())
        .map(|n| {
            let falling: f64 = ((n - k + 1)..=n).map(|j| j as f64).product();
            state.data[(n, n)].re * falling
        })
        .sum()
}

/// Half the trace norm of `a - b`; the smaller block is zero-padded.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let cutoff = a.cutoff().max(b.cutoff());
    let diff = a.padded(cutoff).hermitian_part() - b.padded(cutoff).hermitian_part();
    let eig = SymmetricEigen::new(diff);
    let d = 0.5 * eig.eigenvalues.iter().map(|v| v.abs()).sum::<f64>();
    d.clamp(0.0, 1.0)
}

/// Seed cutoff `K` for `spec` under `seq`.
///
/// `K` is the smallest index such that the seed's Fock weight above `K`,
/// weighted by the gain each level receives from `seq`, is below
/// `tail_tol` of the total; `p + q + 10` levels of headroom are added. With
/// `p = q = 0` this is the plain seed tail.
pub fn choose_cutoff(spec: &StateSpec, seq: OpSequence, tail_tol: f64) -> Result<usize> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::Domain(format!("tail tolerance {tail_tol} outside (0, 1)")));
    }
    spec.validate()?;
    let limit = 2 * HARD_CEILING;
    let seed: Vec<f64> = (0..=limit).map(|m| spec.log_weight(m)).collect();
    let amplified: Vec<f64> = seed
        .iter()
        .enumerate()
        .map(|(m, &w)| seq.log_gain(m).map_or(f64::NEG_INFINITY, |g| w + g))
        .collect();
    // an annihilated state has no amplified weight; fall back to the seed
    let weights = if amplified.iter().all(|w| *w == f64::NEG_INFINITY) {
        seed
    } else {
        amplified
    };

    let peak = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = weights.iter().map(|w| (w - peak).exp()).collect();
    let total: f64 = scaled.iter().sum();
    if scaled[limit] > tail_tol * total * 1e-3 {
        return Err(Error::CutoffOverflow {
            requested: limit,
            ceiling: HARD_CEILING,
        });
    }
    let mut tail = 0.0;
    let mut k = limit;
    // walk down while the mass above k - 1 stays below tolerance
    while k > 0 {
        let next_tail = tail + scaled[k];
        if next_tail >= tail_tol * total {
            break;
        }
        tail = next_tail;
        k -= 1;
    }
    let cap = HARD_CEILING - seq.p.min(HARD_CEILING);
    if k > cap {
        return Err(Error::CutoffOverflow {
            requested: k,
            ceiling: cap,
        });
    }
    Ok((k + seq.p + seq.q + 10).min(cap))
}
