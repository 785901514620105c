//! Closed forms exactly as originally published, defects included.
//!
//! None of these are used for physics. They exist so the validation harness
//! can measure how far each published expression is from the oracle.
//! Every function takes the normalization constant explicitly, so each
//! defect can be measured on its own.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{OpSequence, Order};
use crate::observables::binomial_weight;
use crate::special::{hermite2_table, laguerre, lf, MAX_SERIES_TERMS, QUIET_TERMS, TERM_RTOL};
use crate::states::l_sup;

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `Σ_{m=0}^{q} (-1)^m (q!)² (p+q-m)! / (m! ((q-m)!)²) · sup(p+q-m)`.
fn weighted_sum(p: usize, q: usize, sup: impl Fn(usize) -> f64) -> f64 {
    (0..=q)
        .map(|m| sign(m) * (2.0 * lf(q) + lf(p + q - m) - lf(m) - 2.0 * lf(q - m)).exp() * sup(p + q - m))
        .sum()
}

/// Cat-state constant with the superposition term `L_k(z) + L_k(-z)`.
pub fn n3_printed(p: usize, q: usize, z: f64) -> f64 {
    (1.0 + (-2.0 * z).exp()) / weighted_sum(p, q, |k| laguerre(k, z) + laguerre(k, -z))
}

/// Cat-state constant with the superposition term `L_k(z) + e^{-2z} L_k(-z)`.
pub fn n3_overlap_on_negative_argument(p: usize, q: usize, z: f64) -> f64 {
    let e = (-2.0 * z).exp();
    (1.0 + e) / weighted_sum(p, q, |k| laguerre(k, z) + e * laguerre(k, -z))
}

/// Subtract-then-add constant as the signed multiple `(-1)^{p+q} n3`.
pub fn n4_printed(p: usize, q: usize, n3: f64) -> f64 {
    sign(p + q) * n3
}

/// `Σ_{n >= start} exp(log_term(n))`, stopping after three quiet terms past
/// the peak.
fn log_series(start: usize, log_term: impl Fn(usize) -> f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut quiet = 0;
    for n in start..start + MAX_SERIES_TERMS {
        let term = log_term(n).exp();
        sum += term;
        if !sum.is_finite() {
            return Err(Error::NonConvergence { terms: n - start + 1 });
        }
        if term <= prev && term <= TERM_RTOL * sum {
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

/// `ln(x^k)` with `0^0 = 1`.
fn log_pow(x: f64, k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.ln()
    }
}

/// Published thermal Wigner series, with `(4|β|²)^{p-q}` folded into the
/// sum so no negative power is evaluated.
pub fn wigner_thermal_printed(nbar: f64, seq: OpSequence, beta: Complex64, n_const: f64) -> Result<f64> {
    let x = nbar / (1.0 + nbar);
    let y = 4.0 * beta.norm_sqr();
    let (p, q) = (seq.p, seq.q);
    let series = match seq.order {
        Order::AddThenSubtract => log_series(q.saturating_sub(p), |n| {
            2.0 * (lf(n + p) - lf(n + p - q)) + log_pow(x, n) + log_pow(y, n + p - q) - lf(n)
        })?,
        Order::SubtractThenAdd => log_series(q, |n| {
            2.0 * (lf(n) - lf(n - q)) + log_pow(x, n) + log_pow(y, n + p - q) - lf(n)
        })?,
    };
    Ok(2.0 * n_const / PI * (-0.5 * y).exp() / (1.0 + nbar) * series)
}

/// Published cat-state Wigner sums: no `1/π` for either order, and
/// two-variable Hermite factors of order `(p - n, q)` with real-looking
/// arguments for the subtract-then-add order.
pub fn wigner_ecs_printed(alpha: Complex64, seq: OpSequence, beta: Complex64, n_const: f64) -> f64 {
    let i = Complex64::i();
    let (p, q) = (seq.p, seq.q);
    let ac = alpha.conj();
    let (minus, plus, y) = match seq.order {
        Order::AddThenSubtract => (i * (2.0 * beta - alpha), i * (2.0 * beta + alpha), i * ac),
        Order::SubtractThenAdd => (2.0 * beta - alpha, 2.0 * beta + alpha, ac),
    };
    let h1 = hermite2_table(p, q, minus, y);
    let h2 = hermite2_table(p, q, plus, -y);
    let h3 = hermite2_table(p, q, minus, -y);
    let h4 = hermite2_table(p, q, plus, y);
    let w_minus = (-2.0 * (alpha - beta).norm_sqr()).exp();
    let w_plus = (-2.0 * (alpha + beta).norm_sqr()).exp();
    let w_mid = (-2.0 * beta.norm_sqr()).exp();
    let rotor = (2.0 * (alpha * beta.conj() - ac * beta)).exp();
    let sum: f64 = (0..=p)
        .map(|n| {
            let row = p - n;
            let direct = h1[row][q].norm_sqr() * w_minus + h2[row][q].norm_sqr() * w_plus;
            let cross = 2.0 * w_mid * (h3[row][q] * h4[row][q].conj() * rotor).re;
            binomial_weight(p, n) * (direct + cross)
        })
        .sum();
    n_const / (1.0 + (-2.0 * alpha.norm_sqr()).exp()) * sum
}

/// Published subtract-then-add cat moments `(⟨a†a⟩, ⟨a†²a²⟩)`, evaluated
/// with the superposition term `L_k(-z) + e^{-2z} L_k(z)`.
pub fn ecs_moments_printed_subtract_then_add(alpha: Complex64, seq: OpSequence, n_const: f64) -> (f64, f64) {
    let z = alpha.norm_sqr();
    let (p, q) = (seq.p, seq.q);
    let sup = |k: usize| l_sup(k, z, 1.0);
    let prefactor = n_const / (1.0 + (-2.0 * z).exp());
    let mut first = 0.0;
    let mut second = 0.0;
    for m in 0..=q {
        let coeff = (2.0 * lf(q) + lf(p + q - m) - lf(m) - 2.0 * lf(q - m)).exp();
        let k = (p + q - m) as f64;
        first += sign(p + q + 1 - m) * coeff * ((k + 1.0) * sup(p + q + 1 - m) + sup(p + q - m));
        second += sign(p + q + 2 - m)
            * coeff
            * ((k + 2.0) * (k + 1.0) * sup(p + q + 2 - m) + 4.0 * (k + 1.0) * sup(p + q + 1 - m) + 2.0 * sup(p + q - m));
    }
    (prefactor * first, prefactor * second)
}
