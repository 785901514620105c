//! Special-function kernels used by the closed forms and by the Wigner oracle.
//!
//! Hypergeometric series share one convergence contract: summation stops once
//! three consecutive terms are below `1e-16 * |partial sum|`, or fails with
//! [`Error::NonConvergence`] after [`MAX_SERIES_TERMS`] terms. Pochhammer
//! factors are advanced term-to-term.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_SERIES_TERMS: usize = 10_000_000;

/// Relative size below which a term counts as negligible.
pub(crate) const TERM_RTOL: f64 = 1e-16;
/// Number of consecutive negligible terms required to stop.
pub(crate) const QUIET_TERMS: usize = 3;

const TABLE_LEN: usize = 171;

fn log_factorial_table() -> &'static [f64; TABLE_LEN] {
    static TABLE: OnceLock<[f64; TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; TABLE_LEN];
        let mut fact = 1.0_f64;
        for (n, slot) in table.iter_mut().enumerate().skip(1) {
            fact *= n as f64;
            *slot = fact.ln();
        }
        table
    })
}

/// `ln(n!)`.
///
/// Exact products are used up to `170!`; beyond that the Stirling series for
/// `ln Γ(n + 1)` is accurate to well below `1e-16` relative.
pub fn log_factorial(n: u64) -> f64 {
    if (n as usize) < TABLE_LEN {
        return log_factorial_table()[n as usize];
    }
    let z = n as f64 + 1.0;
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

#[inline]
pub(crate) fn lf(n: usize) -> f64 {
    log_factorial(n as u64)
}

/// Parameters of `2F1(a, b; c; x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyper2F1Args {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub x: f64,
}

/// Parameters of `3F2(a1, a2, a3; b1, b2; x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyper3F2Args {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub x: f64,
}

/// Indices and arguments of the two-variable Hermite polynomial `H_{m,n}(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hermite2Args {
    pub m: usize,
    pub n: usize,
    pub x: Complex64,
    pub y: Complex64,
}

fn nonpositive_integer(v: f64) -> Option<u64> {
    (v <= 0.0 && v.fract() == 0.0).then(|| (-v) as u64)
}

/// Generalized hypergeometric power series `pFq(upper; lower; x)` for `|x| < 1`.
pub fn hypergeometric_pfq(upper: &[f64], lower: &[f64], x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() >= 1.0 {
        return Err(Error::Domain(format!("series argument {x} outside (-1, 1)")));
    }
    if upper.iter().chain(lower).any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite hypergeometric parameter".into()));
    }
    // the series terminates at degree `t` when an upper parameter equals -t
    let terminates_at = upper.iter().filter_map(|&a| nonpositive_integer(a)).min();
    for &b in lower {
        if let Some(j) = nonpositive_integer(b) {
            if terminates_at.map_or(true, |t| t > j) {
                return Err(Error::SingularParameter { parameter: b });
            }
        }
    }

    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut quiet = 0;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        let num: f64 = upper.iter().map(|a| a + kf).product();
        let den: f64 = lower.iter().map(|b| b + kf).product();
        if num == 0.0 {
            return Ok(sum);
        }
        term *= num / den * x / (kf + 1.0);
        sum += term;
        if !sum.is_finite() {
            return Err(Error::NonConvergence { terms: k + 1 });
        }
        if term.abs() < TERM_RTOL * sum.abs() {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        terms: MAX_SERIES_TERMS,
    })
}

/// Gauss hypergeometric function `2F1(a, b; c; x)` by direct summation.
pub fn gauss_2f1(args: Hyper2F1Args) -> Result<f64> {
    hypergeometric_pfq(&[args.a, args.b], &[args.c], args.x)
}

/// `3F2(a1, a2, a3; b1, b2; x)` by direct summation.
pub fn hyper_3f2(args: Hyper3F2Args) -> Result<f64> {
    hypergeometric_pfq(&[args.a1, args.a2, args.a3], &[args.b1, args.b2], args.x)
}

/// Laguerre polynomial `L_n(x)`.
pub fn laguerre(n: usize, x: f64) -> f64 {
    assoc_laguerre(n, 0, x)
}

/// Generalized Laguerre polynomial `L_n^(k)(x)`.
pub fn assoc_laguerre(n: usize, k: usize, x: f64) -> f64 {
    *laguerre_sequence(n, k as f64, x)
        .last()
        .expect("sequence holds n + 1 values")
}

/// `[L_0^(α)(x), ..., L_n^(α)(x)]` from the three-term recurrence.
pub fn laguerre_sequence(n: usize, alpha: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(1.0 + alpha - x);
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * out[j] - (jf + alpha) * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}

/// Table `t[m][k] = H_{m,k}(x, y)` for `m <= m_max`, `k <= n_max`.
///
/// Seeded with `H_{0,k} = y^k` and advanced by
/// `H_{m+1,k} = x H_{m,k} - k H_{m,k-1}`.
pub fn hermite2_table(m_max: usize, n_max: usize, x: Complex64, y: Complex64) -> Vec<Vec<Complex64>> {
    let mut rows = Vec::with_capacity(m_max + 1);
    let mut row = Vec::with_capacity(n_max + 1);
    let mut power = Complex64::new(1.0, 0.0);
    for _ in 0..=n_max {
        row.push(power);
        power *= y;
    }
    rows.push(row);
    for m in 0..m_max {
        let prev = &rows[m];
        let next: Vec<Complex64> = (0..=n_max)
            .map(|k| {
                let lowered = if k == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    prev[k - 1] * k as f64
                };
                x * prev[k] - lowered
            })
            .collect();
        rows.push(next);
    }
    rows
}

/// Two-variable Hermite polynomial `H_{m,n}(x, y)`, generated by
/// `exp(-uv + ux + vy)`.
pub fn hermite2(args: Hermite2Args) -> Complex64 {
    hermite2_table(args.m, args.n, args.x, args.y)[args.m][args.n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_factorial_small_values() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert_relative_eq!(log_factorial(5), 120f64.ln(), max_relative = 1e-15);
    }

    #[test]
    fn log_factorial_is_continuous_across_the_table_edge() {
        // ln 171! - ln 170! = ln 171
        let step = log_factorial(171) - log_factorial(170);
        assert_relative_eq!(step, 171f64.ln(), max_relative = 1e-12);
        let step = log_factorial(172) - log_factorial(171);
        assert_relative_eq!(step, 172f64.ln(), max_relative = 1e-12);
    }

    #[test]
    fn gauss_geometric_case() {
        let v = gauss_2f1(Hyper2F1Args { a: 1.0, b: 1.0, c: 1.0, x: 0.5 }).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-14);
        for x in [0.1, 0.5, 0.9] {
            let v = gauss_2f1(Hyper2F1Args { a: 1.0, b: 1.0, c: 1.0, x }).unwrap();
            assert!((v * (1.0 - x) - 1.0).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn zero_argument_gives_one() {
        for (a, b, c) in [(2.0, 3.0, 4.0), (17.0, 17.0, 13.0), (-3.0, 0.5, 2.5)] {
            assert_eq!(gauss_2f1(Hyper2F1Args { a, b, c, x: 0.0 }).unwrap(), 1.0);
        }
        let v = hyper_3f2(Hyper3F2Args { a1: 3.0, a2: 3.0, a3: 2.0, b1: 1.0, b2: 2.0, x: 0.0 }).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn three_f_two_geometric_case() {
        let v = hyper_3f2(Hyper3F2Args { a1: 1.0, a2: 1.0, a3: 1.0, b1: 1.0, b2: 1.0, x: 0.5 }).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn singular_lower_parameter_is_rejected() {
        let err = gauss_2f1(Hyper2F1Args { a: 2.0, b: 2.0, c: 0.0, x: 0.3 }).unwrap_err();
        assert!(matches!(err, Error::SingularParameter { .. }));
        let err = gauss_2f1(Hyper2F1Args { a: 2.0, b: 2.0, c: -1.0, x: 0.3 }).unwrap_err();
        assert!(matches!(err, Error::SingularParameter { .. }));
        let err = hyper_3f2(Hyper3F2Args { a1: 2.0, a2: 2.0, a3: 2.0, b1: 1.0, b2: 0.0, x: 0.3 })
            .unwrap_err();
        assert!(matches!(err, Error::SingularParameter { .. }));
    }

    #[test]
    fn terminating_series_before_singular_term_is_accepted() {
        // 2F1(-1, b; -2; x) = 1 + b x / 2
        let v = gauss_2f1(Hyper2F1Args { a: -1.0, b: 3.0, c: -2.0, x: 0.4 }).unwrap();
        assert_relative_eq!(v, 1.0 + 3.0 * 0.4 / 2.0, max_relative = 1e-15);
        // termination after the singular term does not help
        let err = gauss_2f1(Hyper2F1Args { a: -3.0, b: 3.0, c: -1.0, x: 0.4 }).unwrap_err();
        assert!(matches!(err, Error::SingularParameter { .. }));
    }

    #[test]
    fn argument_outside_unit_disc_is_a_domain_error() {
        let err = gauss_2f1(Hyper2F1Args { a: 1.0, b: 1.0, c: 1.0, x: 1.0 }).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn laguerre_low_orders() {
        for x in [-3.0, 0.0, 0.7, 5.0] {
            assert_eq!(laguerre(0, x), 1.0);
        }
        assert_eq!(laguerre(1, 2.0), -1.0);
        assert_relative_eq!(laguerre(2, -1.0), 3.5, max_relative = 1e-15);
    }

    #[test]
    fn assoc_laguerre_reductions() {
        for n in 0..=6 {
            for x in [-1.0, 0.0, 2.0] {
                assert_relative_eq!(assoc_laguerre(n, 0, x), laguerre(n, x), max_relative = 1e-14);
            }
        }
        assert_eq!(assoc_laguerre(0, 4, 1.3), 1.0);
        assert_relative_eq!(assoc_laguerre(1, 2, 1.0), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn hermite2_low_orders() {
        assert_eq!(hermite2(Hermite2Args { m: 0, n: 0, x: c(0.3, 1.0), y: c(-2.0, 0.5) }), c(1.0, 0.0));
        let h = hermite2(Hermite2Args { m: 1, n: 1, x: c(2.0, 0.0), y: c(3.0, 0.0) });
        assert_relative_eq!(h.re, 5.0, max_relative = 1e-15);
        assert_eq!(h.im, 0.0);
        // H_{m,m}(x, y) = (-1)^m m! L_m(xy) with L_2(1) = -1/2
        let h = hermite2(Hermite2Args { m: 2, n: 2, x: c(1.0, 0.0), y: c(1.0, 0.0) });
        assert_relative_eq!(h.re, -1.0, max_relative = 1e-15);
    }

    #[test]
    fn hermite2_with_one_zero_index_is_a_power() {
        let x = c(0.4, -1.1);
        let y = c(2.0, 0.3);
        let h = hermite2(Hermite2Args { m: 4, n: 0, x, y });
        assert!((h - x.powu(4)).norm() < 1e-13);
        let h = hermite2(Hermite2Args { m: 0, n: 3, x, y });
        assert!((h - y.powu(3)).norm() < 1e-13);
    }
}
