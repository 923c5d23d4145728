//! Tail-index solver for the truncated Pareto estimating equation, the
//! maximum likelihood triple of the upper-truncated Pareto model, and the
//! truncation-odds estimator.
//!
//! The estimating equation is
//!
//! ```text
//! H = 1/α + R^α log R / (1 - R^α)
//! ```
//!
//! With `ℓ = -log R > 0` and `y = αℓ` the right-hand side is `ℓ·φ(y)` where
//! `φ(y) = 1/y - 1/(e^y - 1)` decreases from 1/2 to 0. A unique positive
//! root therefore exists iff `0 < H < ℓ/2`. All evaluations go through `φ`
//! so that neither small `α` (cancellation between `1/α` and the correction)
//! nor large `α` (underflow of `R^α`) loses precision.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sample::{log_moments, Sample, TrimSpec};

/// Stopping rules for [`solve_alpha`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Stop once `|f(1/α)|` falls below this.
    pub tolerance: f64,
    /// Stop once a Newton step in `1/α` is smaller than this.
    pub step_tolerance: f64,
    pub max_iterations: usize,
    /// Newton denominators smaller than this trigger the bisection fallback.
    pub min_denominator: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tolerance: 1e-10, step_tolerance: 1e-12, max_iterations: 100, min_denominator: 1e-14 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    Newton,
    BisectionFallback,
}

/// A solved tail index together with solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaFit {
    pub alpha_hat: f64,
    pub inv_alpha: f64,
    /// `|H - 1/α̂ - R^α̂ log R / (1 - R^α̂)|` at the returned root.
    pub residual: f64,
    pub iterations: usize,
    pub method: SolverMethod,
    pub solvable: bool,
}

/// `1/y - 1/(e^y - 1)` for `y > 0`.
fn phi(y: f64) -> f64 {
    if y < 0.1 {
        let y2 = y * y;
        0.5 - y / 12.0 + y * y2 / 720.0 - y * y2 * y2 / 30240.0 + y * y2 * y2 * y2 / 1_209_600.0
    } else {
        1.0 / y - 1.0 / y.exp_m1()
    }
}

/// `1 - y² e^y / (e^y - 1)²`, the Newton denominator written in `y = αℓ`.
fn newton_denominator(y: f64) -> f64 {
    let s = 0.5 * y;
    if s < 1e-3 {
        let s2 = s * s;
        s2 / 3.0 - s2 * s2 / 15.0 + 2.0 * s2 * s2 * s2 / 189.0
    } else {
        let q = s / s.sinh();
        1.0 - q * q
    }
}

/// The estimating equation in the form it is solved: `H - 1/α - R^α log R / (1 - R^α)`
/// as a function of `α`, given `ℓ = -log R`.
#[inline]
fn equation(alpha: f64, h: f64, ell: f64) -> f64 {
    h - ell * phi(alpha * ell)
}

/// True iff the estimating equation has a unique positive root, i.e.
/// `0 < H < -(log R)/2`.
pub fn solvability_check(h: f64, ratio: f64) -> bool {
    if !(ratio > 0.0 && ratio < 1.0) || !h.is_finite() {
        return false;
    }
    h > 0.0 && h < -0.5 * ratio.ln()
}

/// Residual of the estimating equation at `alpha`, for diagnostics and tests.
pub fn equation_residual(h: f64, ratio: f64, alpha: f64) -> f64 {
    equation(alpha, h, -ratio.ln())
}

/// Solves for the tail index by Newton–Raphson on `1/α`, started from the
/// trimmed Hill value `1/α⁽⁰⁾ = H`.
///
/// If an iterate leaves `(0, ∞)`, the derivative becomes too flat, or the
/// iteration budget runs out, the solver switches to bisection on `α`.
pub fn solve_alpha(h: f64, ratio: f64, cfg: &SolverConfig) -> Result<AlphaFit> {
    if !solvability_check(h, ratio) {
        return Err(Error::NoSolution { h, ratio });
    }
    let ell = -ratio.ln();

    let mut t = h;
    let mut iterations = 0;
    let mut newton_ok = false;
    while iterations < cfg.max_iterations {
        let alpha = 1.0 / t;
        let f = equation(alpha, h, ell);
        let denom = newton_denominator(alpha * ell);
        if f.abs() < cfg.tolerance {
            // One more step costs nothing and takes the root to full
            // precision where the equation is flat in 1/α.
            let polished = t + f / denom;
            if denom.abs() >= cfg.min_denominator
                && polished > 0.0
                && polished.is_finite()
                && equation(1.0 / polished, h, ell).abs() <= f.abs()
            {
                t = polished;
            }
            newton_ok = true;
            break;
        }
        if denom.abs() < cfg.min_denominator {
            break;
        }
        let step = f / denom;
        let next = t + step;
        iterations += 1;
        if !(next > 0.0 && next.is_finite()) {
            break;
        }
        t = next;
        if step.abs() < cfg.step_tolerance {
            newton_ok = true;
            break;
        }
    }

    if newton_ok {
        let alpha = 1.0 / t;
        return Ok(AlphaFit {
            alpha_hat: alpha,
            inv_alpha: t,
            residual: equation(alpha, h, ell).abs(),
            iterations,
            method: SolverMethod::Newton,
            solvable: true,
        });
    }

    let (alpha, extra) = bisect(h, ell);
    let residual = equation(alpha, h, ell).abs();
    if !(residual < cfg.tolerance.max(1e-8)) {
        return Err(Error::NonConvergence { iterations: iterations + extra, residual });
    }
    Ok(AlphaFit {
        alpha_hat: alpha,
        inv_alpha: 1.0 / alpha,
        residual,
        iterations: iterations + extra,
        method: SolverMethod::BisectionFallback,
        solvable: true,
    })
}

/// Bisection on `α`. The equation value is increasing in `α` (negative
/// near 0, equal to `H - ℓφ(ℓ/H) > 0` at the Hill value `1/H`) so `1/H`
/// is always a valid upper end; the lower end is halved until the sign flips.
fn bisect(h: f64, ell: f64) -> (f64, usize) {
    let mut hi = 1.0 / h;
    let mut lo = hi;
    let mut iters = 0;
    while equation(lo, h, ell) >= 0.0 && iters < 2100 {
        lo *= 0.5;
        iters += 1;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iters += 1;
        if equation(mid, h, ell) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = if equation(lo, h, ell).abs() <= equation(hi, h, ell).abs() { lo } else { hi };
    (alpha, iters)
}

/// Maximum likelihood estimates of the upper-truncated Pareto model from the
/// top `k + 1` order statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbanFit {
    pub alpha_a: f64,
    pub t_a: f64,
    pub tau_a: f64,
    pub fit: AlphaFit,
}

/// The likelihood equation for `α` is the tail-index equation at `r = 1`
/// with `R = X_{n-k,n} / X_{n,n}`, so the same solver is reused.
pub fn aban_mle(s: &Sample, k: usize, cfg: &SolverConfig) -> Result<AbanFit> {
    let moments = log_moments(s, k)?;
    let anchor = s.anchor(k);
    let max = s.max();
    let fit = solve_alpha(moments.m1, anchor / max, cfg)?;
    Ok(AbanFit {
        alpha_a: fit.alpha_hat,
        t_a: max,
        tau_a: aban_lower_bound(fit.alpha_hat, anchor, max, k, s.len()),
        fit,
    })
}

/// `k^{1/α} X_{n-k,n} (n - (n-k)(X_{n-k,n}/X_{n,n})^α)^{-1/α}`.
pub fn aban_lower_bound(alpha: f64, anchor: f64, max: f64, k: usize, n: usize) -> f64 {
    let inv = 1.0 / alpha;
    let base = n as f64 - (n - k) as f64 * (anchor / max).powf(alpha);
    (k as f64).powf(inv) * anchor * base.powf(-inv)
}

/// The truncation-odds estimate and its admissible (non-negative) version.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OddsEstimate {
    pub d_hat: f64,
    pub d_hat_admissible: f64,
}

/// `D̂_T = (k/n)(R^α̂ - λ_{r,k}) / (1 - R^α̂)` with `λ_{r,k} = r/(k+1)`.
pub fn estimate_odds(alpha_hat: f64, ratio: f64, t: TrimSpec, n: usize) -> Result<OddsEstimate> {
    if !(alpha_hat > 0.0) {
        return Err(Error::InvalidParameter(format!("tail index must be positive, got {alpha_hat}")));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::DegenerateRatio);
    }
    let x = alpha_hat * ratio.ln();
    let pow = x.exp();
    let d_hat = (t.k() as f64 / n as f64) * (pow - t.lambda()) / -x.exp_m1();
    Ok(OddsEstimate { d_hat, d_hat_admissible: d_hat.max(0.0) })
}
