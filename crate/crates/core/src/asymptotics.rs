//! Asymptotic bias and variance constants of `1/α̂_{r,k,n}`.
//!
//! Three regimes are distinguished by the limit of `k/(nD_T)`:
//! (a) zero, (b) a finite `κ > 0`, (c) infinity. Regime (b) has the full set
//! of constants `δ, σ², c, A, B, β`; regime (c) reduces to the closed forms
//! `σ²(λ)` and `β(λ)`. For regime (a) only reference factors are provided.

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance for the integral in `A_{κ,λ}`.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticParams {
    pub alpha: f64,
    pub rho_star: f64,
    /// Limit of `r/k`, in `[0, 1)`.
    pub lambda: f64,
    /// Limit of `k/(nD_T)`; needed for regime (b) only.
    pub kappa: Option<f64>,
}

impl AsymptoticParams {
    pub fn new(alpha: f64, rho_star: f64, lambda: f64) -> Result<Self> {
        let p = Self { alpha, rho_star, lambda, kappa: None };
        p.validate()?;
        Ok(p)
    }

    pub fn with_kappa(mut self, kappa: f64) -> Result<Self> {
        self.kappa = Some(kappa);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.rho_star < 0.0 && self.rho_star.is_finite()) {
            return bad(format!("rho* must be negative, got {}", self.rho_star));
        }
        check_lambda(self.lambda)?;
        if let Some(kappa) = self.kappa {
            if !(kappa > 0.0 && kappa.is_finite()) {
                return bad(format!("kappa must be positive and finite, got {kappa}"));
            }
        }
        Ok(())
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("lambda must lie in [0, 1), got {lambda}")))
    }
}

/// `h_ρ(t) = (t^ρ - 1)/ρ`.
pub fn h_rho(rho_star: f64, t: f64) -> f64 {
    (rho_star * t.ln()).exp_m1() / rho_star
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseBConstants {
    pub delta: f64,
    pub sigma2: f64,
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub beta: f64,
    /// Error estimate reported by the quadrature for the integral in `A`.
    pub quadrature_error: f64,
}

/// The variance-related constants of regime (b) that do not involve `α` or `ρ*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseBVariance {
    pub delta: f64,
    pub sigma2: f64,
    pub c: f64,
}

pub fn case_b_variance(kappa: f64, lambda: f64) -> Result<CaseBVariance> {
    check_lambda(lambda)?;
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter(format!("kappa must be positive and finite, got {kappa}")));
    }
    let one_l = 1.0 - lambda;
    let lo = 1.0 + kappa * lambda;
    let hi = 1.0 + kappa;
    // log((1+κ)/(1+κλ)) without forming the ratio.
    let log_ratio = hi.ln() - lo.ln();
    let weight = lo * hi / (one_l * one_l * kappa * kappa);
    let delta = 1.0 - weight * log_ratio * log_ratio;
    let c = lo / (one_l * kappa) - weight * log_ratio;
    Ok(CaseBVariance { delta, sigma2: 1.0 / (one_l * delta), c })
}

/// Regime (b): `δ_{κ,λ}`, `σ²_{κ,λ} = 1/((1-λ)δ)`, `c_{κ,λ}`, `A_{κ,λ}`,
/// `B_{κ,λ}` and `β_{κ,λ} = A - B·c`.
pub fn case_b_constants(p: &AsymptoticParams) -> Result<CaseBConstants> {
    p.validate()?;
    let kappa = p.kappa.ok_or_else(|| Error::InvalidParameter("kappa is required for regime (b)".into()))?;
    let CaseBVariance { delta, sigma2, c } = case_b_variance(kappa, p.lambda)?;
    let inv_alpha = 1.0 / p.alpha;
    let h = |u: f64| h_rho(p.rho_star, (1.0 + kappa * u).powf(-inv_alpha));
    let integral = quadrature::integrate(h, p.lambda, 1.0, QUADRATURE_TOLERANCE);
    let h_top = h(1.0);
    let a = integral.integral / (1.0 - p.lambda) - h_top;
    let b = h_top - h(p.lambda);
    Ok(CaseBConstants { delta, sigma2, c, a, b, beta: a - b * c, quadrature_error: integral.error_estimate })
}

/// `σ²(λ) = ((1-λ)(1 - λ log²λ / (1-λ)²))⁻¹`, with `σ²(0) = 1`.
pub fn sigma2_lambda(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if lambda == 0.0 {
        return Ok(1.0);
    }
    let one_l = 1.0 - lambda;
    let l = lambda.ln();
    Ok(1.0 / (one_l * (1.0 - lambda * l * l / (one_l * one_l))))
}

/// `β(λ)` of regime (c), with `β(0) = (α(1 - ρ*/α))⁻¹`.
pub fn beta_lambda(alpha: f64, rho_star: f64, lambda: f64) -> Result<f64> {
    AsymptoticParams::new(alpha, rho_star, lambda)?;
    let shape = 1.0 - rho_star / alpha;
    if lambda == 0.0 {
        return Ok(1.0 / (alpha * shape));
    }
    let one_l = 1.0 - lambda;
    let l = lambda.ln();
    let front = 1.0 / (1.0 - lambda * l * l / (one_l * one_l));
    let first = (-(shape * l).exp_m1()) / (rho_star * shape * one_l);
    let last = lambda / one_l * h_rho(rho_star, 1.0 / lambda) * (l / one_l + 1.0);
    Ok(front * (first - 1.0 / rho_star + last))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseCConstants {
    pub sigma2: f64,
    pub beta: f64,
}

pub fn case_c_constants(p: &AsymptoticParams) -> Result<CaseCConstants> {
    p.validate()?;
    Ok(CaseCConstants {
        sigma2: sigma2_lambda(p.lambda)?,
        beta: beta_lambda(p.alpha, p.rho_star, p.lambda)?,
    })
}

/// Reference factors of regime (a): the Gaussian limit has variance
/// `(1-λ)/12`, scaled by `12/(α(1-λ)²)` and the rate `nD_T/k^{3/2}`; the
/// bias factor multiplying `b*(Tℓ(T))` is `1/α - ρ*/α²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseAReference {
    pub noise_variance: f64,
    pub noise_scale: f64,
    pub bias_factor: f64,
}

pub fn case_a_reference(p: &AsymptoticParams) -> Result<CaseAReference> {
    p.validate()?;
    let one_l = 1.0 - p.lambda;
    Ok(CaseAReference {
        noise_variance: one_l / 12.0,
        noise_scale: 12.0 / (p.alpha * one_l * one_l),
        bias_factor: 1.0 / p.alpha - p.rho_star / (p.alpha * p.alpha),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrimmingCurveRow {
    pub lambda: f64,
    pub sigma2: f64,
    pub beta: f64,
}

/// `(λ, σ²(λ), β(λ))` over a grid inside `[0, 1/4]`.
pub fn trimming_curves(alpha: f64, rho_star: f64, grid: &[f64]) -> Result<Vec<TrimmingCurveRow>> {
    grid.iter()
        .map(|&lambda| {
            if !(0.0..=0.25).contains(&lambda) {
                return Err(Error::InvalidParameter(format!("grid value {lambda} is outside [0, 1/4]")));
            }
            Ok(TrimmingCurveRow {
                lambda,
                sigma2: sigma2_lambda(lambda)?,
                beta: beta_lambda(alpha, rho_star, lambda)?,
            })
        })
        .collect()
}

/// Evenly spaced grid `0, step, 2·step, …` up to and including `1/4`.
pub fn trimming_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 0.25) {
        return Err(Error::InvalidParameter(format!("grid step must lie in (0, 1/4], got {step}")));
    }
    let count = (0.25 / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| (i as f64 * step).min(0.25)).collect())
}

pub fn trimming_curves_csv(rows: &[TrimmingCurveRow]) -> String {
    let mut out = String::from("lambda,sigma2,beta\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.lambda, r.sigma2, r.beta));
    }
    out
}
