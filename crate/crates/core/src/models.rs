//! Pareto, Burr and their upper-truncated versions: distribution function,
//! closed-form quantile function, and inverse-transform sampling.

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::sample::Sample;

/// One of the four simulation families.
///
/// * `Pareto`: `F(x) = 1 - x^{-α}`, `x > 1`
/// * `Burr`: `F(x) = 1 - (1 + x^{-ρα})^{1/ρ}`, `x > 0`, `ρ < 0`
/// * `TruncatedPareto`: Pareto renormalised on `(1, T)`
/// * `TruncatedBurr`: Burr renormalised on `(0, T)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum TailDistribution {
    Pareto { alpha: f64 },
    Burr { alpha: f64, rho: f64 },
    TruncatedPareto { alpha: f64, upper: f64 },
    TruncatedBurr { alpha: f64, rho: f64, upper: f64 },
}

impl TailDistribution {
    pub fn pareto(alpha: f64) -> Result<Self> {
        Self::Pareto { alpha }.validated()
    }

    pub fn burr(alpha: f64, rho: f64) -> Result<Self> {
        Self::Burr { alpha, rho }.validated()
    }

    pub fn truncated_pareto(alpha: f64, upper: f64) -> Result<Self> {
        Self::TruncatedPareto { alpha, upper }.validated()
    }

    pub fn truncated_burr(alpha: f64, rho: f64, upper: f64) -> Result<Self> {
        Self::TruncatedBurr { alpha, rho, upper }.validated()
    }

    /// Truncates an untruncated parent at its `level`-quantile, so that the
    /// truncation odds are `(1 - level) / level`.
    pub fn truncated_at_level(parent: TailDistribution, level: f64) -> Result<Self> {
        let upper = parent.quantile(level)?;
        match parent {
            Self::Pareto { alpha } => Self::truncated_pareto(alpha, upper),
            Self::Burr { alpha, rho } => Self::truncated_burr(alpha, rho, upper),
            _ => Err(Error::InvalidParameter("parent distribution is already truncated".into())),
        }
    }

    pub fn validated(self) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let alpha = self.alpha();
        if !(alpha > 0.0 && alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {alpha}"));
        }
        if let Some(rho) = self.rho() {
            if !(rho < 0.0 && rho.is_finite()) {
                return bad(format!("rho must be negative, got {rho}"));
            }
        }
        if let Some(upper) = self.upper() {
            if !(upper > self.lower() && upper.is_finite()) {
                return bad(format!("truncation point must exceed {}, got {upper}", self.lower()));
            }
        }
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            Self::Pareto { alpha }
            | Self::Burr { alpha, .. }
            | Self::TruncatedPareto { alpha, .. }
            | Self::TruncatedBurr { alpha, .. } => alpha,
        }
    }

    pub fn rho(&self) -> Option<f64> {
        match *self {
            Self::Burr { rho, .. } | Self::TruncatedBurr { rho, .. } => Some(rho),
            _ => None,
        }
    }

    /// Truncation point `T`, if any.
    pub fn upper(&self) -> Option<f64> {
        match *self {
            Self::TruncatedPareto { upper, .. } | Self::TruncatedBurr { upper, .. } => Some(upper),
            _ => None,
        }
    }

    /// Lower end of the support: 1 for the Pareto families, 0 for Burr.
    pub fn lower(&self) -> f64 {
        match self {
            Self::Pareto { .. } | Self::TruncatedPareto { .. } => 1.0,
            Self::Burr { .. } | Self::TruncatedBurr { .. } => 0.0,
        }
    }

    pub fn is_truncated(&self) -> bool {
        self.upper().is_some()
    }

    /// Second-order index of the slowly varying part, `ρ* = αρ`, for the
    /// Burr families.
    pub fn rho_star(&self) -> Option<f64> {
        self.rho().map(|rho| self.alpha() * rho)
    }

    /// Extreme value index of the family: `1/α` without truncation, `-1` with.
    pub fn extreme_value_index(&self) -> f64 {
        if self.is_truncated() {
            -1.0
        } else {
            1.0 / self.alpha()
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        let out_of_range = x.is_nan() || x < self.lower() || self.upper().is_some_and(|t| x > t);
        if out_of_range {
            return Err(Error::OutOfSupport { x });
        }
        Ok(match *self {
            Self::Pareto { alpha } => pareto_cdf(alpha, x),
            Self::Burr { alpha, rho } => burr_cdf(alpha, rho, x),
            Self::TruncatedPareto { alpha, upper } => {
                (pareto_cdf(alpha, x) / pareto_cdf(alpha, upper)).min(1.0)
            }
            Self::TruncatedBurr { alpha, rho, upper } => {
                (burr_cdf(alpha, rho, x) / burr_cdf(alpha, rho, upper)).min(1.0)
            }
        })
    }

    /// Closed-form inverse of [`cdf`](Self::cdf) on `(0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::InvalidProbability(u));
        }
        Ok(self.quantile_unchecked(u))
    }

    fn quantile_unchecked(&self, u: f64) -> f64 {
        match *self {
            Self::Pareto { alpha } => pareto_quantile(alpha, u),
            Self::Burr { alpha, rho } => burr_quantile(alpha, rho, u),
            Self::TruncatedPareto { alpha, upper } => {
                pareto_quantile(alpha, u * pareto_cdf(alpha, upper)).min(upper)
            }
            Self::TruncatedBurr { alpha, rho, upper } => {
                burr_quantile(alpha, rho, u * burr_cdf(alpha, rho, upper)).min(upper)
            }
        }
    }

    /// `n` i.i.d. draws from `rng` by inverse transform.
    pub fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Sample> {
        let values = (0..n)
            .map(|_| {
                let u: f64 = rng.sample(Open01);
                self.quantile_unchecked(u)
            })
            .collect();
        Sample::new(values)
    }

    /// `n` draws from stream 0 of `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Sample> {
        self.draw(n, &mut rng::stream(seed, 0))
    }

    /// Truncation odds `D_T = P(X > T) / P(X <= T)` under the untruncated parent.
    pub fn true_odds(&self) -> Result<f64> {
        match *self {
            Self::TruncatedPareto { alpha, upper } => {
                let tail = upper.powf(-alpha);
                Ok(tail / pareto_cdf(alpha, upper))
            }
            Self::TruncatedBurr { alpha, rho, upper } => {
                let tail = burr_survival(alpha, rho, upper);
                Ok(tail / burr_cdf(alpha, rho, upper))
            }
            _ => Err(Error::NotTruncated),
        }
    }
}

fn pareto_cdf(alpha: f64, x: f64) -> f64 {
    -(-alpha * x.ln()).exp_m1()
}

fn pareto_quantile(alpha: f64, u: f64) -> f64 {
    (-(-u).ln_1p() / alpha).exp()
}

fn burr_survival(alpha: f64, rho: f64, x: f64) -> f64 {
    ((x.powf(-rho * alpha)).ln_1p() / rho).exp()
}

fn burr_cdf(alpha: f64, rho: f64, x: f64) -> f64 {
    -((x.powf(-rho * alpha)).ln_1p() / rho).exp_m1()
}

fn burr_quantile(alpha: f64, rho: f64, u: f64) -> f64 {
    (rho * (-u).ln_1p()).exp_m1().powf(-1.0 / (rho * alpha))
}
