//! Extreme quantile and endpoint estimation under the truncated Pareto-type
//! model, with the Weissman and moment-method baselines.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{estimate_odds, solve_alpha, AlphaFit, OddsEstimate, SolverConfig};
use crate::sample::{log_moments, ratio_r, trimmed_hill, Sample, TrimSpec};

/// Which odds estimate feeds the quantile and endpoint estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OddsChoice {
    /// `max(D̂_T, 0)`.
    #[default]
    Admissible,
    /// The unclamped `D̂_T`, for data known to come from a finite-endpoint tail.
    Raw,
}

/// A fitted, possibly truncated, Pareto tail at one `(r, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailModel {
    pub alpha_hat: f64,
    /// The odds value used downstream; non-negative unless [`OddsChoice::Raw`].
    pub d_hat: f64,
    pub odds: OddsEstimate,
    pub anchor: f64,
    pub sample_max: f64,
    pub r: usize,
    pub k: usize,
    pub n: usize,
}

impl TailModel {
    pub fn new(alpha_hat: f64, d_hat: f64, anchor: f64, sample_max: f64, t: TrimSpec, n: usize) -> Self {
        Self {
            alpha_hat,
            d_hat,
            odds: OddsEstimate { d_hat, d_hat_admissible: d_hat.max(0.0) },
            anchor,
            sample_max,
            r: t.r(),
            k: t.k(),
            n,
        }
    }

    /// Solves for `α̂` and `D̂_T` at `(r, k)`.
    pub fn fit(s: &Sample, t: TrimSpec, cfg: &SolverConfig, choice: OddsChoice) -> Result<(Self, AlphaFit)> {
        let h = trimmed_hill(s, t);
        let ratio = ratio_r(s, t);
        let fit = solve_alpha(h, ratio, cfg)?;
        let odds = estimate_odds(fit.alpha_hat, ratio, t, s.len())?;
        let d = match choice {
            OddsChoice::Admissible => odds.d_hat_admissible,
            OddsChoice::Raw => odds.d_hat,
        };
        let model = Self {
            alpha_hat: fit.alpha_hat,
            d_hat: d,
            odds,
            anchor: s.anchor(t.k()),
            sample_max: s.max(),
            r: t.r(),
            k: t.k(),
            n: s.len(),
        };
        Ok((model, fit))
    }

    fn k_over_n(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// `log q̂_p = log X_{n-k,n} + (1/α̂) log((D̂ + k/n) / (D̂ + p))`.
pub fn quantile_truncated(m: &TailModel, p: f64) -> Result<f64> {
    check_probability(p)?;
    let num = m.d_hat + m.k_over_n();
    let den = m.d_hat + p;
    if !(num > 0.0 && den > 0.0) {
        return Err(Error::InvalidOdds(m.d_hat));
    }
    Ok(m.anchor * ((num / den).ln() / m.alpha_hat).exp())
}

/// The relative-odds rewrite `log X_{n-k,n} + (1/α̂) log((1 + k/(nD̂)) / (1 + p/D̂))`.
/// Requires `D̂ > 0`; returns the log quantile.
pub fn log_quantile_relative_form(m: &TailModel, p: f64) -> Result<f64> {
    check_probability(p)?;
    if !(m.d_hat > 0.0) {
        return Err(Error::InvalidOdds(m.d_hat));
    }
    let ratio = (1.0 + m.k_over_n() / m.d_hat) / (1.0 + p / m.d_hat);
    Ok(m.anchor.ln() + ratio.ln() / m.alpha_hat)
}

/// The Weissman-type rewrite
/// `X_{n-k,n} (k/(np))^{1/α̂} ((1 + nD̂/k) / (1 + D̂/p))^{1/α̂}`.
pub fn quantile_extrapolation_form(m: &TailModel, p: f64) -> Result<f64> {
    check_probability(p)?;
    let inv = 1.0 / m.alpha_hat;
    let factor = (1.0 + m.d_hat / m.k_over_n()) / (1.0 + m.d_hat / p);
    if !(factor > 0.0) {
        return Err(Error::InvalidOdds(m.d_hat));
    }
    Ok(m.anchor * (m.k_over_n() / p).powf(inv) * factor.powf(inv))
}

/// Right endpoint estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Endpoint {
    Finite {
        value: f64,
        /// The unclamped `X_{n-k,n}(1 + k/(nD̂))^{1/α̂}`.
        candidate: f64,
        /// True when the sample maximum exceeded the candidate.
        clamped: bool,
    },
    /// `D̂ = 0`: the fitted tail has no finite endpoint.
    Infinite,
}

impl Endpoint {
    pub fn value(&self) -> f64 {
        match self {
            Endpoint::Finite { value, .. } => *value,
            Endpoint::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Endpoint::Finite { .. })
    }
}

/// `log T̂ = max{log X_{n-k,n} + (1/α̂) log(1 + k/(nD̂)), log X_{n,n}}`.
pub fn endpoint_truncated(m: &TailModel) -> Result<Endpoint> {
    if m.d_hat == 0.0 {
        return Ok(Endpoint::Infinite);
    }
    let base = 1.0 + m.k_over_n() / m.d_hat;
    if !(m.d_hat > 0.0) || !(base > 0.0) {
        return Err(Error::InvalidOdds(m.d_hat));
    }
    let candidate = m.anchor * (base.ln() / m.alpha_hat).exp();
    let clamped = candidate < m.sample_max;
    Ok(Endpoint::Finite { value: candidate.max(m.sample_max), candidate, clamped })
}

/// `q̂^W = X_{n-k,n} (k/(np))^{H_{1,k,n}}`.
pub fn weissman_quantile(anchor: f64, h: f64, k: usize, n: usize, p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(anchor * (k as f64 / (n as f64 * p)).powf(h))
}

/// Moment-method fit of the extreme value index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentFit {
    pub m1: f64,
    pub m2: f64,
    pub xi_minus: f64,
    pub xi_mom: f64,
}

/// `ξ̂⁻ = 1 - ½[1 - M1²/M2]⁻¹`, `ξ̂^{MOM} = M1 + ξ̂⁻`.
pub fn moment_fit(s: &Sample, k: usize) -> Result<MomentFit> {
    let m = log_moments(s, k)?;
    let gap = 1.0 - m.m1 * m.m1 / m.m2;
    if !(m.m2 > 0.0) || gap == 0.0 || !gap.is_finite() {
        return Err(Error::DegenerateMoments { m1: m.m1, m2: m.m2 });
    }
    let xi_minus = 1.0 - 0.5 / gap;
    Ok(MomentFit { m1: m.m1, m2: m.m2, xi_minus, xi_mom: m.m1 + xi_minus })
}

/// `q̂^{MOM} = X_{n-k,n} + X_{n-k,n} M1 (1 - ξ̂⁻) ((k/(np))^ξ̂ - 1) / ξ̂`.
pub fn moment_quantile(mf: &MomentFit, anchor: f64, k: usize, n: usize, p: f64) -> Result<f64> {
    check_probability(p)?;
    if mf.xi_mom == 0.0 {
        return Err(Error::ZeroXi);
    }
    let scale = anchor * mf.m1 * (1.0 - mf.xi_minus);
    let growth = (k as f64 / (n as f64 * p)).powf(mf.xi_mom) - 1.0;
    Ok(anchor + scale * growth / mf.xi_mom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentEndpointKind {
    /// The moment candidate exceeded the sample maximum.
    Candidate,
    /// The candidate fell below the sample maximum.
    Clamped,
    /// `ξ̂^{MOM} > 0`: no finite endpoint; the sample maximum is reported.
    UnboundedTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEndpoint {
    pub value: f64,
    pub candidate: f64,
    pub kind: MomentEndpointKind,
}

/// `T̂^{MOM} = max(X_{n-k,n} - X_{n-k,n} M1 (1 - ξ̂⁻) / ξ̂^{MOM}, X_{n,n})`.
pub fn moment_endpoint(mf: &MomentFit, anchor: f64, sample_max: f64) -> Result<MomentEndpoint> {
    if mf.xi_mom == 0.0 {
        return Err(Error::ZeroXi);
    }
    let candidate = anchor - anchor * mf.m1 * (1.0 - mf.xi_minus) / mf.xi_mom;
    if mf.xi_mom > 0.0 {
        return Ok(MomentEndpoint { value: sample_max, candidate, kind: MomentEndpointKind::UnboundedTail });
    }
    let (value, kind) = if candidate > sample_max {
        (candidate, MomentEndpointKind::Candidate)
    } else {
        (sample_max, MomentEndpointKind::Clamped)
    };
    Ok(MomentEndpoint { value, candidate, kind })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn model(anchor: f64, alpha: f64, d: f64, k: usize, n: usize, max: f64) -> TailModel {
        TailModel::new(alpha, d, anchor, max, TrimSpec::new(1, k, n).unwrap(), n)
    }

    #[test]
    fn truncated_quantile_hand_value() {
        let m = model(3.0, 2.0, 0.04, 100, 1000, 5.0);
        let q = quantile_truncated(&m, 0.001).unwrap();
        // 3·(0.14/0.041)^{1/2}, 30-digit reference value.
        assert!((q - 5.543_618_612_158_774).abs() < 1e-12);
        assert!((quantile_truncated(&m, 0.1).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_odds_reduces_to_weissman() {
        let m = model(3.0, 2.0, 0.0, 100, 1000, 5.0);
        let q = quantile_truncated(&m, 0.001).unwrap();
        let w = weissman_quantile(3.0, 0.5, 100, 1000, 0.001).unwrap();
        assert!((q - 30.0).abs() < 1e-12);
        assert!((w - 30.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_probability() {
        let m = model(3.0, 2.0, 0.04, 100, 1000, 5.0);
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(quantile_truncated(&m, p), Err(Error::InvalidProbability(_))));
        }
    }

    #[test]
    fn endpoint_hand_values() {
        let m = model(3.0, 2.0, 0.04, 100, 1000, 5.0);
        match endpoint_truncated(&m).unwrap() {
            Endpoint::Finite { value, clamped, .. } => {
                assert!((value - 3.0 * 3.5f64.sqrt()).abs() < 1e-12);
                assert!((value - 5.612_486_080_160_912).abs() < 1e-12);
                assert!(!clamped);
            }
            Endpoint::Infinite => panic!("expected finite"),
        }
        let m = model(3.0, 2.0, 0.04, 100, 1000, 6.0);
        assert_eq!(endpoint_truncated(&m).unwrap().value(), 6.0);
        let m = model(3.0, 2.0, 0.0, 100, 1000, 6.0);
        assert_eq!(endpoint_truncated(&m).unwrap(), Endpoint::Infinite);
    }

    #[test]
    fn weissman_edge_cases() {
        assert_eq!(weissman_quantile(3.0, 0.5, 100, 1000, 0.1).unwrap(), 3.0);
        assert_eq!(weissman_quantile(3.0, 0.0, 100, 1000, 1e-6).unwrap(), 3.0);
    }

    #[test]
    fn moment_hand_values() {
        let s = Sample::new(vec![1.0, E, E * E]).unwrap();
        let mf = moment_fit(&s, 2).unwrap();
        assert!((mf.xi_minus + 4.0).abs() < 1e-12);
        assert!((mf.xi_mom + 2.5).abs() < 1e-12);
        assert_eq!(mf.xi_mom, mf.m1 + mf.xi_minus);

        let q = moment_quantile(&mf, 1.0, 1, 100, 0.0001).unwrap();
        assert!((q - (1.0 + 3.0 * (1.0 - 1e-5))).abs() < 1e-10);
        assert!((q - 3.99997).abs() < 1e-10);
        assert!((moment_quantile(&mf, 1.0, 100, 1000, 0.1).unwrap() - 1.0).abs() < 1e-15);

        let e = moment_endpoint(&mf, 1.0, E * E).unwrap();
        assert!((e.candidate - 4.0).abs() < 1e-12);
        assert_eq!(e.value, E * E);
        assert_eq!(e.kind, MomentEndpointKind::Clamped);
    }

    #[test]
    fn moment_degenerate_cases() {
        let s = Sample::new(vec![1.0, 2.0, 2.0, 2.0]).unwrap();
        assert!(matches!(moment_fit(&s, 2), Err(Error::DegenerateMoments { .. })));

        let flat = MomentFit { m1: 0.0, m2: 1.0, xi_minus: 0.5, xi_mom: -0.5 };
        assert_eq!(moment_quantile(&flat, 2.0, 10, 100, 0.001).unwrap(), 2.0);
        let e = moment_endpoint(&flat, 2.0, 3.0).unwrap();
        assert_eq!(e.candidate, 2.0);
        assert_eq!(e.value, 3.0);

        let zero = MomentFit { m1: 0.5, m2: 1.0, xi_minus: -0.5, xi_mom: 0.0 };
        assert!(matches!(moment_quantile(&zero, 1.0, 10, 100, 0.01), Err(Error::ZeroXi)));
        assert!(matches!(moment_endpoint(&zero, 1.0, 3.0), Err(Error::ZeroXi)));

        let heavy = MomentFit { m1: 0.5, m2: 0.6, xi_minus: 0.1, xi_mom: 0.6 };
        let e = moment_endpoint(&heavy, 1.0, 9.0).unwrap();
        assert_eq!(e.kind, MomentEndpointKind::UnboundedTail);
        assert_eq!(e.value, 9.0);
    }

    #[test]
    fn raw_negative_odds_rejected_by_endpoint() {
        let m = model(3.0, 2.0, -0.01, 100, 1000, 5.0);
        assert!(matches!(endpoint_truncated(&m), Err(Error::InvalidOdds(_))));
    }
}
