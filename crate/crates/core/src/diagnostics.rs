//! Pareto and truncated-Pareto QQ-plots, and the correlation-based choice of
//! the anchor index `k*`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::SolverConfig;
use crate::exec::Execution;
use crate::sample::{Sample, TrimSpec};
use crate::tailfit::{OddsChoice, TailModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QQKind {
    Pareto,
    TruncatedPareto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QQPoint {
    pub j: usize,
    /// `log X_{n-j+1,n}`
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QQPlotData {
    pub kind: QQKind,
    /// Odds value added inside the logarithm of the y coordinate.
    pub d_used: f64,
    pub points: Vec<QQPoint>,
}

/// Points `(log X_{n-j+1,n}, log(j/n))`, `j = 1..=n`.
pub fn pa_qqplot(s: &Sample) -> QQPlotData {
    QQPlotData { kind: QQKind::Pareto, d_used: 0.0, points: qq_points(s, 0.0) }
}

/// Points `(log X_{n-j+1,n}, log(d + j/n))`, `j = 1..=n`.
pub fn tpa_qqplot(s: &Sample, d: f64) -> Result<QQPlotData> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::InvalidOdds(d));
    }
    Ok(QQPlotData { kind: QQKind::TruncatedPareto, d_used: d, points: qq_points(s, d) })
}

fn qq_points(s: &Sample, d: f64) -> Vec<QQPoint> {
    let n = s.len() as f64;
    (1..=s.len())
        .map(|j| QQPoint { j, x: s.top(j).ln(), y: (d + j as f64 / n).ln() })
        .collect()
}

/// Pearson correlation of two equal-length slices; `None` when either has
/// zero spread.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy)]
pub struct KStarOptions {
    /// Evaluate every `stride`-th candidate. 1 is the full sweep.
    pub stride: usize,
    pub solver: SolverConfig,
    pub execution: Execution,
}

impl Default for KStarOptions {
    fn default() -> Self {
        Self { stride: 1, solver: SolverConfig::default(), execution: Execution::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KStarCandidate {
    pub k: usize,
    /// Admissible odds estimate at this k, if the fit succeeded.
    pub d_hat: Option<f64>,
    pub correlation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KStarResult {
    pub k_star: usize,
    pub d_hat: f64,
    pub correlation: f64,
    pub sweep: Vec<KStarCandidate>,
}

/// Chooses `k* > 10` maximising the strength of the linear relation between
/// `log X_{n-j+1,n}` and `log(D̂_{T,r,k*,n} + j/n)` over `j = 1..=k*`.
///
/// The two coordinates move in opposite directions, so the strongest linear
/// fit is the most negative Pearson coefficient; that signed value is what
/// is reported. Ties go to the smallest `k*`. Candidates whose tail-index
/// equation has no solution are skipped.
pub fn select_kstar(s: &Sample, r: usize, opts: &KStarOptions) -> Result<KStarResult> {
    let n = s.len();
    if n <= 12 {
        return Err(Error::InvalidParameter(format!("k* selection needs n > 12, got n = {n}")));
    }
    if r == 0 {
        return Err(Error::InvalidTrim { r, k: 0, n });
    }
    let stride = opts.stride.max(1);
    let first = 11.max(r + 1);
    let candidates: Vec<usize> = (first..n).step_by(stride).collect();
    let xs: Vec<f64> = (1..=n).map(|j| s.top(j).ln()).collect();
    let nf = n as f64;

    let sweep = opts.execution.map(candidates.len(), |i| {
        let k = candidates[i];
        let fitted = TrimSpec::new(r, k, n)
            .and_then(|t| TailModel::fit(s, t, &opts.solver, OddsChoice::Admissible));
        match fitted {
            Ok((model, _)) => {
                let d = model.d_hat;
                let ys: Vec<f64> = (1..=k).map(|j| (d + j as f64 / nf).ln()).collect();
                KStarCandidate { k, d_hat: Some(d), correlation: pearson(&xs[..k], &ys) }
            }
            Err(_) => KStarCandidate { k, d_hat: None, correlation: None },
        }
    });

    let mut best: Option<(usize, f64, f64)> = None;
    for c in &sweep {
        if let (Some(d), Some(rho)) = (c.d_hat, c.correlation) {
            if best.is_none_or(|(_, _, b)| rho < b) {
                best = Some((c.k, d, rho));
            }
        }
    }
    let (k_star, d_hat, correlation) = best.ok_or(Error::NoCandidate)?;
    Ok(KStarResult { k_star, d_hat, correlation, sweep })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pa_plot_definition() {
        let s = Sample::new(vec![1.0, 2.0, 4.0, 8.0]).unwrap();
        let qq = pa_qqplot(&s);
        let expect = [(8f64.ln(), 0.25f64.ln()), (4f64.ln(), 0.5f64.ln()), (2f64.ln(), 0.75f64.ln()), (0.0, 0.0)];
        assert_eq!(qq.points.len(), 4);
        for (p, (x, y)) in qq.points.iter().zip(expect) {
            assert!((p.x - x).abs() < 1e-15 && (p.y - y).abs() < 1e-15);
        }
    }

    #[test]
    fn tpa_plot_definition() {
        let s = Sample::new(vec![1.0, 2.0, 4.0, 8.0]).unwrap();
        let qq = tpa_qqplot(&s, 0.25).unwrap();
        let ys: Vec<f64> = qq.points.iter().map(|p| p.y).collect();
        let expect = [0.5f64.ln(), 0.75f64.ln(), 0.0, 1.25f64.ln()];
        for (y, e) in ys.iter().zip(expect) {
            assert!((y - e).abs() < 1e-15);
        }
        assert_eq!(tpa_qqplot(&s, 0.0).unwrap().points, pa_qqplot(&s).points);
        assert!(tpa_qqplot(&s, -0.1).is_err());
    }

    #[test]
    fn constant_data_share_x() {
        let s = Sample::new(vec![2.5; 6]).unwrap();
        assert!(pa_qqplot(&s).points.iter().all(|p| p.x == 2.5f64.ln()));
    }

    #[test]
    fn pearson_basics() {
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]), Some(1.0));
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), Some(-1.0));
        assert_eq!(pearson(&[1.0, 1.0, 1.0], &[3.0, 2.0, 1.0]), None);
    }

    #[test]
    fn small_samples_rejected() {
        let s = Sample::new((1..=12).map(f64::from).collect()).unwrap();
        assert!(select_kstar(&s, 1, &KStarOptions::default()).is_err());
    }

    #[test]
    fn all_tied_top_has_no_candidate() {
        let mut v = vec![1.0, 1.5];
        v.extend(std::iter::repeat_n(9.0, 30));
        let s = Sample::new(v).unwrap();
        assert!(matches!(select_kstar(&s, 1, &KStarOptions::default()), Err(Error::NoCandidate)));
    }
}
