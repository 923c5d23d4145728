//! Repeated-sampling study of the estimators across a grid of thresholds.
//!
//! Run `i` draws its sample from [`rng::stream`]`(base_seed, i)`. Per-run
//! results are collected in run order and reduced sequentially with
//! compensated sums, so the summary is bit-identical for any thread count.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::SolverConfig;
use crate::exec::Execution;
use crate::models::TailDistribution;
use crate::rng;
use crate::sample::{trimmed_hill, Sample, TrimSpec};
use crate::tailfit::{
    endpoint_truncated, moment_endpoint, moment_fit, moment_quantile, quantile_truncated,
    weissman_quantile, OddsChoice, TailModel,
};

/// The estimators tracked by the study, in output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// `α̂_{r,k,n}`
    Alpha,
    /// `1/α̂_{r,k,n}`
    InvAlpha,
    /// `1/H_{r,k,n}`, the uncorrected trimmed Hill estimate of α.
    InvTrimmedHill,
    /// `ξ̂^{MOM}`
    XiMom,
    /// The odds estimate fed to the quantile and endpoint estimators.
    Odds,
    QuantileTruncated,
    QuantileWeissman,
    QuantileMom,
    EndpointTruncated,
    EndpointMom,
}

impl Estimator {
    pub const ALL: [Estimator; 10] = [
        Estimator::Alpha,
        Estimator::InvAlpha,
        Estimator::InvTrimmedHill,
        Estimator::XiMom,
        Estimator::Odds,
        Estimator::QuantileTruncated,
        Estimator::QuantileWeissman,
        Estimator::QuantileMom,
        Estimator::EndpointTruncated,
        Estimator::EndpointMom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::Alpha => "alpha",
            Estimator::InvAlpha => "inv_alpha",
            Estimator::InvTrimmedHill => "inv_trimmed_hill",
            Estimator::XiMom => "xi_mom",
            Estimator::Odds => "odds",
            Estimator::QuantileTruncated => "quantile_truncated",
            Estimator::QuantileWeissman => "quantile_weissman",
            Estimator::QuantileMom => "quantile_mom",
            Estimator::EndpointTruncated => "endpoint_truncated",
            Estimator::EndpointMom => "endpoint_mom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MCConfig {
    pub distribution: TailDistribution,
    pub n: usize,
    pub runs: usize,
    pub r_values: Vec<usize>,
    pub k_grid: Vec<usize>,
    pub p: f64,
    pub base_seed: u64,
    pub odds: OddsChoice,
    #[serde(skip)]
    pub solver: SolverConfig,
}

impl MCConfig {
    /// Defaults: 1000 runs of size 1000, `r ∈ {1, 10}`, `p = 0.001`, and
    /// every 10th threshold above 10.
    pub fn new(distribution: TailDistribution) -> Self {
        let n = 1000;
        Self {
            distribution,
            n,
            runs: 1000,
            r_values: vec![1, 10],
            k_grid: default_k_grid(10, n),
            p: 0.001,
            base_seed: 0,
            odds: OddsChoice::Admissible,
            solver: SolverConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        self.distribution.validated()?;
        if self.n < 3 {
            return Err(Error::TooFewObservations { n: self.n });
        }
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if self.r_values.is_empty() {
            return bad("at least one trimming index r is required".into());
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidProbability(self.p));
        }
        for &r in &self.r_values {
            for &k in &self.k_grid {
                TrimSpec::new(r, k, self.n)?;
            }
        }
        Ok(())
    }

    /// Index into a per-run value table.
    fn slot(&self, est: usize, ri: usize, ki: usize) -> usize {
        (est * self.r_values.len() + ri) * self.k_grid.len() + ki
    }

    fn slots(&self) -> usize {
        Estimator::ALL.len() * self.r_values.len() * self.k_grid.len()
    }
}

/// Multiples of `max(n/100, 1)` strictly between `max_r` and `n`.
pub fn default_k_grid(max_r: usize, n: usize) -> Vec<usize> {
    let step = (n / 100).max(1);
    (1..).map(|i| i * step).skip_while(|&k| k <= max_r).take_while(|&k| k < n).collect()
}

/// True parameter values the estimators target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truth {
    pub alpha: f64,
    pub xi: f64,
    pub quantile: f64,
    /// `None` for untruncated families.
    pub endpoint: Option<f64>,
    pub odds: f64,
}

impl Truth {
    pub fn of(d: &TailDistribution, p: f64) -> Result<Self> {
        Ok(Self {
            alpha: d.alpha(),
            xi: d.extreme_value_index(),
            quantile: d.quantile(1.0 - p)?,
            endpoint: d.upper(),
            odds: if d.is_truncated() { d.true_odds()? } else { 0.0 },
        })
    }

    pub fn target(&self, e: Estimator) -> Option<f64> {
        match e {
            Estimator::Alpha | Estimator::InvTrimmedHill => Some(self.alpha),
            Estimator::InvAlpha => Some(1.0 / self.alpha),
            Estimator::XiMom => Some(self.xi),
            Estimator::Odds => Some(self.odds),
            Estimator::QuantileTruncated | Estimator::QuantileWeissman | Estimator::QuantileMom => {
                Some(self.quantile)
            }
            Estimator::EndpointTruncated | Estimator::EndpointMom => self.endpoint,
        }
    }
}

/// Everything computed from one simulated sample.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub run: usize,
    pub sample_max: f64,
    /// Indexed by (estimator, r, k); `None` where the estimator failed or,
    /// for the truncated endpoint, the fitted tail had no finite endpoint.
    pub values: Vec<Option<f64>>,
    /// Runs where an endpoint estimate fell below the sample maximum or the
    /// admissible odds went negative. Always zero for a correct build.
    pub admissibility_violations: usize,
}

impl RunOutcome {
    pub fn value(&self, cfg: &MCConfig, e: Estimator, r_index: usize, k_index: usize) -> Option<f64> {
        let ei = Estimator::ALL.iter().position(|&x| x == e).expect("known estimator");
        self.values[cfg.slot(ei, r_index, k_index)]
    }
}

/// Draws the sample for run `run` and evaluates every estimator on it.
pub fn simulate_run(cfg: &MCConfig, run: usize) -> Result<RunOutcome> {
    let s = cfg.distribution.draw(cfg.n, &mut rng::stream(cfg.base_seed, run as u64))?;
    Ok(evaluate_sample(cfg, &s, run))
}

fn evaluate_sample(cfg: &MCConfig, s: &Sample, run: usize) -> RunOutcome {
    let mut values = vec![None; cfg.slots()];
    let mut violations = 0;
    let n = s.len();
    let p = cfg.p;
    let ix = |e: Estimator| Estimator::ALL.iter().position(|&x| x == e).unwrap();

    for (ki, &k) in cfg.k_grid.iter().enumerate() {
        let anchor = s.anchor(k);
        let mom = moment_fit(s, k).ok();
        let hill = TrimSpec::new(1, k, n).map(|t| trimmed_hill(s, t)).ok();
        for (ri, &r) in cfg.r_values.iter().enumerate() {
            let mut put = |e: Estimator, v: Option<f64>| {
                values[cfg.slot(ix(e), ri, ki)] = v.filter(|x| x.is_finite());
            };
            let Ok(t) = TrimSpec::new(r, k, n) else { continue };
            let h = trimmed_hill(s, t);
            put(Estimator::InvTrimmedHill, (h > 0.0).then(|| 1.0 / h));
            put(Estimator::XiMom, mom.map(|m| m.xi_mom));
            put(Estimator::QuantileWeissman, hill.and_then(|h| weissman_quantile(anchor, h, k, n, p).ok()));
            put(Estimator::QuantileMom, mom.and_then(|m| moment_quantile(&m, anchor, k, n, p).ok()));
            let mom_end = mom.and_then(|m| moment_endpoint(&m, anchor, s.max()).ok());
            if mom_end.is_some_and(|e| e.value < s.max()) {
                violations += 1;
            }
            put(Estimator::EndpointMom, mom_end.map(|e| e.value));

            let Ok((model, fit)) = TailModel::fit(s, t, &cfg.solver, cfg.odds) else { continue };
            put(Estimator::Alpha, Some(fit.alpha_hat));
            put(Estimator::InvAlpha, Some(fit.inv_alpha));
            put(Estimator::Odds, Some(model.d_hat));
            if model.odds.d_hat_admissible < 0.0 {
                violations += 1;
            }
            put(Estimator::QuantileTruncated, quantile_truncated(&model, p).ok());
            if let Ok(end) = endpoint_truncated(&model) {
                if end.is_finite() && end.value() < s.max() {
                    violations += 1;
                }
                put(Estimator::EndpointTruncated, end.is_finite().then(|| end.value()));
            }
        }
    }
    RunOutcome { run, sample_max: s.max(), values, admissibility_violations: violations }
}

/// Summary statistics of one estimator at one `(r, k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub estimator: &'static str,
    pub r: usize,
    pub k: usize,
    pub mean: Option<f64>,
    pub bias: Option<f64>,
    /// Population variance (divisor = number of successful runs).
    pub variance: Option<f64>,
    pub mse: Option<f64>,
    /// Runs where the estimator failed or had no finite value.
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MCSummary {
    pub config: MCConfig,
    pub truth: Truth,
    pub rows: Vec<SummaryRow>,
    pub admissibility_violations: usize,
}

impl MCSummary {
    pub fn row(&self, e: Estimator, r: usize, k: usize) -> Option<&SummaryRow> {
        self.rows.iter().find(|row| row.estimator == e.name() && row.r == r && row.k == k)
    }
}

/// Runs the study with the default execution strategy.
pub fn run_study(cfg: &MCConfig) -> Result<MCSummary> {
    run_study_with(cfg, Execution::default())
}

pub fn run_study_with(cfg: &MCConfig, exec: Execution) -> Result<MCSummary> {
    cfg.validate()?;
    let truth = Truth::of(&cfg.distribution, cfg.p)?;
    let outcomes = exec.map(cfg.runs, |run| simulate_run(cfg, run));
    let outcomes: Vec<RunOutcome> = outcomes.into_iter().collect::<Result<_>>()?;
    Ok(summarize(cfg, truth, &outcomes))
}

fn summarize(cfg: &MCConfig, truth: Truth, outcomes: &[RunOutcome]) -> MCSummary {
    let mut rows = Vec::with_capacity(cfg.slots());
    for (ei, &e) in Estimator::ALL.iter().enumerate() {
        let target = truth.target(e);
        for (ri, &r) in cfg.r_values.iter().enumerate() {
            for (ki, &k) in cfg.k_grid.iter().enumerate() {
                let slot = cfg.slot(ei, ri, ki);
                let vals: Vec<f64> = outcomes.iter().filter_map(|o| o.values[slot]).collect();
                rows.push(moments_row(e.name(), r, k, &vals, target, outcomes.len()));
            }
        }
    }
    let admissibility_violations = outcomes.iter().map(|o| o.admissibility_violations).sum();
    MCSummary { config: cfg.clone(), truth, rows, admissibility_violations }
}

fn moments_row(
    estimator: &'static str,
    r: usize,
    k: usize,
    vals: &[f64],
    target: Option<f64>,
    runs: usize,
) -> SummaryRow {
    let failures = runs - vals.len();
    if vals.is_empty() {
        return SummaryRow { estimator, r, k, mean: None, bias: None, variance: None, mse: None, failures };
    }
    let count = vals.len() as f64;
    let mean = neumaier_sum(vals.iter().copied()) / count;
    let variance = neumaier_sum(vals.iter().map(|v| (v - mean) * (v - mean))) / count;
    let bias = target.map(|t| mean - t);
    let mse = target.map(|t| neumaier_sum(vals.iter().map(|v| (v - t) * (v - t))) / count);
    SummaryRow { estimator, r, k, mean: Some(mean), bias, variance: Some(variance), mse, failures }
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// One row per (estimator, r, k) under the header
/// `estimator,r,k,mean,bias,variance,mse,failures`. Missing values are empty
/// fields; numbers use the shortest round-trip representation.
pub fn summarize_to_csv(s: &MCSummary) -> String {
    let mut out = String::from("estimator,r,k,mean,bias,variance,mse,failures\n");
    let fmt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
    for row in &s.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.estimator,
            row.r,
            row.k,
            fmt(row.mean),
            fmt(row.bias),
            fmt(row.variance),
            fmt(row.mse),
            row.failures
        );
    }
    out
}
