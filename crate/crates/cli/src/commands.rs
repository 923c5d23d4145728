use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};

use tpareto::asymptotics::{
    beta_lambda, case_a_reference, case_b_constants, case_b_variance, case_c_constants, sigma2_lambda,
    trimming_curves, trimming_curves_csv, trimming_grid, AsymptoticParams,
};
use tpareto::diagnostics::{pa_qqplot, pearson, select_kstar, tpa_qqplot, KStarOptions, QQPlotData};
use tpareto::estimators::{estimate_odds, solve_alpha, SolverMethod};
use tpareto::montecarlo::{default_k_grid, run_study_with, summarize_to_csv, MCConfig};
use tpareto::sample::{ratio_r, trimmed_hill};
use tpareto::tailfit::{
    endpoint_truncated, moment_endpoint, moment_fit, moment_quantile, quantile_truncated, weissman_quantile,
    MomentEndpointKind,
};
use tpareto::{Endpoint, Error, Execution, OddsChoice, Sample, SolverConfig, TailDistribution, TailModel, TrimSpec};

use crate::config::{list_or, ConfigFile};
use crate::{
    AsymptoticsArgs, Case, Cli, CliError, Command, Curve, DataArgs, EstimateArgs, Family, Format, GridArgs,
    QqplotArgs, QuantileArgs, SimulateArgs,
};

type CliResult<T> = Result<T, CliError>;

pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let text = match cli.command {
        Command::Fit(a) => cmd_fit(&a, &cfg)?,
        Command::Quantile(a) => cmd_quantile(&a, &cfg, err)?,
        Command::Endpoint(a) => cmd_endpoint(&a, &cfg)?,
        Command::Qqplot(a) => cmd_qqplot(&a, &cfg)?,
        Command::Simulate(a) => cmd_simulate(&a, &cfg)?,
        Command::Asymptotics(a) => cmd_asymptotics(&a, &cfg)?,
    };
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io { context: "cannot write output".into(), source })
}

struct Dataset {
    sample: Sample,
    r: usize,
    ks: Vec<usize>,
    odds: OddsChoice,
}

fn load_input(data: &DataArgs, cfg: &ConfigFile) -> CliResult<Sample> {
    let path = data
        .input
        .clone()
        .or_else(|| cfg.input.clone())
        .ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let column = data.column.clone().or_else(|| cfg.column.clone());
    let file = File::open(&path).map_err(|source| CliError::Io {
        context: format!("cannot open {}", path.display()),
        source,
    })?;
    Sample::from_csv(BufReader::new(file), column.as_deref())
        .map_err(|source| CliError::Input { path: path.display().to_string(), source })
}

fn load_dataset(data: &DataArgs, grid: &GridArgs, cfg: &ConfigFile) -> CliResult<Dataset> {
    let r = grid.r.or_else(|| cfg.r.clone().and_then(|v| v.into_vec().first().copied())).unwrap_or(1);
    let explicit = list_or(&grid.k, &cfg.k);
    let range = grid.k_range.clone().or_else(|| cfg.k_range.clone());
    let requested = requested_ks(explicit, range.as_deref())?;
    let sample = load_input(data, cfg)?;
    let n = sample.len();
    let ks = if requested.is_empty() { (r + 1..n).collect() } else { requested };
    for &k in &ks {
        TrimSpec::new(r, k, n)?;
    }
    if ks.is_empty() {
        return Err(Error::InvalidTrim { r, k: r + 1, n }.into());
    }
    let raw = grid.raw_odds || cfg.raw_odds.unwrap_or(false);
    let odds = if raw { OddsChoice::Raw } else { OddsChoice::Admissible };
    Ok(Dataset { sample, r, ks, odds })
}

/// Explicit thresholds plus an optional `start:end[:step]` range, sorted and deduplicated.
fn requested_ks(mut ks: Vec<usize>, range: Option<&str>) -> CliResult<Vec<usize>> {
    if let Some(spec) = range {
        ks.extend(parse_range(spec)?);
    }
    ks.sort_unstable();
    ks.dedup();
    Ok(ks)
}

fn parse_range(spec: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Usage(format!("invalid --k-range {spec:?}; expected start:end or start:end:step"));
    let parts: Vec<usize> = spec
        .split(':')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<CliResult<_>>()?;
    let (start, end, step) = match parts[..] {
        [a, b] => (a, b, 1),
        [a, b, s] => (a, b, s),
        _ => return Err(bad()),
    };
    if step == 0 || start > end {
        return Err(bad());
    }
    Ok((start..=end).step_by(step).collect())
}

fn format_or(cli: Option<Format>, cfg: &ConfigFile, default: Format) -> Format {
    cli.or(cfg.output).unwrap_or(default)
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::NoSolution { .. } => "no-solution",
        Error::NonConvergence { .. } => "non-convergence",
        Error::DegenerateRatio => "degenerate-ratio",
        Error::DegenerateMoments { .. } => "degenerate-moments",
        Error::ZeroXi => "zero-xi",
        Error::InvalidOdds(_) => "invalid-odds",
        _ => "error",
    }
}

fn method_name(m: SolverMethod) -> &'static str {
    match m {
        SolverMethod::Newton => "newton",
        SolverMethod::BisectionFallback => "bisection",
    }
}

fn odds_name(o: OddsChoice) -> &'static str {
    match o {
        OddsChoice::Admissible => "admissible",
        OddsChoice::Raw => "raw",
    }
}

fn cell<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report values serialise");
    s.push('\n');
    s
}

/// Splits per-threshold failures, which are reported inline, from errors that abort the command.
fn per_threshold<T>(r: tpareto::Result<T>) -> CliResult<Result<T, &'static str>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if e.is_per_threshold() => Ok(Err(status_of(&e))),
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct Report<R> {
    n: usize,
    r: usize,
    odds: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
    rows: Vec<R>,
}

#[derive(Serialize)]
struct FitRow {
    k: usize,
    h: f64,
    ratio: f64,
    alpha: Option<f64>,
    inv_alpha: Option<f64>,
    d_hat: Option<f64>,
    d_hat_admissible: Option<f64>,
    iterations: Option<usize>,
    method: Option<&'static str>,
    status: &'static str,
}

const FIT_HEADER: &str = "r,k,h,ratio,alpha,inv_alpha,d_hat,d_hat_admissible,iterations,method,status";

fn cmd_fit(a: &EstimateArgs, cfg: &ConfigFile) -> CliResult<String> {
    let format = format_or(a.output, cfg, Format::Json);
    let ds = load_dataset(&a.data, &a.grid, cfg)?;
    let solver = SolverConfig::default();
    let n = ds.sample.len();
    let mut rows = Vec::with_capacity(ds.ks.len());
    for &k in &ds.ks {
        let t = TrimSpec::new(ds.r, k, n)?;
        let h = trimmed_hill(&ds.sample, t);
        let ratio = ratio_r(&ds.sample, t);
        let mut row = FitRow {
            k,
            h,
            ratio,
            alpha: None,
            inv_alpha: None,
            d_hat: None,
            d_hat_admissible: None,
            iterations: None,
            method: None,
            status: "ok",
        };
        match per_threshold(solve_alpha(h, ratio, &solver))? {
            Ok(fit) => {
                row.alpha = Some(fit.alpha_hat);
                row.inv_alpha = Some(fit.inv_alpha);
                row.iterations = Some(fit.iterations);
                row.method = Some(method_name(fit.method));
                match per_threshold(estimate_odds(fit.alpha_hat, ratio, t, n))? {
                    Ok(o) => {
                        row.d_hat = Some(o.d_hat);
                        row.d_hat_admissible = Some(o.d_hat_admissible);
                    }
                    Err(status) => row.status = status,
                }
            }
            Err(status) => row.status = status,
        }
        rows.push(row);
    }
    Ok(match format {
        Format::Json => to_json(&Report { n, r: ds.r, odds: odds_name(ds.odds), warnings: vec![], rows }),
        Format::Csv => {
            let mut s = format!("{FIT_HEADER}\n");
            for w in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    ds.r,
                    w.k,
                    w.h,
                    w.ratio,
                    cell(w.alpha),
                    cell(w.inv_alpha),
                    cell(w.d_hat),
                    cell(w.d_hat_admissible),
                    cell(w.iterations),
                    cell(w.method),
                    w.status
                );
            }
            s
        }
    })
}

#[derive(Serialize)]
struct QuantileRow {
    k: usize,
    alpha: Option<f64>,
    d_hat: Option<f64>,
    quantile_truncated: Option<f64>,
    quantile_weissman: Option<f64>,
    quantile_mom: Option<f64>,
    status: &'static str,
}

const QUANTILE_HEADER: &str = "r,k,p,alpha,d_hat,quantile_truncated,quantile_weissman,quantile_mom,status";

fn check_p(p: f64) -> CliResult<f64> {
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(CliError::Usage(format!("--p must lie in (0, 1), got {p}")))
    }
}

fn cmd_quantile(a: &QuantileArgs, cfg: &ConfigFile, err: &mut dyn Write) -> CliResult<String> {
    let format = format_or(a.output, cfg, Format::Json);
    let p = check_p(a.p.or(cfg.p).ok_or_else(|| CliError::Usage("--p is required".into()))?)?;
    let ds = load_dataset(&a.data, &a.grid, cfg)?;
    let solver = SolverConfig::default();
    let s = &ds.sample;
    let n = s.len();

    let mut warnings = Vec::new();
    let np = n as f64 * p;
    if np < 1.0 {
        warnings.push(format!(
            "n*p = {np} < 1: the quantile lies beyond the sample range and its estimate is an extrapolation"
        ));
    }
    for w in &warnings {
        let _ = writeln!(err, "warning: {w}");
    }

    let mut rows = Vec::with_capacity(ds.ks.len());
    for &k in &ds.ks {
        let t = TrimSpec::new(ds.r, k, n)?;
        let anchor = s.anchor(k);
        let hill = trimmed_hill(s, TrimSpec::new(1, k, n)?);
        let mom = moment_fit(s, k).ok();
        let mut row = QuantileRow {
            k,
            alpha: None,
            d_hat: None,
            quantile_truncated: None,
            quantile_weissman: Some(weissman_quantile(anchor, hill, k, n, p)?),
            quantile_mom: mom.and_then(|m| moment_quantile(&m, anchor, k, n, p).ok()),
            status: "ok",
        };
        match per_threshold(TailModel::fit(s, t, &solver, ds.odds))? {
            Ok((model, _)) => {
                row.alpha = Some(model.alpha_hat);
                row.d_hat = Some(model.d_hat);
                match per_threshold(quantile_truncated(&model, p))? {
                    Ok(q) => row.quantile_truncated = Some(q),
                    Err(status) => row.status = status,
                }
            }
            Err(status) => row.status = status,
        }
        rows.push(row);
    }
    Ok(match format {
        Format::Json => {
            let report = Report { n, r: ds.r, odds: odds_name(ds.odds), warnings, rows };
            let mut v = serde_json::to_value(&report).expect("report values serialise");
            v.as_object_mut().expect("object").insert("p".into(), json!(p));
            to_json(&v)
        }
        Format::Csv => {
            let mut out = format!("{QUANTILE_HEADER}\n");
            for w in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    ds.r,
                    w.k,
                    p,
                    cell(w.alpha),
                    cell(w.d_hat),
                    cell(w.quantile_truncated),
                    cell(w.quantile_weissman),
                    cell(w.quantile_mom),
                    w.status
                );
            }
            out
        }
    })
}

/// A finite number, or the string `"infinite"`.
#[derive(Clone, Copy, Serialize)]
#[serde(untagged)]
enum EndpointValue {
    Finite(f64),
    #[serde(serialize_with = "infinite")]
    Infinite,
}

fn infinite<S: serde::Serializer>(s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str("infinite")
}

impl std::fmt::Display for EndpointValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EndpointValue::Finite(v) => write!(f, "{v}"),
            EndpointValue::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Serialize)]
struct EndpointRow {
    k: usize,
    alpha: Option<f64>,
    d_hat: Option<f64>,
    endpoint_truncated: Option<EndpointValue>,
    /// True when the sample maximum replaced a smaller candidate.
    clamped: Option<bool>,
    endpoint_mom: Option<f64>,
    endpoint_mom_kind: Option<&'static str>,
    status: &'static str,
}

const ENDPOINT_HEADER: &str = "r,k,alpha,d_hat,endpoint_truncated,clamped,endpoint_mom,endpoint_mom_kind,sample_max,status";

fn moment_kind_name(k: MomentEndpointKind) -> &'static str {
    match k {
        MomentEndpointKind::Candidate => "candidate",
        MomentEndpointKind::Clamped => "clamped",
        MomentEndpointKind::UnboundedTail => "unbounded-tail",
    }
}

fn cmd_endpoint(a: &EstimateArgs, cfg: &ConfigFile) -> CliResult<String> {
    let format = format_or(a.output, cfg, Format::Json);
    let ds = load_dataset(&a.data, &a.grid, cfg)?;
    let solver = SolverConfig::default();
    let s = &ds.sample;
    let n = s.len();
    let mut rows = Vec::with_capacity(ds.ks.len());
    for &k in &ds.ks {
        let t = TrimSpec::new(ds.r, k, n)?;
        let mom = moment_fit(s, k).ok().and_then(|m| moment_endpoint(&m, s.anchor(k), s.max()).ok());
        let mut row = EndpointRow {
            k,
            alpha: None,
            d_hat: None,
            endpoint_truncated: None,
            clamped: None,
            endpoint_mom: mom.map(|m| m.value),
            endpoint_mom_kind: mom.map(|m| moment_kind_name(m.kind)),
            status: "ok",
        };
        match per_threshold(TailModel::fit(s, t, &solver, ds.odds))? {
            Ok((model, _)) => {
                row.alpha = Some(model.alpha_hat);
                row.d_hat = Some(model.d_hat);
                match per_threshold(endpoint_truncated(&model))? {
                    Ok(Endpoint::Finite { value, clamped, .. }) => {
                        row.endpoint_truncated = Some(EndpointValue::Finite(value));
                        row.clamped = Some(clamped);
                    }
                    Ok(Endpoint::Infinite) => row.endpoint_truncated = Some(EndpointValue::Infinite),
                    Err(status) => row.status = status,
                }
            }
            Err(status) => row.status = status,
        }
        rows.push(row);
    }
    Ok(match format {
        Format::Json => {
            let report = Report { n, r: ds.r, odds: odds_name(ds.odds), warnings: vec![], rows };
            let mut v = serde_json::to_value(&report).expect("report values serialise");
            v.as_object_mut().expect("object").insert("sample_max".into(), json!(s.max()));
            to_json(&v)
        }
        Format::Csv => {
            let mut out = format!("{ENDPOINT_HEADER}\n");
            for w in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    ds.r,
                    w.k,
                    cell(w.alpha),
                    cell(w.d_hat),
                    cell(w.endpoint_truncated),
                    cell(w.clamped),
                    cell(w.endpoint_mom),
                    cell(w.endpoint_mom_kind),
                    s.max(),
                    w.status
                );
            }
            out
        }
    })
}

pub const PA_FILE: &str = "pa_qqplot.csv";
pub const TPA_FILE: &str = "tpa_qqplot.csv";
pub const SWEEP_FILE: &str = "kstar_sweep.csv";

fn plot_csv(plot: &QQPlotData) -> String {
    let mut s = String::from("j,x,y\n");
    for p in &plot.points {
        let _ = writeln!(s, "{},{},{}", p.j, p.x, p.y);
    }
    s
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|source| CliError::Io { context: format!("cannot write {}", path.display()), source })?;
    Ok(path)
}

fn cmd_qqplot(a: &QqplotArgs, cfg: &ConfigFile) -> CliResult<String> {
    let format = format_or(a.output, cfg, Format::Json);
    let r = a.r.or_else(|| cfg.r.clone().and_then(|v| v.into_vec().first().copied())).unwrap_or(1);
    let stride = a.stride.or(cfg.stride).unwrap_or(1);
    if stride == 0 {
        return Err(CliError::Usage("--stride must be at least 1".into()));
    }
    let dir = a.out_dir.clone().or_else(|| cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."));
    let s = load_input(&a.data, cfg)?;
    let n = s.len();

    let opts = KStarOptions { stride, ..KStarOptions::default() };
    let ks = select_kstar(&s, r, &opts)?;
    let pa = pa_qqplot(&s);
    let tpa = tpa_qqplot(&s, ks.d_hat)?;
    let top: Vec<f64> = pa.points[..ks.k_star].iter().map(|p| p.x).collect();
    let pa_y: Vec<f64> = pa.points[..ks.k_star].iter().map(|p| p.y).collect();
    let pa_correlation = pearson(&top, &pa_y);

    let mut sweep = String::from("k,d_hat,correlation\n");
    for c in &ks.sweep {
        let _ = writeln!(sweep, "{},{},{}", c.k, cell(c.d_hat), cell(c.correlation));
    }
    std::fs::create_dir_all(&dir)
        .map_err(|source| CliError::Io { context: format!("cannot create {}", dir.display()), source })?;
    let pa_path = write_file(&dir, PA_FILE, &plot_csv(&pa))?;
    let tpa_path = write_file(&dir, TPA_FILE, &plot_csv(&tpa))?;
    let sweep_path = write_file(&dir, SWEEP_FILE, &sweep)?;

    Ok(match format {
        Format::Json => {
            let mut m = Map::new();
            m.insert("n".into(), json!(n));
            m.insert("r".into(), json!(r));
            m.insert("k_star".into(), json!(ks.k_star));
            m.insert("d_hat".into(), json!(ks.d_hat));
            m.insert("correlation".into(), json!(ks.correlation));
            m.insert("pa_correlation".into(), json!(pa_correlation));
            m.insert(
                "files".into(),
                json!({
                    "pa": pa_path.display().to_string(),
                    "tpa": tpa_path.display().to_string(),
                    "sweep": sweep_path.display().to_string(),
                }),
            );
            m.insert("pa".into(), serde_json::to_value(&pa).expect("serialise"));
            m.insert("tpa".into(), serde_json::to_value(&tpa).expect("serialise"));
            m.insert("sweep".into(), serde_json::to_value(&ks.sweep).expect("serialise"));
            to_json(&Value::Object(m))
        }
        Format::Csv => format!(
            "n,r,k_star,d_hat,correlation,pa_correlation\n{},{},{},{},{},{}\n",
            n,
            r,
            ks.k_star,
            ks.d_hat,
            ks.correlation,
            cell(pa_correlation)
        ),
    })
}

fn require(v: Option<f64>, flag: &str, what: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required {what}")))
}

fn distribution(a: &SimulateArgs, cfg: &ConfigFile) -> CliResult<TailDistribution> {
    let family = a.family.or(cfg.family).ok_or_else(|| CliError::Usage("--family is required".into()))?;
    let alpha = require(a.alpha.or(cfg.alpha), "alpha", "for every family")?;
    let rho = a.rho.or(cfg.rho);
    let upper = a.upper.or(cfg.upper);
    let d = match family {
        Family::Pareto => TailDistribution::pareto(alpha),
        Family::Burr => TailDistribution::burr(alpha, require(rho, "rho", "for the Burr family")?),
        Family::TruncatedPareto => {
            TailDistribution::truncated_pareto(alpha, require(upper, "T", "for a truncated family")?)
        }
        Family::TruncatedBurr => TailDistribution::truncated_burr(
            alpha,
            require(rho, "rho", "for the Burr family")?,
            require(upper, "T", "for a truncated family")?,
        ),
    };
    Ok(d?)
}

fn cmd_simulate(a: &SimulateArgs, cfg: &ConfigFile) -> CliResult<String> {
    let format = format_or(a.output, cfg, Format::Csv);
    let mut mc = MCConfig::new(distribution(a, cfg)?);
    if let Some(n) = a.n.or(cfg.n) {
        mc.n = n;
    }
    if let Some(runs) = a.runs.or(cfg.runs) {
        mc.runs = runs;
    }
    let r_values = list_or(&a.r, &cfg.r);
    if !r_values.is_empty() {
        mc.r_values = r_values;
    }
    if let Some(p) = a.p.or(cfg.p) {
        mc.p = check_p(p)?;
    }
    mc.base_seed = a.seed.or(cfg.seed).unwrap_or(0);
    if a.raw_odds || cfg.raw_odds.unwrap_or(false) {
        mc.odds = OddsChoice::Raw;
    }
    let explicit = list_or(&a.k, &cfg.k);
    let range = a.k_range.clone().or_else(|| cfg.k_range.clone());
    let ks = requested_ks(explicit, range.as_deref())?;
    let max_r = mc.r_values.iter().copied().max().unwrap_or(1);
    mc.k_grid = if ks.is_empty() { default_k_grid(max_r, mc.n) } else { ks };
    if mc.k_grid.is_empty() {
        return Err(CliError::Usage(format!("no threshold k satisfies {max_r} < k < {}", mc.n)));
    }
    let exec = match a.threads.or(cfg.threads) {
        Some(t) => Execution::threads(t),
        None => Execution::Parallel,
    };
    let summary = run_study_with(&mc, exec)?;
    Ok(match format {
        Format::Csv => summarize_to_csv(&summary),
        Format::Json => to_json(&summary),
    })
}

fn record(format: Format, fields: &[(&str, Option<f64>)]) -> String {
    match format {
        Format::Json => {
            let m: Map<String, Value> = fields.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            to_json(&Value::Object(m))
        }
        Format::Csv => {
            let head: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let vals: Vec<String> = fields.iter().map(|(_, v)| cell(*v)).collect();
            format!("{}\n{}\n", head.join(","), vals.join(","))
        }
    }
}

fn cmd_asymptotics(a: &AsymptoticsArgs, cfg: &ConfigFile) -> CliResult<String> {
    let format = format_or(a.output, cfg, Format::Json);
    let lambda = a.lambda.or(cfg.lambda);
    let alpha = a.alpha.or(cfg.alpha);
    let rho_star = a.rho_star.or(cfg.rho_star);
    let kappa = a.kappa.or(cfg.kappa);
    let curve = a.curve.or(cfg.curve);
    let case = if a.curve.is_some() { None } else { a.case.or(cfg.case) };

    if let Some(curve) = curve {
        return match curve {
            Curve::Sigma2 => {
                let l = require(lambda, "lambda", "for the sigma2 curve")?;
                Ok(record(format, &[("lambda", Some(l)), ("sigma2", Some(sigma2_lambda(l)?))]))
            }
            Curve::Beta => {
                let l = require(lambda, "lambda", "for the beta curve")?;
                let al = require(alpha, "alpha", "for the beta curve")?;
                let rs = require(rho_star, "rho-star", "for the beta curve")?;
                Ok(record(format, &[("lambda", Some(l)), ("beta", Some(beta_lambda(al, rs, l)?))]))
            }
            Curve::Fig7 => {
                let al = require(alpha, "alpha", "for the trimming curves")?;
                let rs = require(rho_star, "rho-star", "for the trimming curves")?;
                let grid = trimming_grid(a.grid_step.or(cfg.grid_step).unwrap_or(0.005))?;
                let rows = trimming_curves(al, rs, &grid)?;
                Ok(match format {
                    Format::Csv => trimming_curves_csv(&rows),
                    Format::Json => to_json(&rows),
                })
            }
        };
    }

    let case = case.ok_or_else(|| CliError::Usage("one of --curve or --case is required".into()))?;
    let l = require(lambda, "lambda", "for the asymptotic constants")?;
    match case {
        Case::A | Case::C => {
            let al = require(alpha, "alpha", "for this case")?;
            let rs = require(rho_star, "rho-star", "for this case")?;
            let p = AsymptoticParams::new(al, rs, l)?;
            if case == Case::A {
                let c = case_a_reference(&p)?;
                Ok(record(
                    format,
                    &[
                        ("lambda", Some(l)),
                        ("noise_variance", Some(c.noise_variance)),
                        ("noise_scale", Some(c.noise_scale)),
                        ("bias_factor", Some(c.bias_factor)),
                    ],
                ))
            } else {
                let c = case_c_constants(&p)?;
                Ok(record(format, &[("lambda", Some(l)), ("sigma2", Some(c.sigma2)), ("beta", Some(c.beta))]))
            }
        }
        Case::B => {
            let kp = require(kappa, "kappa", "for case b")?;
            let limit = sigma2_lambda(l)?;
            match (alpha, rho_star) {
                (Some(al), Some(rs)) => {
                    let c = case_b_constants(&AsymptoticParams::new(al, rs, l)?.with_kappa(kp)?)?;
                    Ok(record(
                        format,
                        &[
                            ("kappa", Some(kp)),
                            ("lambda", Some(l)),
                            ("delta", Some(c.delta)),
                            ("sigma2", Some(c.sigma2)),
                            ("c", Some(c.c)),
                            ("a", Some(c.a)),
                            ("b", Some(c.b)),
                            ("beta", Some(c.beta)),
                            ("sigma2_case_c", Some(limit)),
                        ],
                    ))
                }
                (None, None) => {
                    let c = case_b_variance(kp, l)?;
                    Ok(record(
                        format,
                        &[
                            ("kappa", Some(kp)),
                            ("lambda", Some(l)),
                            ("delta", Some(c.delta)),
                            ("sigma2", Some(c.sigma2)),
                            ("c", Some(c.c)),
                            ("sigma2_case_c", Some(limit)),
                        ],
                    ))
                }
                _ => Err(CliError::Usage("--alpha and --rho-star must be given together".into())),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3:6").unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(parse_range("10:30:10").unwrap(), vec![10, 20, 30]);
        assert!(parse_range("5:2").is_err());
        assert!(parse_range("1:5:0").is_err());
        assert!(parse_range("1").is_err());
        assert!(parse_range("a:b").is_err());
    }

    #[test]
    fn explicit_and_range_merge() {
        assert_eq!(requested_ks(vec![40, 12], Some("10:14:2")).unwrap(), vec![10, 12, 14, 40]);
        assert!(requested_ks(vec![], None).unwrap().is_empty());
    }

    #[test]
    fn endpoint_value_rendering() {
        assert_eq!(serde_json::to_string(&EndpointValue::Infinite).unwrap(), "\"infinite\"");
        assert_eq!(serde_json::to_string(&EndpointValue::Finite(2.5)).unwrap(), "2.5");
        assert_eq!(EndpointValue::Infinite.to_string(), "infinite");
    }
}
