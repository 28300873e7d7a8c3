//! Batch front end: configuration files, deterministic execution of the
//! experiment registry, CSV/JSON emission and plot-data export.
//!
//! A configuration is a TOML file with an optional master `seed` and one
//! `[[experiment]]` table per run:
//!
//! ```toml
//! seed = 7
//!
//! [[experiment]]
//! kind = "linear-3d"
//! scales = [4, 8, 16]
//! ```
//!
//! Exit codes: 0 when every configured assertion passes, 1 when one fails
//! (or the run aborts), 2 for invalid configuration or usage.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::counting::{point_estimate_trials, weyl_scaling, write_trials_csv, TrialConfig};
use crate::error::{Error, Result};
use crate::mixed_norms::TimeQuadrature;
use crate::nls::{conserved, small_data_experiment, small_data_profile, solve, NlsProblem, SmallDataSettings};
use crate::verify::{
    fit_scaling, run_linear_2d, run_linear_3d, run_multilinear_2d, run_orthogonality_check, run_trilinear_2d,
    run_trilinear_3d, ExperimentConfig, ExperimentKind, ScalingReport, ScalingRow, Sign, REPORT_SCHEMA_VERSION,
};

pub const WORKERS_ENV: &str = "IRRTORUS_WORKERS";

/// Time convention of the NLS experiments: `e^{4π²iQ(n)t}`.
pub const PHYSICAL_CLOCK: &str = "exp(4 pi^2 i Q t)";

#[derive(Debug, Parser)]
#[command(name = "irrtorus", version, about = "Estimate verification and NLS runs on irrational tori")]
pub struct Cli {
    /// Master seed for experiments without their own.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every experiment of a configuration file.
    Run { config: PathBuf },
    /// Write log-log plot tables for a scaling report.
    ExportPlots { report: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    #[serde(default)]
    pub experiment: Vec<ExperimentConfig>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::config("config", e.message()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Runs every guard and prefixes failures with `experiment[i]`.
    pub fn validate(&self) -> Result<()> {
        let mut names = std::collections::BTreeSet::new();
        for (i, cfg) in self.experiment.iter().enumerate() {
            cfg.validate().map_err(|e| scoped(i, e))?;
            let name = experiment_name(i, cfg);
            if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
                return Err(scoped(i, Error::config("name", format!("`{name}` is not a plain file stem"))));
            }
            if !names.insert(name.clone()) {
                return Err(scoped(i, Error::config("name", format!("duplicate experiment name `{name}`"))));
            }
        }
        Ok(())
    }

    /// Fills in the master seed and names so the result fully determines a run.
    pub fn resolved(&self, seed_override: Option<u64>) -> RunConfig {
        let seed = seed_override.or(self.seed).unwrap_or(0);
        let experiment = self
            .experiment
            .iter()
            .enumerate()
            .map(|(i, cfg)| {
                let mut cfg = cfg.clone();
                cfg.name = Some(experiment_name(i, &cfg));
                cfg.seed = Some(cfg.seed.unwrap_or(seed));
                cfg
            })
            .collect();
        RunConfig {
            seed: Some(seed),
            experiment,
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("plain data serializes");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn scoped(index: usize, err: Error) -> Error {
    match err {
        Error::Config { field, message } => Error::Config {
            field: format!("experiment[{index}].{field}"),
            message,
        },
        other => Error::Config {
            field: format!("experiment[{index}]"),
            message: other.to_string(),
        },
    }
}

fn experiment_name(index: usize, cfg: &ExperimentConfig) -> String {
    cfg.name.clone().unwrap_or_else(|| format!("{index:02}-{}", cfg.kind.as_str()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub kind: String,
    pub pass: bool,
    /// Written files, relative to the output directory.
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub workers: usize,
    pub experiments: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub workers: usize,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub manifest_path: PathBuf,
    /// JSON summaries of the experiments whose assertions failed.
    pub failed: Vec<PathBuf>,
    pub summaries: Vec<String>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.failed.is_empty()
    }
}

struct Finished {
    pass: bool,
    outputs: Vec<String>,
    summary: String,
}

/// Runs a parsed configuration on a pool of `opts.workers` threads.
pub fn run_config(config: &RunConfig, opts: &RunOptions) -> Result<RunOutcome> {
    config.validate()?;
    let resolved = config.resolved(opts.seed);
    let workers = opts.workers.max(1);
    std::fs::create_dir_all(&opts.out_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {workers} workers: {e}")))?;

    let mut entries = Vec::new();
    let mut failed = Vec::new();
    let mut summaries = Vec::new();
    for (i, cfg) in resolved.experiment.iter().enumerate() {
        let start = Instant::now();
        let done = pool
            .install(|| run_experiment(cfg, &opts.out_dir))
            .map_err(|e| match e {
                Error::Config { .. } => scoped(i, e),
                other => other,
            })?;
        let name = cfg.name.clone().expect("resolved name");
        if !done.pass {
            failed.push(opts.out_dir.join(format!("{name}.json")));
        }
        summaries.push(done.summary);
        entries.push(ManifestEntry {
            name,
            kind: cfg.kind.as_str().into(),
            pass: done.pass,
            outputs: done.outputs,
            wall_clock_seconds: start.elapsed().as_secs_f64(),
        });
    }
    let manifest = RunManifest {
        schema_version: REPORT_SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        config_hash: resolved.hash(),
        master_seed: resolved.seed.unwrap_or(0),
        workers,
        experiments: entries,
    };
    let manifest_path = opts.out_dir.join("manifest.json");
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest).expect("plain data serializes"))?;
    Ok(RunOutcome {
        manifest,
        manifest_path,
        failed,
        summaries,
    })
}

fn write_json<T: Serialize>(dir: &Path, file: &str, value: &T) -> Result<()> {
    std::fs::write(dir.join(file), serde_json::to_string_pretty(value).expect("plain data serializes"))?;
    Ok(())
}

fn scaling_outputs(report: ScalingReport, dir: &Path) -> Result<Finished> {
    report.save(dir)?;
    Ok(Finished {
        pass: report.pass,
        outputs: vec![format!("{}.csv", report.experiment), format!("{}.json", report.experiment)],
        summary: report.summary(),
    })
}

fn run_experiment(cfg: &ExperimentConfig, dir: &Path) -> Result<Finished> {
    match cfg.kind {
        ExperimentKind::Trilinear2d => scaling_outputs(run_trilinear_2d(cfg)?, dir),
        ExperimentKind::Linear2d => scaling_outputs(run_linear_2d(cfg)?, dir),
        ExperimentKind::Linear3d => scaling_outputs(run_linear_3d(cfg)?, dir),
        ExperimentKind::Multilinear2d => scaling_outputs(run_multilinear_2d(cfg)?, dir),
        ExperimentKind::Trilinear3d => scaling_outputs(run_trilinear_3d(cfg)?, dir),
        ExperimentKind::Orthogonality => scaling_outputs(run_orthogonality_check(cfg)?, dir),
        ExperimentKind::Weyl => scaling_outputs(weyl_report(cfg)?, dir),
        ExperimentKind::PointEstimate => point_estimate(cfg, dir),
        ExperimentKind::Nls => nls_run(cfg, dir),
        ExperimentKind::SmallData => small_data(cfg, dir),
    }
}

/// The Weyl-sum sweep in the scaling-report layout (`M` swept, `d = 1`).
pub fn weyl_report(cfg: &ExperimentConfig) -> Result<ScalingReport> {
    let p = cfg.p.unwrap_or(3.0);
    let scales = cfg.scales.clone().unwrap_or_else(|| (4..=10).map(|j| 1u64 << j).collect());
    let tolerance = cfg.tolerance.unwrap_or(0.08);
    let weyl = weyl_scaling(p, &scales, cfg.rtol.unwrap_or(1e-6))?;
    let rows = weyl
        .rows
        .iter()
        .map(|r| {
            let model = (r.m as f64).powf(weyl.predicted);
            ScalingRow {
                scale: r.m as f64,
                value: r.norm,
                n1: None,
                n2: None,
                n3: None,
                m: Some(r.m),
                lhs: r.norm,
                rhs_model: model,
                ratio: r.norm / model,
                n_t_used: r.n_t,
                grid_used: Vec::new(),
                trial: 0,
            }
        })
        .collect();
    let pass = weyl.fit.slope <= weyl.predicted + tolerance;
    Ok(ScalingReport {
        schema_version: REPORT_SCHEMA_VERSION,
        experiment: experiment_name(0, cfg),
        kind: cfg.kind.as_str().into(),
        clock: crate::verify::ESTIMATE_CLOCK.into(),
        d: 1,
        alphas: vec![1.0],
        rational: true,
        family: "dirichlet".into(),
        seed: cfg.seed.unwrap_or(0),
        p: Some(2.0 * p),
        q: None,
        eps: None,
        sweep: "M".into(),
        rows,
        slope: weyl.fit.slope,
        intercept: weyl.fit.intercept,
        max_residual: weyl.fit.max_residual,
        predicted: weyl.predicted,
        tolerance,
        slack: weyl.fit.slope - weyl.predicted,
        checks: Vec::new(),
        pass,
    })
}

#[derive(Debug, Serialize)]
struct PointEstimateSummary {
    schema_version: u32,
    experiment: String,
    kind: &'static str,
    seed: u64,
    trials: u64,
    failures: u64,
    max_ratio: f64,
    pass: bool,
}

fn point_estimate(cfg: &ExperimentConfig, dir: &Path) -> Result<Finished> {
    let defaults = TrialConfig::default();
    let trial_cfg = TrialConfig {
        trials: cfg.trials.unwrap_or(defaults.trials),
        seed: cfg.seed.unwrap_or(0),
        dims: cfg.dimension.map(|d| vec![d]).unwrap_or(defaults.dims),
        max_set_size: cfg.max_set_size.unwrap_or(defaults.max_set_size),
        half_width: cfg.half_width.unwrap_or(defaults.half_width),
        radii: cfg.radii.clone().unwrap_or(defaults.radii),
        exponents: cfg.exponents.clone().unwrap_or(defaults.exponents),
        tol: cfg.tolerance.unwrap_or(defaults.tol),
        quad: TimeQuadrature {
            rtol: cfg.rtol.unwrap_or(defaults.quad.rtol),
            ..defaults.quad
        },
    };
    let trials = point_estimate_trials(&trial_cfg)?;
    let name = experiment_name(0, cfg);
    write_trials_csv(&trials, std::fs::File::create(dir.join(format!("{name}.csv")))?)?;
    let failures = trials.iter().filter(|t| !t.pass).count() as u64;
    let summary = PointEstimateSummary {
        schema_version: REPORT_SCHEMA_VERSION,
        experiment: name.clone(),
        kind: cfg.kind.as_str(),
        seed: trial_cfg.seed,
        trials: trial_cfg.trials,
        failures,
        max_ratio: trials.iter().map(|t| t.ratio).fold(0.0, f64::max),
        pass: failures == 0,
    };
    write_json(dir, &format!("{name}.json"), &summary)?;
    Ok(Finished {
        pass: summary.pass,
        outputs: vec![format!("{name}.csv"), format!("{name}.json")],
        summary: format!(
            "{name} [{}] {failures} of {} trials break the chain, max ratio {:.4}",
            pass_word(summary.pass),
            summary.trials,
            summary.max_ratio
        ),
    })
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Default power: the small-data pairs `(2, 3)` and `(3, 2)`.
fn default_k(cfg: &ExperimentConfig) -> u32 {
    cfg.k.unwrap_or(if cfg.dim() == 2 { 3 } else { 2 })
}

#[derive(Debug, Serialize)]
struct NlsSummary {
    schema_version: u32,
    experiment: String,
    kind: &'static str,
    clock: &'static str,
    d: usize,
    alphas: Vec<f64>,
    k: u32,
    sign: Sign,
    seed: u64,
    amplitude: f64,
    dt: f64,
    t_final: f64,
    steps: usize,
    grid: usize,
    band: i64,
    mass_drift: f64,
    energy_drift: f64,
    tolerance: f64,
    pass: bool,
}

/// Random-phase data on the cube of half-width `half_width` (default 2),
/// scaled to `sup |φ| = amplitude`, evolved with frames written as CSV.
/// The assertion is `mass drift ≤ tolerance` (default `1e-10`).
fn nls_run(cfg: &ExperimentConfig, dir: &Path) -> Result<Finished> {
    let torus = cfg.torus()?;
    let k = default_k(cfg);
    let sign = cfg.sign.unwrap_or(Sign::Defocusing);
    let seed = cfg.seed.unwrap_or(0);
    let amplitude = cfg.amplitude.unwrap_or(0.3);
    let profile = small_data_profile(&torus, cfg.half_width.unwrap_or(2), k, seed)?;
    let sup = conserved(&profile, k, sign, 0.0)?.sup_norm;
    let mut problem = NlsProblem::new(
        profile.scaled(Complex64::new(amplitude / sup, 0.0)),
        k,
        sign,
        cfg.t_final.unwrap_or(1.0),
        cfg.dt.unwrap_or(1e-3),
    );
    let steps = problem.steps().map_err(|e| Error::config("dt", e.to_string()))?;
    problem.frame_every = (steps / cfg.frames.unwrap_or(100).max(1)).max(1);
    problem.blowup = cfg.blowup.unwrap_or(problem.blowup);
    let traj = solve(&problem)?;
    let name = experiment_name(0, cfg);
    traj.write_frames_csv(std::fs::File::create(dir.join(format!("{name}.frames.csv")))?)?;
    let tolerance = cfg.tolerance.unwrap_or(1e-10);
    let summary = NlsSummary {
        schema_version: REPORT_SCHEMA_VERSION,
        experiment: name.clone(),
        kind: cfg.kind.as_str(),
        clock: PHYSICAL_CLOCK,
        d: torus.dim(),
        alphas: torus.alphas().to_vec(),
        k,
        sign,
        seed,
        amplitude,
        dt: problem.dt,
        t_final: problem.t_final,
        steps,
        grid: traj.grid,
        band: traj.band,
        mass_drift: traj.mass_drift(),
        energy_drift: traj.energy_drift(),
        tolerance,
        pass: traj.mass_drift() <= tolerance,
    };
    write_json(dir, &format!("{name}.json"), &summary)?;
    Ok(Finished {
        pass: summary.pass,
        outputs: vec![format!("{name}.frames.csv"), format!("{name}.json")],
        summary: format!(
            "{name} [{}] mass drift {:.3e} (limit {:.1e}), energy drift {:.3e} over {steps} steps",
            pass_word(summary.pass),
            summary.mass_drift,
            tolerance,
            summary.energy_drift
        ),
    })
}

#[derive(Debug, Serialize)]
struct SmallDataSummary {
    schema_version: u32,
    experiment: String,
    kind: &'static str,
    clock: &'static str,
    d: usize,
    k: u32,
    s_c: f64,
    seed: u64,
    rows: Vec<crate::nls::SmallDataRow>,
    /// `|ratio − 1|` at the smallest nonzero `δ`.
    smallest_delta_deviation: f64,
    tolerance: f64,
    pass: bool,
}

/// The critical-norm ratio at the smallest nonzero `δ` must lie within
/// `1 ± tolerance` (default 0.1).
fn small_data(cfg: &ExperimentConfig, dir: &Path) -> Result<Finished> {
    let torus = cfg.torus()?;
    let k = default_k(cfg);
    let defaults = SmallDataSettings::default();
    let settings = SmallDataSettings {
        band: cfg.half_width.unwrap_or(defaults.band),
        sign: cfg.sign.unwrap_or(defaults.sign),
        dt: cfg.dt.unwrap_or(defaults.dt),
        t_final: cfg.t_final.unwrap_or(defaults.t_final),
        blowup: cfg.blowup.unwrap_or(defaults.blowup),
        nonlinear: true,
    };
    let deltas = cfg.deltas.clone().unwrap_or_else(|| vec![0.0, 1e-3, 1e-2, 1e-1]);
    let seed = cfg.seed.unwrap_or(0);
    let report = small_data_experiment(&torus, k, &deltas, seed, &settings)?;
    let name = experiment_name(0, cfg);
    report.write_csv(std::fs::File::create(dir.join(format!("{name}.csv")))?)?;
    let tolerance = cfg.tolerance.unwrap_or(0.1);
    let deviation = report
        .rows
        .iter()
        .filter(|r| r.delta != 0.0)
        .min_by(|a, b| a.delta.abs().total_cmp(&b.delta.abs()))
        .map(|r| (r.ratio - 1.0).abs())
        .unwrap_or(0.0);
    let summary = SmallDataSummary {
        schema_version: REPORT_SCHEMA_VERSION,
        experiment: name.clone(),
        kind: cfg.kind.as_str(),
        clock: PHYSICAL_CLOCK,
        d: report.d,
        k,
        s_c: report.s_c,
        seed,
        rows: report.rows,
        smallest_delta_deviation: deviation,
        tolerance,
        pass: deviation <= tolerance,
    };
    write_json(dir, &format!("{name}.json"), &summary)?;
    Ok(Finished {
        pass: summary.pass,
        outputs: vec![format!("{name}.csv"), format!("{name}.json")],
        summary: format!(
            "{name} [{}] critical-norm ratio deviates by {:.3e} at the smallest delta",
            pass_word(summary.pass),
            deviation
        ),
    })
}

pub const PLOT_HEADER: [&str; 3] = ["log2_scale", "log2_value", "fitted"];
pub const FIT_HEADER: [&str; 2] = ["slope", "intercept"];

/// Paths written by [`export_plots`].
#[derive(Debug, Clone, PartialEq)]
pub struct PlotFiles {
    pub table: PathBuf,
    pub fit: PathBuf,
    pub rows: usize,
}

/// Writes `<stem>.plot.csv` with `(log₂ scale, log₂ value, fitted)` per sweep
/// point and `<stem>.fit.csv` with the refitted slope and intercept. The fit
/// needs three points; shorter reports get an empty fitted column.
pub fn export_plots(report_path: &Path, out_dir: Option<&Path>) -> Result<PlotFiles> {
    let text = std::fs::read_to_string(report_path)
        .map_err(|e| Error::Usage(format!("cannot read report {}: {e}", report_path.display())))?;
    let json: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", report_path.display())))?;
    let rows = json
        .get("rows")
        .and_then(|r| r.as_array())
        .ok_or_else(|| Error::Format(format!("{} has no `rows` array", report_path.display())))?;
    let points = rows
        .iter()
        .map(|r| {
            let field = |key: &str| r.get(key).and_then(|v| v.as_f64());
            match (field("scale"), field("value")) {
                (Some(s), Some(v)) => Ok((s, v)),
                _ => Err(Error::Format("report row lacks numeric `scale` and `value`".into())),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = if points.len() >= 3 { Some(fit_scaling(&points)?) } else { None };

    let dir = match out_dir {
        Some(d) => d.to_path_buf(),
        None => report_path.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    std::fs::create_dir_all(&dir)?;
    let stem = report_path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::Usage(format!("bad report path {}", report_path.display())))?;
    let csv_err = |e: csv::Error| Error::Format(e.to_string());

    let table = dir.join(format!("{stem}.plot.csv"));
    let mut w = csv::Writer::from_path(&table).map_err(csv_err)?;
    w.write_record(PLOT_HEADER).map_err(csv_err)?;
    for &(s, v) in &points {
        let fitted = fit.map(|f| f.predict_log2(s).to_string()).unwrap_or_default();
        w.write_record([s.log2().to_string(), v.log2().to_string(), fitted]).map_err(csv_err)?;
    }
    w.flush()?;

    let fit_path = dir.join(format!("{stem}.fit.csv"));
    let mut w = csv::Writer::from_path(&fit_path).map_err(csv_err)?;
    w.write_record(FIT_HEADER).map_err(csv_err)?;
    if let Some(f) = fit {
        w.write_record([f.slope.to_string(), f.intercept.to_string()]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(PlotFiles {
        table,
        fit: fit_path,
        rows: points.len(),
    })
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Parses `args` (including the program name) and executes; returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match &cli.command {
        Command::Run { config } => {
            let parsed = match RunConfig::load(config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let opts = RunOptions {
                seed: cli.seed,
                workers: cli.workers.unwrap_or_else(default_workers),
                out_dir: cli.out_dir.clone().unwrap_or_else(|| PathBuf::from("irrtorus-out")),
            };
            match run_config(&parsed, &opts) {
                Ok(outcome) => {
                    for line in &outcome.summaries {
                        println!("{line}");
                    }
                    println!("manifest: {}", outcome.manifest_path.display());
                    for path in &outcome.failed {
                        eprintln!("assertion failed: {}", path.display());
                    }
                    if outcome.passed() {
                        0
                    } else {
                        1
                    }
                }
                Err(e @ Error::Config { .. }) => {
                    eprintln!("error: {e}");
                    2
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Command::ExportPlots { report } => match export_plots(report, cli.out_dir.as_deref()) {
            Ok(files) => {
                println!("{} ({} rows)", files.table.display(), files.rows);
                println!("{}", files.fit.display());
                0
            }
            Err(e @ (Error::Usage(_) | Error::Format(_))) => {
                eprintln!("error: {e}");
                2
            }
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
    }
}
