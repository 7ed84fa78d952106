//! Experiment orchestration: one function per subcommand, all writing
//! through an [`ArtifactSink`] and reporting through the manifest.

use std::path::PathBuf;
use std::time::Instant;

use logheat_core::control::Control;
use logheat_core::galerkin::{moment_horizon, GalerkinSystem, SdeConfig};
use logheat_core::ldp::{estimate_rate, ldp1_diagnostic, tail_probability, RateOptions, RateStatus, TargetFunctional};
use logheat_core::lemmas::certify::{
    log_diff_pairing_suite, log_gronwall_suite, log_plus_weighted_suite, log_sobolev_suite, nonlinear_gronwall_suite,
    SuiteReport,
};
use logheat_core::lemmas::{log_gronwall_bound, nonlinear_gronwall_bound, GronwallInputs, LogGronwallInputs};
use logheat_core::rng::derive_seed;
use logheat_core::skeleton::{entropy_lt, solve_skeleton};
use logheat_core::spectral::{SpectralField, TrajectorySample};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Experiment, RunConfig, TargetSection};
use crate::error::{exit, CliError};
use crate::output::{fmt_f, headers, num, sha256_hex, ArtifactEntry, ArtifactSink, Csv};

/// Output directory used when neither the flag, the environment nor the
/// config names one.
pub const DEFAULT_OUT: &str = "logheat-out";

pub const SEED_DERIVATION: &str = "path k of an ensemble uses derive_seed(root, k) = \
splitmix64(splitmix64(root) ^ k * 0xD1B54A32D192ED03); every random stream is a ChaCha8 \
generator keyed by (path seed, path, atom, purpose) with purposes arrivals=1, thinning=2, \
certify=3, optimizer=4, controls=5; single-path runs use path 0";

/// Command-line inputs after flag and environment resolution.
#[derive(Debug, Clone, Default)]
pub struct Invocation {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    /// From `--out` or the environment.
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub version: &'static str,
    pub experiment: &'static str,
    pub config_path: Option<String>,
    /// SHA-256 of the effective config (after overrides) as canonical JSON.
    pub config_sha256: Option<String>,
    pub seed_root: Option<u64>,
    pub seed_derivation: &'static str,
    pub workers: usize,
    pub wall_time_secs: f64,
    pub status: &'static str,
    pub exit_code: i32,
    pub failure: Option<String>,
    pub incomplete: bool,
    pub artifacts: Vec<ArtifactEntry>,
}

/// Outcome of a finished experiment that did not error.
enum Outcome {
    Ok,
    Budget,
    Failed(String),
}

/// Runs `experiment` and writes the manifest whatever happens. Returns the
/// process exit code.
pub fn execute(experiment: Experiment, inv: &Invocation) -> i32 {
    let start = Instant::now();
    let loaded = load(experiment, inv);
    let out_dir = inv
        .out
        .clone()
        .or_else(|| loaded.as_ref().ok().and_then(|c| c.out.clone()))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));

    let mut manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        experiment: experiment.name(),
        config_path: inv.config.as_ref().map(|p| p.display().to_string()),
        config_sha256: None,
        seed_root: None,
        seed_derivation: SEED_DERIVATION,
        workers: 0,
        wall_time_secs: 0.0,
        status: "ok",
        exit_code: exit::OK,
        failure: None,
        incomplete: false,
        artifacts: Vec::new(),
    };

    let mut sink = match ArtifactSink::new(&out_dir) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };

    let result = loaded.and_then(|cfg| {
        manifest.config_sha256 = Some(config_hash(&cfg));
        manifest.seed_root = Some(cfg.seed);
        manifest.workers = cfg.workers;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| CliError::Io(format!("cannot build worker pool: {e}")))?;
        manifest.workers = pool.current_num_threads();
        pool.install(|| dispatch(experiment, &cfg, &mut sink))
    });

    match result {
        Ok(Outcome::Ok) => {}
        Ok(Outcome::Budget) => {
            manifest.status = "budget_exhausted";
            manifest.exit_code = exit::BUDGET;
            manifest.failure = Some(CliError::Budget.to_string());
        }
        Ok(Outcome::Failed(msg)) => {
            manifest.status = "failed";
            manifest.exit_code = exit::NUMERIC;
            manifest.failure = Some(msg);
        }
        Err(e) => {
            manifest.status = e.status();
            manifest.exit_code = e.exit_code();
            manifest.failure = Some(e.to_string());
            manifest.incomplete = true;
        }
    }
    if let Some(msg) = &manifest.failure {
        eprintln!("{}: {msg}", experiment.name());
    }
    manifest.artifacts = sink.written().to_vec();
    manifest.wall_time_secs = start.elapsed().as_secs_f64();
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    let path = sink.dir().join("manifest.json");
    if let Err(e) = std::fs::write(&path, text) {
        eprintln!("error: cannot write {}: {e}", path.display());
        return exit::VALIDATION.max(manifest.exit_code);
    }
    println!("{}: {} ({})", experiment.name(), manifest.status, sink.dir().display());
    manifest.exit_code
}

fn load(experiment: Experiment, inv: &Invocation) -> Result<RunConfig, CliError> {
    let mut cfg = match &inv.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            crate::config::parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = inv.seed {
        cfg.seed = seed;
    }
    if let Some(w) = inv.workers {
        cfg.workers = w;
    }
    let mut errors = cfg.validate();
    if let Some(kind) = cfg.experiment {
        if kind != experiment {
            errors.push(crate::config::FieldError {
                path: "experiment".into(),
                message: format!("config is for `{}`, not `{}`", kind.name(), experiment.name()),
            });
        }
    }
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(CliError::Invalid(errors))
    }
}

fn config_hash(cfg: &RunConfig) -> String {
    let mut c = cfg.clone();
    c.out = None;
    sha256_hex(serde_json::to_string(&c).expect("config serializes").as_bytes())
}

fn dispatch(experiment: Experiment, cfg: &RunConfig, sink: &mut ArtifactSink) -> Result<Outcome, CliError> {
    match experiment {
        Experiment::Simulate => simulate(cfg, sink),
        Experiment::Skeleton => skeleton(cfg, sink),
        Experiment::Rate => rate(cfg, sink),
        Experiment::Tail => tail(cfg, sink),
        Experiment::Ldp1 => ldp1(cfg, sink),
        Experiment::Moments => moments(cfg, sink),
        Experiment::Verify => verify(cfg, sink),
    }
}

fn write_trajectory(sink: &mut ArtifactSink, stem: &str, path: &TrajectorySample<f64>) -> Result<(), CliError> {
    let rows: Vec<Value> = path
        .times()
        .iter()
        .zip(path.states())
        .zip(path.jump_flags())
        .map(|((&t, u), &jump)| json!({ "t": t, "jump": jump, "coeffs": u.coeffs() }))
        .collect();
    sink.write_ndjson(&format!("{stem}.ndjson"), &rows)?;
    let mut csv = Csv::new(&headers(&["t", "jump"], "c", path.level()));
    for ((&t, u), &jump) in path.times().iter().zip(path.states()).zip(path.jump_flags()) {
        let mut cells = vec![fmt_f(t), u8::from(jump).to_string()];
        cells.extend(u.coeffs().iter().map(|&c| fmt_f(c)));
        csv.row(&cells);
    }
    sink.write_csv(&format!("{stem}.csv"), &csv)
}

fn write_control(sink: &mut ArtifactSink, name: &str, g: &Control<f64>) -> Result<(), CliError> {
    let mut csv = Csv::new(&headers(&["cell", "t_start", "t_end"], "atom", g.atoms()));
    let tau = g.cell_width();
    for (k, row) in g.rows().enumerate() {
        let mut cells = vec![k.to_string(), fmt_f(k as f64 * tau), fmt_f((k + 1) as f64 * tau)];
        cells.extend(row.iter().map(|&v| fmt_f(v)));
        csv.row(&cells);
    }
    sink.write_csv(name, &csv)
}

fn simulate(cfg: &RunConfig, sink: &mut ArtifactSink) -> Result<Outcome, CliError> {
    let system = GalerkinSystem::new(cfg.sde_config()?)?;
    let seed = derive_seed(cfg.seed, 0);
    let phi = cfg.control()?;
    let path = if phi.is_identity() {
        system.simulate(seed)?
    } else {
        system.simulate_controlled(&phi, seed)?
    };
    write_trajectory(sink, "trajectory", &path)?;
    Ok(Outcome::Ok)
}

fn skeleton(cfg: &RunConfig, sink: &mut ArtifactSink) -> Result<Outcome, CliError> {
    let system = GalerkinSystem::new(cfg.sde_config()?)?;
    let g = cfg.control()?;
    let entropy = entropy_lt(&g, &system.config().marks)?;
    let path = solve_skeleton(&system, &g)?;
    write_trajectory(sink, "skeleton", &path)?;
    write_control(sink, "control.csv", &g)?;
    sink.write_json(
        "skeleton.json",
        &json!({
            "entropy": num(entropy),
            "energy": num(path.energy(&system.config().domain)),
            "terminal": path.terminal().coeffs(),
            "steps": path.len() - 1,
        }),
    )?;
    Ok(Outcome::Ok)
}

/// Noise-free solution of the deterministic equation, used as the reference
/// state for relative targets.
fn uncontrolled_terminal(base: &SdeConfig<f64>) -> Result<SpectralField<f64>, CliError> {
    let system = GalerkinSystem::new(base.clone())?;
    let identity = Control::constant(base.horizon, 1, base.marks.len(), 1.0)?;
    Ok(solve_skeleton(&system, &identity)?.terminal().clone())
}

fn resolve_target(cfg: &RunConfig, base: &SdeConfig<f64>) -> Result<TargetFunctional<f64>, CliError> {
    Ok(match &cfg.target {
        TargetSection::WholeSpace => TargetFunctional::WholeSpace,
        TargetSection::TerminalBall { radius, center } => TargetFunctional::TerminalBall {
            center: match center {
                Some(c) => SpectralField::new(c.clone())?,
                None => uncontrolled_terminal(base)?,
            },
            radius: *radius,
        },
        TargetSection::TerminalMeanExceedance { level, shift } => {
            let level = match (level, shift) {
                (Some(l), _) => *l,
                (None, Some(d)) => uncontrolled_terminal(base)?.coeffs()[0] + d,
                (None, None) => unreachable!("validated"),
            };
            TargetFunctional::TerminalMeanExceedance { level }
        }
    })
}

fn target_json(t: &TargetFunctional<f64>) -> Value {
    match t {
        TargetFunctional::WholeSpace => json!({ "kind": "whole_space" }),
        TargetFunctional::TerminalBall { center, radius } => {
            json!({ "kind": "terminal_ball", "radius": radius, "center": center.coeffs() })
        }
        TargetFunctional::TerminalMeanExceedance { level } => {
            json!({ "kind": "terminal_mean_exceedance", "level": level })
        }
    }
}

fn rate(cfg: &RunConfig, sink: &mut ArtifactSink) -> Result<Outcome, CliError> {
    let base = cfg.sde_config()?;
    let target = resolve_target(cfg, &base)?;
    let system = GalerkinSystem::new(base)?;
    let r = &cfg.rate;
    let opts = RateOptions {
        cells: r.cells,
        budget: r.budget,
        seed: cfg.seed,
        restarts: r.restarts,
        g_max: r.g_max,
        tolerance: r.tolerance,
        ..RateOptions::default()
    };
    let est = estimate_rate(&system, &target, &opts)?;
    sink.write_json(
        "rate.json",
        &json!({
            "value": num(est.value),
            "status": est.status,
            "evaluations": est.evaluations,
            "violation": num(est.violation),
            "target": target_json(&target),
        }),
    )?;
    let trace: Vec<Value> = est
        .trace
        .iter()
        .map(|e| {
            json!({
                "evaluation": e.evaluation,
                "round": e.round,
                "penalty": num(e.penalty),
                "entropy": num(e.entropy),
                "violation": num(e.violation),
                "objective": num(e.objective),
            })
        })
        .collect();
    sink.write_ndjson("trace.ndjson", &trace)?;
    write_control(sink, "control.csv", &est.control)?;
    Ok(match est.status {
        RateStatus::Converged => Outcome::Ok,
        RateStatus::BudgetExhausted => Outcome::Budget,
    })
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn opt_csv(x: Option<f64>) -> String {
    x.map_or_else(String::new, fmt_f)
}

fn tail(cfg: &RunConfig, sink: &mut ArtifactSink) -> Result<Outcome, CliError> {
    let base = cfg.sde_config()?;
    let target = resolve_target(cfg, &base)?;
    let rows = tail_probability(&base, &target, &cfg.tail.epsilons, cfg.tail.paths, cfg.seed)?;
    let ndjson: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "epsilon": r.epsilon,
                "paths": r.paths,
                "hits": r.hits,
                "p_hat": r.p_hat,
                "lower": r.lower,
                "upper": r.upper,
                "eps2_log_p": opt_num(r.scaled_log),
                "eps_log_p": opt_num(r.eps_log),
                "undersampled": r.undersampled,
            })
        })
        .collect();
    sink.write_ndjson("tail.ndjson", &ndjson)?;
    let header: Vec<String> = ["epsilon", "paths", "hits", "p_hat", "lower", "upper", "eps2_log_p", "eps_log_p"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut csv = Csv::new(&header);
    for r in &rows {
        csv.row(&[
            fmt_f(r.epsilon),
            r.paths.to_string(),
            r.hits.to_string(),
            fmt_f(r.p_hat),
            fmt_f(r.lower),
            fmt_f(r.upper),
            opt_csv(r.scaled_log),
            opt_csv(r.eps_log),
        ]);
    }
    sink.write_csv("tail.csv", &csv)?;
    Ok(Outcome::Ok)
}

fn ldp1(cfg: &RunConfig, sink: &mut ArtifactSink) -> Result<Outcome, CliError> {
    let base = cfg.sde_config()?;
    let phi = cfg.control()?;
    let l = &cfg.ldp1;
    let rows = ldp1_diagnostic(&base, &phi, cfg.control.class_bound, &l.epsilons, l.paths, l.delta, cfg.seed)?;
    let ndjson: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "epsilon": r.epsilon,
                "paths": r.metric.samples,
                "mean_rho": num(r.metric.mean),
                "std_err": num(r.metric.std_err),
                "ci_lower": num(r.metric.lower),
                "ci_upper": num(r.metric.upper),
                "delta": r.delta,
                "exceedance": r.exceedance,
                "exceedance_lower": r.exceedance_lower,
                "exceedance_upper": r.exceedance_upper,
            })
        })
        .collect();
    sink.write_ndjson("ldp1.ndjson", &ndjson)?;
    let header: Vec<String> = [
        "epsilon",
        "paths",
        "mean_rho",
        "std_err",
        "ci_lower",
        "ci_upper",
        "delta",
        "exceedance",
        "exceedance_lower",
        "exceedance_upper",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut csv = Csv::new(&header);
    for r in &rows {
        csv.row(&[
            fmt_f(r.epsilon),
            r.metric.samples.to_string(),
            fmt_f(r.metric.mean),
            fmt_f(r.metric.std_err),
            fmt_f(r.metric.lower),
            fmt_f(r.metric.upper),
            fmt_f(r.delta),
            fmt_f(r.exceedance),
            fmt_f(r.exceedance_lower),
            fmt_f(r.exceedance_upper),
        ]);
    }
    sink.write_csv("ldp1.csv", &csv)?;
    Ok(Outcome::Ok)
}

fn moments(cfg: &RunConfig, sink: &mut ArtifactSink) -> Result<Outcome, CliError> {
    let mut sde = cfg.sde_config()?;
    let m = &cfg.moments;
    if m.critical_horizon {
        sde.horizon = moment_horizon(m.p, sde.noise.theta);
        sde.max_step = sde.max_step.min(sde.horizon);
    }
    let system = GalerkinSystem::new(sde)?;
    let report = logheat_core::galerkin::moment_estimate(&system, m.p, m.paths, cfg.seed)?;
    let estimate = |e: &logheat_core::galerkin::Estimate| {
        json!({
            "mean": num(e.mean),
            "std_err": num(e.std_err),
            "lower": num(e.lower),
            "upper": num(e.upper),
            "samples": e.samples,
        })
    };
    sink.write_json(
        "moments.json",
        &json!({
            "p": report.p,
            "horizon": report.horizon,
            "level": report.level,
            "paths": m.paths,
            "sup_moment": estimate(&report.sup_moment),
            "dissipation": estimate(&report.dissipation),
            "blow_ups": report.blow_ups.iter().map(|b| json!({
                "path": b.path,
                "time": num(b.time),
                "norm_history": b.norm_history.iter().map(|&x| num(x)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
    )?;
    let header: Vec<String> = ["quantity", "mean", "std_err", "lower", "upper", "samples"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut csv = Csv::new(&header);
    for (name, e) in [("sup_norm_p", &report.sup_moment), ("dissipation", &report.dissipation)] {
        csv.row(&[
            name.to_string(),
            fmt_f(e.mean),
            fmt_f(e.std_err),
            fmt_f(e.lower),
            fmt_f(e.upper),
            e.samples.to_string(),
        ]);
    }
    sink.write_csv("moments.csv", &csv)?;
    if report.exploded() {
        return Ok(Outcome::Failed(format!(
            "{} of {} paths blew up",
            report.blow_ups.len(),
            m.paths
        )));
    }
    Ok(Outcome::Ok)
}

/// Closed-form checks: the Bihari bound with `C = 1`, `α = 1/2`, `f = 0`,
/// `g = 1` on `[0,1]` is `2.25`; the log-Gronwall bound with `h = e`,
/// `g = 1` is `e^e`.
pub fn gronwall_spot_values() -> logheat_core::Result<(f64, f64)> {
    let times: Vec<f64> = (0..=512).map(|k| k as f64 / 512.0).collect();
    let n = times.len();
    let bihari = nonlinear_gronwall_bound(&GronwallInputs {
        c: 1.0,
        alpha: 0.5,
        times: times.clone(),
        f: vec![0.0; n],
        g: vec![1.0; n],
    })?;
    let log = log_gronwall_bound(&LogGronwallInputs {
        times,
        h: vec![std::f64::consts::E; n],
        f: vec![0.0; n],
        g: vec![1.0; n],
        a: vec![0.0; n],
    })?;
    Ok((bihari, log))
}

/// Spot values must match to this absolute tolerance.
pub const SPOT_TOLERANCE: f64 = 1e-12;

fn verify(cfg: &RunConfig, sink: &mut ArtifactSink) -> Result<Outcome, CliError> {
    let v = &cfg.verify;
    let seed = |k: u64| derive_seed(cfg.seed, k);
    let reports: Vec<SuiteReport> = vec![
        log_sobolev_suite(v.log_sobolev, seed(0))?,
        log_diff_pairing_suite(v.log_diff_pairing, seed(1))?,
        log_plus_weighted_suite(v.log_plus_weighted, seed(2))?,
        nonlinear_gronwall_suite(v.nonlinear_gronwall, seed(3))?,
        log_gronwall_suite(v.log_gronwall, seed(4))?,
    ];
    let mut rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "suite": r.suite,
                "instances": r.instances,
                "worst_gap": num(r.worst_gap),
                "worst_instance": r.worst_instance,
                "failures": r.failures,
                "tolerance": r.tolerance,
                "passed": r.passed,
            })
        })
        .collect();
    let (bihari, log) = gronwall_spot_values()?;
    let e_e = std::f64::consts::E.powf(std::f64::consts::E);
    let mut spots_ok = true;
    for (name, got, want) in [("bihari_spot", bihari, 2.25), ("log_gronwall_spot", log, e_e)] {
        let ok = (got - want).abs() <= SPOT_TOLERANCE;
        spots_ok &= ok;
        rows.push(json!({
            "suite": name,
            "value": got,
            "expected": want,
            "error": (got - want).abs(),
            "tolerance": SPOT_TOLERANCE,
            "passed": ok,
        }));
    }
    sink.write_ndjson("verify.ndjson", &rows)?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.suite.as_str()).collect();
    if !failed.is_empty() || !spots_ok {
        let mut names = failed.join(", ");
        if !spots_ok {
            names.push_str(if names.is_empty() { "spot values" } else { ", spot values" });
        }
        return Ok(Outcome::Failed(format!("certification failed: {names}")));
    }
    Ok(Outcome::Ok)
}
