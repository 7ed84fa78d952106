use std::path::Path;
use std::process::Command;

use logheat_cli::config::{InitialSection, TargetSection};
use logheat_cli::{load_config, parse_config, CliError, RunConfig};
use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_logheat");

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], out: &Path) -> (i32, Value) {
    let status = Command::new(BIN)
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("LOGHEAT_OUT")
        .output()
        .unwrap();
    let manifest = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    (status.status.code().unwrap(), serde_json::from_str(&manifest).unwrap())
}

fn invalid_paths(err: CliError) -> Vec<(String, String)> {
    match err {
        CliError::Invalid(v) => v.into_iter().map(|e| (e.path, e.message)).collect(),
        other => panic!("expected validation errors, got {other}"),
    }
}

#[test]
fn minimal_config_fills_defaults() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "min.toml", "seed = 5\n");
    let cfg = load_config(&p).unwrap();
    let want = RunConfig { seed: 5, ..RunConfig::default() };
    assert_eq!(cfg, want);
    assert_eq!(cfg.sde.level, 8);
    assert_eq!(cfg.domain.nodes, 128);
    assert_eq!(cfg.marks.len(), 1);
    assert_eq!((cfg.marks[0].weight, cfg.marks[0].h1, cfg.marks[0].h2), (1.0, 1.0, 0.5));
    assert!(matches!(cfg.sde.initial, InitialSection::Bump { amplitude } if amplitude == 1.0));
    assert!(matches!(cfg.target, TargetSection::TerminalMeanExceedance { .. }));
    assert!(RunConfig::default().validate().is_empty());
}

#[test]
fn integers_and_nested_tables_parse() {
    let cfg = parse_config(
        r#"
        [domain]
        length = 2
        [sde]
        initial = { kind = "mode", k = 2, amplitude = 1 }
        [[marks]]
        weight = 1
        h1 = 0.5
        h2 = 0.5
        [[marks]]
        weight = 2
        h1 = 0.25
        h2 = 0.1
        [control]
        rows = [[1, 2], [0.5, 1]]
        [target]
        kind = "terminal_ball"
        radius = 0.1
        "#,
    )
    .unwrap();
    assert!(cfg.validate().is_empty(), "{:?}", cfg.validate());
    assert_eq!(cfg.domain.length, 2.0);
    assert_eq!(cfg.initial().unwrap().coeffs()[1], 1.0);
    assert_eq!(cfg.control().unwrap().cells(), 2);
}

#[test]
fn theta_out_of_range_is_reported() {
    let cfg = parse_config("[noise]\nfamily = \"softpower\"\ntheta = 1.2\n").unwrap();
    let errs = cfg.validate();
    assert_eq!(errs.len(), 1);
    assert_eq!(errs[0].path, "noise.theta");
    assert!(errs[0].message.contains("theta must lie in [0,1)"), "{}", errs[0].message);
}

#[test]
fn h2_above_one_is_reported_with_all_other_errors() {
    let dir = TempDir::new().unwrap();
    let p = write(
        dir.path(),
        "bad.toml",
        "[noise]\ntheta = 1.2\n[[marks]]\nweight = 1.0\nh1 = 1.0\nh2 = 1.5\n[sde]\nlevel = 0\n",
    );
    let errs = invalid_paths(load_config(&p).unwrap_err());
    let paths: Vec<&str> = errs.iter().map(|(p, _)| p.as_str()).collect();
    assert!(paths.contains(&"marks[0].h2"), "{paths:?}");
    assert!(paths.contains(&"noise.theta"), "{paths:?}");
    assert!(paths.contains(&"sde.level"), "{paths:?}");
    let h2 = &errs.iter().find(|(p, _)| p == "marks[0].h2").unwrap().1;
    assert!(h2.contains("h2 <= 1"), "{h2}");
}

#[test]
fn syntax_and_unknown_fields_are_parse_errors() {
    let e = parse_config("[noise\n").unwrap_err();
    assert!(matches!(&e, CliError::Parse(m) if m.contains("line 1")), "{e}");
    assert!(matches!(parse_config("[sde]\nlevle = 3\n"), Err(CliError::Parse(_))));
    assert_eq!(e.exit_code(), 1);
}

#[test]
fn event_cap_is_checked_before_running() {
    let cfg = parse_config("[sde]\nepsilon = 1e-9\n").unwrap();
    assert!(cfg.validate().iter().any(|e| e.message.contains("jump events")));
}

#[test]
fn simulate_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let (ca, ma) = run(&["simulate", "--seed", "42"], &a);
    let (cb, mb) = run(&["simulate", "--seed", "42", "--workers", "2"], &b);
    assert_eq!((ca, cb), (0, 0));
    assert_eq!(ma["artifacts"], mb["artifacts"]);
    assert_eq!(ma["seed_root"], 42);
    for f in ["trajectory.ndjson", "trajectory.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
    }
    let (_, mc) = run(&["simulate", "--seed", "43"], &dir.path().join("c"));
    assert_ne!(ma["artifacts"], mc["artifacts"]);
}

#[test]
fn zero_budget_rate_exits_with_budget_status() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "r.toml", "[rate]\nbudget = 0\n");
    let out = dir.path().join("out");
    let (code, manifest) = run(&["rate", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(code, 3);
    assert_eq!(manifest["status"], "budget_exhausted");
    let rate: Value = serde_json::from_str(&std::fs::read_to_string(out.join("rate.json")).unwrap()).unwrap();
    assert_eq!(rate["value"], "inf");
    assert_eq!(rate["evaluations"], 0);
}

#[test]
fn verify_on_defaults_passes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("v");
    let (code, manifest) = run(&["verify"], &out);
    assert_eq!(code, 0, "{manifest}");
    let text = std::fs::read_to_string(out.join("verify.ndjson")).unwrap();
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let suites: Vec<&str> = rows.iter().map(|r| r["suite"].as_str().unwrap()).collect();
    for s in ["log_sobolev", "log_diff_pairing", "log_plus_weighted", "nonlinear_gronwall", "log_gronwall"] {
        assert!(suites.contains(&s), "{suites:?}");
    }
    assert!(rows.iter().all(|r| r["passed"] == true));
    assert!(rows.iter().filter(|r| r.get("worst_gap").is_some()).count() == 5);
}

#[test]
fn failures_still_write_a_manifest() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "bad.toml", "[[marks]]\nweight = 1.0\nh1 = 1.0\nh2 = 1.5\n");
    let out = dir.path().join("out");
    let (code, manifest) = run(&["simulate", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(code, 1);
    assert_eq!(manifest["status"], "validation_error");
    assert_eq!(manifest["incomplete"], true);
    assert!(manifest["failure"].as_str().unwrap().contains("marks[0].h2"));

    let wrong = write(dir.path(), "kind.toml", "experiment = \"rate\"\n");
    let (code, _) = run(&["simulate", "--config", wrong.to_str().unwrap()], &dir.path().join("k"));
    assert_eq!(code, 1);
}

#[test]
fn output_directory_precedence() {
    let dir = TempDir::new().unwrap();
    let from_cfg = dir.path().join("from_cfg");
    let cfg = write(dir.path(), "o.toml", &format!("out = {:?}\n", from_cfg.to_str().unwrap()));
    let from_env = dir.path().join("from_env");
    let status = Command::new(BIN)
        .args(["simulate", "--config", cfg.to_str().unwrap()])
        .env("LOGHEAT_OUT", &from_env)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert!(from_env.join("manifest.json").exists());
    assert!(!from_cfg.exists());

    let status = Command::new(BIN)
        .args(["simulate", "--config", cfg.to_str().unwrap()])
        .env_remove("LOGHEAT_OUT")
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert!(from_cfg.join("trajectory.csv").exists());
}
