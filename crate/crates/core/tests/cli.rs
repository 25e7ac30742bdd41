use std::path::Path;
use std::process::{Command, Output};

fn fracdrum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracdrum")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Output without the banner line.
fn body(s: &str) -> Vec<String> {
    s.lines().filter(|l| !l.starts_with('#')).map(String::from).collect()
}

#[test]
fn dim_golden() {
    let o = fracdrum(&["dim", "--r", "1/3,1/3", "--d", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "b = 0.6309297535714574\n");
}

#[test]
fn gasket_dimension_is_log3_over_log2() {
    let o = fracdrum(&["dim", "--r", "1/2,1/2,1/2", "--d", "2"]);
    let b: f64 = stdout(&o).trim().strip_prefix("b = ").unwrap().parse().unwrap();
    assert!((b - 3f64.ln() / 2f64.ln()).abs() < 1e-15);
}

#[test]
fn estimate_golden_and_thread_independent() {
    let args = ["--threads", "1", "rhc", "--domain", "interval:0,1", "--alpha", "1.5", "--t", "0.01", "--n", "20000"];
    let one = body(&stdout(&fracdrum(&args)));
    let mut args2 = args;
    args2[1] = "3";
    assert_eq!(one, body(&stdout(&fracdrum(&args2))));
    assert_eq!(one, ["rhc value=0.92775 stderr=0.001830755160643529 n=20000 seed=1 depth=0"]);
}

#[test]
fn banner_goes_to_stderr_for_machine_formats() {
    let o = fracdrum(&["--format", "csv", "rhc", "--domain", "cantor", "--alpha", "1.5", "--t", "0.01", "--n", "20000"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("# schema=1\ndomain,alpha,t,estimator,value,stderr,deficit,n,seed,error\n"));
    assert!(out.contains("cantor,1.5,0.01,rhc,0.92775,"));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("# fracdrum rhc "));
}

#[test]
fn exit_codes() {
    assert_eq!(fracdrum(&["rhc", "--domain", "interval:0,1", "--alpha", "2.5", "--t", "0.01"]).status.code(), Some(2));
    assert_eq!(fracdrum(&["dim", "--r", "1/3,x", "--d", "1"]).status.code(), Some(2));
    let o = fracdrum(&["skbm", "--domain", "cantor", "--alpha", "1.5", "--t", "0.01", "--n", "1000"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fracdrum(&["experiment", "--plan", "/nonexistent/plan.txt"]).status.code(), Some(5));
}

#[test]
fn oracles_print_frozen_values() {
    let o = stdout(&fracdrum(&["oracle-rhc", "--alpha", "1", "--t", "0.1"]));
    assert!(o.contains("Q = 0.78964511649"), "{o}");
    let o = stdout(&fracdrum(&["oracle-skbm", "--alpha", "1", "--t", "0.01"]));
    assert!(o.contains("Q = 0.93438213716"), "{o}");
    let o = stdout(&fracdrum(&["perimeter", "--domain", "interval:0,1", "--alpha", "0.3"]));
    assert!(o.contains("Per = 1.23517322897"), "{o}");
}

#[test]
fn renewal_reports_span_and_asymptote() {
    let o = stdout(&fracdrum(&["renewal", "--c", "0.5,0.5", "--gamma", "ln2,ln3"]));
    assert!(o.contains("non-arithmetic"));
    let limit: f64 = o
        .lines()
        .find_map(|l| l.strip_prefix("asymptote: f(∞) = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((limit - 4.0 / 6f64.ln()).abs() < 1e-9);

    let o = stdout(&fracdrum(&["renewal", "--c", "0.5,0.5", "--gamma", "1,2"]));
    assert!(o.contains("arithmetic, span 1"));
    assert!(o.contains("periodic, period 1, mean 1.33333333333"));
}

#[test]
fn config_file_fills_missing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "schema = 1\ndomain = interval:0,1\nalpha = 1.5\nt = 0.05\nn = 20000\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&fracdrum(&["--config", cfg, "rhc", "--t", "0.01"]));
    let explicit = stdout(&fracdrum(&["rhc", "--domain", "interval:0,1", "--alpha", "1.5", "--t", "0.01", "--n", "20000"]));
    assert_eq!(body(&from_file), body(&explicit));
    assert!(!Path::new(cfg).with_extension("csv").exists());
}
