use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcs")).args(args).output().expect("mcs runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const SMALL: &str = r#"{
    "model": {"rho": -0.7, "a1": 2.0, "a2": 3.0},
    "scheme": {"theta": 0.5, "lambda": 0.5, "c": 1.0, "n0": 0},
    "mesh": {"inv_h": [4, 8]},
    "domain": {"min": -6.0, "max": 4.0},
    "quadrature": {"rel_tol": 1e-8, "radius": 12.0},
    "fourier": {"points": 11},
    "bs": {"nodes": 41, "steps": 10}
}"#;

fn run_ok(mode: &str, cfg: &Path, out: &Path) -> String {
    let o = mcs(&[mode, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{mode}: {}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(out).unwrap()
}

#[test]
fn every_mode_writes_headed_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL);
    for (mode, header) in [
        ("solve", "x,y,value"),
        ("convergence", "inv_h,h,n_steps,error"),
        ("fourier", "theta1,theta2,modulus"),
        ("estimate", "j,k,x,y,e_low,e_high,e_cs,total"),
        ("bsdemo", "s1,s2,value,cross_gamma"),
    ] {
        let out = dir.path().join(format!("{mode}.csv"));
        let text = run_ok(mode, &cfg, &out);
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with(header), "{mode}");
        let first = lines.next().expect("at least one data row");
        assert!(!first.contains(';'));
        let notes = dir.path().join(format!("{mode}.csv.txt"));
        assert!(std::fs::read_to_string(notes).unwrap().starts_with('#'));
    }
}

#[test]
fn numbers_carry_17_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL);
    let text = run_ok("fourier", &cfg, &dir.path().join("f.csv"));
    for field in text.lines().nth(1).unwrap().split(',') {
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.replace('.', "").len(), 17, "{field}");
    }
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL);
    let a = run_ok("convergence", &cfg, &dir.path().join("a.csv"));
    let b = run_ok("convergence", &cfg, &dir.path().join("b.csv"));
    assert_eq!(a, b);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let fractional = SMALL.replace("\"lambda\": 0.5", "\"lambda\": 0.3").replace("[4, 8]", "[10]");
    let unknown = SMALL.replace("\"a2\": 3.0", "\"a2\": 3.0, \"a3\": 0.0");
    let empty = SMALL.replace("[4, 8]", "[]");
    for (name, text) in [("fractional", fractional.as_str()), ("unknown", unknown.as_str()), ("empty", empty.as_str()), ("broken", "{")] {
        let cfg = write(dir.path(), name, text);
        let o = mcs(&["solve", "--config", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
    }
    let o = mcs(&["solve", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let fractional_err = String::from_utf8_lossy(&mcs(&["solve", "--config", dir.path().join("fractional").to_str().unwrap()]).stderr).into_owned();
    assert!(fractional_err.contains("nearest valid lambda"), "{fractional_err}");
}

#[test]
fn inadmissible_theta_warns_but_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "t.json", &SMALL.replace("\"theta\": 0.5", "\"theta\": 0.2"));
    let o = mcs(&["fourier", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("theta1,theta2,modulus"));
}

#[test]
fn solver_failure_exits_3() {
    // Overwhelming convection defeats the Krylov solve of the start-up.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"model": {"rho": -0.7, "a1": 1e5, "a2": 1e5},
            "scheme": {"theta": 0.5, "lambda": 1.0, "n0": 1},
            "mesh": {"inv_h": [2]}, "domain": {"min": -2.0, "max": 2.0}}"#,
    );
    let o = mcs(&["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn shipped_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in std::fs::read_dir(root).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "json") {
            mcs_adi::config::load_config(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            n += 1;
        }
    }
    assert!(n >= 5);
    let reference = mcs_adi::config::load_config(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/reference.json")).unwrap();
    assert_eq!(reference.model, mcs_adi::model::ModelParams::reference());
    assert!((reference.scheme.theta - 1.0 / 3.0).abs() < 1e-15);
}
