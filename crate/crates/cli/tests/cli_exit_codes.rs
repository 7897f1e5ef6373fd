use std::path::Path;
use std::process::{Command, Output};

fn wellqfi(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wellqfi")).args(args).current_dir(cwd).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn params_prints_harmonic_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = wellqfi(&["params", "--g", "80"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    for needle in ["eta         = 0.625", "xi          = -0.6", "delta_a     = 0.25", "two_mode_ok = true", "kappa"] {
        assert!(text.contains(needle), "{needle} missing from\n{text}");
    }
}

#[test]
fn sign_violation_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = wellqfi(&["validate", "--eta", "0.5", "--xi", "0.5"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("opposite signs"));
    let o = wellqfi(&["params", "--xi", "0.5", "--eta", "-1"], dir.path());
    assert_eq!(code(&o), 1);
}

#[test]
fn negative_coupling_in_sweep_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = wellqfi(
        &["sweep", "--n-particles", "4", "--target", "cqfi_interacting", "--sweep-axis", "g", "--min", "-2", "--max", "2", "--steps", "3", "--csv", "x.csv"],
        dir.path(),
    );
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("g = -2"));
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn io_and_config_problems_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&wellqfi(&["params", "--config", "missing.toml"], dir.path())), 2);
    std::fs::write(dir.path().join("bad.toml"), "[system]\nn_particles = 2.5\n").unwrap();
    assert_eq!(code(&wellqfi(&["params", "--config", "bad.toml"], dir.path())), 2);
    std::fs::write(dir.path().join("fixed.toml"), "[system]\ng = 1.0\n[sweep]\ntarget = \"cqfi_interacting\"\naxis = \"g\"\nmin = 0.0\nmax = 1.0\nsteps = 2\n").unwrap();
    let o = wellqfi(&["sweep", "--config", "fixed.toml", "--csv", "o.csv"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("fixed"));
    assert_eq!(code(&wellqfi(&["plot", "--input", "nope.csv", "--output", "o.svg"], dir.path())), 2);
    let o = wellqfi(&["sweep", "--target", "cqfi_noninteracting", "--sweep-axis", "t", "--min", "0", "--max", "1", "--steps", "2", "--csv", ""], dir.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn sweep_then_plot() {
    let dir = tempfile::tempdir().unwrap();
    let o = wellqfi(
        &["sweep", "--n-particles", "8", "--delta-eps", "5", "--target", "protocol_qfi", "--sweep-axis", "g", "--min", "0", "--max", "40", "--steps", "5", "--workers", "2", "--csv", "p.csv"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert!(csv.contains("\ng,qfi,bound,ideal\n"));
    let o = wellqfi(&["plot", "--input", "p.csv", "--output", "p.svg", "--log-y"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(dir.path().join("p.svg")).unwrap();
    roxmltree::Document::parse(&svg).unwrap();
    assert!(svg.contains("class=\"bound\""));
}
