use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn form_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../forms")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polargap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_form(cmd: &str, form: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--form", form.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn temp_form(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_labels() {
    let cases = [
        ("hyperbolic_gf2_d4.form", "hyperbolic, n=2, e=0, p=0"),
        ("parabolic_gf2_d5.form", "parabolic, n=2, e=0, p=1"),
        ("elliptic_gf2_d6.form", "elliptic, n=2, e=2, p=0"),
        ("mixed_f2t_d5.form", "(e,p)=(2,1)-orthogonal, n=1"),
    ];
    for (file, expected) in cases {
        let o = run_form("classify", &form_dir().join(file), &[]);
        assert_eq!(o.status.code(), Some(0), "{file}");
        assert!(stdout(&o).contains(expected), "{file}: {}", stdout(&o));
    }
}

#[test]
fn classify_structured() {
    let o = run_form("classify", &form_dir().join("mixed_f2t_d5.form"), &["--output", "structured"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!((v["n"].as_u64(), v["e"].as_u64(), v["p"].as_u64()), (Some(1), Some(2), Some(1)));
}

#[test]
fn parse_errors_exit_two() {
    let f = temp_form("GF 2\n2\n0,1\n");
    let o = run_form("classify", f.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    assert_eq!(run_form("classify", Path::new("/no/such/form"), &[]).status.code(), Some(2));
}

#[test]
fn unknown_flags_and_zero_trials_are_rejected() {
    let path = form_dir().join("hyperbolic_gf2_d4.form");
    assert_eq!(run_form("verify", &path, &["--trials", "0"]).status.code(), Some(2));
    assert_eq!(run_form("verify", &path, &["--budget", "0"]).status.code(), Some(2));
    assert_eq!(run_form("verify", &path, &["--frobnicate"]).status.code(), Some(2));
}

#[test]
fn degenerate_form_exits_three_before_any_check() {
    let path = form_dir().join("degenerate_gf3_d3.form");
    for cmd in ["classify", "verify"] {
        let o = run_form(cmd, &path, &["--output", "structured"]);
        assert_eq!(o.status.code(), Some(3), "{cmd}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn infinite_field_is_refused_outside_classify() {
    let path = form_dir().join("mixed_f2t_d5.form");
    for cmd in ["geometry", "gaps", "verify"] {
        let o = run_form(cmd, &path, &[]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("infinite"));
    }
}

#[test]
fn verify_elliptic_reconciles() {
    let o = run_form("verify", &form_dir().join("elliptic_gf2_d6.form"), &["--output", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let summary: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["algebraic"], serde_json::json!([2, 2, 0]));
    assert_eq!(summary["intrinsic"], serde_json::json!([2, 2, 0]));
}

#[test]
fn verify_parabolic_has_three_point_hyperbolic_lines() {
    let o = run_form("verify", &form_dir().join("parabolic_gf2_d5.form"), &["--output", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let size = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .find(|v| v["check-id"] == "geometry.hyperbolic-line-size")
        .expect("size check present");
    assert_eq!(size["status"], "pass");
    assert!(size["values"].to_string().contains('3'));
}

#[test]
fn verify_budget_exhaustion_exits_five() {
    let path = form_dir().join("elliptic_gf2_d6.form");
    assert_eq!(run_form("verify", &path, &["--budget", "5"]).status.code(), Some(5));
    assert_eq!(run_form("verify", &path, &["--budget", "30"]).status.code(), Some(5));
}

#[test]
fn structured_output_is_deterministic() {
    let path = form_dir().join("odd_gf3_d5.form");
    let args = ["--output", "structured", "--seed", "11", "--trials", "4"];
    let a = run_form("verify", &path, &args);
    let b = run_form("verify", &path, &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gaps_and_geometry() {
    let o = run_form("gaps", &form_dir().join("parabolic_gf2_d5.form"), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("reconciled"));
    let g = run_form("geometry", &form_dir().join("hyperbolic_gf2_d4.form"), &[]);
    let text = stdout(&g);
    assert!(text.starts_with("polar-space v1"));
    assert!(text.contains("points 9") && text.contains("lines 6"));
}

#[test]
fn catalog_passes_with_gap_values_independent_of_trials() {
    let rows = |trials: &str| {
        let o = run(&["catalog", "--equivalents", "0", "--output", "structured", "--trials", trials]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
            .lines()
            .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
            .filter(|v| v["record"] == "catalog-item")
            .map(|v| (v["form"].clone(), v["algebraic"].clone(), v["intrinsic"].clone()))
            .collect::<Vec<_>>()
    };
    let few = rows("2");
    assert_eq!(few.len(), 19);
    assert_eq!(few, rows("6"));
}
