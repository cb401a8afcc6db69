use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_discobond"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn price_default_prints_table_grid() {
    let out = run(&["price"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("V,r,t,price"));
    assert_eq!(lines.count(), 36);
    assert!(text.contains("5.000000,0.020000,0.000000,3.2"));
}

#[test]
fn price_output_is_byte_identical_across_runs() {
    let a = run(&["price"]);
    let b = run(&["price"]);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let c = bin().env("DISCOBOND_THREADS", "1").args(["price"]).current_dir(dir.path()).output().unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn dump_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = run(&["dump-config", "--variant", "mu_r=printed"]);
    assert_eq!(first.status.code(), Some(0));
    let path = write_config(dir.path(), "c.cfg", std::str::from_utf8(&first.stdout).unwrap());
    let second = run(&["dump-config", "--config", &path]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn malformed_config_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "bad.cfg", "sv = 1.0\nnot_a_key = 3\n");
    let out = run(&["price", "--config", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn unstable_step_exits_3_unless_forced() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "u.cfg", "dt = 0.01\nprice_v = 10.0\nprice_r = 0.04\n");
    let out = run(&["price", "--config", &path]);
    assert_eq!(out.status.code(), Some(3));
    let forced = run(&["price", "--config", &path, "--force"]);
    assert_eq!(forced.status.code(), Some(0));
    assert!(String::from_utf8(forced.stderr).unwrap().contains("WARNING"));
}

#[test]
fn stability_reports_unsupported_correlation() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "rho.cfg", "rho = 0.6\n");
    let csv = dir.path().join("s.csv");
    let out = run(&["stability", "--config", &path, "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("UNSUPPORTED"));
    assert!(std::fs::read_to_string(csv).unwrap().contains("UNSUPPORTED"));
    assert_eq!(run(&["price", "--config", &path]).status.code(), Some(3));
}

#[test]
fn stability_default_grid_passes() {
    let out = run(&["stability"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("verdict PASS").count(), 2);
}

#[test]
fn figures_writes_every_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["figures", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for n in [
        "4_1", "4_2", "4_3", "4_4", "4_5", "4_6", "4_7", "4_8", "4_9a", "4_9b", "4_10", "4_11",
    ] {
        let body = std::fs::read_to_string(dir.path().join(format!("figure_{n}.csv"))).unwrap();
        assert!(body.lines().count() > 10, "figure_{n}");
    }
}

#[test]
fn bad_variant_flag_exits_2() {
    assert_eq!(run(&["price", "--variant", "mu_r=sideways"]).status.code(), Some(2));
}
