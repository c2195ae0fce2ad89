use std::process::{Command, Output};

use dunkl_lab::harness::report::VerificationReport;
use dunkl_lab::harness::suites::{run_suite, Suite, SuiteConfig};
use dunkl_lab::harness::sweep::SweepRow;
use dunkl_lab::QuadratureSpec;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dunkl-verify")).args(args).output().expect("dunkl-verify runs")
}

#[test]
fn empty_suite_name_is_a_usage_error() {
    let out = cli(&["verify", "--suite", ""]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty suite name"));
}

#[test]
fn kernels_suite_passes_and_writes_its_report() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("k.json");
    let out = cli(&["verify", "--suite", "kernels", "--seed", "7", "--json", json.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let rep = VerificationReport::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(rep.suite, "kernels");
    assert_eq!(rep.seed, 7);
    assert!(rep.pass && rep.records.iter().all(|r| r.pass));
}

#[test]
fn under_resolved_quadrature_is_caught() {
    let cfg = SuiteConfig { quadrature: QuadratureSpec { jacobi_order: 4, ..QuadratureSpec::default() }, ..SuiteConfig::default() };
    let rep = run_suite(Suite::All, &cfg).unwrap();
    assert!(!rep.pass);
    assert!(rep.failures().count() >= 1);
}

#[test]
fn sweep_csv_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"lambdas": [0.5], "alphas": [1.0, 2.0], "ps": [1.0, 2.0],
            "fields": [{"family": "kernel_p"}, {"family": "cauchy", "m": 1, "y0": 1.0}]}"#,
    )
    .unwrap();
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let out = cli(&["sweep", "--config", cfg.to_str().unwrap(), "--csv", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], SweepRow::CSV_HEADER);
    assert_eq!(lines.len(), 1 + 8);
    assert!(!text.contains('\r'));
    for l in &lines[1..] {
        let cols: Vec<&str> = l.split(',').collect();
        assert_eq!(cols.len(), 8);
        assert_eq!(cols[7], "true", "{l}");
        assert_eq!(cols[6], "exact_beta");
    }
    // homogeneous rows: ratio = α B(2λ+1, α) = α B(2, α) = 1/(α+1)
    for l in lines.iter().filter(|l| l.contains("kernel_p")) {
        let cols: Vec<&str> = l.split(',').collect();
        let (alpha, ratio): (f64, f64) = (cols[1].parse().unwrap(), cols[4].parse().unwrap());
        assert!((ratio - 1.0 / (alpha + 1.0)).abs() < 1e-8, "{l}");
    }
}

#[test]
fn flags_override_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"lambdas": [0.5], "alphas": [1.0], "ps": [2.0], "fields": [{"family": "kernel_q"}]}"#).unwrap();
    let out = cli(&["sweep", "--config", cfg.to_str().unwrap(), "--ps", "1.5,4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(!text.contains(",2.0000000000000000e0,kernel_q"));
}

#[test]
fn inadmissible_sweeps_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"lambdas": [0.5], "ps": [0.5], "fields": [{"family": "cauchy", "m": 0}]}"#).unwrap();
    let out = cli(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not admitted"));
}

#[test]
fn kernel_table_columns() {
    let out = cli(&["kernel", "--lambda", "0.5", "--grid", "-2:2:5", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,z_or_xi,re,im,abs_err_vs_alt_representation");
    assert_eq!(lines.len(), 6);
    for l in &lines[1..] {
        let err: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!(err < 1e-12);
    }
    let bad = cli(&["kernel", "--lambda", "0.5", "--grid", "2:-2:5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn field_tables_cover_the_standard_grid() {
    let out = cli(&["field", "--family", "cauchy", "--m", "1", "--y0", "1", "--lambda", "0.5", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,re_u,im_v"));
    assert_eq!(text.lines().count(), 1 + 45);
    let out = cli(&["field", "--family", "poisson", "--lambda", "0.5", "--csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().next(), Some("lambda,x,y,t,P,Q"));
}
