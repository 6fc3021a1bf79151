//! End-to-end tests of the command-line interface: exit codes, artifact
//! layout, and bit-for-bit reproducibility under a fixed seed.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rankrev")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "rankrev-cli-{tag}-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    let line = text.lines().last().expect("stdout has output");
    serde_json::from_str(line).expect("stdout line is JSON")
}

fn gen_matrix(dir: &Path, args: &[&str]) -> PathBuf {
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    let out_flag = dir.to_str().unwrap();
    full.extend_from_slice(&["--out", out_flag]);
    let out = run(&full);
    assert!(out.status.success(), "gen failed: {:?}", out);
    PathBuf::from(String::from_utf8_lossy(&out.stdout).trim().to_string())
}

#[test]
fn missing_input_exits_2_and_names_path() {
    let out = run(&[
        "factor",
        "--input",
        "/no/such/file.mtx",
        "--mode",
        "ge",
        "--k",
        "2",
        "--out",
        "/tmp/unused-rankrev-out",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/no/such/file.mtx"), "stderr: {err}");
}

#[test]
fn factor_block_diagonal_makes_no_swaps() {
    let dir = tmpdir("factor");
    let input = gen_matrix(&dir, &["--matrix", "example-blockdiag"]);
    let out_dir = dir.join("fac");
    let out = run(&[
        "factor",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "ge",
        "--k",
        "2",
        "--gamma",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary = stdout_json(&out);
    assert_eq!(summary["path_length"], 0);
    for f in ["a11.mtx", "metadata.txt", "selection.json", "report.jsonl"] {
        assert!(out_dir.join(f).exists(), "missing {f}");
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn metric_of_strict_search_output_is_one() {
    let dir = tmpdir("metric");
    let input = gen_matrix(&dir, &["--matrix", "gaussian", "--m", "12", "--n", "12", "--seed", "5"]);
    let fac = dir.join("fac");
    let out = run(&[
        "factor",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "ge",
        "--k",
        "3",
        "--gamma",
        "1",
        "--out",
        fac.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let sel = fac.join("selection.json");
    let out = run(&[
        "metric",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "ge",
        "--selection",
        sel.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary = stdout_json(&out);
    let mu_b = summary["mu_b"].as_f64().unwrap();
    assert!((mu_b - 1.0).abs() <= 1e-9, "mu_b = {mu_b}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn rank_deficient_input_exits_3() {
    // A rank-1 coordinate matrix.
    let dir = tmpdir("rankdef");
    let path = dir.join("rank1.mtx");
    std::fs::write(
        &path,
        "%%MatrixMarket matrix array real general\n3 3\n1\n1\n1\n1\n1\n1\n1\n1\n1\n",
    )
    .unwrap();
    let out = run(&[
        "factor",
        "--input",
        path.to_str().unwrap(),
        "--mode",
        "qr",
        "--k",
        "2",
        "--out",
        dir.join("f").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_detects_bad_pivot() {
    let dir = tmpdir("verify");
    let input = gen_matrix(&dir, &["--matrix", "necessity-spectral", "--mu", "4"]);
    // Leading 2x2 pivot of the spectral witness is not locally maximal.
    let out = run(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "ge",
        "--k",
        "2",
        "--gamma",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let summary = stdout_json(&out);
    assert_eq!(summary["passed"], false);
    let worst = summary["worst_ratio"].as_f64().unwrap();
    assert!((worst - 16.0).abs() <= 1e-8, "worst {worst}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn svd_emits_csv() {
    let dir = tmpdir("svd");
    let input = gen_matrix(&dir, &["--matrix", "gaussian", "--m", "6", "--n", "4", "--seed", "1"]);
    let out = run(&["svd", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("j,sigma\n"));
    assert_eq!(text.lines().count(), 5);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn experiments_are_reproducible_given_seed() {
    let dir = tmpdir("repro");
    let out1 = dir.join("run1");
    let out2 = dir.join("run2");
    for out_dir in [&out1, &out2] {
        let out = run(&[
            "experiment",
            "--name",
            "metric-hist",
            "--trials",
            "4",
            "--m",
            "12",
            "--n",
            "12",
            "--k",
            "4",
            "--seed",
            "99",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{out:?}");
    }
    for f in ["metric_hist.csv", "metric_hist_bins.csv", "metric_hist_summary.json"] {
        let a = std::fs::read(out1.join(f)).unwrap();
        let b = std::fs::read(out2.join(f)).unwrap();
        assert_eq!(a, b, "artifact {f} differs between identical runs");
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn pathlen_experiment_produces_histogram() {
    let dir = tmpdir("pathlen");
    let out = run(&[
        "experiment",
        "--name",
        "pathlen-sweep",
        "--trials",
        "40",
        "--seed",
        "3",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let summary = stdout_json(&out);
    assert_eq!(summary["experiment"], "pathlen_sweep");
    assert!(dir.join("pathlen_hist.csv").exists());
    let csv = std::fs::read_to_string(dir.join("pathlen_sweep.csv")).unwrap();
    assert!(csv.starts_with("index,rows,cols,path_length,end_log_volume\n"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn remaining_experiments_smoke() {
    let dir = tmpdir("smoke");
    let out = run(&[
        "experiment",
        "--name",
        "timing-sweep",
        "--n",
        "60",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    assert!(dir.join("timing_sweep.csv").exists());

    let out = run(&[
        "experiment",
        "--name",
        "kernel-sv",
        "--grid",
        "40",
        "--k",
        "3",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let summary = stdout_json(&out);
    for kernel in summary["kernels"].as_array().unwrap() {
        assert_eq!(kernel["sandwich_passed"], true);
    }
    assert!(dir.join("kernel_sv_runge_beta100.csv").exists());

    let out = run(&[
        "experiment",
        "--name",
        "sharpness",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let summary = stdout_json(&out);
    assert_eq!(summary["principal_certified"], true);
    let worst = summary["worst_neighbor_ratio"].as_f64().unwrap();
    assert!((worst - 0.5).abs() <= 1e-10);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn kahan_experiment_reports_exponential_metrics() {
    let dir = tmpdir("kahan");
    let out = run(&[
        "experiment",
        "--name",
        "kahan",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let summary = stdout_json(&out);
    let qr_metric = summary["qr_metric"].as_f64().unwrap();
    let qr_bound = summary["qr_lower_bound"].as_f64().unwrap();
    assert!(qr_metric >= qr_bound);
    assert_eq!(summary["cpqr_no_pivot"], true);
    assert_eq!(summary["gecp_no_pivot"], true);
    std::fs::remove_dir_all(dir).unwrap();
}
