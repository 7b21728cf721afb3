use std::process::{Command, Output};

fn qsvm_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsvm-lab"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("BANKNOTE_CSV")
        .output()
        .unwrap()
}

fn six_nine_dir() -> String {
    format!("{}/../../data/six_nine", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn six_nine_qsvm_json_on_stdout() {
    let dir = six_nine_dir();
    let out = qsvm_lab(&[
        "--dataset",
        "six-nine",
        "--method",
        "qsvm",
        "--data-path",
        &dir,
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "qsvm-lab.report/1");
    assert_eq!(v["total"], 8);
    assert!(String::from_utf8_lossy(&out.stderr).contains("accuracy"));
}

#[test]
fn output_is_deterministic() {
    let dir = six_nine_dir();
    let args = [
        "--dataset",
        "six-nine",
        "--method",
        "innerprod",
        "--layers",
        "1..4",
        "--shots",
        "256",
        "--data-path",
        &dir,
    ];
    let a = qsvm_lab(&args);
    let b = qsvm_lab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_out_writes_points_and_layers() {
    let tmp = tempfile::tempdir().unwrap();
    let target = tmp.path().join("sweep.csv");
    let dir = six_nine_dir();
    let out = qsvm_lab(&[
        "--dataset",
        "six-nine",
        "--method",
        "innerprod",
        "--layers",
        "1..3",
        "--format",
        "csv",
        "--out",
        target.to_str().unwrap(),
        "--data-path",
        &dir,
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        std::fs::read_to_string(&target).unwrap().lines().count(),
        1 + 3 * 8
    );
    assert_eq!(
        std::fs::read_to_string(tmp.path().join("sweep_layers.csv"))
            .unwrap()
            .lines()
            .count(),
        4
    );
}

#[test]
fn config_errors_exit_2() {
    let dir = six_nine_dir();
    for extra in [
        &["--method", "qsvm", "--preprocess", "kmeans"][..],
        &["--method", "qsvm", "--layers", "3"],
        &["--method", "innerprod", "--post-select", "off"],
        &["--method", "qsvm", "--gamma", "-1"],
    ] {
        let mut args = vec!["--dataset", "six-nine", "--data-path", &dir];
        args.extend_from_slice(extra);
        assert_eq!(qsvm_lab(&args).status.code(), Some(2), "{extra:?}");
    }
}

#[test]
fn missing_data_exits_3() {
    let out = qsvm_lab(&[
        "--dataset",
        "banknote",
        "--method",
        "qsvm",
        "--preprocess",
        "averages",
        "--data-path",
        "/nonexistent/banknote.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
