use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fcgram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fcgram")).args(args).output().expect("run fcgram")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| if v.is_empty() { f64::NAN } else { v.parse().unwrap() }).collect())
        .collect()
}

#[test]
fn constant_approximation_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out = fcgram(&[
        "approximate", "--function", "const1", "--n", "32", "--d", "6", "--b", "2", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let header = fs::read_to_string(dir.path().join("approximation.csv")).unwrap();
    assert!(header.starts_with("x,f,approximation,error\n"));
    let rows = csv_rows(&dir.path().join("approximation.csv"));
    assert_eq!(rows.len(), (1 << 15) + 1);
    assert!(rows.iter().all(|r| r[3].abs() <= 1e-11));
    let ext = csv_rows(&dir.path().join("extension.csv"));
    assert_eq!(ext.len(), 64);
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn missing_output_directory_is_an_io_error() {
    let out = fcgram(&["approximate", "--function", "expx", "--n", "32", "--out", "/definitely/not/here"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn decimal_and_fraction_periods_agree_and_output_is_deterministic() {
    let run = |b: &str| {
        let dir = tempfile::tempdir().unwrap();
        let out = fcgram(&[
            "approximate", "--function", "osc54", "--n", "64", "--d", "4", "--b", b, "--n-eval", "4096", "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        (
            fs::read(dir.path().join("approximation.csv")).unwrap(),
            fs::read(dir.path().join("extension.csv")).unwrap(),
        )
    };
    let a = run("1.0625");
    let b = run("17/16");
    assert_eq!(a, b);
    assert_eq!(run("17/16"), b);
}

#[test]
fn invalid_parameters_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(code(&fcgram(&["convergence", "--function", "expx", "--n-list", "", "--out", d])), 2);
    // n b = 17 is odd
    assert_eq!(code(&fcgram(&["approximate", "--n", "16", "--b", "17/16", "--out", d])), 2);
    assert_eq!(code(&fcgram(&["approximate", "--function", "sinc", "--n", "32", "--out", d])), 2);
    assert_eq!(code(&fcgram(&["approximate", "--n", "32", "--method", "spline", "--out", d])), 2);
    assert_eq!(code(&fcgram(&["approximate", "--n", "32", "--b", "2", "--d", "0", "--out", d])), 2);
}

#[test]
fn exponential_table_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = fcgram(&[
        "convergence", "--function", "expx", "--d", "3,4,5", "--b", "2", "--n-list", "2^6,2^7,2^8,2^9", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert!(text.starts_with("n,e_n_d3,noc_d3,e_n_d4,noc_d4,e_n_d5,noc_d5\n"));
    let rows = csv_rows(&dir.path().join("convergence.csv"));
    assert_eq!(rows.len(), 4);
    assert!(rows[0][2].is_nan());
    // n = 512, d = 4
    assert!((rows[3][3] / 2.40e-11 - 1.0).abs() < 0.05);
    assert!((rows[3][4] - 4.0).abs() < 0.05);
    let md = String::from_utf8_lossy(&out.stdout);
    assert!(md.contains("| n | e_n (d=3) | noc (d=3) |"));
}

#[test]
fn growing_extension_table_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let out = fcgram(&[
        "convergence", "--function", "const1", "--d", "6", "--method", "leastsquares", "--c-rule", "n/4-1",
        "--n-list", "16,32,64,128", "--out", dir.path().to_str().unwrap(), "--format", "md",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let md = fs::read_to_string(dir.path().join("convergence.md")).unwrap();
    let errors: Vec<f64> = md
        .lines()
        .skip(2)
        .map(|l| l.split('|').nth(2).unwrap().trim().parse().unwrap())
        .collect();
    assert_eq!(errors.len(), 4);
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
}

#[test]
fn manifest_reproduces_the_run() {
    let first = tempfile::tempdir().unwrap();
    let args = |dir: &str| {
        vec![
            "convergence".to_string(), "--function".into(), "runge".into(), "--eps".into(), "0.1".into(),
            "--d".into(), "5".into(), "--n-list".into(), "64,128".into(), "--n-eval".into(), "4096".into(),
            "--out".into(), dir.to_string(),
        ]
    };
    let a: Vec<String> = args(first.path().to_str().unwrap());
    let out = fcgram(&a.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&out), 0);
    let second = tempfile::tempdir().unwrap();
    let manifest = first.path().join("manifest.json");
    let out = fcgram(&[
        "convergence", "--config", manifest.to_str().unwrap(), "--out", second.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        fs::read(first.path().join("convergence.csv")).unwrap(),
        fs::read(second.path().join("convergence.csv")).unwrap()
    );
    assert_eq!(fs::read(&manifest).unwrap(), fs::read(second.path().join("manifest.json")).unwrap());
}

#[test]
fn extension_comparison_agrees_on_the_match_segment() {
    let dir = tempfile::tempdir().unwrap();
    let out = fcgram(&[
        "compare-extensions", "--d", "5", "--c", "25", "--z", "12", "--e", "25", "--n", "256", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let h = 1.0 / 256.0;
    for l in 0..5 {
        let rows = csv_rows(&dir.path().join(format!("phi_l{l}.csv")));
        assert_eq!(rows.len(), (5 + 25 + 12 + 25) * 8 + 1);
        let scale = rows.iter().fold(1.0f64, |a, r| a.max(r[2].abs()));
        for r in rows.iter().filter(|r| r[0] <= 4.0 * h + 1e-15) {
            assert!((r[1] - r[2]).abs() <= 1e-6 * scale, "l={l} x={} {} {}", r[0], r[1], r[2]);
        }
        // the Hermite curve rests at zero on the plateau
        assert!(rows.iter().filter(|r| r[0] > 31.0 * h && r[0] < 41.0 * h).all(|r| r[2] == 0.0));
    }
    let out = fcgram(&["compare-extensions", "--d", "5", "--l", "5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_passes_and_notices_tampering() {
    let out = fcgram(&["verify", "--level", "fast"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 failed"));
    let out = fcgram(&["verify", "--tamper-gram", "1e-6"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL gram"));
    assert_eq!(code(&fcgram(&["verify", "--level", "slow"])), 2);
}
