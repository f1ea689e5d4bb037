use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn wavecomplex(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavecomplex")).current_dir(dir).args(args).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = wavecomplex(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "logistic", "--r", "4", "--n", "4096", "--seed", "7", "-o", "a.csv"]);
    ok(d, &["generate", "logistic", "--r", "4", "--n", "4096", "--seed", "7", "-o", "b.csv"]);
    let a = fs::read(d.join("a.csv")).unwrap();
    assert_eq!(a, fs::read(d.join("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 4096);
    let first = text.lines().next().unwrap();
    let mantissa = first.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{first}");

    let noisy1 = ok(d, &["generate", "lorenz", "--n", "256", "--noise-var", "1", "--seed", "1"]);
    let noisy2 = ok(d, &["generate", "lorenz", "--n", "256", "--noise-var", "1", "--seed", "2"]);
    assert_ne!(noisy1, noisy2);
}

#[test]
fn exit_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let code = |args: &[&str]| wavecomplex(d, args).status.code().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["sweep", "--help"]), 0);
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["fit", "--wavelet", "db9", "--input", "x.csv"]), 1);
    assert_eq!(code(&["fit", "--wavelet", "haar", "--input", "missing.csv"]), 1);
    assert_eq!(code(&["fit", "--wavelet", "haar"]), 1);
    assert_eq!(code(&["generate", "logistic", "--r", "4.5"]), 1);
    assert_eq!(code(&["sweep", "--r", "3.2", "--max-iter", "0"]), 1);
    // Lorenz with a huge step runs away.
    assert_eq!(code(&["generate", "lorenz", "--dt", "0.5", "--n", "64"]), 2);
}

#[test]
fn non_dyadic_input_is_truncated_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "lorenz", "--n", "700", "-o", "s.csv"]);
    let out = wavecomplex(d, &["fit", "-i", "s.csv", "-w", "haar", "--tree-out", "tree.json"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("using the first 512"));
    let tree: serde_json::Value = serde_json::from_slice(&fs::read(d.join("tree.json")).unwrap()).unwrap();
    assert_eq!(tree["J"], 9);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "lorenz", "--n", "512", "-o", "s.csv"]);
    fs::write(d.join("run.conf"), "# test\nwavelet = db2\nmax_iter = 4\ntol = 1e-9\n").unwrap();
    let model: serde_json::Value =
        serde_json::from_str(&ok(d, &["--config", "run.conf", "fit", "-i", "s.csv", "--max-iter", "2"])).unwrap();
    assert_eq!(model["config"]["wavelet"], "db2");
    assert_eq!(model["config"]["max_iter"], 2);
    assert_eq!(model["config"]["rel_tol"], 1e-9);
    fs::write(d.join("bad.conf"), "max_iter: 4\n").unwrap();
    assert_eq!(wavecomplex(d, &["--config", "bad.conf", "fit", "-i", "s.csv"]).status.code(), Some(1));
}

#[test]
fn model_and_report_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "lorenz", "--n", "1024", "--noise-var", "1", "--seed", "4", "-o", "s.csv"]);
    ok(d, &["fit", "-i", "s.csv", "-w", "coif1", "-o", "model.json"]);
    let from_model = ok(d, &["complexity", "-m", "model.json", "--format", "csv"]);
    let from_signal = ok(d, &["complexity", "-i", "s.csv", "-w", "coif1", "--format", "csv"]);
    assert_eq!(from_model, from_signal);
    let lines: Vec<_> = from_model.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("wavelet,J,M,global_C,global_C_norm,entropy_rate_norm,monotone_run,local_C_0,"));
    assert!(lines[0].ends_with("local_C_9"));
    assert!(lines[1].starts_with("coif1,10,2,"));
    let json: serde_json::Value = serde_json::from_str(&ok(d, &["complexity", "-m", "model.json"])).unwrap();
    assert_eq!(json["local_c"].as_array().unwrap().len(), 10);
}

#[test]
fn denoise_writes_signal_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "lorenz", "--n", "1024", "-o", "clean.csv"]);
    ok(d, &["generate", "lorenz", "--n", "1024", "--noise-var", "1", "--seed", "2", "-o", "noisy.csv"]);
    ok(d, &["denoise", "-i", "noisy.csv", "-w", "sym3", "--noise-var", "1", "--clean", "clean.csv", "-o", "den.csv"]);
    assert_eq!(fs::read_to_string(d.join("den.csv")).unwrap().lines().count(), 1024);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("den.json")).unwrap()).unwrap();
    assert_eq!(meta["wavelet"], "sym3");
    assert_eq!(meta["noise_variance"], 1.0);
    assert_eq!(meta["estimator"], "posterior-weighted-wiener");
    let res = meta["residual_energy_density"].as_f64().unwrap();
    assert!(res > 0.0 && res < 1.0, "{res}");
    assert!(meta["global_C_norm"].as_f64().is_some());
}

#[test]
fn parallel_drivers_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "lorenz", "--n", "512", "-o", "clean.csv"]);
    ok(d, &["generate", "lorenz", "--n", "512", "--noise-var", "1", "--seed", "3", "-o", "noisy.csv"]);
    let run = |threads: &str, args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_wavecomplex"))
            .current_dir(d)
            .env("WAVECOMPLEX_THREADS", threads)
            .args(args)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let select = ["select", "-i", "noisy.csv", "--clean", "clean.csv", "--wavelets", "all"];
    let one = run("1", &select);
    assert_eq!(one, run("4", &select));
    let table = String::from_utf8(one).unwrap();
    assert_eq!(table.lines().count(), 8);
    assert_eq!(table.lines().filter(|l| l.contains(",1,ok")).count(), 1);

    let sweep = ["sweep", "--rmin", "3.5", "--rmax", "3.9", "--step", "0.1", "--levels", "8"];
    let one = run("1", &sweep);
    assert_eq!(one, run("3", &sweep));
    let rows: Vec<String> = String::from_utf8(one).unwrap().lines().map(String::from).collect();
    assert_eq!(rows[0], "r,global_C_norm,entropy_rate_norm,monotone_run,status");
    let rs: Vec<&str> = rows[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(rs, ["3.5", "3.6", "3.7", "3.8", "3.9"]);

    let bad = Command::new(env!("CARGO_BIN_EXE_wavecomplex"))
        .current_dir(d)
        .env("WAVECOMPLEX_THREADS", "zero")
        .args(sweep)
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
