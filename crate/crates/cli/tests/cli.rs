use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn qdm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdm"))
        .args(args)
        .env_remove("QDM_SEED")
        .output()
        .expect("spawn qdm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn error_line(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    let line = text.lines().last().expect("stderr has an error line");
    serde_json::from_str(line).expect("error line is JSON")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn assert_listed_files_exist(dir: &Path, m: &Value) {
    let files = m["files"].as_array().unwrap();
    assert!(!files.is_empty());
    for f in files {
        let meta = std::fs::metadata(dir.join(f.as_str().unwrap())).unwrap();
        assert!(meta.len() > 0, "{f} is empty");
    }
}

#[test]
fn run_fig3a_writes_trajectory_and_manifest() {
    let dir = tempdir().unwrap();
    let out = qdm(&["run", "--scenario", "fig3a", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let (header, rows) = read_csv(&dir.path().join("trajectory.csv"));
    assert_eq!(header, [
        "t_ns", "concurrence", "leak", "p_00", "p_S01", "p_A01", "p_11", "p_S0s", "p_S1s"
    ]);
    assert_eq!(rows.len(), 161);
    let last: Vec<f64> = rows.last().unwrap().iter().map(|v| v.parse().unwrap()).collect();
    assert_eq!(last[0], 40.0);
    assert!(last[1] > 0.99);
    assert!((last[3..].iter().sum::<f64>() - 1.0).abs() < 1e-8);

    let m = manifest(dir.path());
    assert_eq!(m["command"], "run");
    assert_eq!(m["config"]["name"], "fig3a");
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert!(m["version"].is_string());
    assert!(m["results"][0]["summary"]["steady_concurrence"].as_f64().unwrap() > 0.999);
    assert_listed_files_exist(dir.path(), &m);
}

#[test]
fn run_from_toml_honours_seed_override() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("rand.toml");
    std::fs::write(&cfg, "initial_state = { random = 1 }\n\n[t_grid]\nstart = 0.0\nstop = 2.0\npoints = 5\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let run = |seed: &str, sub: &str| {
        let out_dir = dir.path().join(sub);
        let out = Command::new(env!("CARGO_BIN_EXE_qdm"))
            .args(["run", "--scenario", cfg, "--out", out_dir.to_str().unwrap()])
            .env("QDM_SEED", seed)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let (_, rows) = read_csv(&out_dir.join("trajectory.csv"));
        (rows, manifest(&out_dir))
    };
    let (a, ma) = run("11", "a");
    let (b, _) = run("11", "b");
    let (c, _) = run("12", "c");
    assert_eq!(a, b);
    assert_ne!(a[0], c[0]);
    assert_eq!(ma["config"]["initial_state"]["random"], 11);
    assert_eq!(ma["config"]["name"], "rand");

    let bad = Command::new(env!("CARGO_BIN_EXE_qdm"))
        .args(["run", "--scenario", cfg, "--out", dir.path().join("d").to_str().unwrap()])
        .env("QDM_SEED", "minus one")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(5));
}

#[test]
fn sweep_fig4b_table() {
    let dir = tempdir().unwrap();
    let out = qdm(&["sweep", "--preset", "fig4b", "--out", dir.path().to_str().unwrap(), "--jobs", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("sweep.csv"));
    assert_eq!(&header[..4], ["T_K", "t_e_ueV", "concurrence_ss", "T0_ns"]);
    assert_eq!(rows.len(), 20);
    for r in &rows {
        let c: f64 = r[2].parse().unwrap();
        assert!((0.0..=1.0 + 1e-9).contains(&c));
        assert!(r[6].is_empty(), "row failed: {r:?}");
    }
    let m = manifest(dir.path());
    assert_eq!(m["command"], "sweep");
    assert_eq!(m["results"][0]["points"], 20);
    assert_listed_files_exist(dir.path(), &m);
    assert!(!dir.path().join("minima.csv").exists());
}

#[test]
fn sweep_fig3b_reports_minima() {
    let dir = tempdir().unwrap();
    let out = qdm(&["sweep", "--preset", "fig3b", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("sweep.csv"));
    assert_eq!(&header[..3], ["omega_ueV", "omega_m_ueV", "gamma_ueV"]);
    assert_eq!(rows.len(), 96);
    let (header, minima) = read_csv(&dir.path().join("minima.csv"));
    assert_eq!(header, ["omega_ueV", "gamma_ueV", "omega_m_opt_ueV", "T0_min_ns"]);
    assert_eq!(minima.len(), 4);
    for r in &minima {
        let ratio = r[2].parse::<f64>().unwrap() / r[0].parse::<f64>().unwrap();
        assert!((0.35..=0.55).contains(&ratio), "{r:?}");
    }
    assert_listed_files_exist(dir.path(), &manifest(dir.path()));
}

#[test]
fn calc_subcommands() {
    let out = qdm(&["calc", "zeeman", "--B", "1", "--ge", "-0.46", "--gh", "-0.29"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let value = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(key)).unwrap();
        line.split('=').nth(1).unwrap().trim().trim_end_matches(" ueV").parse().unwrap()
    };
    assert!((value("E_B_e") + 26.6265).abs() < 1e-3);
    assert!((value("E_B_h") + 16.7863).abs() < 1e-3);
    assert!((value("|Delta_H|") - 43.4129).abs() < 1e-3);

    let out = qdm(&["calc", "forster"]);
    assert!(stdout(&out).starts_with("V_F = -199.99"));
    let out = qdm(&["calc", "forster", "--eps-r", "12.9"]);
    let v: f64 = stdout(&out).lines().next().unwrap()[6..].trim_end_matches(" ueV").parse().unwrap();
    assert!((v + 64.3).abs() < 0.1, "{v}");

    assert!(qdm(&["calc", "wkb"]).status.success());
    assert!(qdm(&["calc", "spectral-density", "--omega", "400"]).status.success());
    let out = qdm(&["calc", "wkb", "--d", "-1"]);
    assert_eq!(out.status.code(), Some(6));
    assert_eq!(error_line(&out)["error"], "compute");
}

#[test]
fn validate_passes() {
    let out = qdm(&["validate"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).lines().all(|l| l.starts_with("[PASS]")));
}

#[test]
fn exit_codes() {
    let dir = tempdir().unwrap();
    let d = dir.path().to_str().unwrap();

    let out = qdm(&["run", "--scenario", "no_such_scenario", "--out", d]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_line(&out)["code"], 3);
    assert_eq!(qdm(&["sweep", "--preset", "fig3a", "--out", d]).status.code(), Some(3));

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = qdm(&["run", "--scenario", "fig3a", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_line(&out)["error"], "output_dir");

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "model = \"effective6\"\nunknown_key = 1\n").unwrap();
    let out = qdm(&["run", "--scenario", bad.to_str().unwrap(), "--out", d]);
    assert_eq!(out.status.code(), Some(5));
    std::fs::write(&bad, "model = \"full9\"\nphonons = true\n").unwrap();
    assert_eq!(qdm(&["run", "--scenario", bad.to_str().unwrap(), "--out", d]).status.code(), Some(5));

    let zero = dir.path().join("zero.toml");
    std::fs::write(&zero, "[drive]\nomega = 20.0\nomega_m = 9.0\ndetuning = 200.0\ngamma0 = 0.0\ngamma1 = 0.0\n").unwrap();
    let out = qdm(&["run", "--scenario", zero.to_str().unwrap(), "--out", d]);
    assert_eq!(out.status.code(), Some(6));
    assert_eq!(error_line(&out)["error"], "compute");
}
