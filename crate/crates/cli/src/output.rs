//! CSV and manifest writers. Numbers use Rust's `Display`, which is locale-independent.

use std::fs;
use std::path::Path;

use qdm_core::dynamics::Trajectory;
use qdm_core::scenarios::{SweepResult, VERSION};
use serde::Serialize;
use serde_json::Value;

use crate::Failure;

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const MINIMA_FILE: &str = "minima.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::OutputDir(format!("{}: {e}", path.display()))
}

/// Creates `dir` if needed and checks that it accepts files.
pub fn prepare_out_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let probe = dir.join(".qdm-write-probe");
    fs::write(&probe, b"").map_err(|e| io_failure(dir, e))?;
    fs::remove_file(&probe).map_err(|e| io_failure(dir, e))?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_csv<I>(dir: &Path, name: &str, header: Vec<String>, rows: I) -> Result<String, Failure>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path).map_err(|e| io_failure(&path, e))?;
    w.write_record(&header).map_err(|e| io_failure(&path, e))?;
    for r in rows {
        w.write_record(&r).map_err(|e| io_failure(&path, e))?;
    }
    w.flush().map_err(|e| io_failure(&path, e))?;
    Ok(name.to_string())
}

/// Columns `t_ns, concurrence, leak, p_<label>...`.
pub fn write_trajectory_csv(dir: &Path, traj: &Trajectory) -> Result<String, Failure> {
    let mut header = vec!["t_ns".to_string(), "concurrence".into(), "leak".into()];
    header.extend(traj.basis.labels().iter().map(|l| format!("p_{l}")));
    let rows = (0..traj.times_ns.len()).map(|k| {
        let mut r = vec![traj.times_ns[k].to_string(), traj.concurrence[k].to_string(), traj.leak[k].to_string()];
        r.extend(traj.populations[k].iter().map(|p| p.to_string()));
        r
    });
    write_csv(dir, TRAJECTORY_FILE, header, rows)
}

/// Parameter columns followed by `concurrence_ss, T0_ns, leak, hierarchy_ok, error`.
pub fn write_sweep_csv(dir: &Path, res: &SweepResult) -> Result<String, Failure> {
    let mut header = res.columns.clone();
    header.extend(["concurrence_ss", "T0_ns", "leak", "hierarchy_ok", "error"].map(String::from));
    let rows = res.rows.iter().map(|row| {
        let mut r: Vec<String> = row.params.iter().map(|p| p.to_string()).collect();
        r.push(opt(row.concurrence_ss));
        r.push(opt(row.t0_ns));
        r.push(opt(row.leak));
        r.push(row.hierarchy_ok.to_string());
        r.push(row.error.clone().unwrap_or_default());
        r
    });
    write_csv(dir, SWEEP_FILE, header, rows)
}

pub fn write_minima_csv(dir: &Path, res: &SweepResult) -> Result<String, Failure> {
    let header = ["omega_ueV", "gamma_ueV", "omega_m_opt_ueV", "T0_min_ns"].map(String::from).to_vec();
    let rows = res
        .minima
        .iter()
        .map(|m| vec![m.omega.to_string(), m.gamma.to_string(), opt(m.omega_m), opt(m.t0_ns)]);
    write_csv(dir, MINIMA_FILE, header, rows)
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub version: &'static str,
    pub config: Value,
    pub config_hash: String,
    pub wall_time_s: f64,
    pub results: Vec<Value>,
    pub files: Vec<String>,
}

impl RunManifest {
    pub fn new(
        command: &'static str,
        config: Value,
        config_hash: String,
        wall_time_s: f64,
        results: Vec<Value>,
        mut files: Vec<String>,
    ) -> RunManifest {
        files.push(MANIFEST_FILE.to_string());
        RunManifest { command, version: VERSION, config, config_hash, wall_time_s, results, files }
    }
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<(), Failure> {
    let path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    fs::write(&path, text).map_err(|e| io_failure(&path, e))
}
