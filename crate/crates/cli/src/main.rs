//! `qdm`: run scenarios and sweeps, evaluate parameter formulas, check invariants.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdm_core::physics::{
    forster_coupling, spectral_density, wkb_tunneling_rate, zeeman_splittings, DotGeometry, MaterialParams, Parity,
};
use qdm_core::scenarios::{
    preset, run_scenario, sweep_preset, sweep_t0_with, sweep_temperature_with, InitialState, ScenarioConfig,
    SweepPreset, PRESET_NAMES, SWEEP_PRESET_NAMES,
};
use serde_json::json;

use output::{prepare_out_dir, write_manifest, write_minima_csv, write_sweep_csv, write_trajectory_csv, RunManifest};

const SEED_VAR: &str = "QDM_SEED";

#[derive(Parser)]
#[command(name = "qdm", version, about = "Dissipative singlet preparation in a quantum-dot molecule")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one scenario and write trajectory.csv and manifest.json.
    Run {
        /// Preset name or path to a TOML scenario file.
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a sweep preset and write sweep.csv and manifest.json.
    Sweep {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; defaults to the number of processors.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Evaluate a derived-parameter formula.
    Calc {
        #[command(subcommand)]
        what: Calc,
    },
    /// Run the invariant suite; nonzero exit if any check fails.
    Validate,
}

#[derive(Subcommand)]
enum Calc {
    /// Forster coupling V_F (ueV) for a dot geometry.
    Forster(GeometryArgs),
    /// WKB electron tunneling rate (meV).
    Wkb {
        /// Barrier height, meV.
        #[arg(long, default_value_t = 680.0, allow_negative_numbers = true)]
        barrier: f64,
        /// Inter-dot distance, nm.
        #[arg(long, default_value_t = 9.5, allow_negative_numbers = true)]
        d: f64,
        /// Effective mass in units of m_e.
        #[arg(long = "m-eff", default_value_t = 0.067, allow_negative_numbers = true)]
        m_eff: f64,
    },
    /// Zeeman splittings (ueV) in a Voigt field.
    Zeeman {
        /// Field, T.
        #[arg(long = "B", default_value_t = 1.0, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, default_value_t = -0.46, allow_negative_numbers = true)]
        ge: f64,
        #[arg(long, default_value_t = -0.29, allow_negative_numbers = true)]
        gh: f64,
    },
    /// Phonon spectral density J(omega) (ueV).
    SpectralDensity {
        /// Transition energy, ueV.
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, value_enum, default_value_t = ParityArg::Plus)]
        parity: ParityArg,
        #[command(flatten)]
        geometry: GeometryArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Plus,
    Minus,
}

#[derive(Args)]
struct GeometryArgs {
    #[arg(long = "l-par-e", allow_negative_numbers = true)]
    l_par_e: Option<f64>,
    #[arg(long = "l-par-h", allow_negative_numbers = true)]
    l_par_h: Option<f64>,
    #[arg(long = "l-perp", allow_negative_numbers = true)]
    l_perp: Option<f64>,
    /// Inter-dot distance, nm.
    #[arg(long = "dist", allow_negative_numbers = true)]
    d: Option<f64>,
    /// Interband dipole length, nm.
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long = "eps-r", allow_negative_numbers = true)]
    eps_r: Option<f64>,
}

impl GeometryArgs {
    fn geometry(&self) -> DotGeometry {
        let g = DotGeometry::default();
        DotGeometry {
            l_par_e: self.l_par_e.unwrap_or(g.l_par_e),
            l_par_h: self.l_par_h.unwrap_or(g.l_par_h),
            l_perp: self.l_perp.unwrap_or(g.l_perp),
            d: self.d.unwrap_or(g.d),
            a: self.a.unwrap_or(g.a),
            eps_r: self.eps_r.unwrap_or(g.eps_r),
        }
    }
}

/// Failure classes, each with its own exit code.
#[derive(Debug)]
enum Failure {
    UnknownScenario(String),
    OutputDir(String),
    Config(String),
    Compute(String),
    Validation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::UnknownScenario(_) => 3,
            Failure::OutputDir(_) => 4,
            Failure::Config(_) => 5,
            Failure::Compute(_) => 6,
            Failure::Validation(_) => 7,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::UnknownScenario(_) => "unknown_scenario",
            Failure::OutputDir(_) => "output_dir",
            Failure::Config(_) => "config",
            Failure::Compute(_) => "compute",
            Failure::Validation(_) => "validation",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::UnknownScenario(m)
            | Failure::OutputDir(m)
            | Failure::Config(m)
            | Failure::Compute(m)
            | Failure::Validation(m) => m,
        }
    }
}

impl From<qdm_core::Error> for Failure {
    fn from(e: qdm_core::Error) -> Failure {
        match e.root() {
            qdm_core::Error::UnknownScenario(_) => Failure::UnknownScenario(e.to_string()),
            qdm_core::Error::InvalidConfig(_) => Failure::Config(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn load_scenario(spec: &str) -> Result<ScenarioConfig, Failure> {
    let mut cfg = if PRESET_NAMES.contains(&spec) {
        preset(spec)?
    } else {
        let path = Path::new(spec);
        if !path.is_file() {
            return Err(Failure::UnknownScenario(format!(
                "'{spec}' is neither a preset ({}) nor a readable file",
                PRESET_NAMES.join(", ")
            )));
        }
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{spec}: {e}")))?;
        let mut cfg = ScenarioConfig::from_toml(&text).map_err(|e| Failure::Config(format!("{spec}: {e}")))?;
        if cfg.name == ScenarioConfig::default().name {
            cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or(cfg.name);
        }
        cfg
    };
    apply_seed(&mut cfg)?;
    Ok(cfg)
}

fn apply_seed(cfg: &mut ScenarioConfig) -> Result<(), Failure> {
    if let Ok(raw) = std::env::var(SEED_VAR) {
        let seed: u64 = raw
            .trim()
            .parse()
            .map_err(|_| Failure::Config(format!("{SEED_VAR} must be an unsigned integer, got '{raw}'")))?;
        if let InitialState::Random(_) = cfg.initial_state {
            cfg.initial_state = InitialState::Random(seed);
        }
    }
    Ok(())
}

fn cmd_run(scenario: &str, out: &Path) -> Result<(), Failure> {
    let start = Instant::now();
    let cfg = load_scenario(scenario)?;
    prepare_out_dir(out)?;
    let result = run_scenario(&cfg)?;
    let files = vec![write_trajectory_csv(out, &result.trajectory)?];
    let manifest = RunManifest::new(
        "run",
        serde_json::to_value(&cfg).expect("config serializes"),
        cfg.hash(),
        start.elapsed().as_secs_f64(),
        vec![json!({ "name": result.name, "summary": result.summary })],
        files,
    );
    write_manifest(out, &manifest)?;
    println!(
        "{}: C_ss = {:.6}, T0 = {:.3} ns, max leak = {:.4}",
        result.name, result.summary.steady_concurrence, result.t0_ns, result.summary.max_leak
    );
    Ok(())
}

fn cmd_sweep(name: &str, out: &Path, jobs: Option<usize>) -> Result<(), Failure> {
    let start = Instant::now();
    if !SWEEP_PRESET_NAMES.contains(&name) {
        return Err(Failure::UnknownScenario(format!(
            "unknown sweep preset '{name}' (expected {})",
            SWEEP_PRESET_NAMES.join(" or ")
        )));
    }
    prepare_out_dir(out)?;
    let (config, grids, result) = match sweep_preset(name)? {
        SweepPreset::T0 { mut config, omega, omega_m, gamma } => {
            apply_seed(&mut config)?;
            let r = sweep_t0_with(&config, &omega, &omega_m, &gamma, jobs)?;
            (config, json!({ "omega": omega, "omega_m": omega_m, "gamma": gamma }), r)
        }
        SweepPreset::Temperature { mut config, temperature, t_e } => {
            apply_seed(&mut config)?;
            let r = sweep_temperature_with(&config, &temperature, &t_e, jobs)?;
            (config, json!({ "T": temperature, "t_e": t_e }), r)
        }
    };
    let mut files = vec![write_sweep_csv(out, &result)?];
    if !result.minima.is_empty() {
        files.push(write_minima_csv(out, &result)?);
    }
    let summary = json!({
        "name": name,
        "points": result.rows.len(),
        "failures": result.failures(),
        "grids": grids,
        "provenance": result.provenance,
        "minima": result.minima,
    });
    let manifest = RunManifest::new(
        "sweep",
        serde_json::to_value(&config).expect("config serializes"),
        result.provenance.config_hash.clone(),
        start.elapsed().as_secs_f64(),
        vec![summary],
        files,
    );
    write_manifest(out, &manifest)?;
    println!("{name}: {} points, {} failed", result.rows.len(), result.failures());
    Ok(())
}

fn cmd_calc(what: &Calc) -> Result<(), Failure> {
    match what {
        Calc::Forster(g) => {
            let geom = g.geometry();
            let v = forster_coupling(&geom)?;
            println!("V_F = {v} ueV");
            println!("eps_r = {}", geom.eps_r);
        }
        Calc::Wkb { barrier, d, m_eff } => {
            let t = wkb_tunneling_rate(*barrier, *d, *m_eff)?;
            println!("t_e = {t} meV");
        }
        Calc::Zeeman { b, ge, gh } => {
            let z = zeeman_splittings(*b, *ge, *gh);
            println!("E_B_e = {} ueV", z.e_b_e);
            println!("E_B_h = {} ueV", z.e_b_h);
            println!("|Delta_H| = {} ueV", z.delta_h.abs());
        }
        Calc::SpectralDensity { omega, parity, geometry } => {
            let p = match parity {
                ParityArg::Plus => Parity::Plus,
                ParityArg::Minus => Parity::Minus,
            };
            let j = spectral_density(*omega, p, &geometry.geometry(), &MaterialParams::default())?;
            println!("J = {j} ueV");
        }
    }
    Ok(())
}

fn cmd_validate() -> Result<(), Failure> {
    let checks = qdm_core::validate::run_invariant_suite();
    let mut failed = Vec::new();
    for c in &checks {
        println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        if !c.passed {
            failed.push(c.name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("failed checks: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run { scenario, out } => cmd_run(scenario, out),
        Command::Sweep { preset, out, jobs } => cmd_sweep(preset, out, *jobs),
        Command::Calc { what } => cmd_calc(what),
        Command::Validate => cmd_validate(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind(), "code": f.code(), "message": f.message() }));
            ExitCode::from(f.code())
        }
    }
}
