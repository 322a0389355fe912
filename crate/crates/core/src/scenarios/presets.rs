use super::{ModelKind, ScenarioConfig, TimeGrid};
use crate::error::{Error, Result};
use crate::physics::{CouplingParams, DriveParams};

pub const PRESET_NAMES: [&str; 6] = ["fig3a", "fig3a_T0", "fig3b", "fig4a", "fig4a_te2_T1K", "fig4b"];
pub const SWEEP_PRESET_NAMES: [&str; 2] = ["fig3b", "fig4b"];

/// Spontaneous emission only: `Omega = 20`, `Omega_m = 9`, `Gamma = 1.2` ueV, T = 0.
fn fig3a(name: &str) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        model: ModelKind::Effective6,
        drive: DriveParams::default(),
        t_grid: TimeGrid { start: 0.0, stop: 40.0, points: 161 },
        ..Default::default()
    }
}

/// Phonons and electron tunneling at `t_e = 2` meV, T = 1 K.
fn fig4a(name: &str) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        model: ModelKind::Effective8,
        coupling: CouplingParams { t_e: 2000.0, delta: 20_000.0, ..Default::default() },
        temperature: 1.0,
        phonons: true,
        tunneling: true,
        t_grid: TimeGrid { start: 0.0, stop: 60.0, points: 241 },
        ..Default::default()
    }
}

/// Scenario configuration for a named preset.
pub fn preset(name: &str) -> Result<ScenarioConfig> {
    match name {
        "fig3a" | "fig3a_T0" => Ok(fig3a(name)),
        "fig3b" => Ok(ScenarioConfig { t_max_ns: Some(300.0), ..fig3a(name) }),
        "fig4a" | "fig4a_te2_T1K" => Ok(fig4a(name)),
        "fig4b" => Ok(fig4a(name)),
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

/// A sweep preset: base configuration plus grids.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepPreset {
    T0 {
        config: ScenarioConfig,
        omega: Vec<f64>,
        omega_m: Vec<f64>,
        gamma: Vec<f64>,
    },
    Temperature {
        config: ScenarioConfig,
        temperature: Vec<f64>,
        t_e: Vec<f64>,
    },
}

pub fn sweep_preset(name: &str) -> Result<SweepPreset> {
    match name {
        "fig3b" => Ok(SweepPreset::T0 {
            config: preset("fig3b")?,
            omega: vec![10.0, 20.0, 30.0, 40.0],
            omega_m: (1..=24).map(f64::from).collect(),
            gamma: vec![1.2],
        }),
        "fig4b" => Ok(SweepPreset::Temperature {
            config: preset("fig4b")?,
            temperature: vec![0.0, 0.5, 1.0, 2.0, 4.0],
            t_e: vec![0.0, 1000.0, 2000.0, 3000.0],
        }),
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}
