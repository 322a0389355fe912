//! Scenario configuration, named presets and the single-run pipeline.

mod presets;
mod sweep;

pub use presets::{preset, sweep_preset, SweepPreset, PRESET_NAMES, SWEEP_PRESET_NAMES};
pub use sweep::{
    sweep_t0, sweep_t0_with, sweep_temperature, sweep_temperature_with, Provenance, SweepKind,
    SweepResult, SweepRow, T0Minimum,
};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dissipators::{assemble_liouvillian, phonon_dissipator, spontaneous_collapse_ops, CollapseSet};
use crate::dynamics::{
    characteristic_time_to, default_t_max_ns, eliminated_population, evolve_with, linear_grid,
    qubit_observables, relaxation_time, steady_state, EvolveOptions, Integrator, Trajectory,
    DEFAULT_EPSILON, DEFAULT_REL_TOL,
};
use crate::error::{Error, Result};
use crate::hamiltonians::{build_model_hamiltonian, resonant_detuning, DressedSector};
use crate::physics::{hierarchy_ok, CouplingParams, DotGeometry, DriveParams, MaterialParams};
use crate::qcore::{random_density, BasisKind, DensityMatrix, ModelBasis, OperatorMatrix, Superoperator};

/// Artifact version stamped into provenance records.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[default]
    Effective6,
    Effective8,
    Full9,
    Full16,
}

impl ModelKind {
    pub fn basis_kind(self) -> BasisKind {
        match self {
            ModelKind::Effective6 => BasisKind::Effective6,
            ModelKind::Effective8 => BasisKind::Effective8,
            ModelKind::Full9 => BasisKind::Full9,
            ModelKind::Full16 => BasisKind::Full16,
        }
    }

    pub fn is_full(self) -> bool {
        matches!(self, ModelKind::Full9 | ModelKind::Full16)
    }

    pub fn supports_tunneling(self) -> bool {
        matches!(self, ModelKind::Effective8 | ModelKind::Full16)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// Equal mixture of `00`, `S01`, `A01`, `11`.
    #[default]
    #[serde(rename = "paper_mixture")]
    EqualMixture,
    Ground00,
    /// Haar-like random full-rank state drawn from a seeded generator.
    Random(u64),
}

impl InitialState {
    pub fn build(self, basis: &ModelBasis) -> Result<DensityMatrix> {
        match self {
            InitialState::EqualMixture => DensityMatrix::mixture(
                basis,
                &[("00", 0.25), ("S01", 0.25), ("A01", 0.25), ("11", 0.25)],
            ),
            InitialState::Ground00 => DensityMatrix::pure_label(basis, "00"),
            InitialState::Random(seed) => {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                Ok(random_density(&mut rng, basis))
            }
        }
    }
}

/// Time grid in ns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        linear_grid(self.start, self.stop, self.points)
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid { start: 0.0, stop: 40.0, points: 161 }
    }
}

/// Integrator choice; `auto` uses exact propagation when the active
/// Hamiltonian is stiff (see [`STIFFNESS_RATIO`]) and Dormand-Prince otherwise.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegratorChoice {
    #[default]
    Auto,
    DormandPrince,
    Propagator,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub name: String,
    pub model: ModelKind,
    pub drive: DriveParams,
    pub coupling: CouplingParams,
    pub geometry: DotGeometry,
    pub material: MaterialParams,
    /// K
    pub temperature: f64,
    pub phonons: bool,
    pub tunneling: bool,
    pub initial_state: InitialState,
    pub t_grid: TimeGrid,
    #[serde(rename = "epsilon_T0")]
    pub epsilon_t0: f64,
    /// Ceiling of the `T0` scan in ns; `50 hbar/Gamma` when absent.
    pub t_max_ns: Option<f64>,
    /// Replace `drive.detuning` by the resonant value for full models.
    pub auto_detuning: bool,
    pub integrator: IntegratorChoice,
    pub rel_tol: f64,
    pub dressed_sector: DressedSector,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            name: "custom".into(),
            model: ModelKind::Effective6,
            drive: DriveParams::default(),
            coupling: CouplingParams::default(),
            geometry: DotGeometry::default(),
            material: MaterialParams::default(),
            temperature: 0.0,
            phonons: false,
            tunneling: false,
            initial_state: InitialState::EqualMixture,
            t_grid: TimeGrid::default(),
            epsilon_t0: DEFAULT_EPSILON,
            t_max_ns: None,
            auto_detuning: true,
            integrator: IntegratorChoice::Auto,
            rel_tol: DEFAULT_REL_TOL,
            dressed_sector: DressedSector::Retain,
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<ScenarioConfig> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario configs serialize")
    }

    pub fn validate(&self) -> Result<()> {
        self.drive.validate()?;
        self.coupling.validate()?;
        self.geometry.validate()?;
        self.material.validate()?;
        if self.tunneling && !self.model.supports_tunneling() {
            return Err(Error::InvalidConfig(format!(
                "tunneling requires model effective8 or full16, got {:?}",
                self.model
            )));
        }
        if self.phonons && self.model.is_full() {
            return Err(Error::InvalidConfig(
                "phonon dissipators are defined for the effective models only".into(),
            ));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "temperature must be >= 0, got {}",
                self.temperature
            )));
        }
        if self.t_grid.start != 0.0 || !(self.t_grid.stop > 0.0) || self.t_grid.points < 2 {
            return Err(Error::InvalidConfig(
                "t_grid must start at 0, end after it and have at least 2 points".into(),
            ));
        }
        if !(self.epsilon_t0 > 0.0 && self.epsilon_t0 < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon_T0 must lie in (0, 1), got {}",
                self.epsilon_t0
            )));
        }
        if let Some(t) = self.t_max_ns {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidConfig(format!("t_max_ns must be > 0, got {t}")));
            }
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidConfig(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol)));
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        hash_json(self)
    }

    /// Coupling with `t_e` zeroed when tunneling is off.
    pub fn effective_coupling(&self) -> CouplingParams {
        CouplingParams {
            t_e: if self.tunneling { self.coupling.t_e } else { 0.0 },
            ..self.coupling
        }
    }

    /// Drive with the detuning the model actually uses.
    pub fn effective_drive(&self) -> Result<DriveParams> {
        let mut drive = self.drive;
        if self.auto_detuning && self.model.is_full() {
            drive.detuning = resonant_detuning(&self.effective_coupling(), self.model == ModelKind::Full16)?;
        }
        Ok(drive)
    }

    /// Integrator settings for a run whose active Hamiltonian is `h`.
    pub fn evolve_options(&self, h: &OperatorMatrix) -> EvolveOptions {
        let integrator = match self.integrator {
            IntegratorChoice::DormandPrince => Integrator::DormandPrince,
            IntegratorChoice::Propagator => Integrator::Propagator,
            IntegratorChoice::Auto if is_stiff(h, self.drive.gamma()) => Integrator::Propagator,
            IntegratorChoice::Auto => Integrator::DormandPrince,
        };
        EvolveOptions { integrator, rel_tol: self.rel_tol }
    }

    pub fn t_max(&self) -> f64 {
        self.t_max_ns.unwrap_or_else(|| default_t_max_ns(self.drive.gamma()))
    }
}

/// Spectral width over total decay rate above which `auto` avoids the
/// explicit integrator.
pub const STIFFNESS_RATIO: f64 = 1000.0;

fn is_stiff(h: &OperatorMatrix, gamma: f64) -> bool {
    let ev = h.eigenvalues();
    let width = ev.last().copied().unwrap_or(0.0) - ev.first().copied().unwrap_or(0.0);
    width > STIFFNESS_RATIO * gamma.max(f64::MIN_POSITIVE)
}

pub(crate) fn hash_json<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable");
    hex::encode(Sha256::digest(bytes))
}

/// Hamiltonian and collapse operators of a scenario on its full model basis.
pub struct ModelSystem {
    pub hamiltonian: OperatorMatrix,
    pub collapse: CollapseSet,
}

impl ModelSystem {
    pub fn build(config: &ScenarioConfig) -> Result<ModelSystem> {
        config.validate()?;
        let drive = config.effective_drive()?;
        let coupling = config.effective_coupling();
        let h = build_model_hamiltonian(config.model.basis_kind(), &drive, &coupling, config.dressed_sector)?;
        let mut collapse = spontaneous_collapse_ops(drive.gamma0, drive.gamma1, h.basis())?;
        if config.phonons {
            collapse.extend(phonon_dissipator(&h, config.temperature, &config.geometry, &config.material)?);
        }
        Ok(ModelSystem { hamiltonian: h, collapse })
    }

    pub fn basis(&self) -> &ModelBasis {
        self.hamiltonian.basis()
    }

    pub fn liouvillian(&self) -> Result<Superoperator> {
        assemble_liouvillian(&self.hamiltonian, &self.collapse)
    }

    /// Basis indices reachable from the support of `rho0` through nonzero
    /// entries of the Hamiltonian and the collapse operators, ascending.
    pub fn reachable_from(&self, rho0: &DensityMatrix) -> Vec<usize> {
        let d = self.basis().dim();
        let mats = std::iter::once(self.hamiltonian.matrix())
            .chain(self.collapse.ops.iter().map(|op| op.matrix()));
        let mut adjacent = vec![vec![false; d]; d];
        for m in mats {
            let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if scale == 0.0 {
                continue;
            }
            for i in 0..d {
                for j in 0..d {
                    if m[(i, j)].norm() > 1e-14 * scale {
                        adjacent[i][j] = true;
                        adjacent[j][i] = true;
                    }
                }
            }
        }
        let mut seen: Vec<bool> = rho0.populations().iter().map(|p| p.abs() > 1e-14).collect();
        let mut stack: Vec<usize> = (0..d).filter(|&i| seen[i]).collect();
        while let Some(i) = stack.pop() {
            for j in 0..d {
                if adjacent[i][j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        (0..d).filter(|&i| seen[i]).collect()
    }

    /// The system restricted to `keep`.
    pub fn restrict(&self, keep: &[usize]) -> ModelSystem {
        ModelSystem {
            hamiltonian: self.hamiltonian.restrict(keep),
            collapse: self.collapse.restrict(keep),
        }
    }
}

/// Everything a scenario run produces, expressed on the model basis.
#[derive(Clone, Debug)]
pub struct ScenarioOutput {
    pub name: String,
    pub config_hash: String,
    pub trajectory: Trajectory,
    pub steady: DensityMatrix,
    pub t0_ns: f64,
    pub summary: ScenarioSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub steady_concurrence: f64,
    pub steady_leak: f64,
    pub t0_ns: f64,
    /// Slowest e-folding time of the Liouvillian, ns.
    pub relaxation_time_ns: f64,
    pub final_concurrence: f64,
    pub max_leak: f64,
    /// Largest population on adiabatically eliminated states (full models).
    pub eliminated_population: Option<f64>,
    pub hierarchy_ok: bool,
    /// Dimension of the state space actually integrated.
    pub active_states: usize,
}

/// Builds the model, integrates it and extracts the steady state and `T0`.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    run_scenario_inner(config).map_err(|e| e.in_scenario(&config.name))
}

fn run_scenario_inner(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    let system = ModelSystem::build(config)?;
    let basis = system.basis().clone();
    let rho0 = config.initial_state.build(&basis)?;
    let keep = system.reachable_from(&rho0);
    let active = system.restrict(&keep);
    let rho0_active = rho0.restrict(&keep);
    let l = active.liouvillian()?;

    let steady_active = steady_state(&l)?;
    let trajectory = evolve_with(&rho0_active, &l, &config.t_grid.times(), &config.evolve_options(&active.hamiltonian))?;
    let t0_ns = characteristic_time_to(&l, &rho0_active, &steady_active, config.epsilon_t0, config.t_max())?;
    let relaxation_time_ns = relaxation_time(&l)?;

    let trajectory = trajectory.embed(&basis)?;
    let steady = steady_active.embed(&basis)?;
    let (steady_concurrence, steady_leak) = qubit_observables(&steady)?;
    let summary = ScenarioSummary {
        steady_concurrence,
        steady_leak,
        t0_ns,
        relaxation_time_ns,
        final_concurrence: *trajectory.concurrence.last().expect("nonempty"),
        max_leak: trajectory.leak.iter().copied().fold(0.0, f64::max),
        eliminated_population: config.model.is_full().then(|| eliminated_population(&trajectory)),
        hierarchy_ok: hierarchy_ok(&config.drive, &config.coupling),
        active_states: keep.len(),
    };
    Ok(ScenarioOutput {
        name: config.name.clone(),
        config_hash: config.hash(),
        trajectory,
        steady,
        t0_ns,
        summary,
    })
}

/// Steady state of a scenario without time integration, on the model basis.
pub fn scenario_steady_state(config: &ScenarioConfig) -> Result<(DensityMatrix, Superoperator, DensityMatrix)> {
    let system = ModelSystem::build(config)?;
    let basis = system.basis().clone();
    let rho0 = config.initial_state.build(&basis)?;
    let keep = system.reachable_from(&rho0);
    let active = system.restrict(&keep);
    let l = active.liouvillian()?;
    let steady = steady_state(&l)?;
    Ok((steady.embed(&basis)?, l, rho0.restrict(&keep)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::trace_distance;

    #[test]
    fn toml_round_trip() {
        let cfg = preset("fig4a").unwrap();
        let text = cfg.to_toml();
        let back = ScenarioConfig::from_toml(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
    }

    #[test]
    fn toml_rejects_unknown_keys() {
        assert!(ScenarioConfig::from_toml("model = \"effective6\"\nbogus = 1\n").is_err());
        assert!(ScenarioConfig::from_toml("[drive]\nomega = 20.0\n").is_err());
        let cfg = ScenarioConfig::from_toml("model = \"full9\"\ninitial_state = { random = 7 }\nepsilon_T0 = 0.05\n")
            .unwrap();
        assert_eq!(cfg.model, ModelKind::Full9);
        assert_eq!(cfg.initial_state, InitialState::Random(7));
        assert_eq!(cfg.epsilon_t0, 0.05);
    }

    #[test]
    fn tunneling_requires_capable_model() {
        let cfg = ScenarioConfig { tunneling: true, ..Default::default() };
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
        let cfg = ScenarioConfig { tunneling: true, model: ModelKind::Full16, ..Default::default() };
        cfg.validate().unwrap();
        let cfg = ScenarioConfig { phonons: true, temperature: 0.0, ..Default::default() };
        cfg.validate().unwrap();
        let cfg = ScenarioConfig { phonons: true, model: ModelKind::Full9, ..Default::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = preset("fig3a").unwrap();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.drive.omega_m = 9.5;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn zero_gamma_is_degenerate() {
        let mut cfg = preset("fig3a").unwrap();
        cfg.drive = cfg.drive.with_gamma(0.0);
        cfg.t_max_ns = Some(1.0);
        let err = run_scenario(&cfg).unwrap_err();
        assert!(matches!(err, Error::Scenario { .. }));
        assert!(matches!(err.root(), Error::DegenerateSteadyState { .. }), "{err}");
    }

    #[test]
    fn pruning_drops_unreachable_inter_dot_states() {
        let mut cfg = preset("fig4a").unwrap();
        cfg.coupling.t_e = 0.0;
        let system = ModelSystem::build(&cfg).unwrap();
        let rho0 = cfg.initial_state.build(system.basis()).unwrap();
        let keep = system.reachable_from(&rho0);
        let labels: Vec<&str> = keep.iter().map(|&i| system.basis().labels()[i].as_str()).collect();
        assert_eq!(labels, ["00", "S01", "A01", "11", "S0s", "S1s"]);
        cfg.coupling.t_e = 2000.0;
        let system = ModelSystem::build(&cfg).unwrap();
        assert_eq!(system.reachable_from(&rho0).len(), 8);
    }

    #[test]
    fn fig3a_reaches_singlet() {
        let out = run_scenario(&preset("fig3a").unwrap()).unwrap();
        assert!(out.summary.steady_concurrence > 0.99);
        let dark = DensityMatrix::pure_label(out.steady.basis(), "A01").unwrap();
        assert!(trace_distance(&out.steady, &dark).unwrap() < 1e-6);
        assert_eq!(out.trajectory.len(), cfg_points("fig3a"));
        assert!(out.summary.eliminated_population.is_none());
    }

    fn cfg_points(name: &str) -> usize {
        preset(name).unwrap().t_grid.points
    }

    #[test]
    fn reruns_are_bit_identical() {
        let mut cfg = preset("fig3a").unwrap();
        cfg.initial_state = InitialState::Random(11);
        cfg.t_grid = TimeGrid { start: 0.0, stop: 5.0, points: 11 };
        cfg.t_max_ns = Some(100.0);
        let a = run_scenario(&cfg).unwrap();
        let b = run_scenario(&cfg).unwrap();
        assert_eq!(a.trajectory.concurrence, b.trajectory.concurrence);
        assert_eq!(a.trajectory.populations, b.trajectory.populations);
        assert_eq!(a.summary, b.summary);
        assert_eq!(a.steady.matrix(), b.steady.matrix());
    }
}
