use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{hash_json, ModelSystem, ScenarioConfig, VERSION};
use crate::dynamics::{characteristic_time_to, qubit_observables, steady_state};
use crate::error::{Error, Result};
use crate::physics::hierarchy_ok;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    T0,
    Temperature,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub version: String,
}

/// One grid point. Failed stages leave their fields empty and set `error`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: Vec<f64>,
    pub concurrence_ss: Option<f64>,
    pub leak: Option<f64>,
    pub t0_ns: Option<f64>,
    pub hierarchy_ok: bool,
    pub error: Option<String>,
}

/// `Omega_m` minimizing `T0` at one `(Omega, Gamma)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct T0Minimum {
    pub omega: f64,
    pub gamma: f64,
    pub omega_m: Option<f64>,
    pub t0_ns: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub minima: Vec<T0Minimum>,
    pub provenance: Provenance,
}

impl SweepResult {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    /// Row whose parameters equal `params` exactly.
    pub fn row(&self, params: &[f64]) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.params == params)
    }
}

fn evaluate(config: &ScenarioConfig, params: Vec<f64>, with_t0: bool) -> SweepRow {
    let mut row = SweepRow {
        params,
        concurrence_ss: None,
        leak: None,
        t0_ns: None,
        hierarchy_ok: hierarchy_ok(&config.drive, &config.coupling),
        error: None,
    };
    let prepared = (|| {
        let system = ModelSystem::build(config)?;
        let rho0 = config.initial_state.build(system.basis())?;
        let keep = system.reachable_from(&rho0);
        let l = system.restrict(&keep).liouvillian()?;
        let steady = steady_state(&l)?;
        Ok::<_, Error>((l, rho0.restrict(&keep), steady))
    })();
    let (l, rho0, steady) = match prepared {
        Ok(v) => v,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    match qubit_observables(&steady) {
        Ok((cc, leak)) => {
            row.concurrence_ss = Some(cc);
            row.leak = Some(leak);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    if with_t0 {
        match characteristic_time_to(&l, &rho0, &steady, config.epsilon_t0, config.t_max()) {
            Ok(t) => row.t0_ns = Some(t),
            Err(e) => row.error = Some(format!("T0: {e}")),
        }
    }
    row
}

fn run_points<F>(count: usize, jobs: Option<usize>, f: F) -> Result<Vec<SweepRow>>
where
    F: Fn(usize) -> SweepRow + Sync + Send,
{
    let collect = || (0..count).into_par_iter().map(&f).collect::<Vec<_>>();
    match jobs {
        None => Ok(collect()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
            Ok(pool.install(collect))
        }
    }
}

fn nonempty(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig(format!("{name} grid is empty")));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig(format!("{name} grid has non-finite values")));
    }
    Ok(())
}

/// `T0` over the Cartesian grid `Omega x Omega_m x Gamma` (all ueV).
pub fn sweep_t0(config: &ScenarioConfig, omega: &[f64], omega_m: &[f64], gamma: &[f64]) -> Result<SweepResult> {
    sweep_t0_with(config, omega, omega_m, gamma, None)
}

pub fn sweep_t0_with(
    config: &ScenarioConfig,
    omega: &[f64],
    omega_m: &[f64],
    gamma: &[f64],
    jobs: Option<usize>,
) -> Result<SweepResult> {
    config.validate()?;
    nonempty("omega", omega)?;
    nonempty("omega_m", omega_m)?;
    nonempty("gamma", gamma)?;
    let (n_m, n_g) = (omega_m.len(), gamma.len());
    let rows = run_points(omega.len() * n_m * n_g, jobs, |k| {
        let (o, m, g) = (omega[k / (n_m * n_g)], omega_m[(k / n_g) % n_m], gamma[k % n_g]);
        let mut cfg = config.clone();
        cfg.drive.omega = o;
        cfg.drive.omega_m = m;
        cfg.drive = cfg.drive.with_gamma(g);
        evaluate(&cfg, vec![o, m, g], true)
    })?;

    let mut minima = Vec::with_capacity(omega.len() * n_g);
    for (i, &o) in omega.iter().enumerate() {
        for (j, &g) in gamma.iter().enumerate() {
            let best = (0..n_m)
                .map(|m| &rows[(i * n_m + m) * n_g + j])
                .filter_map(|r| r.t0_ns.map(|t| (r.params[1], t)))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            minima.push(T0Minimum {
                omega: o,
                gamma: g,
                omega_m: best.map(|b| b.0),
                t0_ns: best.map(|b| b.1),
            });
        }
    }
    Ok(SweepResult {
        kind: SweepKind::T0,
        columns: vec!["omega_ueV".into(), "omega_m_ueV".into(), "gamma_ueV".into()],
        rows,
        minima,
        provenance: Provenance {
            config_hash: hash_json(&(config, omega, omega_m, gamma)),
            version: VERSION.into(),
        },
    })
}

/// Steady concurrence and `T0` over temperatures (K) and tunneling rates (ueV).
pub fn sweep_temperature(config: &ScenarioConfig, temperature: &[f64], t_e: &[f64]) -> Result<SweepResult> {
    sweep_temperature_with(config, temperature, t_e, None)
}

pub fn sweep_temperature_with(
    config: &ScenarioConfig,
    temperature: &[f64],
    t_e: &[f64],
    jobs: Option<usize>,
) -> Result<SweepResult> {
    config.validate()?;
    nonempty("temperature", temperature)?;
    nonempty("t_e", t_e)?;
    if !config.phonons {
        return Err(Error::InvalidConfig("temperature sweeps need phonons = true".into()));
    }
    if !config.tunneling && t_e.iter().any(|&t| t != 0.0) {
        return Err(Error::InvalidConfig("nonzero t_e values need tunneling = true".into()));
    }
    let n_e = t_e.len();
    let rows = run_points(temperature.len() * n_e, jobs, |k| {
        let (temp, te) = (temperature[k / n_e], t_e[k % n_e]);
        let mut cfg = config.clone();
        cfg.temperature = temp;
        cfg.coupling.t_e = te;
        evaluate(&cfg, vec![temp, te], true)
    })?;
    Ok(SweepResult {
        kind: SweepKind::Temperature,
        columns: vec!["T_K".into(), "t_e_ueV".into()],
        rows,
        minima: Vec::new(),
        provenance: Provenance {
            config_hash: hash_json(&(config, temperature, t_e)),
            version: VERSION.into(),
        },
    })
}
