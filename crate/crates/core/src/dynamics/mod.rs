//! Time evolution, steady states and relaxation times.
//!
//! Public times are in ns; generators carry energies in ueV and are
//! integrated in hbar/ueV.

mod rk;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physics::{internal_to_ns, ns_to_internal};
use crate::qcore::{
    c, hermitize, qubit_concurrence, state_vector, trace_distance_matrices,
    unvectorize, vectorize, CMatrix, DensityMatrix, ModelBasis, Superoperator,
};

/// Default local tolerance of the adaptive integrator.
pub const DEFAULT_REL_TOL: f64 = 1e-8;
/// Default distance to the steady state that defines `T0`.
pub const DEFAULT_EPSILON: f64 = 0.01;
/// Rank tolerance for a dense decomposition of an `n x n` matrix with largest
/// singular value `scale`: `n * eps * scale`.
pub fn null_space_tolerance(n: usize, scale: f64) -> f64 {
    (n as f64 * f64::EPSILON * scale).max(1e-14)
}
/// Absolute tolerance of the integrator relative to `rel_tol`; keeps
/// unpopulated levels from drifting negative.
const ABS_TOL_FACTOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// Adaptive Dormand-Prince 5(4).
    #[default]
    DormandPrince,
    /// Exact propagation between grid points with `exp(L dt)`.
    Propagator,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveOptions {
    pub integrator: Integrator,
    pub rel_tol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            integrator: Integrator::DormandPrince,
            rel_tol: DEFAULT_REL_TOL,
        }
    }
}

/// Snapshots of a run with the observables derived from them.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub basis: ModelBasis,
    pub times_ns: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub concurrence: Vec<f64>,
    pub leak: Vec<f64>,
    /// `populations[k][i]`: weight of basis label `i` at time `k`.
    pub populations: Vec<Vec<f64>>,
}

/// Concurrence and leak of the qubit block; an empty block counts as `(0, 1)`.
pub fn qubit_observables(rho: &DensityMatrix) -> Result<(f64, f64)> {
    match qubit_concurrence(rho) {
        Ok(v) => Ok(v),
        Err(Error::EmptySubspace { .. }) => Ok((0.0, 1.0)),
        Err(e) => Err(e),
    }
}

impl Trajectory {
    /// Builds a trajectory from states, computing every observable.
    pub fn from_states(times_ns: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Trajectory> {
        let basis = states
            .first()
            .map(|s| s.basis().clone())
            .ok_or_else(|| Error::InvalidConfig("trajectory needs at least one state".into()))?;
        let mut concurrence = Vec::with_capacity(states.len());
        let mut leak = Vec::with_capacity(states.len());
        let mut populations = Vec::with_capacity(states.len());
        for s in &states {
            let (cc, lk) = qubit_observables(s)?;
            concurrence.push(cc);
            leak.push(lk);
            populations.push(s.populations());
        }
        Ok(Trajectory { basis, times_ns, states, concurrence, leak, populations })
    }

    pub fn len(&self) -> usize {
        self.times_ns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_ns.is_empty()
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectories are never empty")
    }

    /// Population of `label` (which may be an `S`/`A` combination on product bases).
    pub fn population_of(&self, label: &str) -> Result<Vec<f64>> {
        self.states.iter().map(|s| s.population(label)).collect()
    }

    /// Re-expresses every state on `target` (labels matched by name).
    pub fn embed(&self, target: &ModelBasis) -> Result<Trajectory> {
        let states = self
            .states
            .iter()
            .map(|s| s.embed(target))
            .collect::<Result<Vec<_>>>()?;
        Trajectory::from_states(self.times_ns.clone(), states)
    }
}

/// Uniform grid of `points` times from `start` to `stop`, in ns.
pub fn linear_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n).map(|k| start + (stop - start) * k as f64 / (n - 1) as f64).collect(),
    }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidConfig("time grid is empty".into()));
    }
    if t_grid[0] != 0.0 {
        return Err(Error::InvalidConfig("time grid must start at 0".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) || t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidConfig("time grid must be strictly ascending".into()));
    }
    Ok(())
}

fn to_density(basis: &ModelBasis, v: &crate::qcore::CVector) -> Result<DensityMatrix> {
    let d = basis.dim();
    DensityMatrix::new(basis.clone(), hermitize(&unvectorize(v, d)))
}

/// Integrates `d vec(rho)/dt = L vec(rho)` and records `rho` on `t_grid` (ns).
pub fn evolve(rho0: &DensityMatrix, l: &Superoperator, t_grid: &[f64], rel_tol: f64) -> Result<Trajectory> {
    evolve_with(rho0, l, t_grid, &EvolveOptions { rel_tol, ..Default::default() })
}

pub fn evolve_with(
    rho0: &DensityMatrix,
    l: &Superoperator,
    t_grid: &[f64],
    options: &EvolveOptions,
) -> Result<Trajectory> {
    l.basis().ensure_same(rho0.basis())?;
    check_grid(t_grid)?;
    if !(options.rel_tol > 0.0) {
        return Err(Error::InvalidConfig("rel_tol must be > 0".into()));
    }
    let basis = rho0.basis();
    let mut y = vectorize(rho0.matrix());
    let mut states = vec![rho0.clone()];
    match options.integrator {
        Integrator::DormandPrince => {
            let mut dp = rk::DormandPrince::new(l.matrix(), options.rel_tol, ABS_TOL_FACTOR * options.rel_tol);
            for w in t_grid.windows(2) {
                dp.advance(&mut y, ns_to_internal(w[0]), ns_to_internal(w[1]))?;
                states.push(to_density(basis, &y)?);
            }
        }
        Integrator::Propagator => {
            let mut cache: Option<(f64, CMatrix)> = None;
            for w in t_grid.windows(2) {
                let dt = w[1] - w[0];
                let reuse = matches!(&cache, Some((h, _)) if ((h - dt) / dt).abs() < 1e-12);
                if !reuse {
                    cache = Some((dt, propagator_expm(l, dt)?.matrix().clone()));
                }
                let p = &cache.as_ref().unwrap().1;
                y = p * y;
                states.push(to_density(basis, &y)?);
            }
        }
    }
    Trajectory::from_states(t_grid.to_vec(), states)
}

/// `exp(L t)` with `t` in ns.
pub fn propagator_expm(l: &Superoperator, t_ns: f64) -> Result<Superoperator> {
    if !(t_ns >= 0.0) {
        return Err(Error::Domain(format!("propagation time must be >= 0, got {t_ns}")));
    }
    if t_ns == 0.0 {
        return Ok(Superoperator::identity(l.basis()));
    }
    let m = (l.matrix() * c(ns_to_internal(t_ns))).exp();
    Superoperator::new(l.basis().clone(), m)
}

/// Unique fixed point of `L` from its null space.
pub fn steady_state(l: &Superoperator) -> Result<DensityMatrix> {
    let d = l.dim();
    let svd = l.matrix().clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let sv = |k: usize| svd.singular_values[order[k]];
    let largest = sv(order.len() - 1);
    let tolerance = null_space_tolerance(l.matrix().nrows(), largest);
    let null_dim = order.iter().filter(|&&i| svd.singular_values[i] < tolerance).count();
    if null_dim != 1 {
        return Err(Error::DegenerateSteadyState {
            null_dim,
            tolerance,
            smallest: sv(0),
            next: if order.len() > 1 { sv(1) } else { f64::NAN },
        });
    }
    let v = v_t.row(order[0]).adjoint();
    let m = unvectorize(&v, d);
    let tr = m.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::InvalidDensity("null vector is traceless".into()));
    }
    let rho = hermitize(&(m / tr));
    DensityMatrix::new(l.basis().clone(), rho)
}

/// `1 / min |Re lambda|` over the nonzero eigenvalues of `L`, in ns: the
/// slowest e-folding time of the approach to the steady state.
pub fn relaxation_time(l: &Superoperator) -> Result<f64> {
    let ev = nalgebra::Schur::new(l.matrix().clone())
        .eigenvalues()
        .ok_or_else(|| Error::Domain("Liouvillian eigenvalues did not converge".into()))?;
    let scale = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let gap = ev
        .iter()
        .map(|z| -z.re)
        .filter(|r| *r > null_space_tolerance(ev.len(), scale))
        .fold(f64::INFINITY, f64::min);
    if !gap.is_finite() {
        return Err(Error::Domain("Liouvillian has no decaying mode".into()));
    }
    Ok(internal_to_ns(1.0 / gap))
}

/// `50 hbar / Gamma` in ns.
pub fn default_t_max_ns(gamma: f64) -> f64 {
    internal_to_ns(50.0 / gamma)
}

const COARSE_STEPS: usize = 400;

/// First time (ns) at which `rho(t)` is within trace distance `epsilon` of
/// the steady state, refined by bisection to 1% relative precision.
pub fn characteristic_time(
    l: &Superoperator,
    rho0: &DensityMatrix,
    epsilon: f64,
    t_max_ns: f64,
) -> Result<f64> {
    let steady = steady_state(l)?;
    characteristic_time_to(l, rho0, &steady, epsilon, t_max_ns)
}

/// As [`characteristic_time`] with a precomputed steady state.
pub fn characteristic_time_to(
    l: &Superoperator,
    rho0: &DensityMatrix,
    steady: &DensityMatrix,
    epsilon: f64,
    t_max_ns: f64,
) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidConfig(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(t_max_ns > 0.0 && t_max_ns.is_finite()) {
        return Err(Error::InvalidConfig(format!("t_max must be > 0, got {t_max_ns}")));
    }
    l.basis().ensure_same(rho0.basis())?;
    let d = rho0.basis().dim();
    let target = steady.matrix();
    let dist = |v: &crate::qcore::CVector| trace_distance_matrices(&unvectorize(v, d), target);

    let mut y = vectorize(rho0.matrix());
    let mut distance = dist(&y);
    if distance <= epsilon {
        return Ok(0.0);
    }
    let dt = t_max_ns / COARSE_STEPS as f64;
    let step = propagator_expm(l, dt)?;
    for k in 0..COARSE_STEPS {
        let next = step.matrix() * &y;
        let dn = dist(&next);
        if dn <= epsilon {
            // bisect inside (t_k, t_k + dt] starting from rho(t_k)
            let (mut lo, mut hi) = (0.0, dt);
            let t0 = k as f64 * dt;
            while hi - lo > 0.01 * (t0 + hi) / 2.0 && hi - lo > 1e-9 {
                let mid = 0.5 * (lo + hi);
                let probe = propagator_expm(l, mid)?.matrix() * &y;
                if dist(&probe) <= epsilon {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(t0 + hi);
        }
        y = next;
        distance = dn;
    }
    Err(Error::Timeout { t_max_ns, distance })
}

/// Labels that the effective models eliminate: `ss`, `A0s`, `A1s` and all
/// states carrying an inter-dot trion.
pub fn eliminated_labels(basis: &ModelBasis) -> Vec<String> {
    let mut out: Vec<String> = ["ss", "A0s", "A1s"]
        .into_iter()
        .filter(|l| state_vector(basis, l).is_ok())
        .map(String::from)
        .collect();
    if basis.is_product() {
        out.extend(basis.labels().iter().filter(|l| l.contains('t')).cloned());
    }
    out
}

/// Largest total population on [`eliminated_labels`] along the trajectory.
pub fn adiabatic_validity(l_full: &Superoperator, rho0: &DensityMatrix, t_grid: &[f64]) -> Result<f64> {
    adiabatic_validity_with(l_full, rho0, t_grid, &EvolveOptions::default())
}

pub fn adiabatic_validity_with(
    l_full: &Superoperator,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    options: &EvolveOptions,
) -> Result<f64> {
    let traj = evolve_with(rho0, l_full, t_grid, options)?;
    Ok(eliminated_population(&traj))
}

/// Largest total population on [`eliminated_labels`] in `traj`.
pub fn eliminated_population(traj: &Trajectory) -> f64 {
    let labels = eliminated_labels(&traj.basis);
    traj.states
        .iter()
        .map(|s| labels.iter().map(|l| s.population(l).unwrap_or(0.0)).sum::<f64>())
        .fold(0.0, f64::max)
}
