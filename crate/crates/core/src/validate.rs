//! Fast invariant suite over the model zoo, run by `qdm validate`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dissipators::{assemble_liouvillian, phonon_dissipator, spontaneous_collapse_ops};
use crate::dynamics::{evolve, propagator_expm, steady_state};
use crate::error::Result;
use crate::hamiltonians::{build_effective_hamiltonian, build_model_hamiltonian, DressedSector};
use crate::physics::{CouplingParams, DotGeometry, DriveParams, MaterialParams};
use crate::qcore::{
    concurrence, random_density, trace_distance, BasisKind, DensityMatrix, ModelBasis, OperatorMatrix,
    Superoperator,
};
use crate::scenarios::{preset, InitialState, ModelSystem};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, outcome: Result<(bool, String)>) -> Check {
    match outcome {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

fn default_liouvillian() -> Result<Superoperator> {
    let drive = DriveParams::default();
    let h = build_effective_hamiltonian(&drive)?;
    let set = spontaneous_collapse_ops(drive.gamma0, drive.gamma1, h.basis())?;
    assemble_liouvillian(&h, &set)
}

fn max_abs(m: &crate::qcore::CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn dark_state() -> Result<(bool, String)> {
    let l = default_liouvillian()?;
    let dark = DensityMatrix::pure_label(l.basis(), "A01")?;
    let r = max_abs(&l.apply(&dark)?);
    let ss = steady_state(&l)?;
    let d = trace_distance(&ss, &dark)?;
    Ok((r < 1e-12 && d < 1e-6, format!("|L(A01)| = {r:.2e}, D(ss, A01) = {d:.2e}")))
}

fn generators_are_valid() -> Result<(bool, String)> {
    let mut worst_trace: f64 = 0.0;
    let mut worst_herm: f64 = 0.0;
    for (model, tunneling) in [("effective6", false), ("effective8", true), ("full9", false), ("full16", true)] {
        let mut cfg = preset("fig3a")?;
        cfg.model = serde_json::from_value(serde_json::Value::String(model.into())).expect("known model");
        cfg.tunneling = tunneling;
        cfg.phonons = !cfg.model.is_full();
        cfg.temperature = 1.0;
        let system = ModelSystem::build(&cfg)?;
        worst_herm = worst_herm.max(system.hamiltonian.hermiticity_defect());
        worst_trace = worst_trace.max(system.liouvillian()?.trace_defect());
    }
    Ok((
        worst_trace < 1e-10 && worst_herm < 1e-12,
        format!("max trace defect {worst_trace:.2e}, max hermiticity defect {worst_herm:.2e}"),
    ))
}

fn dissipative_spectrum() -> Result<(bool, String)> {
    let mut cfg = preset("fig4a")?;
    cfg.temperature = 4.0;
    let l = ModelSystem::build(&cfg)?.liouvillian()?;
    let ev = nalgebra::Schur::new(l.matrix().clone())
        .eigenvalues()
        .ok_or_else(|| crate::Error::Domain("Schur decomposition failed".into()))?;
    let max_re = ev.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok((max_re <= 1e-10, format!("max Re(lambda) = {max_re:.2e}")))
}

fn integrator_matches_propagator() -> Result<(bool, String)> {
    let l = default_liouvillian()?;
    let rho0 = InitialState::EqualMixture.build(l.basis())?;
    let traj = evolve(&rho0, &l, &[0.0, 3.0], 1e-10)?;
    let p = propagator_expm(&l, 3.0)?;
    let exact = DensityMatrix::new(l.basis().clone(), crate::qcore::hermitize(&p.apply_matrix(rho0.matrix())))?;
    let d = trace_distance(traj.final_state(), &exact)?;
    Ok((d < 1e-8, format!("D(rk, expm) at 3 ns = {d:.2e}")))
}

fn positivity_along_fig3a() -> Result<(bool, String)> {
    let l = default_liouvillian()?;
    let rho0 = InitialState::EqualMixture.build(l.basis())?;
    let traj = evolve(&rho0, &l, &preset("fig3a")?.t_grid.times(), 1e-8)?;
    let min_eig = traj.states.iter().map(|s| s.min_eigenvalue()).fold(f64::INFINITY, f64::min);
    let drift = traj
        .populations
        .iter()
        .map(|p| (p.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok((min_eig >= -1e-8 && drift < 1e-8, format!("min eigenvalue {min_eig:.2e}, trace drift {drift:.2e}")))
}

fn initial_state_independence() -> Result<(bool, String)> {
    let l = default_liouvillian()?;
    let p = propagator_expm(&l, 200.0)?;
    let finals: Vec<DensityMatrix> = (1..=3u64)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_density(&mut rng, l.basis());
            DensityMatrix::new(l.basis().clone(), crate::qcore::hermitize(&p.apply_matrix(rho.matrix())))
        })
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            worst = worst.max(trace_distance(&finals[i], &finals[j])?);
        }
    }
    Ok((worst < 1e-6, format!("max pairwise distance at 200 ns {worst:.2e}")))
}

fn werner_concurrence() -> Result<(bool, String)> {
    let basis = ModelBasis::new(BasisKind::Qubits);
    let singlet = DensityMatrix::pure_label(&basis, "A01")?;
    let mut worst: f64 = 0.0;
    for p in [0.1, 0.4, 0.7, 1.0] {
        let m = singlet.matrix() * crate::qcore::c(p)
            + crate::qcore::CMatrix::identity(4, 4) * crate::qcore::c((1.0 - p) / 4.0);
        let rho = DensityMatrix::new(basis.clone(), m)?;
        let want = ((3.0 * p - 1.0) / 2.0).max(0.0);
        worst = worst.max((concurrence(&rho)? - want).abs());
    }
    Ok((worst < 1e-10, format!("max |C - max(0, (3p-1)/2)| = {worst:.2e}")))
}

fn reduction_chain() -> Result<(bool, String)> {
    let drive = DriveParams::default();
    let coupling = CouplingParams { t_e: 0.0, ..Default::default() };
    let h8 = build_model_hamiltonian(BasisKind::Effective8, &drive, &coupling, DressedSector::Retain)?;
    let h6 = build_effective_hamiltonian(&drive)?;
    let keep: Vec<usize> = (0..6).collect();
    let diff = max_abs(&(h8.restrict(&keep).matrix() - h6.matrix()));
    Ok((diff < 1e-12, format!("|H8(t_e = 0)|6 - H6| = {diff:.2e}")))
}

fn detailed_balance() -> Result<(bool, String)> {
    let h: OperatorMatrix = build_effective_hamiltonian(&DriveParams::default())?;
    let t = 2.0;
    let set = phonon_dissipator(&h, t, &DotGeometry::default(), &MaterialParams::default())?;
    let mut worst: f64 = 0.0;
    let ops: Vec<(&str, &OperatorMatrix)> = set.iter().collect();
    for (label, down) in &ops {
        if !label.ends_with("down)") {
            continue;
        }
        let up_label = label.replace("down)", "up)");
        let Some((_, up)) = ops.iter().find(|(l, _)| *l == up_label) else { continue };
        let omega: f64 = label["phonon(".len()..].split(' ').next().unwrap_or("0").parse().unwrap_or(0.0);
        let ratio = max_abs(up.matrix()).powi(2) / max_abs(down.matrix()).powi(2);
        let want = (-omega / (crate::physics::K_B_UEV_PER_K * t)).exp();
        worst = worst.max((ratio - want).abs() / want);
    }
    Ok((worst < 1e-5, format!("max relative detailed-balance error {worst:.2e}")))
}

/// Runs every check; the suite passes when all entries pass.
pub fn run_invariant_suite() -> Vec<Check> {
    vec![
        check("dark_state", dark_state()),
        check("generators_valid", generators_are_valid()),
        check("dissipative_spectrum", dissipative_spectrum()),
        check("integrator_vs_propagator", integrator_matches_propagator()),
        check("positivity_and_trace", positivity_along_fig3a()),
        check("initial_state_independence", initial_state_independence()),
        check("werner_concurrence", werner_concurrence()),
        check("reduction_chain", reduction_chain()),
        check("detailed_balance", detailed_balance()),
    ]
}
