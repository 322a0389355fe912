//! Model Hamiltonians in the frame rotating at the laser frequency.
//!
//! Full models live on product bases (`Full9`, `Full16`); effective models on
//! the symmetric/antisymmetric label bases (`Effective6`, `Effective8`).
//! Product-basis builders take the trion detuning from `DriveParams::detuning`;
//! see [`resonant_detuning`] for the value that puts the pumped transitions on
//! resonance.

use crate::error::{Error, Result};
use crate::physics::{CouplingParams, DriveParams};
use crate::qcore::{c, on_dot, BasisKind, BasisTransform, CMatrix, ModelBasis, OperatorMatrix};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Drive terms on one dot: `Omega(|1><s| + h.c.) + Omega_m(|0><1| + h.c.) + detuning |s><s|`.
fn single_dot_drive(dot: &ModelBasis, drive: &DriveParams) -> Result<OperatorMatrix> {
    let mut h = OperatorMatrix::zeros(dot);
    h.add_coupling(c(drive.omega), "1", "s")?;
    h.add_coupling(c(drive.omega_m), "0", "1")?;
    h.add_ket_bra(c(drive.detuning), "s", "s")?;
    Ok(h)
}

fn sum_over_dots(op: &OperatorMatrix) -> Result<OperatorMatrix> {
    let mut total = on_dot(op, 0)?;
    total.add_scaled(c(1.0), &on_dot(op, 1)?)?;
    Ok(total)
}

/// Forster exchange and the bi-exciton shift. `V_xx` is applied to every
/// doubly excited product state present in the basis.
fn inter_dot_terms(h: &mut OperatorMatrix, coupling: &CouplingParams) -> Result<()> {
    h.add_coupling(c(coupling.v_f), "1s", "s1")?;
    h.add_coupling(c(coupling.v_f), "0s", "s0")?;
    let excited: Vec<&str> = ["s", "t"]
        .into_iter()
        .filter(|l| h.basis().contains(&format!("{l}{l}")))
        .collect();
    for a in &excited {
        for b in &excited {
            h.add_ket_bra(c(coupling.v_xx), &format!("{a}{b}"), &format!("{a}{b}"))?;
        }
    }
    Ok(())
}

/// Trion detuning `omega - omega_l` that makes the pumped two-dot states
/// resonant: `-V_F` without tunneling, `-V_F - E1` with it.
pub fn resonant_detuning(coupling: &CouplingParams, tunneling: bool) -> Result<f64> {
    if tunneling {
        let d = dressed_basis(coupling.delta, coupling.t_e)?;
        Ok(-coupling.v_f - d.e1)
    } else {
        Ok(-coupling.v_f)
    }
}

/// Two-dot Hamiltonian on `Full9` in the laser frame.
pub fn build_full_hamiltonian(drive: &DriveParams, coupling: &CouplingParams) -> Result<OperatorMatrix> {
    let dot = ModelBasis::new(BasisKind::Dot3);
    let mut h = sum_over_dots(&single_dot_drive(&dot, drive)?)?;
    inter_dot_terms(&mut h, coupling)?;
    Ok(h)
}

/// Adiabatically eliminated six-state Hamiltonian.
pub fn build_effective_hamiltonian(drive: &DriveParams) -> Result<OperatorMatrix> {
    let basis = ModelBasis::new(BasisKind::Effective6);
    let mut h = OperatorMatrix::zeros(&basis);
    effective_ground_terms(&mut h, drive)?;
    h.add_coupling(c(SQRT_2 * drive.omega), "11", "S1s")?;
    h.add_coupling(c(drive.omega), "S01", "S0s")?;
    h.add_coupling(c(drive.omega_m), "S0s", "S1s")?;
    Ok(h)
}

fn effective_ground_terms(h: &mut OperatorMatrix, drive: &DriveParams) -> Result<()> {
    h.add_coupling(c(SQRT_2 * drive.omega_m), "00", "S01")?;
    h.add_coupling(c(SQRT_2 * drive.omega_m), "S01", "11")
}

/// `omega_t |t><t| + t_e (|s><t| + h.c.)` on a single dot.
pub fn single_dot_tunneling(coupling: &CouplingParams) -> Result<OperatorMatrix> {
    let dot = ModelBasis::new(BasisKind::Dot4);
    let mut h = OperatorMatrix::zeros(&dot);
    h.add_ket_bra(c(coupling.omega_t()), "t", "t")?;
    h.add_coupling(c(coupling.t_e), "s", "t")?;
    Ok(h)
}

/// Lab-frame tunneling contribution summed over both dots, on `Full16`.
pub fn build_tunneling_hamiltonian(coupling: &CouplingParams) -> Result<OperatorMatrix> {
    sum_over_dots(&single_dot_tunneling(coupling)?)
}

/// Two-dot Hamiltonian with inter-dot trions on `Full16`, laser frame.
///
/// The inter-dot trion sits at `omega_t - omega_l = detuning + V_F - delta`.
pub fn build_full_tunneling_hamiltonian(
    drive: &DriveParams,
    coupling: &CouplingParams,
) -> Result<OperatorMatrix> {
    let dot = ModelBasis::new(BasisKind::Dot4);
    let mut single = single_dot_drive(&dot, drive)?;
    single.add_ket_bra(c(drive.detuning + coupling.v_f - coupling.delta), "t", "t")?;
    single.add_coupling(c(coupling.t_e), "s", "t")?;
    let mut h = sum_over_dots(&single)?;
    inter_dot_terms(&mut h, coupling)?;
    Ok(h)
}

/// Mixing of intra- and inter-dot trions by tunneling.
#[derive(Clone, Debug, PartialEq)]
pub struct DressedBasisInfo {
    /// `-arccot(delta / 2 t_e) / 2` with `arccot` in `(0, pi)`.
    pub theta: f64,
    pub e1: f64,
    pub e2: f64,
    pub delta: f64,
    pub t_e: f64,
    /// On `Effective8`; columns `S0s, S1s, S0t, S1t` hold `psi1, psi3, psi2, psi4`.
    pub u: OperatorMatrix,
}

/// Labels of the dressed counterpart of `Effective8`.
pub const DRESSED_LABELS: [&str; 8] = ["00", "S01", "A01", "11", "psi1", "psi3", "psi2", "psi4"];

impl DressedBasisInfo {
    /// `|E1 - E2|`.
    pub fn gap(&self) -> f64 {
        (self.e1 - self.e2).abs()
    }

    /// Frequency selectivity of the pump, `Omega <= |E1 - E2| / 5`.
    pub fn pump_selective(&self, omega: f64) -> bool {
        omega <= self.gap() / 5.0
    }

    /// Transform from the `Effective8` label basis to the dressed basis.
    pub fn transform(&self) -> BasisTransform {
        let to = ModelBasis::custom(&DRESSED_LABELS).expect("labels are distinct");
        BasisTransform::new(self.u.basis().clone(), to, self.u.matrix().clone())
            .expect("block rotation is unitary")
    }
}

pub fn dressed_basis(delta: f64, t_e: f64) -> Result<DressedBasisInfo> {
    if delta == 0.0 && t_e == 0.0 {
        return Err(Error::DegenerateBasis);
    }
    if !(delta.is_finite() && t_e.is_finite()) {
        return Err(Error::Domain("delta and t_e must be finite".into()));
    }
    let theta = -0.5 * (2.0 * t_e).atan2(delta);
    let root = (4.0 * t_e * t_e + delta * delta).sqrt();
    // one root from the sum, the other from the product, to avoid cancellation
    let (e1, e2) = if delta >= 0.0 {
        let e2 = -0.5 * (delta + root);
        (-t_e * t_e / e2, e2)
    } else {
        let e1 = 0.5 * (root - delta);
        (e1, -t_e * t_e / e1)
    };

    let basis = ModelBasis::new(BasisKind::Effective8);
    let (cos, sin) = (theta.cos(), theta.sin());
    let mut u = CMatrix::identity(8, 8);
    for (s, t) in [(4, 6), (5, 7)] {
        u[(s, s)] = c(cos);
        u[(t, s)] = c(-sin);
        u[(s, t)] = c(sin);
        u[(t, t)] = c(cos);
    }
    Ok(DressedBasisInfo {
        theta,
        e1,
        e2,
        delta,
        t_e,
        u: OperatorMatrix::new(basis, u)?,
    })
}

/// Which parts of the dressed trion sector enter the effective model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DressedSector {
    /// Keep `psi2`, `psi4` at detuning `E2 - E1`.
    #[default]
    Retain,
    /// Project the Hamiltonian onto the complement of `psi2`, `psi4`.
    Drop,
}

/// Tunneling-dressed effective Hamiltonian on `Effective8`, written in the
/// `S0s, S1s, S0t, S1t` label basis.
pub fn build_effective_tunneling_hamiltonian(
    drive: &DriveParams,
    dressed: &DressedBasisInfo,
) -> Result<OperatorMatrix> {
    build_effective_tunneling_hamiltonian_with(drive, dressed, DressedSector::Retain)
}

pub fn build_effective_tunneling_hamiltonian_with(
    drive: &DriveParams,
    dressed: &DressedBasisInfo,
    sector: DressedSector,
) -> Result<OperatorMatrix> {
    let basis = ModelBasis::new(BasisKind::Effective8);
    let u = dressed.u.matrix();
    let psi = |k: usize| u.column(k).into_owned();
    let (psi1, psi3, psi2, psi4) = (psi(4), psi(5), psi(6), psi(7));
    let e = |label: &str| {
        let mut v = crate::qcore::CVector::zeros(8);
        v[basis.index_of(label).unwrap()] = c(1.0);
        v
    };

    let mut h = OperatorMatrix::zeros(&basis);
    effective_ground_terms(&mut h, drive)?;
    let mut m = h.into_matrix();
    let mut coupling = |coeff: f64, a: &crate::qcore::CVector, b: &crate::qcore::CVector| {
        let kb = a * b.adjoint() * c(coeff);
        m += &kb + kb.adjoint();
    };
    let pump = drive.omega * dressed.theta.cos();
    coupling(SQRT_2 * pump, &e("11"), &psi3);
    coupling(pump, &e("S01"), &psi1);
    coupling(drive.omega_m, &e("S0s"), &e("S1s"));
    let detuning = dressed.e2 - dressed.e1;
    m += (&psi2 * psi2.adjoint() + &psi4 * psi4.adjoint()) * c(detuning);

    if sector == DressedSector::Drop {
        let q = CMatrix::identity(8, 8) - &psi2 * psi2.adjoint() - &psi4 * psi4.adjoint();
        m = &q * m * &q;
    }
    OperatorMatrix::new(basis, m)
}

/// Hamiltonian for `model`, with tunneling where the basis carries `t` states.
pub fn build_model_hamiltonian(
    kind: BasisKind,
    drive: &DriveParams,
    coupling: &CouplingParams,
    sector: DressedSector,
) -> Result<OperatorMatrix> {
    match kind {
        BasisKind::Effective6 => build_effective_hamiltonian(drive),
        BasisKind::Effective8 => {
            let d = dressed_basis(coupling.delta, coupling.t_e)?;
            build_effective_tunneling_hamiltonian_with(drive, &d, sector)
        }
        BasisKind::Full9 => build_full_hamiltonian(drive, coupling),
        BasisKind::Full16 => build_full_tunneling_hamiltonian(drive, coupling),
        other => Err(Error::InvalidConfig(format!("no Hamiltonian for basis {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{change_basis, hermitian_eigenvalues, symmetric_transform};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn default_drive(tunneling: bool) -> (DriveParams, CouplingParams) {
        let coupling = CouplingParams::default();
        let drive = DriveParams {
            detuning: resonant_detuning(&coupling, tunneling).unwrap(),
            ..Default::default()
        };
        (drive, coupling)
    }

    fn near_zero(h: &OperatorMatrix, window: f64) -> Vec<f64> {
        h.eigenvalues().into_iter().filter(|e| e.abs() < window).collect()
    }

    #[test]
    fn full_zero_parameters_give_zero() {
        let drive = DriveParams { omega: 0.0, omega_m: 0.0, detuning: 0.0, ..Default::default() };
        let coupling = CouplingParams { v_f: 0.0, v_xx: 0.0, ..Default::default() };
        assert!(build_full_hamiltonian(&drive, &coupling).unwrap().is_zero(0.0));
    }

    #[test]
    fn full_matrix_elements() {
        let (drive, coupling) = default_drive(false);
        let h = build_full_hamiltonian(&drive, &coupling).unwrap();
        assert!(h.is_hermitian());
        assert_eq!(h.element("1s", "s1").unwrap(), c(coupling.v_f));
        assert_eq!(h.element("ss", "ss").unwrap(), c(coupling.v_xx + 2.0 * drive.detuning));
    }

    #[test]
    fn full_resonance_at_minus_vf() {
        let (drive, coupling) = default_drive(false);
        let h = build_full_hamiltonian(&drive, &coupling).unwrap();
        for label in ["S0s", "S1s"] {
            assert!(h.braket(label, label).unwrap().norm() < 1e-12);
        }
        assert!((h.braket("A0s", "A0s").unwrap().re - 2.0 * coupling.v_f.abs()).abs() < 1e-12);
    }

    #[test]
    fn full9_symmetric_block_is_effective_model() {
        let (drive, coupling) = default_drive(false);
        let h = build_full_hamiltonian(&drive, &coupling).unwrap();
        let sym = change_basis(&h, &symmetric_transform(h.basis()).unwrap()).unwrap();
        let eff = build_effective_hamiltonian(&drive).unwrap();
        for a in eff.basis().labels() {
            for b in eff.basis().labels() {
                if a == "A01" || b == "A01" {
                    continue;
                }
                let got = sym.element(a, b).unwrap();
                let want = eff.element(a, b).unwrap();
                assert!((got - want).norm() < 1e-12, "<{a}|H|{b}>");
            }
        }
    }

    #[test]
    fn effective_structure() {
        let drive = DriveParams::default();
        let h = build_effective_hamiltonian(&drive).unwrap();
        assert!(h.is_hermitian());
        let a = h.basis().require("A01").unwrap();
        for k in 0..6 {
            assert_eq!(h.matrix()[(a, k)], c(0.0));
            assert_eq!(h.matrix()[(k, k)], c(0.0));
        }
        assert_eq!(h.element("11", "S1s").unwrap(), c(SQRT_2 * 20.0));
        assert_eq!(h.element("S01", "S0s").unwrap(), c(20.0));
        assert_eq!(h.element("S0s", "S1s").unwrap(), c(9.0));
        assert_eq!(h.element("00", "S01").unwrap(), c(SQRT_2 * 9.0));
        assert_eq!(h.element("S01", "11").unwrap(), c(SQRT_2 * 9.0));
        let nonzero = h.matrix().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 10);
        let off = DriveParams { omega: 0.0, omega_m: 0.0, ..drive };
        assert!(build_effective_hamiltonian(&off).unwrap().is_zero(0.0));
    }

    #[test]
    fn effective_spectrum_matches_full_low_energy_block() {
        let (drive, coupling) = default_drive(false);
        let full = build_full_hamiltonian(&drive, &coupling).unwrap();
        let low = near_zero(&full, coupling.v_f.abs() / 2.0);
        let eff = build_effective_hamiltonian(&drive).unwrap().eigenvalues();
        assert_eq!(low.len(), 6);
        let dev = low.iter().zip(&eff).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(dev < 3.0, "max deviation {dev} ueV");
    }

    #[test]
    fn tunneling_single_dot_block() {
        let coupling = CouplingParams::default();
        let omega_s = coupling.omega;
        let mut h = single_dot_tunneling(&coupling).unwrap();
        h.add_ket_bra(c(omega_s), "s", "s").unwrap();
        assert_eq!(h.element("s", "t").unwrap(), c(coupling.t_e));
        let block = h.restrict(&[2, 3]);
        let ev = block.eigenvalues();
        let wt = coupling.omega_t();
        let r = ((omega_s - wt).powi(2) + 4.0 * coupling.t_e.powi(2)).sqrt();
        assert!((ev[0] - 0.5 * (omega_s + wt - r)).abs() < 1e-6 * omega_s);
        assert!((ev[1] - 0.5 * (omega_s + wt + r)).abs() < 1e-6 * omega_s);
    }

    #[test]
    fn tunneling_hamiltonian_decouples_at_zero_rate() {
        let coupling = CouplingParams { t_e: 0.0, ..Default::default() };
        let h = build_tunneling_hamiltonian(&coupling).unwrap();
        assert!(h.is_hermitian());
        let labels = h.basis().labels().to_vec();
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate() {
                if a.contains('t') != b.contains('t') {
                    assert_eq!(h.matrix()[(i, j)], c(0.0));
                }
            }
        }
        let full = build_tunneling_hamiltonian(&CouplingParams::default()).unwrap();
        assert_eq!(full.element("0s", "0t").unwrap(), c(2000.0));
        assert_eq!(full.element("s1", "t1").unwrap(), c(2000.0));
    }

    #[test]
    fn full16_restricts_to_full9_at_zero_tunneling() {
        let coupling = CouplingParams { t_e: 0.0, ..Default::default() };
        let drive = DriveParams::default();
        let h16 = build_full_tunneling_hamiltonian(&drive, &coupling).unwrap();
        let h9 = build_full_hamiltonian(&drive, &coupling).unwrap();
        let embedded = h9.embed(h16.basis()).unwrap();
        let keep: Vec<usize> = (0..16).filter(|&i| !h16.basis().labels()[i].contains('t')).collect();
        assert_eq!(h16.restrict(&keep).matrix(), embedded.restrict(&keep).matrix());
        let labels = h16.basis().labels();
        for i in 0..16 {
            for j in 0..16 {
                if labels[i].contains('t') != labels[j].contains('t') {
                    assert_eq!(h16.matrix()[(i, j)], c(0.0));
                }
            }
        }
    }

    #[test]
    fn dressed_basis_limits() {
        let d = dressed_basis(0.0, 1500.0).unwrap();
        assert!((d.theta + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((d.e1 - 1500.0).abs() < 1e-9 && (d.e2 + 1500.0).abs() < 1e-9);

        let d = dressed_basis(20_000.0, 1e-3).unwrap();
        assert!(d.theta.abs() < 1e-7);
        assert!(d.e1.abs() < 1e-9 && (d.e2 + 20_000.0).abs() < 1e-9);

        assert_eq!(dressed_basis(0.0, 0.0), Err(Error::DegenerateBasis));
    }

    #[test]
    fn dressed_energies_match_dense_solver() {
        for delta in [-20_000.0, 20_000.0] {
            let d = dressed_basis(delta, 2000.0).unwrap();
            let m = CMatrix::from_row_slice(2, 2, &[c(0.0), c(2000.0), c(2000.0), c(-delta)]);
            let ev = hermitian_eigenvalues(&m);
            assert!((ev[1] - d.e1).abs() < 1e-9, "{} vs {}", ev[1], d.e1);
            assert!((ev[0] - d.e2).abs() < 1e-9);
        }
    }

    #[test]
    fn dressed_blocks_diagonalize() {
        let d = dressed_basis(20_000.0, 2000.0).unwrap();
        let basis = ModelBasis::new(BasisKind::Effective8);
        let mut h = OperatorMatrix::zeros(&basis);
        for (s, t) in [("S0s", "S0t"), ("S1s", "S1t")] {
            h.add_ket_bra(c(-d.delta), t, t).unwrap();
            h.add_coupling(c(d.t_e), s, t).unwrap();
        }
        let rotated = change_basis(&h, &d.transform()).unwrap();
        for (label, want) in [("psi1", d.e1), ("psi3", d.e1), ("psi2", d.e2), ("psi4", d.e2)] {
            assert!((rotated.element(label, label).unwrap() - c(want)).norm() < 1e-9);
        }
        assert!((rotated.element("psi1", "psi2").unwrap()).norm() < 1e-9);
        assert!(d.transform().unitarity_defect() < 1e-12);
    }

    #[test]
    fn effective8_reduces_to_effective6() {
        let drive = DriveParams::default();
        let d = dressed_basis(20_000.0, 0.0).unwrap();
        let h8 = build_effective_tunneling_hamiltonian(&drive, &d).unwrap();
        let h6 = build_effective_hamiltonian(&drive).unwrap();
        assert_eq!(h8.restrict(&[0, 1, 2, 3, 4, 5]).matrix(), h6.matrix());
        for i in 0..6 {
            for j in 6..8 {
                assert_eq!(h8.matrix()[(i, j)], c(0.0));
            }
        }
        let dropped =
            build_effective_tunneling_hamiltonian_with(&drive, &d, DressedSector::Drop).unwrap();
        assert_eq!(dropped.matrix(), h6.embed(h8.basis()).unwrap().matrix());
    }

    #[test]
    fn effective8_pump_scaled_by_cos_theta() {
        let drive = DriveParams::default();
        let d = dressed_basis(0.0, 2000.0).unwrap();
        let h = build_effective_tunneling_hamiltonian(&drive, &d).unwrap();
        let rotated = change_basis(&h, &d.transform()).unwrap();
        let want = drive.omega * FRAC_1_SQRT_2;
        assert!((rotated.element("S01", "psi1").unwrap() - c(want)).norm() < 1e-12);
        assert!((rotated.element("11", "psi3").unwrap() - c(SQRT_2 * want)).norm() < 1e-12);
        assert!(rotated.element("S01", "psi2").unwrap().norm() < 1e-12);
        assert!((rotated.element("psi2", "psi2").unwrap() - c(d.e2 - d.e1)).norm() < 1e-9);
        assert!(h.is_hermitian());
    }

    #[test]
    fn effective8_spectrum_matches_full16() {
        let (drive, coupling) = default_drive(true);
        let d = dressed_basis(coupling.delta, coupling.t_e).unwrap();
        assert!(d.pump_selective(drive.omega));
        let h8 = build_effective_tunneling_hamiltonian(&drive, &d).unwrap();
        let h16 = build_full_tunneling_hamiltonian(&drive, &coupling).unwrap();
        let window = coupling.v_f.abs() / 2.0;
        let low16 = near_zero(&h16, window);
        let low8 = near_zero(&h8, window);
        assert_eq!(low8.len(), 6);
        assert_eq!(low16.len(), 6);
        let dev = low16.iter().zip(&low8).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(dev < 3.0, "max deviation {dev} ueV");
    }

    #[test]
    fn builders_hermitian_and_dark() {
        let (drive, coupling) = default_drive(true);
        for kind in [BasisKind::Effective6, BasisKind::Effective8, BasisKind::Full9, BasisKind::Full16] {
            let h = build_model_hamiltonian(kind, &drive, &coupling, DressedSector::Retain).unwrap();
            assert!(h.hermiticity_defect() < 1e-12, "{kind:?}");
        }
    }

    mod props {
        use super::*;
        use crate::qcore::state_vector;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn dressed_root_identities(delta in -3e4f64..3e4, t_e in 0.0f64..5e3) {
                prop_assume!(delta.abs() + t_e > 1e-3);
                let d = dressed_basis(delta, t_e).unwrap();
                prop_assert!((d.e1 + d.e2 + delta).abs() < 1e-9 * (1.0 + delta.abs()));
                prop_assert!((d.e1 * d.e2 + t_e * t_e).abs() < 1e-9 * (1.0 + t_e * t_e + delta.abs()));
                prop_assert!(d.e1 >= d.e2);
                prop_assert!(d.theta > -std::f64::consts::FRAC_PI_2 - 1e-15 && d.theta <= 0.0);
                prop_assert!(d.transform().unitarity_defect() < 1e-12);
            }

            #[test]
            fn dark_state_annihilated(
                omega in 0.0f64..60.0,
                omega_m in 0.0f64..60.0,
                delta in 1e3f64..3e4,
                t_e in 0.0f64..4e3,
            ) {
                let drive = DriveParams { omega, omega_m, ..Default::default() };
                let h6 = build_effective_hamiltonian(&drive).unwrap();
                let a6 = state_vector(h6.basis(), "A01").unwrap();
                prop_assert!(h6.apply(&a6).iter().all(|z| z.norm() == 0.0));
                let d = dressed_basis(delta, t_e).unwrap();
                let h8 = build_effective_tunneling_hamiltonian(&drive, &d).unwrap();
                let a8 = state_vector(h8.basis(), "A01").unwrap();
                prop_assert!(h8.apply(&a8).iter().all(|z| z.norm() == 0.0));
                prop_assert!(h8.hermiticity_defect() < 1e-12);
            }
        }
    }
}
