//! Units, parameter records and the derived-coupling formulas.
//!
//! Dynamics run with hbar = 1: energies and rates in ueV, times in hbar/ueV.
//! One hbar/ueV is 0.65821195 ns.

mod couplings;
mod phonons;
pub mod quad;

pub use couplings::{
    forster_coupling, forster_eps_r_for, forster_prefactor, forster_shape_f, wkb_tunneling_rate,
    zeeman_splittings, ZeemanSplittings,
};
pub use phonons::{
    bose_occupation, form_factor, piezo_angular, sinc, spectral_density, spectral_density_total,
    Parity,
};

use serde::{Deserialize, Serialize};

/// hbar in ueV ns.
pub const HBAR_UEV_NS: f64 = 0.658_211_95;
/// Boltzmann constant in ueV/K.
pub const K_B_UEV_PER_K: f64 = 86.1733;
/// Bohr magneton in ueV/T.
pub const MU_B_UEV_PER_T: f64 = 57.8838;

pub mod si {
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const ELECTRON_CHARGE: f64 = 1.602_176_634e-19;
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
    pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
}

/// ns -> hbar/ueV
pub fn ns_to_internal(t_ns: f64) -> f64 {
    t_ns / HBAR_UEV_NS
}

/// hbar/ueV -> ns
pub fn internal_to_ns(t: f64) -> f64 {
    t * HBAR_UEV_NS
}

/// ueV -> J
pub fn uev_to_joule(e: f64) -> f64 {
    e * 1e-6 * si::ELECTRON_CHARGE
}

/// J -> ueV
pub fn joule_to_uev(e: f64) -> f64 {
    e / si::ELECTRON_CHARGE * 1e6
}

/// Optical drive and radiative decay, all in ueV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveParams {
    /// Trion pump Rabi frequency.
    pub omega: f64,
    /// Raman coupling between the hole ground states.
    pub omega_m: f64,
    /// Laser detuning from the bare H1 transition, `omega_trion - omega_laser`.
    pub detuning: f64,
    /// Trion decay rate into |0>.
    pub gamma0: f64,
    /// Trion decay rate into |1>.
    pub gamma1: f64,
}

impl DriveParams {
    pub fn gamma(&self) -> f64 {
        self.gamma0 + self.gamma1
    }

    /// Splits `gamma` evenly between the two decay channels.
    pub fn with_gamma(mut self, gamma: f64) -> DriveParams {
        self.gamma0 = 0.5 * gamma;
        self.gamma1 = 0.5 * gamma;
        self
    }

    pub fn validate(&self) -> crate::Result<()> {
        let fields = [
            ("omega", self.omega),
            ("omega_m", self.omega_m),
            ("gamma0", self.gamma0),
            ("gamma1", self.gamma1),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                return Err(crate::Error::InvalidConfig(format!(
                    "drive.{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if !self.detuning.is_finite() {
            return Err(crate::Error::InvalidConfig("drive.detuning must be finite".into()));
        }
        Ok(())
    }
}

impl Default for DriveParams {
    fn default() -> Self {
        DriveParams {
            omega: 20.0,
            omega_m: 9.0,
            detuning: 200.0,
            gamma0: 0.6,
            gamma1: 0.6,
        }
    }
}

/// Inter-dot couplings and trion energies, in ueV.
///
/// `delta = v_f + omega - omega_t` is stored; `omega_t` is derived from it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingParams {
    /// Forster coupling (signed).
    pub v_f: f64,
    /// Bi-trion (static dipole) shift.
    pub v_xx: f64,
    /// Electron tunneling between intra- and inter-dot trions.
    pub t_e: f64,
    /// Intra/inter-dot trion detuning.
    pub delta: f64,
    /// Bare intra-dot trion energy.
    pub omega: f64,
}

impl CouplingParams {
    pub fn omega_t(&self) -> f64 {
        self.v_f + self.omega - self.delta
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.v_xx > 0.0) {
            return Err(crate::Error::InvalidConfig(format!(
                "coupling.v_xx must be > 0, got {}",
                self.v_xx
            )));
        }
        for (name, v) in [("v_f", self.v_f), ("t_e", self.t_e), ("delta", self.delta), ("omega", self.omega)] {
            if !v.is_finite() {
                return Err(crate::Error::InvalidConfig(format!("coupling.{name} must be finite")));
            }
        }
        if self.t_e < 0.0 {
            return Err(crate::Error::InvalidConfig("coupling.t_e must be >= 0".into()));
        }
        Ok(())
    }
}

impl Default for CouplingParams {
    fn default() -> Self {
        CouplingParams {
            v_f: -200.0,
            v_xx: 3000.0,
            t_e: 2000.0,
            delta: 20_000.0,
            omega: 1.3e6,
        }
    }
}

/// `max(omega, omega_m) <= |v_f|/5` and `|v_f| <= v_xx/5`.
pub fn hierarchy_ok(drive: &DriveParams, coupling: &CouplingParams) -> bool {
    drive.omega.max(drive.omega_m) <= coupling.v_f.abs() / 5.0
        && coupling.v_f.abs() <= coupling.v_xx / 5.0
}

/// Dot wavefunction and molecule geometry, lengths in nm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DotGeometry {
    pub l_par_e: f64,
    pub l_par_h: f64,
    pub l_perp: f64,
    /// Inter-dot distance.
    pub d: f64,
    /// Interband dipole length |a|.
    pub a: f64,
    /// Relative dielectric constant used by the Forster estimate.
    pub eps_r: f64,
}

/// Dielectric constant at which the default geometry gives `V_F = -200 ueV`.
pub const CALIBRATED_EPS_R: f64 = 4.148_016_170_01;

impl Default for DotGeometry {
    fn default() -> Self {
        DotGeometry {
            l_par_e: 4.4,
            l_par_h: 4.0,
            l_perp: 1.0,
            d: 9.5,
            a: 1.6,
            eps_r: CALIBRATED_EPS_R,
        }
    }
}

impl DotGeometry {
    pub fn validate(&self) -> crate::Result<()> {
        for (name, v) in [
            ("l_par_e", self.l_par_e),
            ("l_par_h", self.l_par_h),
            ("l_perp", self.l_perp),
            ("d", self.d),
            ("a", self.a),
            ("eps_r", self.eps_r),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(crate::Error::InvalidConfig(format!(
                    "geometry.{name} must be > 0, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// In-plane lengths at least three times the vertical one.
    pub fn flat_dot_ok(&self) -> bool {
        self.l_par_e.min(self.l_par_h) >= 3.0 * self.l_perp
    }
}

/// Host material (GaAs-like defaults) and Zeeman data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialParams {
    /// kg/m^3
    pub mass_density: f64,
    /// Longitudinal sound speed, m/s.
    pub c_s: f64,
    /// Electron deformation potential, eV.
    pub d_e: f64,
    /// Hole deformation potential, eV.
    pub d_h: f64,
    /// Piezoelectric constant, eV/nm.
    pub m_p: f64,
    pub g_e_star: f64,
    pub g_h_star: f64,
    /// Voigt field, T.
    pub b_x: f64,
    /// Trion Zeeman splitting, ueV.
    pub e_b_e: f64,
    /// Hole Zeeman splitting, ueV.
    pub e_b_h: f64,
}

impl Default for MaterialParams {
    fn default() -> Self {
        MaterialParams {
            mass_density: 5370.0,
            c_s: 5110.0,
            d_e: 7.0,
            d_h: -3.5,
            m_p: 1.4,
            g_e_star: -0.46,
            g_h_star: -0.29,
            b_x: 1.0,
            e_b_e: -27.78,
            e_b_h: -17.94,
        }
    }
}

impl MaterialParams {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.mass_density > 0.0 && self.c_s > 0.0) {
            return Err(crate::Error::InvalidConfig(
                "material.mass_density and material.c_s must be > 0".into(),
            ));
        }
        Ok(())
    }
}
