//! Acoustic-phonon coupling: form factors, angular factors, spectral densities
//! and thermal occupations.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::quad::gauss_legendre;
use super::{joule_to_uev, si, uev_to_joule, DotGeometry, MaterialParams, K_B_UEV_PER_K};
use crate::error::{Error, Result};

/// Two-dot phonon channel: `Plus` couples to the symmetric exciton
/// combination, `Minus` to the antisymmetric one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Plus => 1.0,
            Parity::Minus => -1.0,
        }
    }
}

/// Unnormalized `sin(x)/x`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Fourier transform of the normalized Gaussian density `|phi|^2`.
///
/// Wavevectors in 1/nm, lengths in nm.
pub fn form_factor(q_par: f64, q_z: f64, l_par: f64, l_perp: f64) -> f64 {
    (-(q_par * q_par * l_par * l_par) / 8.0 - (q_z * q_z * l_perp * l_perp) / 4.0).exp()
}

/// Piezoelectric angular factor `1/4 sin(theta) M_p sqrt(9 + 7 cos 2theta - 2 cos 4phi sin^2 theta)`.
pub fn piezo_angular(theta: f64, phi: f64, m_p: f64) -> f64 {
    let s = theta.sin();
    let inner = 9.0 + 7.0 * (2.0 * theta).cos() - 2.0 * (4.0 * phi).cos() * s * s;
    0.25 * s * m_p * inner.max(0.0).sqrt()
}

const PHI_POINTS: usize = 16;
const MIN_ORDER: usize = 16;
const MAX_ORDER: usize = 1024;
const REL_TOL: f64 = 1e-10;

/// Solid-angle integral of the deformation + piezoelectric densities, in ueV,
/// without the two-dot interference factor.
pub fn spectral_density_total(omega: f64, geom: &DotGeometry, material: &MaterialParams) -> Result<f64> {
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("spectral density needs omega >= 0, got {omega}")));
    }
    if omega == 0.0 {
        return Ok(0.0);
    }
    let w = uev_to_joule(omega) / si::HBAR;
    let c_s = material.c_s;
    let q = w / c_s * 1e-9;
    let pref_d = w.powi(3) / (8.0 * PI * PI * material.mass_density * c_s.powi(5));
    let pref_p = w / (8.0 * PI * PI * material.mass_density * c_s.powi(3));
    let d_e = material.d_e * si::ELECTRON_CHARGE;
    let d_h = material.d_h * si::ELECTRON_CHARGE;
    let m_p = material.m_p * si::ELECTRON_CHARGE * 1e9;

    let integrand = |u: f64| -> f64 {
        let sin_t = (1.0 - u * u).max(0.0).sqrt();
        let theta = u.acos();
        let (q_par, q_z) = (q * sin_t, q * u);
        let rho_e = form_factor(q_par, q_z, geom.l_par_e, geom.l_perp);
        let rho_h = form_factor(q_par, q_z, geom.l_par_h, geom.l_perp);
        let g_d = pref_d * (d_e * rho_e - d_h * rho_h).powi(2);
        let diff2 = (rho_e - rho_h).powi(2);
        // trapezoid in phi is exact for the cos(4 phi) dependence
        let mut piezo = 0.0;
        for k in 0..PHI_POINTS {
            let phi = 2.0 * PI * k as f64 / PHI_POINTS as f64;
            piezo += piezo_angular(theta, phi, m_p).powi(2);
        }
        piezo *= 2.0 * PI / PHI_POINTS as f64;
        2.0 * PI * g_d + pref_p * piezo * diff2
    };

    let gl = |n: usize| -> f64 {
        let (x, wts) = gauss_legendre(n);
        x.iter().zip(&wts).map(|(xi, wi)| wi * integrand(*xi)).sum()
    };
    let mut n = MIN_ORDER;
    let mut prev = gl(n);
    loop {
        n *= 2;
        let next = gl(n);
        let diff = (next - prev).abs();
        if diff <= REL_TOL * next.abs() || next == 0.0 {
            return Ok(joule_to_uev(next));
        }
        if n >= MAX_ORDER {
            return Err(Error::Quadrature { estimate: diff / next.abs() });
        }
        prev = next;
    }
}

/// `J_+-(omega)` in ueV for a two-dot molecule at separation `geom.d`.
pub fn spectral_density(
    omega: f64,
    parity: Parity,
    geom: &DotGeometry,
    material: &MaterialParams,
) -> Result<f64> {
    let total = spectral_density_total(omega, geom, material)?;
    let phase = uev_to_joule(omega) / si::HBAR / material.c_s * geom.d * 1e-9;
    Ok((1.0 + parity.sign() * sinc(phase)) * total)
}

/// Bose-Einstein occupation; exactly zero at `T = 0`.
pub fn bose_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("Bose occupation needs omega > 0, got {omega}")));
    }
    if !(temperature >= 0.0) {
        return Err(Error::Domain(format!("temperature must be >= 0, got {temperature}")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (omega / (K_B_UEV_PER_K * temperature)).exp_m1())
}
