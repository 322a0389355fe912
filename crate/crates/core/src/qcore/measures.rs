//! Two-qubit reduction and entanglement measures.

use std::f64::consts::FRAC_1_SQRT_2;

use super::basis::{BasisKind, ModelBasis};
use super::operator::{c, hermitian_eigen, hermitian_eigenvalues, CMatrix, DensityMatrix, POSITIVITY_TOL};
use crate::error::{Error, Result};

/// Below this qubit-block weight the state is treated as all-trion.
pub const EMPTY_SUBSPACE_TOL: f64 = 1e-6;

/// Qubit-block restriction of a state, renormalized.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitProjection {
    pub rho: DensityMatrix,
    /// `1 - Tr(P rho P)`, the weight outside the two-qubit subspace.
    pub leak: f64,
}

/// Extracts the `{00, 01, 10, 11}` block of `rho`.
///
/// Bases carrying `S01`/`A01` instead of `01`/`10` are rotated back with
/// `|01> = (S01 - A01)/sqrt2`, `|10> = (S01 + A01)/sqrt2`.
pub fn project_to_qubits(rho: &DensityMatrix) -> Result<QubitProjection> {
    let basis = rho.basis();
    let r = rho.matrix();
    let i00 = basis.require("00")?;
    let i11 = basis.require("11")?;
    let h = FRAC_1_SQRT_2;
    // columns: qubit states, rows: (00, x, y, 11) with (x, y) the middle pair
    let (mid, v) = if basis.contains("01") && basis.contains("10") {
        ([basis.require("01")?, basis.require("10")?], CMatrix::identity(4, 4))
    } else {
        let s = basis.require("S01")?;
        let a = basis.require("A01")?;
        let mut v = CMatrix::zeros(4, 4);
        v[(0, 0)] = c(1.0);
        v[(1, 1)] = c(h);
        v[(2, 1)] = c(-h);
        v[(1, 2)] = c(h);
        v[(2, 2)] = c(h);
        v[(3, 3)] = c(1.0);
        ([s, a], v)
    };
    let idx = [i00, mid[0], mid[1], i11];
    let block = CMatrix::from_fn(4, 4, |i, j| r[(idx[i], idx[j])]);
    let weight = block.trace().re;
    if weight < EMPTY_SUBSPACE_TOL {
        return Err(Error::EmptySubspace { weight });
    }
    let q = v.adjoint() * block * v * c(1.0 / weight);
    let leak = (1.0 - weight).clamp(0.0, 1.0);
    Ok(QubitProjection {
        rho: DensityMatrix::new_unchecked(ModelBasis::new(BasisKind::Qubits), q),
        leak,
    })
}

/// `sigma_y (x) sigma_y` on `{00, 01, 10, 11}`.
pub(crate) fn sigma_yy() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 3)] = c(-1.0);
    m[(3, 0)] = c(-1.0);
    m[(1, 2)] = c(1.0);
    m[(2, 1)] = c(1.0);
    m
}

/// Wootters concurrence of a two-qubit state.
///
/// Uses the Hermitian form `R = sqrt(rho) rho~ sqrt(rho)`, whose eigenvalues
/// are the squared `lambda_i`. Eigenvalues in `(-1e-8, 0)` are clamped.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.basis().kind() != BasisKind::Qubits {
        return Err(Error::BasisMismatch {
            expected: "Qubits".into(),
            found: rho.basis().to_string(),
        });
    }
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let mut sqrt_diag = CMatrix::zeros(4, 4);
    for (k, &v) in vals.iter().enumerate() {
        if v < -POSITIVITY_TOL {
            return Err(Error::Positivity { min_eigenvalue: v });
        }
        sqrt_diag[(k, k)] = c(v.max(0.0).sqrt());
    }
    let sqrt_rho = &vecs * sqrt_diag * vecs.adjoint();
    let yy = sigma_yy();
    let tilde = &yy * rho.matrix().conjugate() * &yy;
    let r = &sqrt_rho * tilde * &sqrt_rho;
    let mut lambdas = Vec::with_capacity(4);
    for v in hermitian_eigenvalues(&r) {
        if v < -POSITIVITY_TOL {
            return Err(Error::Positivity { min_eigenvalue: v });
        }
        lambdas.push(v.max(0.0).sqrt());
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// Concurrence of the renormalized qubit block, with the leaked weight.
pub fn qubit_concurrence(rho: &DensityMatrix) -> Result<(f64, f64)> {
    let p = project_to_qubits(rho)?;
    Ok((concurrence(&p.rho)?, p.leak))
}

/// `1/2 ||rho1 - rho2||_1`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    a.basis().ensure_same(b.basis())?;
    Ok(trace_distance_matrices(a.matrix(), b.matrix()))
}

pub(crate) fn trace_distance_matrices(a: &CMatrix, b: &CMatrix) -> f64 {
    0.5 * hermitian_eigenvalues(&(a - b)).iter().map(|v| v.abs()).sum::<f64>()
}
