//! Labeled complex operator algebra, density-matrix checks and entanglement
//! measures.
//!
//! Every superoperator in the crate uses column-stacking vectorization,
//! `vec(rho)[i + j*d] = rho[(i, j)]`, which is also nalgebra's storage order.

mod basis;
mod measures;
mod operator;

pub use basis::{BasisKind, ModelBasis, DOT3_LEVELS, DOT4_LEVELS};
pub use measures::{
    concurrence, project_to_qubits, qubit_concurrence, trace_distance, QubitProjection,
    EMPTY_SUBSPACE_TOL,
};
pub(crate) use measures::trace_distance_matrices;
pub use operator::{
    change_basis, hermiticity_defect, hermitian_eigen, hermitian_eigenvalues, hermitize,
    lindblad_term, on_dot, state_vector, symmetric_transform, tensor, unvectorize, vectorize,
    BasisTransform, CMatrix, CVector, DensityMatrix, OperatorMatrix, Superoperator,
    DENSITY_HERMITIAN_TOL, HERMITIAN_TOL, POSITIVITY_TOL, TRACE_TOL, UNITARY_TOL,
};
pub(crate) use operator::c;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Full-rank random state `G G^dag / Tr`, `G` complex Ginibre.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, basis: &ModelBasis) -> DensityMatrix {
    random_low_rank(rng, basis, basis.dim())
}

/// Random state of rank at most `rank`.
pub fn random_low_rank<R: Rng + ?Sized>(
    rng: &mut R,
    basis: &ModelBasis,
    rank: usize,
) -> DensityMatrix {
    let d = basis.dim();
    let g = CMatrix::from_fn(d, rank, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new_unchecked(basis.clone(), hermitize(&(m * c(1.0 / tr))))
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use rand::Rng;

    pub use super::{random_density, random_low_rank};

    pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
        let h = hermitize(&random_matrix(rng, n));
        (h * C64::new(0.0, 1.0)).exp()
    }

    pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
        random_unitary(rng, 2).kronecker(&random_unitary(rng, 2))
    }
}
