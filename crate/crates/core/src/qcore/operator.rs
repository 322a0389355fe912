use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::basis::{BasisKind, ModelBasis};
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-8;
pub const UNITARY_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// max |A - A^dag|
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitize(m).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = hermitize(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Column-stacking vectorization: `vec(rho)[i + j*d] = rho[(i, j)]`.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, d: usize) -> CMatrix {
    CMatrix::from_column_slice(d, d, v.as_slice())
}

/// Basis vector for `label`.
///
/// Absent `S<ij>` and `A<ij>` labels resolve to the combinations
/// `(|ij> + |ji>)/sqrt2` and `(|ji> - |ij>)/sqrt2` when `ij` and `ji` exist.
pub fn state_vector(basis: &ModelBasis, label: &str) -> Result<CVector> {
    let mut v = CVector::zeros(basis.dim());
    if let Some(i) = basis.index_of(label) {
        v[i] = c(1.0);
        return Ok(v);
    }
    {
        let mut chars = label.chars();
        let tag = chars.next();
        let rest: String = chars.collect();
        if matches!(tag, Some('S') | Some('A')) && rest.chars().count() == 2 {
            let a: String = rest.chars().take(1).collect();
            let b: String = rest.chars().skip(1).collect();
            if a != b {
                let ij = basis.require(&format!("{a}{b}"))?;
                let ji = basis.require(&format!("{b}{a}"))?;
                let sign = if tag == Some('S') { 1.0 } else { -1.0 };
                v[ij] = c(sign * FRAC_1_SQRT_2);
                v[ji] = c(FRAC_1_SQRT_2);
                return Ok(v);
            }
        }
    }
    Err(Error::MissingLabel(label.to_string()))
}

/// A square operator on a labeled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    basis: ModelBasis,
    m: CMatrix,
}

impl OperatorMatrix {
    pub fn new(basis: ModelBasis, m: CMatrix) -> Result<OperatorMatrix> {
        if m.nrows() != basis.dim() || m.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: m.nrows().max(m.ncols()),
            });
        }
        Ok(OperatorMatrix { basis, m })
    }

    pub fn zeros(basis: &ModelBasis) -> OperatorMatrix {
        let d = basis.dim();
        OperatorMatrix {
            basis: basis.clone(),
            m: CMatrix::zeros(d, d),
        }
    }

    pub fn identity(basis: &ModelBasis) -> OperatorMatrix {
        let d = basis.dim();
        OperatorMatrix {
            basis: basis.clone(),
            m: CMatrix::identity(d, d),
        }
    }

    /// `|a><b|` for labels resolvable by [`state_vector`].
    pub fn ket_bra(basis: &ModelBasis, a: &str, b: &str) -> Result<OperatorMatrix> {
        let ka = state_vector(basis, a)?;
        let kb = state_vector(basis, b)?;
        Ok(OperatorMatrix {
            basis: basis.clone(),
            m: &ka * kb.adjoint(),
        })
    }

    pub fn projector(basis: &ModelBasis, label: &str) -> Result<OperatorMatrix> {
        OperatorMatrix::ket_bra(basis, label, label)
    }

    pub fn basis(&self) -> &ModelBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn element(&self, row: &str, col: &str) -> Result<C64> {
        Ok(self.m[(self.basis.require(row)?, self.basis.require(col)?)])
    }

    /// `<a| op |b>` for labels resolvable by [`state_vector`].
    pub fn braket(&self, a: &str, b: &str) -> Result<C64> {
        let ka = state_vector(&self.basis, a)?;
        let kb = state_vector(&self.basis, b)?;
        Ok((ka.adjoint() * &self.m * kb)[(0, 0)])
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            basis: self.basis.clone(),
            m: self.m.adjoint(),
        }
    }

    pub fn scale(&self, s: f64) -> OperatorMatrix {
        OperatorMatrix {
            basis: self.basis.clone(),
            m: self.m.scale(s),
        }
    }

    /// `self + coeff * other`.
    pub fn add_scaled(&mut self, coeff: C64, other: &OperatorMatrix) -> Result<()> {
        self.basis.ensure_same(&other.basis)?;
        self.m += &other.m * coeff;
        Ok(())
    }

    /// Adds `coeff |a><b|`.
    pub fn add_ket_bra(&mut self, coeff: C64, a: &str, b: &str) -> Result<()> {
        let kb = OperatorMatrix::ket_bra(&self.basis, a, b)?;
        self.m += kb.m * coeff;
        Ok(())
    }

    /// Adds `coeff |a><b| + h.c.`.
    pub fn add_coupling(&mut self, coeff: C64, a: &str, b: &str) -> Result<()> {
        let kb = OperatorMatrix::ket_bra(&self.basis, a, b)?;
        self.m += &kb.m * coeff + kb.m.adjoint() * coeff.conj();
        Ok(())
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.m)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() < HERMITIAN_TOL
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.m.iter().all(|z| z.norm() <= tol)
    }

    pub fn mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.basis.ensure_same(&other.basis)?;
        Ok(OperatorMatrix {
            basis: self.basis.clone(),
            m: &self.m * &other.m,
        })
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.basis.ensure_same(&other.basis)?;
        Ok(OperatorMatrix {
            basis: self.basis.clone(),
            m: &self.m * &other.m - &other.m * &self.m,
        })
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.m * v
    }

    /// Restriction to the basis states at `keep`.
    pub fn restrict(&self, keep: &[usize]) -> OperatorMatrix {
        let n = keep.len();
        OperatorMatrix {
            basis: self.basis.restrict(keep),
            m: CMatrix::from_fn(n, n, |i, j| self.m[(keep[i], keep[j])]),
        }
    }

    /// Embeds into `target`, matching states by label; unmatched entries are zero.
    pub fn embed(&self, target: &ModelBasis) -> Result<OperatorMatrix> {
        let idx: Vec<usize> = self
            .basis
            .labels()
            .iter()
            .map(|l| target.require(l))
            .collect::<Result<_>>()?;
        let mut m = CMatrix::zeros(target.dim(), target.dim());
        for (i, &ti) in idx.iter().enumerate() {
            for (j, &tj) in idx.iter().enumerate() {
                m[(ti, tj)] = self.m[(i, j)];
            }
        }
        Ok(OperatorMatrix {
            basis: target.clone(),
            m,
        })
    }
}

/// Kronecker product of two single-dot operators.
pub fn tensor(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.basis.ensure_same(&b.basis)?;
    let basis = ModelBasis::product_of(a.basis.kind()).ok_or_else(|| Error::BasisMismatch {
        expected: "single-dot basis (Dot3 or Dot4)".into(),
        found: a.basis.to_string(),
    })?;
    Ok(OperatorMatrix {
        basis,
        m: a.m.kronecker(&b.m),
    })
}

/// `op` acting on dot `which` (0 or 1) of a product basis.
pub fn on_dot(op: &OperatorMatrix, which: usize) -> Result<OperatorMatrix> {
    let id = OperatorMatrix::identity(op.basis());
    if which == 0 {
        tensor(op, &id)
    } else {
        tensor(&id, op)
    }
}

/// A change of basis whose columns are the target states in source coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisTransform {
    from: ModelBasis,
    to: ModelBasis,
    u: CMatrix,
}

impl BasisTransform {
    pub fn new(from: ModelBasis, to: ModelBasis, u: CMatrix) -> Result<BasisTransform> {
        if u.nrows() != from.dim() || u.ncols() != to.dim() {
            return Err(Error::DimensionMismatch {
                expected: from.dim(),
                found: u.nrows(),
            });
        }
        Ok(BasisTransform { from, to, u })
    }

    pub fn identity(basis: &ModelBasis) -> BasisTransform {
        BasisTransform {
            from: basis.clone(),
            to: basis.clone(),
            u: CMatrix::identity(basis.dim(), basis.dim()),
        }
    }

    pub fn from_basis(&self) -> &ModelBasis {
        &self.from
    }

    pub fn to_basis(&self) -> &ModelBasis {
        &self.to
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.u
    }

    pub fn unitarity_defect(&self) -> f64 {
        let n = self.u.ncols();
        let g = self.u.adjoint() * &self.u - CMatrix::identity(n, n);
        g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Product basis -> symmetric/antisymmetric basis (`Full9 -> Sym9`, `Full16 -> Sym16`).
pub fn symmetric_transform(product: &ModelBasis) -> Result<BasisTransform> {
    let target = match product.kind() {
        BasisKind::Full9 => ModelBasis::new(BasisKind::Sym9),
        BasisKind::Full16 => ModelBasis::new(BasisKind::Sym16),
        _ => {
            return Err(Error::BasisMismatch {
                expected: "Full9 or Full16".into(),
                found: product.to_string(),
            })
        }
    };
    let d = product.dim();
    let mut u = CMatrix::zeros(d, d);
    for (k, label) in target.labels().iter().enumerate() {
        u.set_column(k, &state_vector(product, label)?);
    }
    BasisTransform::new(product.clone(), target, u)
}

/// `U^dag op U`, relabeled to the transform's target basis.
pub fn change_basis(op: &OperatorMatrix, u: &BasisTransform) -> Result<OperatorMatrix> {
    op.basis.ensure_same(&u.from)?;
    let dev = u.unitarity_defect();
    if dev > UNITARY_TOL || u.u.nrows() != u.u.ncols() {
        return Err(Error::NotUnitary { max_deviation: dev });
    }
    Ok(OperatorMatrix {
        basis: u.to.clone(),
        m: u.u.adjoint() * &op.m * &u.u,
    })
}

/// A validated density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    basis: ModelBasis,
    m: CMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(basis: ModelBasis, m: CMatrix) -> Result<DensityMatrix> {
        if m.nrows() != basis.dim() || m.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: m.nrows(),
            });
        }
        let herm = hermiticity_defect(&m);
        if herm > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (defect {herm:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - c(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min = hermitian_eigenvalues(&m).first().copied().unwrap_or(0.0);
        if min < -POSITIVITY_TOL {
            return Err(Error::Positivity { min_eigenvalue: min });
        }
        Ok(DensityMatrix { basis, m })
    }

    pub(crate) fn new_unchecked(basis: ModelBasis, m: CMatrix) -> DensityMatrix {
        DensityMatrix { basis, m }
    }

    pub fn pure(basis: &ModelBasis, psi: &CVector) -> Result<DensityMatrix> {
        let psi = psi.normalize();
        DensityMatrix::new(basis.clone(), &psi * psi.adjoint())
    }

    pub fn pure_label(basis: &ModelBasis, label: &str) -> Result<DensityMatrix> {
        DensityMatrix::pure(basis, &state_vector(basis, label)?)
    }

    /// Incoherent mixture of labeled states with the given weights.
    pub fn mixture(basis: &ModelBasis, parts: &[(&str, f64)]) -> Result<DensityMatrix> {
        let mut m = CMatrix::zeros(basis.dim(), basis.dim());
        for (label, w) in parts {
            let v = state_vector(basis, label)?;
            m += (&v * v.adjoint()) * c(*w);
        }
        DensityMatrix::new(basis.clone(), m)
    }

    pub fn maximally_mixed(basis: &ModelBasis) -> DensityMatrix {
        let d = basis.dim();
        DensityMatrix {
            basis: basis.clone(),
            m: CMatrix::identity(d, d).scale(1.0 / d as f64),
        }
    }

    pub fn basis(&self) -> &ModelBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn population(&self, label: &str) -> Result<f64> {
        let v = state_vector(&self.basis, label)?;
        Ok((v.adjoint() * &self.m * v)[(0, 0)].re)
    }

    pub fn populations(&self) -> Vec<f64> {
        self.m.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.m).first().copied().unwrap_or(0.0)
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// Expectation value `Tr(op rho)`.
    pub fn expect(&self, op: &OperatorMatrix) -> Result<C64> {
        self.basis.ensure_same(op.basis())?;
        Ok((op.matrix() * &self.m).trace())
    }

    pub fn embed(&self, target: &ModelBasis) -> Result<DensityMatrix> {
        let op = OperatorMatrix::new(self.basis.clone(), self.m.clone())?.embed(target)?;
        Ok(DensityMatrix::new_unchecked(target.clone(), op.into_matrix()))
    }

    pub fn restrict(&self, keep: &[usize]) -> DensityMatrix {
        let n = keep.len();
        DensityMatrix {
            basis: self.basis.restrict(keep),
            m: CMatrix::from_fn(n, n, |i, j| self.m[(keep[i], keep[j])]),
        }
    }

    pub fn change_basis(&self, u: &BasisTransform) -> Result<DensityMatrix> {
        let op = OperatorMatrix::new(self.basis.clone(), self.m.clone())?;
        let out = change_basis(&op, u)?;
        Ok(DensityMatrix::new_unchecked(out.basis, out.m))
    }
}

/// A linear map on column-stacked density matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    basis: ModelBasis,
    m: CMatrix,
}

impl Superoperator {
    pub fn new(basis: ModelBasis, m: CMatrix) -> Result<Superoperator> {
        let d2 = basis.dim() * basis.dim();
        if m.nrows() != d2 || m.ncols() != d2 {
            return Err(Error::DimensionMismatch {
                expected: d2,
                found: m.nrows(),
            });
        }
        Ok(Superoperator { basis, m })
    }

    pub fn zeros(basis: &ModelBasis) -> Superoperator {
        let d2 = basis.dim() * basis.dim();
        Superoperator {
            basis: basis.clone(),
            m: CMatrix::zeros(d2, d2),
        }
    }

    pub fn identity(basis: &ModelBasis) -> Superoperator {
        let d2 = basis.dim() * basis.dim();
        Superoperator {
            basis: basis.clone(),
            m: CMatrix::identity(d2, d2),
        }
    }

    /// `rho -> -i [H, rho]`, i.e. `-i (I (x) H - H^T (x) I)` under column stacking.
    pub fn commutator_with(h: &OperatorMatrix) -> Superoperator {
        let d = h.dim();
        let id = CMatrix::identity(d, d);
        let m = (id.kronecker(h.matrix()) - h.matrix().transpose().kronecker(&id)) * C64::new(0.0, -1.0);
        Superoperator {
            basis: h.basis().clone(),
            m,
        }
    }

    pub fn basis(&self) -> &ModelBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn add(&mut self, other: &Superoperator) -> Result<()> {
        self.basis.ensure_same(&other.basis)?;
        self.m += &other.m;
        Ok(())
    }

    pub fn compose(&self, other: &Superoperator) -> Result<Superoperator> {
        self.basis.ensure_same(&other.basis)?;
        Ok(Superoperator {
            basis: self.basis.clone(),
            m: &self.m * &other.m,
        })
    }

    pub fn apply_matrix(&self, rho: &CMatrix) -> CMatrix {
        unvectorize(&(&self.m * vectorize(rho)), self.dim())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<CMatrix> {
        self.basis.ensure_same(rho.basis())?;
        Ok(self.apply_matrix(rho.matrix()))
    }

    /// max |L^dag vec(I)|: zero for trace-preserving generators.
    pub fn trace_defect(&self) -> f64 {
        let d = self.dim();
        (0..d * d)
            .map(|k| {
                (0..d)
                    .map(|i| self.m[(i + i * d, k)])
                    .fold(C64::new(0.0, 0.0), |acc, z| acc + z)
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn restrict(&self, keep: &[usize]) -> Superoperator {
        let d = self.dim();
        let n = keep.len();
        let idx: Vec<usize> = (0..n * n).map(|k| keep[k % n] + keep[k / n] * d).collect();
        Superoperator {
            basis: self.basis.restrict(keep),
            m: CMatrix::from_fn(n * n, n * n, |r, s| self.m[(idx[r], idx[s])]),
        }
    }
}

/// Dissipator `rho -> L rho L^dag - 1/2 {L^dag L, rho}` as a superoperator.
pub fn lindblad_term(l: &OperatorMatrix) -> Superoperator {
    let d = l.dim();
    let id = CMatrix::identity(d, d);
    let lm = l.matrix();
    let ldl = lm.adjoint() * lm;
    let m = lm.conjugate().kronecker(lm)
        - (id.kronecker(&ldl) + ldl.transpose().kronecker(&id)) * c(0.5);
    Superoperator {
        basis: l.basis().clone(),
        m,
    }
}
