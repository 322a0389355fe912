//! Collapse operators for trion decay and acoustic phonons, and the
//! Liouvillian assembled from them.

use crate::error::{Error, Result};
use crate::physics::{bose_occupation, spectral_density, DotGeometry, MaterialParams, Parity};
use crate::qcore::{
    c, hermitian_eigen, lindblad_term, on_dot, CMatrix, ModelBasis, OperatorMatrix, Superoperator,
};

/// Bohr frequencies below this (ueV) are not phonon channels.
pub const OMEGA_CUTOFF: f64 = 1e-3;
/// Eigenvalues closer than this (ueV) form one degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-6;

/// Labeled list of Lindblad operators, in sqrt(ueV).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CollapseSet {
    pub ops: Vec<OperatorMatrix>,
    pub labels: Vec<String>,
}

impl CollapseSet {
    pub fn new() -> CollapseSet {
        CollapseSet::default()
    }

    pub fn push(&mut self, label: impl Into<String>, op: OperatorMatrix) {
        self.labels.push(label.into());
        self.ops.push(op);
    }

    pub fn extend(&mut self, other: CollapseSet) {
        self.labels.extend(other.labels);
        self.ops.extend(other.ops);
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &OperatorMatrix)> {
        self.labels.iter().map(String::as_str).zip(&self.ops)
    }

    /// `sum_i L_i^dag L_i` on `basis`.
    pub fn decay_operator(&self, basis: &ModelBasis) -> Result<OperatorMatrix> {
        let mut total = OperatorMatrix::zeros(basis);
        for op in &self.ops {
            total.add_scaled(c(1.0), &op.adjoint().mul(op)?)?;
        }
        Ok(total)
    }

    /// Each operator restricted to the basis states at `keep`.
    pub fn restrict(&self, keep: &[usize]) -> CollapseSet {
        CollapseSet {
            ops: self.ops.iter().map(|op| op.restrict(keep)).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// Trion decay `L1..L4` on `basis`.
///
/// Label bases get the collective operators directly. Product bases get
/// `sqrt(Gamma/2) (c_1 +- c_2)` with `c_j` the decay of dot `j`, which has the
/// same matrix elements between symmetric and antisymmetric states. Inter-dot
/// trions `|t>` do not radiate.
pub fn spontaneous_collapse_ops(gamma0: f64, gamma1: f64, basis: &ModelBasis) -> Result<CollapseSet> {
    if !(gamma0 >= 0.0 && gamma1 >= 0.0) {
        return Err(Error::Domain(format!(
            "decay rates must be >= 0, got {gamma0}, {gamma1}"
        )));
    }
    let mut set = CollapseSet::new();
    if let Some(dot) = basis.factor() {
        for (name, g, target) in [("L1", gamma0, "0"), ("L3", gamma1, "1")] {
            let local = OperatorMatrix::ket_bra(&dot, target, "s")?;
            let (c1, c2) = (on_dot(&local, 0)?, on_dot(&local, 1)?);
            let amp = (0.5 * g).sqrt();
            let mut sum = c1.clone();
            sum.add_scaled(c(1.0), &c2)?;
            let mut diff = c1;
            diff.add_scaled(c(-1.0), &c2)?;
            set.push(name, sum.scale(amp));
            let partner = if name == "L1" { "L2" } else { "L4" };
            set.push(partner, diff.scale(amp));
        }
        return Ok(set);
    }

    for label in ["00", "S01", "A01", "11", "S0s", "S1s"] {
        basis.require(label)?;
    }
    let (s0, s1) = (gamma0.sqrt(), gamma1.sqrt());
    let h = std::f64::consts::FRAC_1_SQRT_2;

    let mut l1 = OperatorMatrix::zeros(basis);
    l1.add_ket_bra(c(s0), "00", "S0s")?;
    l1.add_ket_bra(c(s0 * h), "S01", "S1s")?;
    let mut l2 = OperatorMatrix::zeros(basis);
    l2.add_ket_bra(c(-s0 * h), "A01", "S1s")?;
    let mut l3 = OperatorMatrix::zeros(basis);
    l3.add_ket_bra(c(s1), "11", "S1s")?;
    l3.add_ket_bra(c(s1 * h), "S01", "S0s")?;
    let mut l4 = OperatorMatrix::zeros(basis);
    l4.add_ket_bra(c(s1 * h), "A01", "S0s")?;

    set.push("L1", l1);
    set.push("L2", l2);
    set.push("L3", l3);
    set.push("L4", l4);
    Ok(set)
}

/// Symmetric and antisymmetric exciton occupations `n_1 + n_2`, `n_1 - n_2`.
///
/// On label bases these are expressed through the `S_xs`/`A_xs` states that
/// are present; an absent antisymmetric partner leaves `n_1 - n_2` zero there.
pub fn exciton_occupations(basis: &ModelBasis) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if let Some(dot) = basis.factor() {
        let n = OperatorMatrix::projector(&dot, "s")?;
        let (n1, n2) = (on_dot(&n, 0)?, on_dot(&n, 1)?);
        let mut sym = n1.clone();
        sym.add_scaled(c(1.0), &n2)?;
        let mut asym = n1;
        asym.add_scaled(c(-1.0), &n2)?;
        return Ok((sym, asym));
    }
    let mut sym = OperatorMatrix::zeros(basis);
    let mut asym = OperatorMatrix::zeros(basis);
    for x in ["0", "1"] {
        let (s, a) = (format!("S{x}s"), format!("A{x}s"));
        let has_s = basis.contains(&s);
        let has_a = basis.contains(&a);
        if has_s {
            sym.add_ket_bra(c(1.0), &s, &s)?;
        }
        if has_a {
            sym.add_ket_bra(c(1.0), &a, &a)?;
        }
        if has_s && has_a {
            asym.add_coupling(c(1.0), &a, &s)?;
        }
    }
    if basis.contains("ss") {
        sym.add_ket_bra(c(2.0), "ss", "ss")?;
    }
    Ok((sym, asym))
}

/// One secular phonon channel: all eigen-transitions lowering the energy by `omega`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhononChannel {
    pub omega: f64,
    pub p_sym: OperatorMatrix,
    pub p_asym: OperatorMatrix,
}

/// Spectral projectors of `h`, merged over clusters of near-equal eigenvalues.
fn spectral_projectors(h: &OperatorMatrix) -> Vec<(f64, CMatrix)> {
    let (values, vectors) = hermitian_eigen(h.matrix());
    let mut out: Vec<(f64, CMatrix)> = Vec::new();
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] < DEGENERACY_TOL {
            end += 1;
        }
        let block = vectors.columns(start, end - start);
        let mean = values[start..end].iter().sum::<f64>() / (end - start) as f64;
        out.push((mean, block * block.adjoint()));
        start = end;
    }
    out
}

/// Eigenoperators `P(omega) = sum Pi_a A Pi_b` over cluster pairs with
/// `E_b - E_a = omega > OMEGA_CUTOFF`, for `A = n_1 + n_2` and `n_1 - n_2`.
pub fn phonon_eigenoperators(h: &OperatorMatrix) -> Result<Vec<PhononChannel>> {
    let basis = h.basis();
    let (n_sym, n_asym) = exciton_occupations(basis)?;
    let projectors = spectral_projectors(h);
    let mut channels: Vec<PhononChannel> = Vec::new();
    for (ea, pa) in &projectors {
        for (eb, pb) in &projectors {
            let omega = eb - ea;
            if omega <= OMEGA_CUTOFF {
                continue;
            }
            let sym = pa * n_sym.matrix() * pb;
            let asym = pa * n_asym.matrix() * pb;
            match channels.iter_mut().find(|ch| (ch.omega - omega).abs() < DEGENERACY_TOL) {
                Some(ch) => {
                    ch.p_sym = OperatorMatrix::new(basis.clone(), ch.p_sym.matrix() + sym)?;
                    ch.p_asym = OperatorMatrix::new(basis.clone(), ch.p_asym.matrix() + asym)?;
                }
                None => channels.push(PhononChannel {
                    omega,
                    p_sym: OperatorMatrix::new(basis.clone(), sym)?,
                    p_asym: OperatorMatrix::new(basis.clone(), asym)?,
                }),
            }
        }
    }
    channels.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    Ok(channels)
}

/// Operators with every entry below this are treated as absent.
const NEGLIGIBLE: f64 = 1e-12;

/// Thermal phonon Lindblad operators for the eigen-transitions of `h`.
pub fn phonon_dissipator(
    h: &OperatorMatrix,
    temperature: f64,
    geom: &DotGeometry,
    material: &MaterialParams,
) -> Result<CollapseSet> {
    if !(temperature >= 0.0) {
        return Err(Error::Domain(format!("temperature must be >= 0, got {temperature}")));
    }
    let mut set = CollapseSet::new();
    for ch in phonon_eigenoperators(h)? {
        let n = bose_occupation(ch.omega, temperature)?;
        for (p, parity, tag) in [(&ch.p_sym, Parity::Plus, "+"), (&ch.p_asym, Parity::Minus, "-")] {
            if p.is_zero(NEGLIGIBLE) {
                continue;
            }
            let j = spectral_density(ch.omega, parity, geom, material)?;
            set.push(
                format!("phonon({:.6} ueV, {tag}, down)", ch.omega),
                p.scale((j * (n + 1.0)).sqrt()),
            );
            if n > 0.0 {
                set.push(
                    format!("phonon({:.6} ueV, {tag}, up)", ch.omega),
                    p.adjoint().scale((j * n).sqrt()),
                );
            }
        }
    }
    Ok(set)
}

/// `L = -i[H, .] + sum_i D[L_i]`.
pub fn assemble_liouvillian(h: &OperatorMatrix, collapse: &CollapseSet) -> Result<Superoperator> {
    let mut l = Superoperator::commutator_with(h);
    for op in &collapse.ops {
        l.add(&lindblad_term(op))?;
    }
    Ok(l)
}
