use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-dot levels: hole ground states, intra-dot trion, inter-dot trion.
pub const DOT3_LEVELS: [&str; 3] = ["0", "1", "s"];
pub const DOT4_LEVELS: [&str; 4] = ["0", "1", "s", "t"];

/// Which state space a matrix lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    /// One dot, `{0, 1, s}`.
    Dot3,
    /// One dot, `{0, 1, s, t}`.
    Dot4,
    /// Two hole spins, `{00, 01, 10, 11}`.
    Qubits,
    /// `00, S01, A01, 11, S0s, S1s`.
    Effective6,
    /// `Effective6` plus `S0t, S1t`.
    Effective8,
    /// Product basis `{0,1,s} x {0,1,s}`.
    Full9,
    /// Product basis `{0,1,s,t} x {0,1,s,t}`.
    Full16,
    /// Symmetric/antisymmetric combinations spanning `Full9`.
    Sym9,
    /// Symmetric/antisymmetric combinations spanning `Full16`.
    Sym16,
    Custom,
}

/// An ordered list of unique state labels.
#[derive(Clone, PartialEq, Eq)]
pub struct ModelBasis {
    kind: BasisKind,
    labels: Arc<[String]>,
}

impl fmt::Debug for ModelBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.kind, self.labels)
    }
}

impl fmt::Display for ModelBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}(dim {})", self.kind, self.dim())
    }
}

fn product_labels(levels: &[&str]) -> Vec<String> {
    let mut out = Vec::with_capacity(levels.len() * levels.len());
    for a in levels {
        for b in levels {
            out.push(format!("{a}{b}"));
        }
    }
    out
}

/// Pair-ordered labels `ii`, `Sij`, `Aij` for `i <= j` over the dot levels.
fn symmetric_labels(levels: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    for (i, a) in levels.iter().enumerate() {
        for b in &levels[i..] {
            if a == b {
                out.push(format!("{a}{b}"));
            } else {
                out.push(format!("S{a}{b}"));
                out.push(format!("A{a}{b}"));
            }
        }
    }
    out
}

impl ModelBasis {
    pub fn new(kind: BasisKind) -> ModelBasis {
        let labels: Vec<String> = match kind {
            BasisKind::Dot3 => DOT3_LEVELS.iter().map(|s| s.to_string()).collect(),
            BasisKind::Dot4 => DOT4_LEVELS.iter().map(|s| s.to_string()).collect(),
            BasisKind::Qubits => ["00", "01", "10", "11"].map(String::from).to_vec(),
            BasisKind::Effective6 => ["00", "S01", "A01", "11", "S0s", "S1s"]
                .map(String::from)
                .to_vec(),
            BasisKind::Effective8 => ["00", "S01", "A01", "11", "S0s", "S1s", "S0t", "S1t"]
                .map(String::from)
                .to_vec(),
            BasisKind::Full9 => product_labels(&DOT3_LEVELS),
            BasisKind::Full16 => product_labels(&DOT4_LEVELS),
            BasisKind::Sym9 => symmetric_labels(&DOT3_LEVELS),
            BasisKind::Sym16 => symmetric_labels(&DOT4_LEVELS),
            BasisKind::Custom => Vec::new(),
        };
        ModelBasis {
            kind,
            labels: labels.into(),
        }
    }

    pub fn custom<S: AsRef<str>>(labels: &[S]) -> Result<ModelBasis> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(ModelBasis {
            kind: BasisKind::Custom,
            labels: labels.into(),
        })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::MissingLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index_of(label).is_some()
    }

    /// Single-dot basis for product kinds.
    pub fn factor(&self) -> Option<ModelBasis> {
        match self.kind {
            BasisKind::Full9 => Some(ModelBasis::new(BasisKind::Dot3)),
            BasisKind::Full16 => Some(ModelBasis::new(BasisKind::Dot4)),
            _ => None,
        }
    }

    /// Product basis built from two copies of a single-dot basis.
    pub fn product_of(kind: BasisKind) -> Option<ModelBasis> {
        match kind {
            BasisKind::Dot3 => Some(ModelBasis::new(BasisKind::Full9)),
            BasisKind::Dot4 => Some(ModelBasis::new(BasisKind::Full16)),
            _ => None,
        }
    }

    pub fn is_product(&self) -> bool {
        matches!(self.kind, BasisKind::Full9 | BasisKind::Full16)
    }

    /// Sub-basis keeping `keep` (indices into `self`) in order.
    pub fn restrict(&self, keep: &[usize]) -> ModelBasis {
        let labels: Vec<String> = keep.iter().map(|&i| self.labels[i].clone()).collect();
        ModelBasis {
            kind: BasisKind::Custom,
            labels: labels.into(),
        }
    }

    pub(crate) fn ensure_same(&self, other: &ModelBasis) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected: self.to_string(),
                found: other.to_string(),
            })
        }
    }
}
