use thiserror::Error;

/// Errors raised anywhere in the simulation pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: String, found: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis is missing required state |{0}>")]
    MissingLabel(String),

    #[error("duplicate basis label |{0}>")]
    DuplicateLabel(String),

    #[error("transform is not unitary: max |U^dag U - I| = {max_deviation:.3e}")]
    NotUnitary { max_deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("qubit subspace is empty: Tr(P rho P) = {weight:.3e}")]
    EmptySubspace { weight: f64 },

    #[error("state is not positive: eigenvalue {min_eigenvalue:.3e}")]
    Positivity { min_eigenvalue: f64 },

    #[error("quadrature did not converge: error estimate {estimate:.3e}")]
    Quadrature { estimate: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dressed basis is degenerate: delta and t_e are both zero")]
    DegenerateBasis,

    #[error(
        "steady state is not unique: {null_dim} singular values below {tolerance:.1e} \
         (smallest {smallest:.3e}, next {next:.3e})"
    )]
    DegenerateSteadyState {
        null_dim: usize,
        tolerance: f64,
        smallest: f64,
        next: f64,
    },

    #[error("integrator step size collapsed at t = {t_reached_ns:.6} ns")]
    Stiffness { t_reached_ns: f64 },

    #[error("steady state not reached within {t_max_ns:.3} ns (distance {distance:.3e})")]
    Timeout { t_max_ns: f64, distance: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error("scenario '{scenario}': {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn in_scenario(self, scenario: &str) -> Error {
        match self {
            e @ Error::Scenario { .. } => e,
            other => Error::Scenario {
                scenario: scenario.to_string(),
                source: Box::new(other),
            },
        }
    }

    /// Innermost error, with scenario context peeled off.
    pub fn root(&self) -> &Error {
        match self {
            Error::Scenario { source, .. } => source.root(),
            other => other,
        }
    }
}
