use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall into two groups: input errors (malformed matrices, unknown
/// labels, violated preconditions) and contract failures, where a computation
/// ran on valid input but produced something the theory rules out (an empty
/// spectrum, a broken inverse system). [`Error::is_contract_failure`] tells
/// them apart.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("basis list is empty")]
    EmptyBasis,

    #[error("bracket [{left}, {right}] is not in the span of the basis (distance {distance:e})")]
    NotClosed {
        left: String,
        right: String,
        distance: f64,
    },

    #[error("basis is not linearly independent (rank {rank} < {count})")]
    NotIndependent { rank: usize, count: usize },

    #[error("structure constants violate the Jacobi identity (residual {0:e})")]
    JacobiViolation(f64),

    #[error("not a subspace of the given algebra: {0}")]
    NotSubspace(String),

    #[error("algebra is not solvable")]
    NotSolvable,

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("functional is not a character (residual {0:e} on the derived algebra)")]
    NotCharacter(f64),

    #[error("complex is inconsistent at degree {degree}: |d∘d| residual {residual:e}")]
    ComplexInconsistent { degree: usize, residual: f64 },

    #[error("degree {degree} out of range 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("invalid spectrum kind: {0}")]
    InvalidKind(String),

    #[error("computed spectrum is empty")]
    EmptySpectrum,

    #[error("intersections do not span the subalgebra (missing dimension {missing})")]
    SpanFailure { missing: usize },

    #[error("family does not verify: {0}")]
    FamilyVerification(String),

    #[error("inverse system axiom violated: {0}")]
    SystemAxiomViolation(String),

    #[error("inverse limit is empty")]
    EmptyLimit,

    #[error("inconsistent gluing: {0}")]
    Inconsistent(String),

    #[error("corpus generation exhausted after {attempts} attempts")]
    GenerationExhausted { attempts: usize },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a mathematical guarantee on otherwise valid
    /// input, as opposed to malformed input or unmet preconditions.
    pub fn is_contract_failure(&self) -> bool {
        matches!(
            self,
            Error::NumericalBreakdown(_)
                | Error::ComplexInconsistent { .. }
                | Error::EmptySpectrum
                | Error::SpanFailure { .. }
                | Error::FamilyVerification(_)
                | Error::SystemAxiomViolation(_)
                | Error::EmptyLimit
                | Error::Inconsistent(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
