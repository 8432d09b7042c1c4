use thiserror::Error;

/// Errors raised by the library. Verification outcomes that are ordinary
/// answers (a fan violation, a non-Cartier divisor) are reported through
/// dedicated result types instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("zero vector cannot generate a cone")]
    ZeroGenerator,

    #[error("cone is not strongly convex (contains a line)")]
    NotStronglyConvex,

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("cone is not a cone of the fan")]
    ConeNotInFan,

    #[error("cone is not smooth")]
    NonSmoothCone,

    #[error("cone of dimension {0} cannot be subdivided")]
    ConeTooSmall(usize),

    #[error("fan is not smooth")]
    NonSmoothFan,

    #[error("maximal cone {0:?} is not full-dimensional")]
    NotFullDimensional(Vec<usize>),

    #[error("materializing the fan for n = {n} exceeds the limit n <= {limit}")]
    MaterializationTooLarge { n: usize, limit: usize },

    #[error("invalid ray label: {0}")]
    InvalidLabel(String),

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("invalid incidence data: {0}")]
    InvalidIncidence(String),

    #[error("instance with {0} objects needs the degenerate-instance flag")]
    DegenerateInstance(usize),

    #[error("contradictory atoms on pair ({0}, {1})")]
    ContradictoryAtoms(usize, usize),

    #[error("internal audit failed: {0}")]
    InternalAudit(String),

    #[error("search budget of {budget} nodes exceeded after {visited} nodes ({found} solutions so far)")]
    BudgetExceeded { budget: u64, visited: u64, found: usize },

    #[error("rays do not span the ambient space (rank {rank} < {dim})")]
    RaysDoNotSpan { rank: usize, dim: usize },

    #[error("point lies outside the support of the fan")]
    OutsideSupport,

    #[error("ray {0} is not a ray of the fan")]
    RayNotInFan(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("filtrations are incompatible on cone {cone:?} at grid cell {cell:?}: {reason}")]
    Incompatible {
        cone: Vec<usize>,
        cell: Vec<i64>,
        reason: String,
    },

    #[error("invalid Chern datum: {0}")]
    InvalidChern(String),

    #[error("{0} is not a prime below 2^16")]
    NotPrime(u64),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("no integral solution: {0}")]
    NoIntegralSolution(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
