use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group descriptor `{0}`")]
    InvalidDescriptor(String),
    #[error("multiplicity of irreps {i} and {j} is not integral ({value})")]
    NonIntegralMultiplicity { i: usize, j: usize, value: String },
    #[error("quiver is already framed")]
    AlreadyFramed,
    #[error("quiver is already tripled")]
    AlreadyTripled,
    #[error("vertex set I must be nonempty")]
    EmptyI,
    #[error("vertex {0} is not in the corner set")]
    VertexNotInCorner(String),
    #[error("degree {requested} exceeds the cap {cap}")]
    DegreeCapExceeded { requested: usize, cap: usize },
    #[error("series coefficient in degree {degree} is not integral ({value})")]
    NonIntegralCoefficient { degree: usize, value: String },
    #[error("operation not supported for series {0}")]
    UnsupportedSeries(String),
    #[error("no vanishing window found below degree {cap}")]
    BoundNotFound { cap: usize },
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("stability parameter is not of theta_I shape with framing dimension 1")]
    UnsupportedTheta,
    #[error("total dimension {dim} exceeds the brute-force limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("prime {0} is unusable here")]
    BadPrime(u64),
    #[error("representation is not semistable")]
    NotSemistable,
    #[error("representation is not stable")]
    NotStable,
    #[error("representation is not stable for the source chamber")]
    NotStableForSource,
    #[error("cornered action depends on the representative path: {0}")]
    RepresentativeDependence(String),
    #[error("truncation did not stabilise below degree {cap}")]
    TruncationNotReached { cap: usize, dims: Vec<usize> },
    #[error("data is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("moment map does not vanish")]
    MomentMapNonzero,
    #[error("module is not a quotient: {0}")]
    NotAQuotient(String),
    #[error("fixpoint iteration did not terminate within {0} steps")]
    NoTermination(usize),
    #[error("relations violated at vertices {0:?}")]
    RelationViolation(Vec<String>),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
