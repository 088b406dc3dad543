use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("overlap k = {k} exceeds min({left}, {right})")]
    OverlapTooLarge { k: usize, left: usize, right: usize },

    #[error("sign choice at ({0}, {1}) is not permitted by the edge profile")]
    UnsatisfiableBranch(usize, usize),

    #[error("value pool needs at least one positive and one negative entry")]
    BadPool,

    #[error("vector is not in the kernel of the trailing block")]
    NotInKernel,

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("congruence identity failed: {0}")]
    IdentityFailed(String),

    #[error("matrix is not a member of S(G, Sigma): {0}")]
    NotMember(String),

    #[error("no realizable sign at the cut vertex")]
    NoRealizableSign,

    #[error("pivot entry must be nonzero")]
    ZeroPivot,

    #[error("empty matrix")]
    EmptyMatrix,

    #[error("pair ({0}, {1}) is not on the formula frontier")]
    MissingProvenance(usize, usize),

    #[error("recursion depth bound {0} exceeded")]
    DepthExceeded(usize),
}
