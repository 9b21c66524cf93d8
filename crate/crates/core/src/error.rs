use thiserror::Error;

/// Errors raised by the library. Infeasible or unbounded optimisation
/// problems are reported through [`crate::lp::Status`], not here.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("self-loop on terminal {0}")]
    SelfLoop(usize),
    #[error("terminal {index} out of range for a graph with {m} terminals")]
    VertexOutOfRange { index: usize, m: usize },
    #[error("negative multiplicity {multiplicity} on pair ({i}, {j})")]
    NegativeMultiplicity { i: usize, j: usize, multiplicity: i64 },
    #[error("a multigraph needs at least 2 terminals, got {0}")]
    TooFewTerminals(usize),
    #[error("{m} terminals exceeds the configured cap of {cap}")]
    TooManyTerminals { m: usize, cap: usize },
    #[error("blow-up factor must be positive")]
    ZeroBlowUp,
    #[error("pair ({i}, {j}) has no edge left to split off")]
    InsufficientMultiplicity { i: usize, j: usize },
    #[error("secrecy-seeking set needs at least 2 terminals, got {0}")]
    SetTooSmall(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("constraint arity {got} does not match {expected} variables")]
    ArityMismatch { expected: usize, got: usize },
    #[error("enumeration box of {volume} points exceeds the limit {limit}")]
    BoxTooLarge { volume: u128, limit: u128 },
    #[error("more than {cap} Steiner trees")]
    TreeCapExceeded { cap: usize },
    #[error("graph is not Eulerian: terminal {0} has odd degree")]
    NotEulerian(usize),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{bits} source bits exceeds the brute-force cap of {cap}")]
    BruteForceCap { bits: usize, cap: usize },
    #[error("terminal {0} cannot decode the key")]
    DecodingAmbiguity(usize),
    #[error("expected exactly one helper outside the user set, found {0}")]
    HelperCount(usize),
    #[error("lengths are infeasible for the omniscience constraints at set {0}")]
    InfeasibleLengths(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
