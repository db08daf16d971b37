use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph document: {0}")]
    Malformed(String),
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex id {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid vertex partition: {0}")]
    InvalidPartition(String),
    #[error("vertex subset must be nonempty and proper")]
    ImproperSubset,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("n = {n} exceeds enumeration cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis vacuous: q = floor(delta*lambda1/(C ln n)) = 0")]
    HypothesisVacuous,
    #[error("color class of size {max_class} exceeds delta*lambda1/2 = {cap}")]
    ColorCapViolated { max_class: usize, cap: f64 },
    #[error("insufficient edges: {0}")]
    InsufficientEdges(String),
    #[error("generator infeasible: {0}")]
    Infeasible(String),
    #[error("rejection cap of {0} attempts exceeded")]
    RejectionCapExceeded(usize),
    #[error("threshold M = {0} leaves no room for the size-one rearrangement")]
    DegenerateThreshold(f64),
    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
