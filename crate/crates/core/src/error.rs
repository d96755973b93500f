use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("node id {node} out of range (graph has {node_count} nodes)")]
    InvalidNode { node: usize, node_count: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is empty")]
    EmptyGraph,
    #[error("invalid branching sequence: {0}")]
    InvalidBranching(String),
    #[error(
        "tessellation {{{p},{q}}} is not hyperbolic: (p-2)(q-2) = {}, need p,q >= 3 and (p-2)(q-2) > 4",
        p.saturating_sub(2) * q.saturating_sub(2)
    )]
    InvalidTessellation { p: usize, q: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("node count {requested} exceeds cap {cap}")]
    NodeCapExceeded { requested: u128, cap: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u64 },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: u64, v: u64 },
    #[error("graph is not a tree")]
    NotATree,
    #[error("graph carries no {0} labels")]
    MissingLabels(&'static str),
    #[error("measure has zero total mass")]
    ZeroMass,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("{what} = {value} is out of range")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("boundary points coincide")]
    CoincidentAngles,
    #[error("center {0} is not a node of the smallest family member")]
    CenterMissing(usize),
    #[error("alpha {0} is not covered by the report")]
    AlphaNotCovered(f64),
    #[error("need at least {needed} histograms at distinct n, got {got}")]
    InsufficientHistograms { needed: usize, got: usize },
}
