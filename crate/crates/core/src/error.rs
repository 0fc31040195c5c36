use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count {requested} outside supported range 1..={max}")]
    Size { requested: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("invalid target qubits {targets:?} for a {num_qubits}-qubit register")]
    Target {
        targets: Vec<usize>,
        num_qubits: usize,
    },

    #[error("state not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("unknown basis `{0}`")]
    UnknownBasis(String),

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("circuit uses basis `{found}` but `{expected}` was required")]
    BasisMismatch { expected: String, found: String },

    #[error("precision {0} outside the allowed range")]
    Precision(f64),

    #[error("missing dictionary entry for gate `{0}`")]
    MissingEntry(String),

    #[error("composite gate `{name}` deviates from its declared matrix by {distance:.3e}")]
    CompositeMismatch { name: String, distance: f64 },

    #[error("net would exceed {cap} entries")]
    NetTooLarge { cap: usize },

    #[error("net too coarse: base approximation distance {distance:.4} exceeds {threshold:.4}; raise l0")]
    NetTooCoarse { distance: f64, threshold: f64 },

    #[error("input too far from identity for a group commutator (distance {distance:.4} > {limit:.4})")]
    FarFromIdentity { distance: f64, limit: f64 },

    #[error("per-gate budget {budget:.3e} not reached within depth {max_depth} (best {achieved:.3e})")]
    BudgetInfeasible {
        budget: f64,
        max_depth: usize,
        achieved: f64,
    },

    #[error("compiled fidelity {fidelity:.6} below required {required:.6}")]
    FidelityShortfall { fidelity: f64, required: f64 },

    #[error("weighted graph passed to the unweighted builder")]
    WeightedGraph,

    #[error("graph edge ({0}, {1}) has no weight")]
    MissingWeight(usize, usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("decode error at symbol {index}: {message}")]
    Decode { index: usize, message: String },

    #[error("circuit not representable in code `{code}`: {reason}")]
    Unrepresentable { code: String, reason: String },

    #[error("no candidate prepares the target within precision {epsilon}")]
    NoCandidate { epsilon: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("enumeration cap exceeded: {requested} > {cap}")]
    Cap { requested: usize, cap: usize },

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("corrupt compressed stream: {0}")]
    Corrupt(String),

    #[error("unknown compressor `{0}`")]
    UnknownCompressor(String),

    #[error("unknown code `{0}`")]
    UnknownCode(String),
}

impl Error {
    /// Short stable identifier used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Size { .. } => "size",
            Error::Dimension { .. } => "dimension",
            Error::Target { .. } => "target",
            Error::NotNormalized { .. } => "not_normalized",
            Error::NotUnitary { .. } => "not_unitary",
            Error::UnknownGate(_) => "unknown_gate",
            Error::UnknownBasis(_) => "unknown_basis",
            Error::InvalidBasis(_) => "invalid_basis",
            Error::BasisMismatch { .. } => "basis_mismatch",
            Error::Precision(_) => "precision",
            Error::MissingEntry(_) => "missing_entry",
            Error::CompositeMismatch { .. } => "composite_mismatch",
            Error::NetTooLarge { .. } => "net_too_large",
            Error::NetTooCoarse { .. } => "net_too_coarse",
            Error::FarFromIdentity { .. } => "far_from_identity",
            Error::BudgetInfeasible { .. } => "budget_infeasible",
            Error::FidelityShortfall { .. } => "fidelity_shortfall",
            Error::WeightedGraph => "weighted_graph",
            Error::MissingWeight(..) => "missing_weight",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::Parse { .. } => "parse",
            Error::Decode { .. } => "decode",
            Error::Unrepresentable { .. } => "unrepresentable",
            Error::NoCandidate { .. } => "no_candidate",
            Error::Domain(_) => "domain",
            Error::Cap { .. } => "cap",
            Error::Distribution(_) => "distribution",
            Error::Corrupt(_) => "corrupt",
            Error::UnknownCompressor(_) => "unknown_compressor",
            Error::UnknownCode(_) => "unknown_code",
        }
    }
}
