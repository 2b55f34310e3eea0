use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distance {0}: must be a nonnegative number or infinity")]
    InvalidDistance(f64),

    #[error("duplicate point identifier `{0}`")]
    DuplicatePoint(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("spaces are defined on different point sets")]
    PointSetMismatch,

    #[error("distance table is not symmetric at ({0}, {1})")]
    Asymmetric(String, String),

    #[error("nonzero self-distance at `{0}`")]
    NonzeroDiagonal(String),

    #[error("triangle inequality violated: d({a},{c}) = {direct} > {via} = d({a},{b}) + d({b},{c})")]
    TriangleViolation {
        a: String,
        b: String,
        c: String,
        direct: f64,
        via: f64,
    },

    #[error("distinct points `{0}` and `{1}` at distance 0 (pseudometric, not a metric)")]
    ZeroDistance(String, String),

    #[error("stage index {index} out of range (chain has {stages} stages)")]
    StageOutOfRange { index: usize, stages: usize },

    #[error("link from stage {stage} is expanding: d({y}, {y2}) grows from {before} to {after}")]
    ExpandingLink {
        stage: usize,
        y: String,
        y2: String,
        before: f64,
        after: f64,
    },

    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{symbol}` has arity {expected}, got {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },

    #[error("term universe too large: projected {projected} terms exceeds cap {cap}")]
    UniverseCap { projected: u128, cap: u128 },

    #[error("leaf `{0}` is not a point of the carrier space")]
    LeafNotInSpace(String),

    #[error("variable environment is missing a binding for `{0}`")]
    UnboundVariable(String),

    #[error("symbol `{0}` has no interpretation in the algebra")]
    MissingInterpretation(String),

    #[error("equation is not ordinary: `{0}` has eps = {1}")]
    NotOrdinary(String, f64),

    #[error("signature has a symbol of arity {0}; this construction requires arity <= 1")]
    NotUnary(usize),

    #[error("eps = {0} outside the open interval (0, 1)")]
    EpsOutOfRange(f64),

    #[error("word concatenation would exceed the length bound {0}")]
    WordTruncation(usize),

    #[error("algebra fails the `{presentation}` laws: {detail}")]
    LawsFailed {
        presentation: String,
        detail: String,
    },

    #[error("max depth {0} too small: the witness trees have depth 2")]
    DepthTooSmall(usize),

    #[error("unknown model or variety `{0}`")]
    UnknownModel(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
