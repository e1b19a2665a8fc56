use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("arity {arity} exceeds the supported maximum of {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("cell index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("encoded value {value:#x} does not fit in {n} bits")]
    ValueOutOfRange { value: u64, n: usize },
    #[error("strategy exhausted at term {position}")]
    StrategyExhausted { position: usize },
    #[error("strategy mixes unary and subset terms")]
    TermKindMismatch,
    #[error("invalid hexadecimal state: {0}")]
    BadHex(String),
    #[error("precision {precision} is above the supported maximum of {max}")]
    PrecisionTooLarge { precision: u32, max: u32 },
    #[error("scale limit exceeded: {0}")]
    ScaleLimit(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    TruthTable(#[from] TruthTableError),
    #[error(transparent)]
    Hash(#[from] HashError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruthTableError {
    #[error("missing `N=<arity>` header")]
    MissingHeader,
    #[error("malformed header line: {0:?}")]
    BadHeader(String),
    #[error("arity {0} is too large for an explicit truth table")]
    Oversize(usize),
    #[error("expected {expected} table lines, found {found}")]
    LineCount { expected: usize, found: usize },
    #[error("line {line}: invalid hexadecimal entry {text:?}")]
    BadHex { line: usize, text: String },
    #[error("line {line}: entry has bits set above cell {n}")]
    EntryOutOfRange { line: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HashError {
    #[error("key component {component} has {bits} bits, at least {min} required")]
    KeyTooShort {
        component: &'static str,
        bits: usize,
        min: usize,
    },
    #[error("frame has {found} bits, expected {expected}")]
    ShortFrame { expected: usize, found: usize },
    #[error("stream supplied {got} frames, {needed} required")]
    FrameUnderflow { needed: usize, got: usize },
    #[error("empty stream")]
    EmptyStream,
    #[error("update function is not certified invertible: {0}")]
    NotCertified(String),
    #[error("unsupported digest length {0} bits")]
    UnsupportedLength(usize),
}
