use thiserror::Error;

pub type Result<T, E = QtmError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QtmError {
    #[error("invalid machine specification: {0}")]
    InvalidSpec(String),

    #[error("unknown {kind} symbol `{name}`")]
    UnknownSymbol { kind: &'static str, name: String },

    #[error("{kind} index {index} out of range (alphabet has {len} symbols)")]
    SymbolOutOfRange {
        kind: &'static str,
        index: usize,
        len: usize,
    },

    #[error("blank symbol cannot appear in a data-slot string")]
    BlankInString,

    #[error("states belong to different machine specifications")]
    SpecMismatch,

    #[error("state is not normalized (norm {norm})")]
    Unnormalized { norm: f64 },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("head position overflow at cell {0}")]
    HeadOverflow(i64),

    #[error("cyclic configuration space of dimension {dimension} exceeds the limit of {limit}")]
    DimensionGuard { dimension: u128, limit: usize },

    #[error("cyclic tape needs at least 3 cells, got {0}")]
    TooFewCells(usize),

    #[error("invalid data slot: {0}")]
    InvalidSlot(String),

    #[error("transition function is not unitary: {0}")]
    NotUnitary(String),
}
