use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid norm specification: {0}")]
    InvalidSpec(String),
    #[error("zero vector has no norming functional")]
    ZeroVector,
    #[error("exact rational input required")]
    InexactInput,
    #[error("reflexion functional pairs to {pairing} with its vector, expected 1")]
    NotNormalized { pairing: f64 },
    #[error("e1*(e2)·e2*(e1) = {value} is negative; the reflections are not isometric")]
    NegativeProduct { value: f64 },
    #[error("group closure exceeded its element cap")]
    CappedGroup,
    #[error("reflections {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("projections {0} and {1} are not mutually orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("1 - 2p is not an isometry for projection {0}")]
    NotIsometric(usize),
    #[error("reflections {0} and {1} share an axis")]
    DuplicateAxis(usize, usize),
    #[error("classifier verdicts disagree: {0}")]
    VerdictMismatch(String),
    #[error("root system graph is disconnected")]
    DisconnectedRoots,
    #[error("family criteria need more than 8 indices, got {0}")]
    TruncationTooSmall(usize),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
}
