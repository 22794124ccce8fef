use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the construction needs m >= 2, got m = {0}")]
    InvalidM(i64),

    #[error("cannot parse divisor class {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("Chow elements belong to different rings")]
    RingMismatch,

    #[error("degree map needs an element of degree {expected}, found a term of degree {found}")]
    NotTopDegree { expected: u32, found: u32 },

    #[error("class {0} has no sections")]
    IneffectiveClass(String),

    #[error("degenerate cone input: {0}")]
    Degenerate(String),

    #[error("inconsistent linear system: {0}")]
    InconsistentSystem(String),

    #[error("inadmissible Cox point: {0}")]
    InadmissiblePoint(String),

    #[error("chart does not contain the point: {0}")]
    ChartMissesPoint(String),

    #[error("expected a fiber of rank {expected}, found rank {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("discriminant vanishes identically on the line")]
    DiscriminantVanishesOnLine,
}
