use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("degenerate sampling: {0}")]
    DegenerateSample(String),
    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("registry contradiction at (k={k}, n={n}, s={s}): {detail}")]
    RegistryContradiction { k: usize, n: usize, s: usize, detail: String },
    #[error("malformed data: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
