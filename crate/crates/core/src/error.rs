use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-domain input data.
    #[error("input error: {0}")]
    Input(String),

    /// Invalid parameters (arity, max_hl, quality, ...).
    #[error("config error: {0}")]
    Config(String),

    /// A tree or codebook violates its structural invariants.
    #[error("structural error: {0}")]
    Structural(String),

    /// A codeword carries a base that is illegal at its position.
    #[error("corrupt codeword at offset {offset}: {reason}")]
    Corrupt { offset: usize, reason: String },

    /// The decoder lost synchronisation with the nucleotide stream.
    #[error("desynchronized at stream offset {offset}: {reason}")]
    Desync { offset: usize, reason: String },

    /// A symbol with positive probability has no codeword.
    #[error("symbol {0} has no codeword")]
    Coverage(usize),

    /// A value does not fit the largest coefficient category.
    #[error("value {0} overflows category 11")]
    Overflow(i32),

    #[error("csv row {row}: {reason}")]
    Csv { row: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("image: {0}")]
    Image(#[from] image::ImageError),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn desync(offset: usize, reason: impl Into<String>) -> Self {
        Error::Desync {
            offset,
            reason: reason.into(),
        }
    }

    /// True for errors caused by damaged coded data rather than bad inputs or flags.
    pub fn is_corruption(&self) -> bool {
        matches!(self, Error::Corrupt { .. } | Error::Desync { .. })
    }
}
