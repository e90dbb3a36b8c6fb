use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate tweet_id {id:?}")]
    DuplicateTweet { line: usize, id: String },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid generator config: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),

    #[error("{0}")]
    InsufficientData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
