use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] tdm_core::Error),
    #[error("bad schedule: {0}")]
    BadSchedule(String),
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("dimension {0} too small, need n >= 2")]
    BadDim(usize),
    #[error("diagonal has a zero entry")]
    SingularDiag,
    #[error("{family} does not support {op}")]
    Unsupported { family: String, op: &'static str },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Core(tdm_core::Error::Shape(msg.into()))
}
