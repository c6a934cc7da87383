use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tdm_core::Error),
    #[error(transparent)]
    Trapdoor(#[from] tdm_trapdoor::Error),
    #[error(transparent)]
    Reduction(#[from] tdm_reductions::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for bad invocations, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        use tdm_core::Error as C;
        use tdm_reductions::Error as R;
        use tdm_trapdoor::Error as T;
        let usage_core =
            |e: &C| matches!(e, C::NotPrime(_) | C::InvalidParam(_) | C::TooLarge { .. });
        let usage_trapdoor = |e: &T| match e {
            T::UnknownFamily(_) | T::BadDim(_) | T::BadSchedule(_) => true,
            T::Core(c) => usage_core(c),
            _ => false,
        };
        let usage = match self {
            CliError::Usage(_) => true,
            CliError::Core(e) => usage_core(e),
            CliError::Trapdoor(e) => usage_trapdoor(e),
            CliError::Reduction(R::InvalidParam(_) | R::NotAField(_)) => true,
            CliError::Reduction(R::Trapdoor(e)) => usage_trapdoor(e),
            CliError::Reduction(R::Core(e)) => usage_core(e),
            _ => false,
        };
        if usage {
            2
        } else {
            1
        }
    }
}
