use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] qpinem::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use qpinem::Error as E;
        match self {
            CliError::Config(_) => 1,
            CliError::Core(E::Domain(_) | E::Unsupported(_) | E::Json(_)) => 1,
            CliError::Core(E::Dimension { .. } | E::Integration(_) | E::Contract { .. }) => 2,
            CliError::Core(E::Io(_)) | CliError::Io(_) | CliError::Csv(_) => 3,
        }
    }
}
