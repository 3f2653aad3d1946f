use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] weylbound::Error),
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("replayed outputs differ from the record")]
    ReplayMismatch,
    #[error("{0} grid(s) exceeded the box cap")]
    CapRows(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(weylbound::Error::CapExceeded { .. }) | CliError::CapRows(_) => 3,
            CliError::Core(weylbound::Error::ThreadPool(_)) => 1,
            CliError::Core(_) | CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Io(_) | CliError::Json(_) | CliError::Csv(_) | CliError::ReplayMismatch => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
