use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: String,
        needed: String,
        limit: u64,
    },

    /// A positional map reads indices the supplied configuration does not define.
    #[error("coverage error: missing indices {missing:?}")]
    Coverage { missing: Vec<i64> },

    #[error("window too small: radius {given} given, radius {required} required")]
    WindowTooSmall { required: i64, given: i64 },

    #[error("depth error: {0}")]
    Depth(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn budget(what: impl Into<String>, needed: impl ToString, limit: u64) -> Self {
        Error::Budget {
            what: what.into(),
            needed: needed.to_string(),
            limit,
        }
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 3,
            Error::Internal(_) => 70,
            _ => 2,
        }
    }
}
