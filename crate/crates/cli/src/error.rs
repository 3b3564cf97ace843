use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("figure must be in 1..=10, got {0}")]
    OutOfRange(usize),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(#[from] twoqubit::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 1 for anything the user can fix in the input, 2 when a numerical
    /// invariant breaks during a run.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::OutOfRange(0).exit_code(), 1);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        let e = twoqubit::Error::StepTooLarge { time: 1.0, drift: 1e-3 };
        assert_eq!(CliError::Numerical(e).exit_code(), 2);
    }
}
