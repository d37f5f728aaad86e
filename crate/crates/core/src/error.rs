use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or invalid input data.
    #[error("invalid input: {0}")]
    Input(String),

    /// Malformed text input, with the offending 1-based line number.
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },

    /// A parameter outside its admissible range.
    #[error("parameter {name} = {value} out of range {min}..={max}")]
    OutOfRange { name: &'static str, value: usize, min: usize, max: usize },

    /// Two inputs that must agree in size or mode do not.
    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error(
        "kNN graph with k = {k} has {components} connected components; \
         the smallest k that connects it is {connecting_k}"
    )]
    Disconnected { k: usize, components: usize, connecting_k: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn check_range(name: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
        if value < min || value > max {
            return Err(Error::OutOfRange { name, value, min, max });
        }
        Ok(())
    }
}
