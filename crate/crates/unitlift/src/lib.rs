//! Command-line front end, JSON formats and inversion benchmarks for
//! [`unitlift_core`].

pub mod bench;
pub mod cli;
pub mod json;

pub use unitlift_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] unitlift_core::Error),
    #[error("malformed JSON in {0}")]
    Json(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// 2 not a unit, 3 bad descriptor or chain, 4 resource cap, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use unitlift_core::Error as E;
        match self {
            Error::Core(E::NotAUnit(_)) => 2,
            Error::Core(
                E::InvalidDescriptor(_)
                | E::InvalidChain(_)
                | E::ShapeMismatch(_)
                | E::Unsupported(_)
                | E::Precondition(_),
            )
            | Error::Json(_) => 3,
            Error::Core(E::ResourceLimit(_) | E::Overflow(_)) => 4,
            Error::Io(_) => 3,
            _ => 1,
        }
    }
}
