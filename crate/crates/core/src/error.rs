use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("cannot combine a linear ideal with a pure-power ideal")]
    KindMismatch,

    #[error("ideals live in different ambient rings")]
    AmbientMismatch,

    #[error("{small} is not contained in {big}")]
    NotContained { small: String, big: String },

    #[error("duplicate components: {}", .0.join(", "))]
    DuplicateComponents(Vec<String>),

    #[error("{0} is not a face of the complex")]
    NotAFace(String),

    #[error("component {0} is not a squarefree monomial ideal")]
    NotSquarefree(String),

    #[error("expected a {expected} system, got a {found} system")]
    DirectionMismatch { expected: &'static str, found: &'static str },

    #[error("element index {0} is out of range")]
    NoSuchElement(usize),

    #[error("component {0} is not a prime ideal")]
    NotPrime(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    /// Input problems (exit code 2) versus refusals to compute (exit code 1).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Malformed(_)
                | Error::KindMismatch
                | Error::AmbientMismatch
                | Error::DuplicateComponents(_)
                | Error::NoSuchElement(_)
        )
    }
}
