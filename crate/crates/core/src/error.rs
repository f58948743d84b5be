use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A degree or truncation index is out of range.
    #[error("index error: {0}")]
    Index(String),
    /// The request exceeds what the chosen numerical route can deliver.
    #[error("capability error: {0}")]
    Capability(String),
    /// Lengths or basis identities of the operands do not match.
    #[error("shape error: {0}")]
    Shape(String),
    /// A fractional image would leave the locally integrable class.
    #[error("integrability error: {0}")]
    Integrability(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("evaluation error: {0}")]
    Evaluation(String),
    /// Malformed input file or record.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short stable tag, used by the CLI for grep-able diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Index(_) => "index",
            Error::Capability(_) => "capability",
            Error::Shape(_) => "shape",
            Error::Integrability(_) => "integrability",
            Error::InsufficientData(_) => "insufficient-data",
            Error::Evaluation(_) => "evaluation",
            Error::Parse(_) => "parse",
        }
    }

    /// The message without the category prefix.
    pub fn message(&self) -> &str {
        match self {
            Error::Domain(m)
            | Error::Index(m)
            | Error::Capability(m)
            | Error::Shape(m)
            | Error::Integrability(m)
            | Error::InsufficientData(m)
            | Error::Evaluation(m)
            | Error::Parse(m) => m,
        }
    }
}
