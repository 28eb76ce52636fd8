use thiserror::Error;

use crate::syntax::{ParseError, Span};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("in {arg}: {source}")]
    InArg { arg: String, source: Box<CliError> },
    #[error("type error at {span}: {message}")]
    Type { span: Span, message: String },
    #[error("evaluation error at {span}: {source}")]
    Eval { span: Span, source: lindiff::Error },
    #[error("{0}")]
    Math(#[from] lindiff::Error),
    #[error("tower file: {0}")]
    TowerSyntax(ParseError),
    #[error("tower file, line {line}: {source}")]
    Config { line: usize, source: Box<CliError> },
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn in_arg(self, arg: &str) -> CliError {
        CliError::InArg { arg: arg.to_string(), source: Box::new(self) }
    }
}
