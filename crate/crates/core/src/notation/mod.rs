//! The text formats: parameter expressions such as `St(3,q8) (+) chi3 * nu^1/2`,
//! and catalog files declaring cuspidal labels.

mod catalog_file;
mod parser;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::param::WDParameter;

pub use catalog_file::{load_catalog, CatalogLoadError};
pub use parser::{parse_param, parse_param_list};

/// 1-based position of a run of characters in the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    /// Span of the characters in `text[start..end]` (byte offsets), at least one character long.
    pub fn from_offsets(text: &str, start: usize, end: usize) -> Self {
        let start = start.min(text.len());
        let before = &text[..start];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = text[line_start..start].chars().count() + 1;
        let length = text[start..end.clamp(start, text.len())].chars().count().max(1);
        SourceSpan { line, column, length }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NotationError {
    #[error("{0}")]
    Parse(ParseError),
    #[error("{span}: unknown cuspidal label `{name}`")]
    UnknownLabel { name: String, span: SourceSpan },
}

impl NotationError {
    pub fn span(&self) -> SourceSpan {
        match self {
            NotationError::Parse(e) => e.span,
            NotationError::UnknownLabel { span, .. } => *span,
        }
    }
}

/// Canonical text form; `parse_param` reads it back to the same parameter.
pub fn print_param(p: &WDParameter) -> String {
    p.to_string()
}
