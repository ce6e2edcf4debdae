//! Catalog files, TOML with one table per label:
//!
//! ```toml
//! [cuspidal.rho]
//! dim = 2
//! type = "symplectic"   # or "orthogonal" / "none"
//! model = "q8"          # optional built-in model id
//! unitary = true        # optional, default true
//!
//! [cuspidal.chi]
//! dim = 1
//! type = "none"
//! dual = "chibar"       # required iff type = "none"
//! ```

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use super::{ParseError, SourceSpan};
use crate::groups::{Catalog, CatalogError, EntrySpec};
use crate::param::SelfDualityType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogLoadError {
    #[error("{0}")]
    Parse(ParseError),
    #[error("{span}: {error}")]
    Consistency { error: CatalogError, span: SourceSpan },
}

impl CatalogLoadError {
    pub fn span(&self) -> SourceSpan {
        match self {
            CatalogLoadError::Parse(e) => e.span,
            CatalogLoadError::Consistency { span, .. } => *span,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    cuspidal: BTreeMap<String, EntryFile>,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum TypeFile {
    Orthogonal,
    Symplectic,
    None,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    dim: u32,
    #[serde(rename = "type")]
    sd_type: TypeFile,
    dual: Option<String>,
    model: Option<String>,
    #[serde(default = "default_unitary")]
    unitary: bool,
}

fn default_unitary() -> bool {
    true
}

/// The label a consistency error is about.
fn subject(e: &CatalogError) -> Option<&str> {
    use CatalogError::*;
    match e {
        UnknownLabel(l)
        | ForeignLabel(l)
        | InvalidName(l)
        | DuplicateLabel(l)
        | ZeroDimension(l)
        | SymplecticOddDim(l, _)
        | MissingDual(l)
        | DualModelMismatch(l, _) => Some(l),
        DanglingDual { label, .. }
        | DualMismatch { label, .. }
        | SelfDualWithDual { label, .. }
        | UnknownModel { label, .. }
        | DimensionMismatch { label, .. }
        | IndicatorMismatch { label, .. }
        | BadModel { label, .. } => Some(label),
    }
}

/// Locates the `[cuspidal.<name>]` header, falling back to the start of the text.
fn header_span(text: &str, name: &str) -> SourceSpan {
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if let Some(inner) = trimmed.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let parts: Vec<&str> = inner.splitn(2, '.').map(str::trim).collect();
            if parts.len() == 2 && parts[0] == "cuspidal" && parts[1].trim_matches('"') == name {
                let start = offset + (line.len() - line.trim_start().len());
                return SourceSpan::from_offsets(text, start, start + trimmed.len());
            }
        }
        offset += line.len();
    }
    SourceSpan::from_offsets(text, 0, 1)
}

/// Parses and validates a catalog file. Section order does not matter.
pub fn load_catalog(text: &str) -> Result<Catalog, CatalogLoadError> {
    let file: CatalogFile = toml::from_str(text).map_err(|e| {
        let range = e.span().unwrap_or(0..1);
        CatalogLoadError::Parse(ParseError {
            span: SourceSpan::from_offsets(text, range.start, range.end),
            message: e.message().trim().to_string(),
            expected: Vec::new(),
        })
    })?;
    let specs = file
        .cuspidal
        .into_iter()
        .map(|(name, e)| EntrySpec {
            name,
            dim: e.dim,
            sd_type: match e.sd_type {
                TypeFile::Orthogonal => SelfDualityType::Orthogonal,
                TypeFile::Symplectic => SelfDualityType::Symplectic,
                TypeFile::None => SelfDualityType::NotSelfDual,
            },
            dual: e.dual,
            model: e.model,
            unitary: e.unitary,
        })
        .collect();
    Catalog::from_specs(specs).map_err(|error| {
        let span = subject(&error).map_or(SourceSpan::from_offsets(text, 0, 1), |l| header_span(text, l));
        CatalogLoadError::Consistency { error, span }
    })
}
