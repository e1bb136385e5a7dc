//! Flag-style derivation diagrams in LaTeX, for the `flagderiv` package.

mod layout;

pub use layout::{export_latex, layout, standalone_document, ExportOptions, FlagLayout, Row, RowKind};

use thiserror::Error;

use crate::parser::Span;

pub const DEFAULT_MAX_DEPTH: usize = 32;
pub const DEFAULT_WRAP: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("{span}: flags nested {depth} deep, more than the limit of {max}")]
    RenderDepthExceeded { depth: usize, max: usize, span: Span },
    #[error("{span}: flag closed with none open")]
    Unbalanced { span: Span },
}
