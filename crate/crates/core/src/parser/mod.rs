//! Surface scripts: lexing, parsing, pretty printing, notation and
//! elaboration into kernel definitions.

mod desugar;
mod lexer;
mod notation;
mod parse;
mod print;
mod syntax;

use thiserror::Error;

pub use desugar::{elaborate, ElabError, Elaborated, Elaborator, Obligation, ObligationKind};
pub use lexer::{lex, Comment, Tok, Token};
pub use notation::{Fixity, NotationEntry, NotationKind, NotationTable};
pub use parse::{is_keyword, parse_expr, parse_script};
pub use print::{print_expr, print_script, render_expr, Style};
pub use syntax::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{span}: syntax error: expected {}, found {found}", expected.join(" or "))]
    Syntax { span: Span, expected: Vec<String>, found: String },
    #[error("{span}: unbalanced flag: {reason}")]
    UnbalancedFlag { span: Span, reason: String },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. } | ParseError::UnbalancedFlag { span, .. } => *span,
        }
    }
}
