use thiserror::Error;

use super::expr::{Expr, Name};

#[derive(Debug, Clone, Error)]
pub enum KernelError {
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("de Bruijn index {index} escapes a context of length {depth}")]
    UnboundVariable { index: usize, depth: usize },
    #[error("[] has no type")]
    SortOfBox,
    #[error("application mismatch: {reason}")]
    ApplicationMismatch {
        reason: String,
        names: Vec<Name>,
        function: Expr,
        function_type: Expr,
        argument: Option<(Expr, Expr)>,
    },
    #[error("ill-formed product or abstraction: {reason}")]
    IllFormedProduct { reason: String, names: Vec<Name>, term: Expr },
    #[error("`{name}` expects {expected} arguments, got {found}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("type mismatch")]
    TypeMismatch {
        names: Vec<Name>,
        term: Expr,
        expected: Expr,
        found: Expr,
    },
    #[error("`{0}` is already defined")]
    DuplicateName(String),
    #[error("descriptive definition `{0}` has no body")]
    MissingBody(String),
    #[error("`{0}` is primitive and cannot be unfolded")]
    PrimitiveUnfold(String),
    #[error("reduction budget of {0} steps exhausted")]
    NonTermination(u64),
    #[error("expected a sort, found a term of another type")]
    NotASort { names: Vec<Name>, term: Expr, ty: Expr },
    #[error("in definition `{name}`: {source}")]
    InDefinition {
        name: String,
        #[source]
        source: Box<KernelError>,
    },
}

impl KernelError {
    /// Strips `InDefinition` wrappers.
    pub fn root(&self) -> &KernelError {
        match self {
            KernelError::InDefinition { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn code(&self) -> &'static str {
        match self.root() {
            KernelError::UnboundName(_) => "UnboundName",
            KernelError::UnboundVariable { .. } => "UnboundVariable",
            KernelError::SortOfBox => "SortOfBox",
            KernelError::ApplicationMismatch { .. } => "ApplicationMismatch",
            KernelError::IllFormedProduct { .. } => "IllFormedProduct",
            KernelError::ArityMismatch { .. } => "ArityMismatch",
            KernelError::TypeMismatch { .. } => "TypeMismatch",
            KernelError::DuplicateName(_) => "DuplicateName",
            KernelError::MissingBody(_) => "MissingBody",
            KernelError::PrimitiveUnfold(_) => "PrimitiveUnfold",
            KernelError::NonTermination(_) => "NonTermination",
            KernelError::NotASort { .. } => "NotASort",
            KernelError::InDefinition { .. } => unreachable!(),
        }
    }
}

pub type KResult<T> = Result<T, KernelError>;
