//! The trusted core: terms, environments, reduction, conversion and the
//! typing judgment. Everything else in the crate produces input for this
//! module or reports on its verdicts.

mod env;
mod error;
mod expr;
pub mod print;
mod reduce;
mod typing;

pub use env::{Context, Definition, Environment, Judgment};
pub use error::{KResult, KernelError};
pub use expr::{Expr, ExprKind, HeadTag, Name, Sort};
pub use reduce::{convertible, instantiate, normalize, whnf, Reducer, DEFAULT_BUDGET};
pub use typing::{
    admit_opaque, check_definition, check_signature, check_type, extend_checked, infer_type, CheckReport, TypeChecker,
};

impl Judgment {
    /// Whether the judgment is derivable.
    pub fn holds(&self) -> bool {
        check_type(&self.env, &self.ctx, &self.subject, &self.classifier).is_ok()
    }
}
