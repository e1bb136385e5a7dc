//! Surface syntax of `.ld` scripts, as written: notations are kept as
//! operators and binder groups are kept folded.

use std::fmt;

/// Source position. Positions never take part in equality, so a script and
/// its re-parsed pretty print compare equal.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// `*p` and `*s` are reading aids for propositions and sets; all three
/// spellings denote the same sort.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarTag {
    Plain,
    Prop,
    Set,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinderKind {
    Lam,
    Pi,
    Forall,
    Exists,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrowKind {
    /// `->`
    Type,
    /// `=>`
    Implies,
}

/// Notation operators of the fixed table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Not,
    Converse,
    Compose,
    Intersect,
    Union,
    /// `x =[T] y`; operands are `[T, x, y]`.
    Equal,
    ExtEqual,
    SubRel,
    Subset,
    Elem,
    And,
    Or,
    Iff,
    Less,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SExpr {
    Star(StarTag),
    Ident(String, Span),
    /// `c(a, b)`: a constant with explicit arguments; missing leading
    /// arguments are supplied from same-named variables in scope.
    Call(String, Vec<SExpr>, Span),
    App(Box<SExpr>, Box<SExpr>),
    Binder(BinderKind, Vec<String>, Box<SExpr>, Box<SExpr>),
    Arrow(ArrowKind, Box<SExpr>, Box<SExpr>),
    Op(Op, Vec<SExpr>, Span),
    /// `{x : S | body}`
    SetBuilder(String, Box<SExpr>, Box<SExpr>),
    /// `[x]_R`
    Class(Box<SExpr>, Box<SExpr>, Span),
}

impl SExpr {
    pub fn ident(name: &str) -> SExpr {
        SExpr::Ident(name.to_string(), Span::default())
    }

    pub fn app(f: SExpr, a: SExpr) -> SExpr {
        SExpr::App(Box::new(f), Box::new(a))
    }

    /// Identifiers and call heads written in the expression, bound or not.
    pub fn names(&self, out: &mut Vec<String>) {
        match self {
            SExpr::Star(_) => {}
            SExpr::Ident(n, _) => out.push(n.clone()),
            SExpr::Call(n, args, _) => {
                out.push(n.clone());
                args.iter().for_each(|a| a.names(out));
            }
            SExpr::App(f, a) | SExpr::Arrow(_, f, a) | SExpr::Class(f, a, _) => {
                f.names(out);
                a.names(out);
            }
            SExpr::Binder(_, _, t, b) | SExpr::SetBuilder(_, t, b) => {
                t.names(out);
                b.names(out);
            }
            SExpr::Op(_, xs, _) => xs.iter().for_each(|x| x.names(out)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decl {
    pub names: Vec<String>,
    pub ty: SExpr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    /// Every declaration of the open flags, in order.
    FromFlags,
    /// A selection of open-flag variables, in the given order.
    Named(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefKind {
    Descriptive,
    Primitive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefStep {
    pub kind: DefKind,
    pub name: String,
    pub params: Params,
    /// Omitted when the type is a kind: `[]` cannot be written, so the
    /// checker infers it.
    pub ty: Option<SExpr>,
    /// Absent for primitives; absent on a descriptive step is an error
    /// reported when the script is elaborated.
    pub body: Option<SExpr>,
    pub note: Option<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NotationStep {
    pub symbol: String,
    pub target: String,
    pub note: Option<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckStep {
    pub subject: SExpr,
    pub classifier: SExpr,
    pub note: Option<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FlagItem {
    OpenFlag(Vec<Decl>, Span),
    CloseFlag(Span),
    Def(DefStep),
    Notation(NotationStep),
    Check(CheckStep),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SurfaceScript {
    pub items: Vec<FlagItem>,
}
