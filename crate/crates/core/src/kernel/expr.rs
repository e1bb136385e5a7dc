//! Terms of the calculus in locally nameless form.
//!
//! Bound variables are de Bruijn indices. Binder names are kept only so terms
//! can be printed back with their original names; they take no part in
//! equality, so alpha-equivalent terms compare equal.

use std::fmt;
use std::rc::Rc;

pub type Name = Rc<str>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Star,
    Box,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Star => f.write_str("*"),
            Sort::Box => f.write_str("[]"),
        }
    }
}

#[derive(Debug)]
pub enum ExprKind {
    Sort(Sort),
    /// De Bruijn index; 0 is the innermost binder.
    Var(usize),
    /// A defined constant applied to exactly as many arguments as it has
    /// parameters.
    Const(Name, Vec<Expr>),
    App(Expr, Expr),
    Lam(Name, Expr, Expr),
    Pi(Name, Expr, Expr),
}

#[derive(Debug)]
struct Node {
    kind: ExprKind,
    /// One past the largest loose de Bruijn index; 0 for closed terms.
    loose: usize,
    size: usize,
}

/// A shared, immutable term.
#[derive(Clone)]
pub struct Expr(Rc<Node>);

impl Expr {
    fn mk(kind: ExprKind) -> Expr {
        let (loose, size) = match &kind {
            ExprKind::Sort(_) => (0, 1),
            ExprKind::Var(i) => (i + 1, 1),
            ExprKind::Const(_, args) => args.iter().fold((0, 1), |(l, s), a| {
                (l.max(a.loose()), s + a.size())
            }),
            ExprKind::App(f, a) => (f.loose().max(a.loose()), 1 + f.size() + a.size()),
            ExprKind::Lam(_, ty, body) | ExprKind::Pi(_, ty, body) => (
                ty.loose().max(body.loose().saturating_sub(1)),
                1 + ty.size() + body.size(),
            ),
        };
        Expr(Rc::new(Node { kind, loose, size }))
    }

    pub fn sort(s: Sort) -> Expr {
        Expr::mk(ExprKind::Sort(s))
    }

    pub fn star() -> Expr {
        Expr::sort(Sort::Star)
    }

    pub fn boxed() -> Expr {
        Expr::sort(Sort::Box)
    }

    pub fn var(i: usize) -> Expr {
        Expr::mk(ExprKind::Var(i))
    }

    pub fn constant(name: impl Into<Name>, args: Vec<Expr>) -> Expr {
        Expr::mk(ExprKind::Const(name.into(), args))
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::mk(ExprKind::App(f, a))
    }

    pub fn apps(f: Expr, args: impl IntoIterator<Item = Expr>) -> Expr {
        args.into_iter().fold(f, Expr::app)
    }

    pub fn lam(name: impl Into<Name>, ty: Expr, body: Expr) -> Expr {
        Expr::mk(ExprKind::Lam(name.into(), ty, body))
    }

    pub fn pi(name: impl Into<Name>, ty: Expr, body: Expr) -> Expr {
        Expr::mk(ExprKind::Pi(name.into(), ty, body))
    }

    /// Non-dependent product `a -> b`; `b` is written in the outer scope.
    pub fn arrow(a: Expr, b: Expr) -> Expr {
        Expr::pi("_", a, b.shift(1))
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0.kind
    }

    pub fn loose(&self) -> usize {
        self.0.loose
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn is_closed(&self) -> bool {
        self.loose() == 0
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    pub fn as_sort(&self) -> Option<Sort> {
        match self.kind() {
            ExprKind::Sort(s) => Some(*s),
            _ => None,
        }
    }

    pub fn has_loose(&self, index: usize) -> bool {
        if self.loose() <= index {
            return false;
        }
        match self.kind() {
            ExprKind::Sort(_) => false,
            ExprKind::Var(i) => *i == index,
            ExprKind::Const(_, args) => args.iter().any(|a| a.has_loose(index)),
            ExprKind::App(f, a) => f.has_loose(index) || a.has_loose(index),
            ExprKind::Lam(_, ty, body) | ExprKind::Pi(_, ty, body) => {
                ty.has_loose(index) || body.has_loose(index + 1)
            }
        }
    }

    /// Head and arguments of an application spine, outermost argument last.
    pub fn spine(&self) -> (Expr, Vec<Expr>) {
        let mut args = Vec::new();
        let mut head = self.clone();
        while let ExprKind::App(f, a) = head.kind() {
            args.push(a.clone());
            let f = f.clone();
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Rebuilds a node of the same shape from new children. Children are
    /// expected in traversal order: `Const` args, `App` (f, a), binders
    /// (type, body).
    fn with_children(&self, children: Vec<Expr>) -> Expr {
        let mut it = children.into_iter();
        match self.kind() {
            ExprKind::Sort(_) | ExprKind::Var(_) => self.clone(),
            ExprKind::Const(n, _) => Expr::constant(n.clone(), it.collect()),
            ExprKind::App(..) => Expr::app(it.next().unwrap(), it.next().unwrap()),
            ExprKind::Lam(n, ..) => Expr::lam(n.clone(), it.next().unwrap(), it.next().unwrap()),
            ExprKind::Pi(n, ..) => Expr::pi(n.clone(), it.next().unwrap(), it.next().unwrap()),
        }
    }

    /// Generic traversal that rewrites loose variables. `f(index, depth)`
    /// receives a variable whose index is at least `depth` and returns its
    /// replacement.
    fn map_loose(&self, depth: usize, f: &mut impl FnMut(usize, usize) -> Expr) -> Expr {
        if self.loose() <= depth {
            return self.clone();
        }
        match self.kind() {
            ExprKind::Sort(_) => self.clone(),
            ExprKind::Var(i) => f(*i, depth),
            ExprKind::Const(_, args) => {
                self.with_children(args.iter().map(|a| a.map_loose(depth, f)).collect())
            }
            ExprKind::App(g, a) => self.with_children(vec![g.map_loose(depth, f), a.map_loose(depth, f)]),
            ExprKind::Lam(_, ty, body) | ExprKind::Pi(_, ty, body) => self.with_children(vec![
                ty.map_loose(depth, f),
                body.map_loose(depth + 1, f),
            ]),
        }
    }

    /// Adds `by` to every loose index.
    pub fn shift(&self, by: usize) -> Expr {
        self.shift_from(0, by)
    }

    pub fn shift_from(&self, cutoff: usize, by: usize) -> Expr {
        if by == 0 {
            return self.clone();
        }
        self.map_loose(cutoff, &mut |i, _| Expr::var(i + by))
    }

    /// Subtracts `by` from every loose index at or above `cutoff`. Caller
    /// guarantees none of the indices in `cutoff..cutoff+by` occur.
    pub fn unshift(&self, by: usize) -> Expr {
        if by == 0 {
            return self.clone();
        }
        self.map_loose(0, &mut |i, d| {
            debug_assert!(i >= d + by, "unshift of a live variable");
            Expr::var(i - by)
        })
    }

    /// Substitutes `value` for index 0 of `self` (the body of a binder) and
    /// lowers the remaining loose indices by one.
    pub fn instantiate(&self, value: &Expr) -> Expr {
        self.map_loose(0, &mut |i, d| {
            if i == d {
                value.shift(d)
            } else {
                Expr::var(i - 1)
            }
        })
    }

    /// Simultaneous substitution for a telescope: `self` lives under `n =
    /// args.len()` binders where `args[0]` is the outermost. Remaining loose
    /// indices are lowered by `n`.
    pub fn instantiate_many(&self, args: &[Expr]) -> Expr {
        let n = args.len();
        if n == 0 {
            return self.clone();
        }
        self.map_loose(0, &mut |i, d| {
            let j = i - d;
            if j < n {
                args[n - 1 - j].shift(d)
            } else {
                Expr::var(i - n)
            }
        })
    }

    /// Iterates over every subterm in pre-order.
    pub fn subterms(&self) -> Vec<Expr> {
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            match e.kind() {
                ExprKind::Sort(_) | ExprKind::Var(_) => {}
                ExprKind::Const(_, args) => stack.extend(args.iter().rev().cloned()),
                ExprKind::App(f, a) => {
                    stack.push(a.clone());
                    stack.push(f.clone());
                }
                ExprKind::Lam(_, t, b) | ExprKind::Pi(_, t, b) => {
                    stack.push(b.clone());
                    stack.push(t.clone());
                }
            }
            out.push(e);
        }
        out
    }

    /// Names of all constants occurring in the term.
    pub fn constants(&self) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        for e in self.subterms() {
            if let ExprKind::Const(n, _) = e.kind() {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
        }
        out
    }

    pub fn head_tag(&self) -> HeadTag {
        let (head, args) = self.spine();
        match head.kind() {
            ExprKind::Sort(s) => HeadTag::Sort(*s),
            ExprKind::Var(i) => HeadTag::Var(*i, args.len()),
            ExprKind::Const(n, _) => HeadTag::Const(n.clone(), args.len()),
            ExprKind::Lam(..) => HeadTag::Lam(args.len()),
            ExprKind::Pi(..) => HeadTag::Pi,
            ExprKind::App(..) => unreachable!("spine head is never an application"),
        }
    }
}

/// Shape of the head of a term, used to compare reduction strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeadTag {
    Sort(Sort),
    Var(usize, usize),
    Const(Name, usize),
    Lam(usize),
    Pi,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.size() != other.size() || self.loose() != other.loose() {
            return false;
        }
        match (self.kind(), other.kind()) {
            (ExprKind::Sort(a), ExprKind::Sort(b)) => a == b,
            (ExprKind::Var(a), ExprKind::Var(b)) => a == b,
            (ExprKind::Const(m, xs), ExprKind::Const(n, ys)) => m == n && xs == ys,
            (ExprKind::App(f, a), ExprKind::App(g, b)) => f == g && a == b,
            (ExprKind::Lam(_, s, b), ExprKind::Lam(_, t, c))
            | (ExprKind::Pi(_, s, b), ExprKind::Pi(_, t, c)) => s == t && b == c,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::print::Printer::new().expr(self, &[]))
    }
}
