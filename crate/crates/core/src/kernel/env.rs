use std::collections::HashMap;
use std::rc::Rc;

use super::expr::{Expr, Name};

/// A named, parameterised entry of the global environment.
///
/// Parameter `i`'s type is scoped over parameters `0..i`; `body` and `ty`
/// are scoped over the whole telescope. A primitive definition has no body
/// and never unfolds.
#[derive(Debug, Clone, PartialEq)]
pub struct Definition {
    pub name: Name,
    pub params: Vec<(Name, Expr)>,
    pub body: Option<Expr>,
    pub ty: Expr,
}

impl Definition {
    pub fn descriptive(name: impl Into<Name>, params: Vec<(Name, Expr)>, body: Expr, ty: Expr) -> Self {
        Definition { name: name.into(), params, body: Some(body), ty }
    }

    pub fn primitive(name: impl Into<Name>, params: Vec<(Name, Expr)>, ty: Expr) -> Self {
        Definition { name: name.into(), params, body: None, ty }
    }

    pub fn is_primitive(&self) -> bool {
        self.body.is_none()
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// Ordered sequence of checked definitions with unambiguous lookup.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    defs: Vec<Rc<Definition>>,
    index: HashMap<Name, usize>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Rc<Definition>> {
        self.index.get(name).map(|&i| &self.defs[i])
    }

    /// Position of a definition; later definitions have larger heights.
    pub fn height(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rc<Definition>> {
        self.defs.iter()
    }

    /// Appends without checking. Only the kernel's definition rule and
    /// callers that deliberately admit an opaque entry use this.
    pub(crate) fn push_unchecked(&mut self, def: Definition) {
        self.index.insert(def.name.clone(), self.defs.len());
        self.defs.push(Rc::new(def));
    }
}

/// Ordered sequence of variable declarations; the last entry is de Bruijn
/// index 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Context {
    decls: Vec<(Name, Expr)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_decls(decls: Vec<(Name, Expr)>) -> Self {
        Context { decls }
    }

    pub fn push(&mut self, name: Name, ty: Expr) {
        self.decls.push((name, ty));
    }

    pub fn pop(&mut self) {
        self.decls.pop();
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn decls(&self) -> &[(Name, Expr)] {
        &self.decls
    }

    /// Type of the variable with de Bruijn index `i`, lifted into the full
    /// context.
    pub fn lookup(&self, i: usize) -> Option<Expr> {
        let n = self.decls.len();
        if i >= n {
            return None;
        }
        Some(self.decls[n - 1 - i].1.shift(i + 1))
    }

    pub fn names(&self) -> Vec<Name> {
        self.decls.iter().map(|(n, _)| n.clone()).collect()
    }
}

/// `env; ctx |- subject : classifier`.
#[derive(Debug, Clone)]
pub struct Judgment {
    pub env: Environment,
    pub ctx: Context,
    pub subject: Expr,
    pub classifier: Expr,
}
