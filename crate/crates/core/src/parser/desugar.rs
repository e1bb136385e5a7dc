//! Elaboration of surface scripts: notation expansion, flag folding and
//! name resolution, producing kernel definitions and statement
//! obligations.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::notation::{NotationKind, NotationTable};
use super::syntax::*;
use crate::kernel::{Context, Definition, Environment, Expr, Name};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElabError {
    #[error("{span}: notation `{symbol}` is used before a `notation` step binds it")]
    UnknownNotation { symbol: String, span: Span },
    #[error("{span}: notation `{symbol}` supplies {found} operands but `{target}` takes {expected} parameters")]
    NotationArity { symbol: String, target: String, expected: usize, found: usize, span: Span },
    #[error("{span}: unbound name `{name}`")]
    UnboundName { name: String, span: Span },
    #[error("{span}: `{name}` is defined later and cannot be used here")]
    ForwardReference { name: String, span: Span },
    #[error("{span}: cannot supply parameter `{param}` of `{constant}`: no variable of that name in scope")]
    CannotInferImplicit { constant: String, param: String, span: Span },
    #[error("{span}: `{constant}` takes {expected} arguments, got {found}")]
    TooManyArguments { constant: String, expected: usize, found: usize, span: Span },
    #[error("{span}: flag variable `{name}` is not among the parameters of `{def}`")]
    UnselectedFlagVariable { name: String, def: String, span: Span },
    #[error("{span}: `{name}` is not a variable of an open flag")]
    UnknownParameter { name: String, span: Span },
    #[error("{span}: definition `{name}` has no body; use `prim` for an axiom")]
    MissingBody { name: String, span: Span },
}

impl ElabError {
    pub fn code(&self) -> &'static str {
        match self {
            ElabError::UnknownNotation { .. } => "UnknownNotation",
            ElabError::NotationArity { .. } => "ArityMismatch",
            ElabError::UnboundName { .. } => "UnboundName",
            ElabError::ForwardReference { .. } => "ForwardReference",
            ElabError::CannotInferImplicit { .. } => "CannotInferImplicit",
            ElabError::TooManyArguments { .. } => "ArityMismatch",
            ElabError::UnselectedFlagVariable { .. } => "UnselectedFlagVariable",
            ElabError::UnknownParameter { .. } => "UnknownParameter",
            ElabError::MissingBody { .. } => "MissingBody",
        }
    }

    /// The name an unresolved reference points at, if any.
    pub fn missing_name(&self) -> Option<&str> {
        match self {
            ElabError::UnboundName { name, .. } | ElabError::ForwardReference { name, .. } => Some(name),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObligationKind {
    /// A fully elaborated definition; `body` is `None` for primitives.
    Define(Definition),
    /// The signature elaborated but the body did not. Checking may admit
    /// the signature so that later steps can still be examined.
    Opaque(Definition),
    /// A statement step: `subject : classifier` under the flag context.
    Check { ctx: Context, subject: Expr, classifier: Expr },
    /// Nothing usable could be produced.
    Broken,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Obligation {
    pub name: String,
    pub kind: ObligationKind,
    /// Declared with `prim`.
    pub primitive: bool,
    pub note: Option<String>,
    pub span: Span,
    /// Number of open flags at the step.
    pub depth: usize,
    /// The step states no type; the definition carries a placeholder that
    /// the checker replaces by the inferred type of the body.
    pub infer_type: bool,
    pub errors: Vec<ElabError>,
    /// Names written in the step's type and body, kept so that a step that
    /// fails to elaborate still records what it relies on.
    pub mentions: Vec<String>,
}

impl Obligation {
    pub fn is_definition(&self) -> bool {
        !matches!(self.kind, ObligationKind::Check { .. })
    }
}

#[derive(Debug, Clone)]
pub struct Elaborated {
    pub obligations: Vec<Obligation>,
    pub table: NotationTable,
}

/// Elaborates one script against the constants of `env`.
pub fn elaborate(script: &SurfaceScript, env: &Environment, table: &NotationTable) -> Elaborated {
    let mut el = Elaborator::new(env, table.clone());
    let obligations = el.script(script);
    Elaborated { obligations, table: el.table }
}

struct FlagVar {
    name: String,
    ty: SExpr,
}

/// Stateful elaborator; one instance can process a sequence of scripts.
pub struct Elaborator {
    table: NotationTable,
    sigs: HashMap<String, Vec<String>>,
    future: HashSet<String>,
    flags: Vec<Vec<FlagVar>>,
}

struct Scope<'a> {
    names: Vec<String>,
    /// Flag variables that are open but not parameters of the current step.
    hidden: &'a HashSet<String>,
    def: &'a str,
    errs: Vec<ElabError>,
}

impl Scope<'_> {
    fn lookup(&self, name: &str) -> Option<Expr> {
        self.names.iter().rev().position(|n| n == name).map(Expr::var)
    }
}

impl Elaborator {
    pub fn new(env: &Environment, table: NotationTable) -> Elaborator {
        let sigs = env.iter().map(|d| (d.name.to_string(), d.params.iter().map(|(n, _)| n.to_string()).collect())).collect();
        Elaborator { table, sigs, future: HashSet::new(), flags: Vec::new() }
    }

    pub fn table(&self) -> &NotationTable {
        &self.table
    }

    /// Names that scripts processed later will define; references to them
    /// are reported as forward references.
    pub fn announce<I: IntoIterator<Item = String>>(&mut self, names: I) {
        self.future.extend(names.into_iter().filter(|n| !self.sigs.contains_key(n)));
    }

    pub fn script(&mut self, script: &SurfaceScript) -> Vec<Obligation> {
        self.announce(script.items.iter().filter_map(|i| match i {
            FlagItem::Def(d) => Some(d.name.clone()),
            _ => None,
        }));
        self.flags.clear();
        let mut out = Vec::new();
        for item in &script.items {
            match item {
                FlagItem::OpenFlag(decls, _) => {
                    let vars = decls
                        .iter()
                        .flat_map(|d| d.names.iter().map(|n| FlagVar { name: n.clone(), ty: d.ty.clone() }))
                        .collect();
                    self.flags.push(vars);
                }
                FlagItem::CloseFlag(_) => {
                    self.flags.pop();
                }
                FlagItem::Def(d) => out.push(self.def_step(d)),
                FlagItem::Check(c) => out.push(self.check_step(c)),
                FlagItem::Notation(n) => {
                    if let Some(ob) = self.notation_step(n) {
                        out.push(ob);
                    }
                }
            }
        }
        self.flags.clear();
        out
    }

    fn open_vars(&self) -> Vec<&FlagVar> {
        self.flags.iter().flatten().collect()
    }

    /// Selects the telescope of a step and elaborates its types.
    fn telescope(&self, params: &Params, def: &str, span: Span, errs: &mut Vec<ElabError>) -> (Vec<(Name, Expr)>, HashSet<String>) {
        let open = self.open_vars();
        let selected: Vec<&FlagVar> = match params {
            Params::FromFlags => open.clone(),
            Params::Named(names) => names
                .iter()
                .filter_map(|n| {
                    let hit = open.iter().rev().find(|v| &v.name == n).copied();
                    if hit.is_none() {
                        errs.push(ElabError::UnknownParameter { name: n.clone(), span });
                    }
                    hit
                })
                .collect(),
        };
        let chosen: HashSet<&str> = selected.iter().map(|v| v.name.as_str()).collect();
        let hidden: HashSet<String> = open.iter().filter(|v| !chosen.contains(v.name.as_str())).map(|v| v.name.clone()).collect();
        let mut tele = Vec::new();
        let mut scope = Scope { names: Vec::new(), hidden: &hidden, def, errs: Vec::new() };
        for v in selected {
            let ty = self.expr(&v.ty, &mut scope, span);
            if let Some(ty) = ty {
                tele.push((Name::from(v.name.as_str()), ty));
            }
            scope.names.push(v.name.clone());
        }
        errs.append(&mut scope.errs);
        (tele, hidden)
    }

    fn def_step(&mut self, d: &DefStep) -> Obligation {
        let mut mentions = Vec::new();
        d.ty.iter().chain(d.body.iter()).for_each(|e| e.names(&mut mentions));
        let mut errs = Vec::new();
        let (params, hidden) = self.telescope(&d.params, &d.name, d.span, &mut errs);
        let param_names: Vec<String> = params.iter().map(|(n, _)| n.to_string()).collect();
        let complete = errs.is_empty();
        let mut scope = Scope { names: param_names.clone(), hidden: &hidden, def: &d.name, errs: Vec::new() };
        let infer_type = d.ty.is_none();
        let ty = match &d.ty {
            Some(t) => self.expr(t, &mut scope, d.span),
            None => Some(Expr::star()),
        };
        let sig_ok = complete && scope.errs.is_empty() && ty.is_some();
        errs.append(&mut scope.errs);
        let body = match (&d.body, d.kind) {
            (Some(b), DefKind::Descriptive) => {
                let r = self.expr(b, &mut scope, d.span);
                let ok = scope.errs.is_empty();
                errs.append(&mut scope.errs);
                if ok {
                    r
                } else {
                    None
                }
            }
            (None, DefKind::Descriptive) => {
                errs.push(ElabError::MissingBody { name: d.name.clone(), span: d.span });
                None
            }
            _ => None,
        };
        self.future.remove(&d.name);
        self.sigs.insert(d.name.clone(), param_names);
        let kind = match (sig_ok, ty, body, d.kind) {
            (true, Some(ty), _, DefKind::Primitive) => ObligationKind::Define(Definition::primitive(d.name.as_str(), params, ty)),
            (true, Some(ty), Some(body), DefKind::Descriptive) => {
                ObligationKind::Define(Definition::descriptive(d.name.as_str(), params, body, ty))
            }
            (true, Some(ty), None, _) if !infer_type => ObligationKind::Opaque(Definition::primitive(d.name.as_str(), params, ty)),
            _ => ObligationKind::Broken,
        };
        Obligation {
            name: d.name.clone(),
            kind,
            primitive: d.kind == DefKind::Primitive,
            note: d.note.clone(),
            span: d.span,
            depth: self.flags.len(),
            infer_type,
            errors: errs,
            mentions,
        }
    }

    fn check_step(&mut self, c: &CheckStep) -> Obligation {
        let name = format!("check@{}", c.span);
        let mut errs = Vec::new();
        let (params, hidden) = self.telescope(&Params::FromFlags, &name, c.span, &mut errs);
        let mut scope = Scope { names: params.iter().map(|(n, _)| n.to_string()).collect(), hidden: &hidden, def: &name, errs: Vec::new() };
        let subject = self.expr(&c.subject, &mut scope, c.span);
        let classifier = self.expr(&c.classifier, &mut scope, c.span);
        errs.append(&mut scope.errs);
        let kind = match (subject, classifier) {
            (Some(subject), Some(classifier)) if errs.is_empty() => {
                ObligationKind::Check { ctx: Context::from_decls(params), subject, classifier }
            }
            _ => ObligationKind::Broken,
        };
        Obligation { name, kind, primitive: false, note: c.note.clone(), span: c.span, depth: self.flags.len(), infer_type: false, errors: errs, mentions: Vec::new() }
    }

    fn notation_step(&mut self, n: &NotationStep) -> Option<Obligation> {
        let err = if !self.sigs.contains_key(&n.target) {
            if self.future.contains(&n.target) {
                ElabError::ForwardReference { name: n.target.clone(), span: n.span }
            } else {
                ElabError::UnboundName { name: n.target.clone(), span: n.span }
            }
        } else if self.table.bind(&n.symbol, &n.target) {
            return None;
        } else {
            ElabError::UnknownNotation { symbol: n.symbol.clone(), span: n.span }
        };
        Some(Obligation {
            name: format!("notation@{}", n.span),
            kind: ObligationKind::Broken,
            primitive: false,
            note: n.note.clone(),
            span: n.span,
            depth: self.flags.len(),
            infer_type: false,
            errors: vec![err],
            mentions: Vec::new(),
        })
    }

    fn unresolved(&self, name: &str, scope: &mut Scope, span: Span) {
        let err = if scope.hidden.contains(name) {
            ElabError::UnselectedFlagVariable { name: name.to_string(), def: scope.def.to_string(), span }
        } else if self.future.contains(name) {
            ElabError::ForwardReference { name: name.to_string(), span }
        } else {
            ElabError::UnboundName { name: name.to_string(), span }
        };
        scope.errs.push(err);
    }

    /// Builds `c(...)` from operands placed at `slots`; the remaining
    /// parameters are taken from same-named variables in scope.
    fn saturate(&self, c: &str, operands: Vec<Option<Expr>>, slots: Option<&[usize]>, scope: &mut Scope, span: Span) -> Option<Expr> {
        let params = self.sigs.get(c)?;
        let n = params.len();
        let m = operands.len();
        let positions: Vec<usize> = match slots {
            Some(s) => s.to_vec(),
            None => (n - m..n).collect(),
        };
        let mut args: Vec<Option<Option<Expr>>> = vec![None; n];
        for (pos, op) in positions.into_iter().zip(operands) {
            args[pos] = Some(op);
        }
        let mut out = Vec::with_capacity(n);
        let mut ok = true;
        for (i, a) in args.into_iter().enumerate() {
            match a {
                Some(Some(e)) => out.push(e),
                Some(None) => ok = false,
                None => match scope.lookup(&params[i]) {
                    Some(v) => out.push(v),
                    None => {
                        scope.errs.push(ElabError::CannotInferImplicit {
                            constant: c.to_string(),
                            param: params[i].clone(),
                            span,
                        });
                        ok = false;
                    }
                },
            }
        }
        ok.then(|| Expr::constant(c, out))
    }

    fn call(&self, c: &str, args: &[SExpr], scope: &mut Scope, span: Span) -> Option<Expr> {
        let ops: Vec<Option<Expr>> = args.iter().map(|a| self.expr(a, scope, span)).collect();
        if let Some(v) = scope.lookup(c) {
            return ops.into_iter().collect::<Option<Vec<_>>>().map(|xs| Expr::apps(v, xs));
        }
        match self.sigs.get(c) {
            Some(params) if params.len() < ops.len() => {
                scope.errs.push(ElabError::TooManyArguments {
                    constant: c.to_string(),
                    expected: params.len(),
                    found: ops.len(),
                    span,
                });
                None
            }
            Some(_) => self.saturate(c, ops, None, scope, span),
            None => {
                self.unresolved(c, scope, span);
                None
            }
        }
    }

    fn notation(&self, kind: NotationKind, operands: Vec<Option<Expr>>, scope: &mut Scope, span: Span) -> Option<Expr> {
        let entry = self.table.for_kind(kind);
        let Some(target) = entry.target.as_deref() else {
            scope.errs.push(ElabError::UnknownNotation { symbol: entry.symbol.to_string(), span });
            return None;
        };
        let Some(params) = self.sigs.get(target) else {
            self.unresolved(target, scope, span);
            return None;
        };
        if entry.applied {
            let head = self.saturate(target, Vec::new(), Some(&[]), scope, span)?;
            return operands.into_iter().collect::<Option<Vec<_>>>().map(|xs| Expr::apps(head, xs));
        }
        let needed = entry.slots.map_or(operands.len(), |s| s.iter().max().map_or(0, |m| m + 1));
        if needed > params.len() {
            scope.errs.push(ElabError::NotationArity {
                symbol: entry.symbol.to_string(),
                target: target.to_string(),
                expected: params.len(),
                found: operands.len(),
                span,
            });
            return None;
        }
        self.saturate(target, operands, entry.slots, scope, span)
    }

    fn binder(&self, kind: BinderKind, names: &[String], ty: &SExpr, body: &SExpr, scope: &mut Scope, span: Span) -> Option<Expr> {
        let Some((first, rest)) = names.split_first() else {
            return self.expr(body, scope, span);
        };
        let t = self.expr(ty, scope, span);
        scope.names.push(first.clone());
        let inner = self.binder(kind, rest, ty, body, scope, span);
        scope.names.pop();
        let (t, inner) = (t?, inner?);
        match kind {
            BinderKind::Lam => Some(Expr::lam(first.as_str(), t, inner)),
            BinderKind::Pi => Some(Expr::pi(first.as_str(), t, inner)),
            BinderKind::Forall | BinderKind::Exists => {
                let k = if kind == BinderKind::Forall { NotationKind::Forall } else { NotationKind::Exists };
                let lam = Expr::lam(first.as_str(), t.clone(), inner);
                self.notation(k, vec![Some(t), Some(lam)], scope, span)
            }
        }
    }

    fn expr(&self, e: &SExpr, scope: &mut Scope, span: Span) -> Option<Expr> {
        match e {
            SExpr::Star(_) => Some(Expr::star()),
            SExpr::Ident(name, sp) => {
                if let Some(v) = scope.lookup(name) {
                    return Some(v);
                }
                if self.sigs.contains_key(name) {
                    return self.saturate(name, Vec::new(), None, scope, *sp);
                }
                self.unresolved(name, scope, *sp);
                None
            }
            SExpr::Call(name, args, sp) => self.call(name, args, scope, *sp),
            SExpr::App(f, a) => {
                let f = self.expr(f, scope, span);
                let a = self.expr(a, scope, span);
                Some(Expr::app(f?, a?))
            }
            SExpr::Binder(kind, names, ty, body) => self.binder(*kind, names, ty, body, scope, span),
            SExpr::Arrow(_, a, b) => {
                let a = self.expr(a, scope, span);
                let b = self.expr(b, scope, span);
                Some(Expr::arrow(a?, b?))
            }
            SExpr::SetBuilder(x, ty, body) => self.binder(BinderKind::Lam, std::slice::from_ref(x), ty, body, scope, span),
            SExpr::Class(x, r, sp) => {
                let ops = vec![self.expr(x, scope, *sp), self.expr(r, scope, *sp)];
                self.notation(NotationKind::Class, ops, scope, *sp)
            }
            SExpr::Op(op, args, sp) => {
                let ops = args.iter().map(|a| self.expr(a, scope, *sp)).collect();
                self.notation(NotationKind::Op(*op), ops, scope, *sp)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_script;
    use super::*;

    fn run(src: &str) -> Vec<Obligation> {
        let script = parse_script(src).unwrap();
        elaborate(&script, &Environment::new(), &NotationTable::standard()).obligations
    }

    const PRELUDE: &str = "flag S : *, x, y : S { def eq : * := !P : S -> *. P x => P y ; } notation \"=\" := eq ;";

    #[test]
    fn arrows_become_non_dependent_products() {
        let obs = run("flag A, B : * { def k : A => B => A := \\u : A. \\v : B. u ; }");
        let ObligationKind::Define(d) = &obs[0].kind else { panic!("{:?}", obs[0]) };
        assert_eq!(d.params.len(), 2);
        let a = Expr::var(1);
        let b = Expr::var(0);
        assert_eq!(d.ty, Expr::arrow(a.clone(), Expr::arrow(b, a)));
    }

    #[test]
    fn flags_fold_into_telescopes_and_notation_fills_implicits() {
        let src = format!("{PRELUDE} flag S : *, z : S {{ def r() : z =[S] z := \\P : S -> *. \\u : P z. u ; }}");
        let obs = run(&src);
        let ObligationKind::Define(d) = &obs[1].kind else { panic!("{:?}", obs[1]) };
        assert_eq!(d.params.len(), 2);
        assert_eq!(d.ty, Expr::constant("eq", vec![Expr::var(1), Expr::var(0), Expr::var(0)]));
    }

    #[test]
    fn notation_must_be_bound_first() {
        let obs = run("flag S : *, x : S { def bad : * := x =[S] x ; }");
        assert_eq!(obs[0].errors[0].code(), "UnknownNotation");
    }

    #[test]
    fn forward_and_unbound_references_are_distinguished() {
        let obs = run("flag A : * { def a : * := later ; def b : * := nowhere ; def later : * := A ; }");
        assert_eq!(obs[0].errors[0].code(), "ForwardReference");
        assert_eq!(obs[1].errors[0].code(), "UnboundName");
        assert!(obs[2].errors.is_empty());
    }

    #[test]
    fn innermost_flag_variable_wins() {
        let obs = run("flag S : *, x : S { flag x : S { def pick : S := x ; } }");
        let ObligationKind::Define(d) = &obs[0].kind else { panic!() };
        assert_eq!(d.params.len(), 3);
        assert_eq!(d.body, Some(Expr::var(0)));
    }

    #[test]
    fn named_parameters_select_from_open_flags() {
        let obs = run("flag S : *, x, y : S { def py(S, y) : S := y ; def bad(S) : S := x ; }");
        let ObligationKind::Define(d) = &obs[0].kind else { panic!() };
        assert_eq!(d.params.len(), 2);
        assert_eq!(obs[1].errors[0].code(), "UnselectedFlagVariable");
    }

    #[test]
    fn all_resolution_errors_of_a_step_are_reported() {
        let obs = run("flag A : * { def two : * := gone1 (gone2 A) ; }");
        assert_eq!(obs[0].errors.len(), 2);
    }
}
