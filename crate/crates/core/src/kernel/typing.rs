//! The typing judgment: sort axiom, variables, products over every pair of
//! sorts, application, abstraction, conversion up to beta-delta, and the
//! definition rules (extension of the environment and instantiation of a
//! constant against its telescope).

use super::env::{Context, Definition, Environment};
use super::error::{KResult, KernelError};
use super::expr::{Expr, ExprKind, Sort};
use super::reduce::{Reducer, DEFAULT_BUDGET};

pub struct TypeChecker<'e> {
    red: Reducer<'e>,
}

impl<'e> TypeChecker<'e> {
    pub fn new(env: &'e Environment) -> Self {
        Self::with_budget(env, DEFAULT_BUDGET)
    }

    pub fn with_budget(env: &'e Environment, budget: u64) -> Self {
        TypeChecker { red: Reducer::with_budget(env, budget) }
    }

    pub fn reducer(&self) -> &Reducer<'e> {
        &self.red
    }

    fn env(&self) -> &'e Environment {
        self.red.env()
    }

    /// Infers the classifier of `e`, refuelling first.
    pub fn infer_top(&self, ctx: &Context, e: &Expr) -> KResult<Expr> {
        self.red.refuel();
        let mut ctx = ctx.clone();
        self.infer(&mut ctx, e)
    }

    pub fn infer(&self, ctx: &mut Context, e: &Expr) -> KResult<Expr> {
        match e.kind() {
            ExprKind::Sort(Sort::Star) => Ok(Expr::boxed()),
            ExprKind::Sort(Sort::Box) => Err(KernelError::SortOfBox),
            ExprKind::Var(i) => ctx
                .lookup(*i)
                .ok_or(KernelError::UnboundVariable { index: *i, depth: ctx.len() }),
            ExprKind::Const(name, args) => {
                let def = self
                    .env()
                    .get(name)
                    .ok_or_else(|| KernelError::UnboundName(name.to_string()))?
                    .clone();
                if def.arity() != args.len() {
                    return Err(KernelError::ArityMismatch {
                        name: name.to_string(),
                        expected: def.arity(),
                        found: args.len(),
                    });
                }
                for (i, arg) in args.iter().enumerate() {
                    let expected = def.params[i].1.instantiate_many(&args[..i]);
                    self.check(ctx, arg, &expected)?;
                }
                Ok(def.ty.instantiate_many(args))
            }
            ExprKind::App(f, a) => {
                let fty = self.infer(ctx, f)?;
                let w = self.red.whnf(&fty)?;
                let ExprKind::Pi(_, dom, cod) = w.kind() else {
                    return Err(KernelError::ApplicationMismatch {
                        reason: "function type is not a product".into(),
                        names: ctx.names(),
                        function: f.clone(),
                        function_type: fty,
                        argument: None,
                    });
                };
                let aty = self.infer(ctx, a)?;
                if !self.red.convertible(&aty, dom)? {
                    return Err(KernelError::ApplicationMismatch {
                        reason: "argument type is not convertible to the domain".into(),
                        names: ctx.names(),
                        function: f.clone(),
                        function_type: fty,
                        argument: Some((a.clone(), aty)),
                    });
                }
                Ok(cod.instantiate(a))
            }
            ExprKind::Lam(name, dom, body) => {
                self.domain_sort(ctx, dom, e)?;
                ctx.push(name.clone(), dom.clone());
                let cod = self.infer(ctx, body);
                ctx.pop();
                let cod = cod?;
                if cod.as_sort() == Some(Sort::Box) {
                    return Err(KernelError::IllFormedProduct {
                        reason: "abstraction body is a kind-level sort".into(),
                        names: ctx.names(),
                        term: e.clone(),
                    });
                }
                Ok(Expr::pi(name.clone(), dom.clone(), cod))
            }
            ExprKind::Pi(name, dom, cod) => {
                self.domain_sort(ctx, dom, e)?;
                ctx.push(name.clone(), dom.clone());
                let s2 = self.infer_sort(ctx, cod);
                ctx.pop();
                match s2 {
                    Ok(s) => Ok(Expr::sort(s)),
                    Err(KernelError::NotASort { .. }) | Err(KernelError::SortOfBox) => {
                        Err(KernelError::IllFormedProduct {
                            reason: "codomain is not a type".into(),
                            names: ctx.names(),
                            term: e.clone(),
                        })
                    }
                    Err(err) => Err(err),
                }
            }
        }
    }

    fn domain_sort(&self, ctx: &mut Context, dom: &Expr, whole: &Expr) -> KResult<Sort> {
        match self.infer_sort(ctx, dom) {
            Err(KernelError::NotASort { .. }) | Err(KernelError::SortOfBox) => Err(KernelError::IllFormedProduct {
                reason: "binder domain is not a type".into(),
                names: ctx.names(),
                term: whole.clone(),
            }),
            r => r,
        }
    }

    /// The sort classifying the type `ty`.
    pub fn infer_sort(&self, ctx: &mut Context, ty: &Expr) -> KResult<Sort> {
        let k = self.infer(ctx, ty)?;
        let w = self.red.whnf(&k)?;
        w.as_sort().ok_or_else(|| KernelError::NotASort { names: ctx.names(), term: ty.clone(), ty: k })
    }

    pub fn check(&self, ctx: &mut Context, e: &Expr, expected: &Expr) -> KResult<()> {
        let found = self.infer(ctx, e)?;
        if self.red.convertible(&found, expected)? {
            Ok(())
        } else {
            Err(KernelError::TypeMismatch {
                names: ctx.names(),
                term: e.clone(),
                expected: expected.clone(),
                found,
            })
        }
    }

    /// `ty` is either `[]` or classified by a sort.
    fn check_classifier(&self, ctx: &mut Context, ty: &Expr) -> KResult<()> {
        if ty.as_sort() == Some(Sort::Box) {
            return Ok(());
        }
        self.infer_sort(ctx, ty).map(|_| ())
    }

    fn check_definition_inner(&self, def: &Definition) -> KResult<()> {
        let mut ctx = Context::new();
        for (name, ty) in &def.params {
            self.infer_sort(&mut ctx, ty)?;
            ctx.push(name.clone(), ty.clone());
        }
        self.check_classifier(&mut ctx, &def.ty)?;
        if let Some(body) = &def.body {
            self.check(&mut ctx, body, &def.ty)?;
        }
        Ok(())
    }
}

/// Outcome of checking a term against an expected classifier.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub subject: Expr,
    pub expected: Expr,
    pub inferred: Option<Expr>,
    pub error: Option<KernelError>,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

pub fn infer_type(env: &Environment, ctx: &Context, e: &Expr) -> KResult<Expr> {
    TypeChecker::new(env).infer_top(ctx, e)
}

pub fn check_type(env: &Environment, ctx: &Context, e: &Expr, expected: &Expr) -> CheckReport {
    let tc = TypeChecker::new(env);
    let mut c = ctx.clone();
    let inferred = tc.infer(&mut c, e);
    let (inferred, error) = match inferred {
        Err(err) => (None, Some(err)),
        Ok(found) => match tc.reducer().convertible(&found, expected) {
            Ok(true) => (Some(found), None),
            Ok(false) => {
                // attach normal forms where they can be computed
                tc.reducer().refuel();
                let nf = |x: &Expr| tc.reducer().normalize(x).unwrap_or_else(|_| x.clone());
                let err = KernelError::TypeMismatch {
                    names: ctx.names(),
                    term: e.clone(),
                    expected: nf(expected),
                    found: nf(&found),
                };
                (Some(found), Some(err))
            }
            Err(err) => (Some(found), Some(err)),
        },
    };
    CheckReport { subject: e.clone(), expected: expected.clone(), inferred, error }
}

/// Checks `def` against `env` and returns the extended environment.
pub fn check_definition(env: &Environment, def: Definition) -> KResult<Environment> {
    let mut out = env.clone();
    extend_checked(&mut out, def)?;
    Ok(out)
}

/// In-place variant of [`check_definition`].
pub fn extend_checked(env: &mut Environment, def: Definition) -> KResult<()> {
    if env.contains(&def.name) {
        return Err(KernelError::DuplicateName(def.name.to_string()));
    }
    TypeChecker::new(env)
        .check_definition_inner(&def)
        .map_err(|e| KernelError::InDefinition { name: def.name.to_string(), source: Box::new(e) })?;
    env.push_unchecked(def);
    Ok(())
}

/// Checks that `ty` is a well-formed stated type for a definition with the
/// given telescope, without looking at any body.
pub fn check_signature(env: &Environment, params: &[(super::expr::Name, Expr)], ty: &Expr) -> KResult<()> {
    let tc = TypeChecker::new(env);
    let mut ctx = Context::new();
    for (name, t) in params {
        tc.infer_sort(&mut ctx, t)?;
        ctx.push(name.clone(), t.clone());
    }
    tc.check_classifier(&mut ctx, ty)
}

/// Admits `def` without its body after checking the signature. Used to keep
/// checking later steps when a proof fails: dependents see the stated type
/// only, so the failure stays with the step that caused it.
pub fn admit_opaque(env: &mut Environment, def: &Definition) -> KResult<()> {
    if env.contains(&def.name) {
        return Err(KernelError::DuplicateName(def.name.to_string()));
    }
    check_signature(env, &def.params, &def.ty)
        .map_err(|e| KernelError::InDefinition { name: def.name.to_string(), source: Box::new(e) })?;
    env.push_unchecked(Definition { body: None, ..def.clone() });
    Ok(())
}
