//! Beta/delta reduction, normal forms and conversion.

use std::cell::Cell;

use super::env::Environment;
use super::error::{KResult, KernelError};
use super::expr::{Expr, ExprKind};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Reduction engine over a fixed environment. Every beta or delta step
/// consumes one unit of budget; running out yields `NonTermination`.
pub struct Reducer<'e> {
    env: &'e Environment,
    budget: u64,
    fuel: Cell<u64>,
}

impl<'e> Reducer<'e> {
    pub fn new(env: &'e Environment) -> Self {
        Self::with_budget(env, DEFAULT_BUDGET)
    }

    pub fn with_budget(env: &'e Environment, budget: u64) -> Self {
        Reducer { env, budget, fuel: Cell::new(budget) }
    }

    pub fn env(&self) -> &'e Environment {
        self.env
    }

    /// Restores the full budget.
    pub fn refuel(&self) {
        self.fuel.set(self.budget);
    }

    fn tick(&self) -> KResult<()> {
        let left = self.fuel.get();
        if left == 0 {
            return Err(KernelError::NonTermination(self.budget));
        }
        self.fuel.set(left - 1);
        Ok(())
    }

    /// Body of `name` with `args` substituted for its parameters.
    pub fn unfold(&self, name: &str, args: &[Expr]) -> KResult<Expr> {
        let def = self
            .env
            .get(name)
            .ok_or_else(|| KernelError::UnboundName(name.to_string()))?;
        if def.arity() != args.len() {
            return Err(KernelError::ArityMismatch {
                name: name.to_string(),
                expected: def.arity(),
                found: args.len(),
            });
        }
        match &def.body {
            Some(body) => Ok(body.instantiate_many(args)),
            None => Err(KernelError::PrimitiveUnfold(name.to_string())),
        }
    }

    fn unfoldable(&self, e: &Expr) -> bool {
        match e.kind() {
            ExprKind::Const(n, _) => self.env.get(n).is_some_and(|d| !d.is_primitive()),
            _ => false,
        }
    }

    /// Contracts head beta-redexes only.
    pub fn whnf_core(&self, e: &Expr) -> KResult<Expr> {
        let (mut head, args) = e.spine();
        // pending arguments, next one on top
        let mut stack: Vec<Expr> = args.into_iter().rev().collect();
        let mut changed = false;
        while let ExprKind::Lam(_, _, body) = head.kind() {
            let Some(arg) = stack.pop() else { break };
            self.tick()?;
            let (h, more) = body.instantiate(&arg).spine();
            head = h;
            stack.extend(more.into_iter().rev());
            changed = true;
        }
        if !changed {
            return Ok(e.clone());
        }
        Ok(Expr::apps(head, stack.into_iter().rev()))
    }

    /// Unfolds a delta-redex at the head of the spine, if there is one.
    fn unfold_head(&self, e: &Expr) -> KResult<Option<Expr>> {
        let (head, args) = e.spine();
        match head.kind() {
            ExprKind::Const(n, cargs) if self.unfoldable(&head) => {
                self.tick()?;
                let body = self.unfold(n, cargs)?;
                Ok(Some(Expr::apps(body, args)))
            }
            _ => Ok(None),
        }
    }

    /// Weak head normal form: no beta-redex and no unfoldable constant at
    /// the head. Primitive constants are inert.
    pub fn whnf(&self, e: &Expr) -> KResult<Expr> {
        let mut cur = self.whnf_core(e)?;
        while let Some(next) = self.unfold_head(&cur)? {
            cur = self.whnf_core(&next)?;
        }
        Ok(cur)
    }

    /// Full beta-delta normal form.
    pub fn normalize(&self, e: &Expr) -> KResult<Expr> {
        let w = self.whnf(e)?;
        Ok(match w.kind() {
            ExprKind::Sort(_) | ExprKind::Var(_) => w.clone(),
            ExprKind::Lam(n, t, b) => Expr::lam(n.clone(), self.normalize(t)?, self.normalize(b)?),
            ExprKind::Pi(n, t, b) => Expr::pi(n.clone(), self.normalize(t)?, self.normalize(b)?),
            ExprKind::Const(n, args) => Expr::constant(
                n.clone(),
                args.iter().map(|a| self.normalize(a)).collect::<KResult<_>>()?,
            ),
            ExprKind::App(..) => {
                let (head, args) = w.spine();
                let head = match head.kind() {
                    ExprKind::Const(..) => self.normalize(&head)?,
                    _ => head,
                };
                let args = args.iter().map(|a| self.normalize(a)).collect::<KResult<Vec<_>>>()?;
                Expr::apps(head, args)
            }
        })
    }

    /// Beta-delta convertibility, unfolding definitions lazily: the later
    /// defined of two blocking heads is unfolded first, and identical heads
    /// are compared argument-wise before either is unfolded.
    pub fn convertible(&self, a: &Expr, b: &Expr) -> KResult<bool> {
        if a == b {
            return Ok(true);
        }
        let mut a = self.whnf_core(a)?;
        let mut b = self.whnf_core(b)?;
        loop {
            if a == b {
                return Ok(true);
            }
            let (ha, aa) = a.spine();
            let (hb, ab) = b.spine();
            let ua = self.unfoldable(&ha);
            let ub = self.unfoldable(&hb);
            if !ua && !ub {
                break;
            }
            if let (ExprKind::Const(m, xs), ExprKind::Const(n, ys)) = (ha.kind(), hb.kind()) {
                if m == n && aa.len() == ab.len() && self.all_convertible(xs, ys)? && self.all_convertible(&aa, &ab)? {
                    return Ok(true);
                }
            }
            let height = |h: &Expr| match h.kind() {
                ExprKind::Const(n, _) => self.env.height(n),
                _ => None,
            };
            let (hta, htb) = (height(&ha).filter(|_| ua), height(&hb).filter(|_| ub));
            match (hta, htb) {
                (Some(x), Some(y)) if x == y => {
                    a = self.whnf_core(&self.unfold_head(&a)?.unwrap())?;
                    b = self.whnf_core(&self.unfold_head(&b)?.unwrap())?;
                }
                (Some(x), Some(y)) if x > y => a = self.whnf_core(&self.unfold_head(&a)?.unwrap())?,
                (Some(_), None) => a = self.whnf_core(&self.unfold_head(&a)?.unwrap())?,
                _ => b = self.whnf_core(&self.unfold_head(&b)?.unwrap())?,
            }
        }
        match (a.kind(), b.kind()) {
            (ExprKind::Sort(s), ExprKind::Sort(t)) => Ok(s == t),
            (ExprKind::Lam(_, s, x), ExprKind::Lam(_, t, y)) | (ExprKind::Pi(_, s, x), ExprKind::Pi(_, t, y)) => {
                Ok(self.convertible(s, t)? && self.convertible(x, y)?)
            }
            _ => {
                let (ha, aa) = a.spine();
                let (hb, ab) = b.spine();
                if aa.len() != ab.len() {
                    return Ok(false);
                }
                let heads = match (ha.kind(), hb.kind()) {
                    (ExprKind::Var(i), ExprKind::Var(j)) => i == j,
                    (ExprKind::Const(m, xs), ExprKind::Const(n, ys)) => m == n && self.all_convertible(xs, ys)?,
                    _ => false,
                };
                Ok(heads && self.all_convertible(&aa, &ab)?)
            }
        }
    }

    fn all_convertible(&self, xs: &[Expr], ys: &[Expr]) -> KResult<bool> {
        if xs.len() != ys.len() {
            return Ok(false);
        }
        for (x, y) in xs.iter().zip(ys) {
            if !self.convertible(x, y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every term reachable from `e` by contracting exactly one beta- or
    /// delta-redex, at any position.
    pub fn one_step_reducts(&self, e: &Expr) -> KResult<Vec<Expr>> {
        let mut out = Vec::new();
        match e.kind() {
            ExprKind::Sort(_) | ExprKind::Var(_) => {}
            ExprKind::Const(n, args) => {
                if self.unfoldable(e) {
                    out.push(self.unfold(n, args)?);
                }
                for (i, a) in args.iter().enumerate() {
                    for r in self.one_step_reducts(a)? {
                        let mut args = args.clone();
                        args[i] = r;
                        out.push(Expr::constant(n.clone(), args));
                    }
                }
            }
            ExprKind::App(f, a) => {
                if let ExprKind::Lam(_, _, body) = f.kind() {
                    out.push(body.instantiate(a));
                }
                for r in self.one_step_reducts(f)? {
                    out.push(Expr::app(r, a.clone()));
                }
                for r in self.one_step_reducts(a)? {
                    out.push(Expr::app(f.clone(), r));
                }
            }
            ExprKind::Lam(n, t, b) | ExprKind::Pi(n, t, b) => {
                let rebuild = |t: Expr, b: Expr| match e.kind() {
                    ExprKind::Lam(..) => Expr::lam(n.clone(), t, b),
                    _ => Expr::pi(n.clone(), t, b),
                };
                for r in self.one_step_reducts(t)? {
                    out.push(rebuild(r, b.clone()));
                }
                for r in self.one_step_reducts(b)? {
                    out.push(rebuild(t.clone(), r));
                }
            }
        }
        Ok(out)
    }
}

/// Instantiates a descriptive definition: its body with `args` substituted
/// simultaneously for the parameters.
pub fn instantiate(env: &Environment, name: &str, args: &[Expr]) -> KResult<Expr> {
    Reducer::new(env).unfold(name, args)
}

pub fn whnf(env: &Environment, e: &Expr) -> KResult<Expr> {
    Reducer::new(env).whnf(e)
}

pub fn normalize(env: &Environment, e: &Expr) -> KResult<Expr> {
    Reducer::new(env).normalize(e)
}

pub fn convertible(env: &Environment, a: &Expr, b: &Expr) -> KResult<bool> {
    Reducer::new(env).convertible(a, b)
}
