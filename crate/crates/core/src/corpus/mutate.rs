//! Systematic proof-term mutations used to confirm that checking actually
//! depends on each proof.

use super::load::LoadedScript;
use crate::parser::{print_expr, BinderKind, DefKind, FlagItem, SExpr, SurfaceScript};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationOp {
    /// Swap two distinct adjacent arguments of a call or application.
    SwapArguments,
    /// Replace an eliminator or introduction by its twin, e.g. the first
    /// conjunction projection by the second.
    SwapEliminator,
    /// Remove the outermost abstraction found in the proof.
    DropBinder,
}

impl MutationOp {
    pub const ALL: [MutationOp; 3] = [MutationOp::SwapEliminator, MutationOp::SwapArguments, MutationOp::DropBinder];
}

#[derive(Debug, Clone)]
pub struct Mutation {
    pub target: String,
    pub op: MutationOp,
    pub description: String,
    /// Index of the mutated script in the loaded sequence.
    pub script_index: usize,
    pub mutated: SurfaceScript,
}

const TWINS: &[(&str, &str)] = &[("and-el1", "and-el2"), ("or-in1", "or-in2")];

fn twin(name: &str) -> Option<&'static str> {
    TWINS.iter().find_map(|(a, b)| {
        if *a == name {
            Some(*b)
        } else if *b == name {
            Some(*a)
        } else {
            None
        }
    })
}

fn spine(e: &SExpr) -> (&SExpr, Vec<&SExpr>) {
    let mut args = Vec::new();
    let mut head = e;
    while let SExpr::App(f, a) = head {
        args.push(a.as_ref());
        head = f;
    }
    args.reverse();
    (head, args)
}

fn rebuild(head: SExpr, args: Vec<SExpr>) -> SExpr {
    args.into_iter().fold(head, SExpr::app)
}

/// Applies `op` at the first applicable position in pre-order.
fn apply(e: &SExpr, op: MutationOp, done: &mut Option<String>) -> SExpr {
    if done.is_some() {
        return e.clone();
    }
    match (op, e) {
        (MutationOp::SwapEliminator, SExpr::Ident(n, sp)) => {
            if let Some(t) = twin(n) {
                *done = Some(format!("{n} -> {t}"));
                return SExpr::Ident(t.to_string(), *sp);
            }
        }
        (MutationOp::SwapEliminator, SExpr::Call(n, args, sp)) => {
            if let Some(t) = twin(n) {
                *done = Some(format!("{n} -> {t}"));
                return SExpr::Call(t.to_string(), args.clone(), *sp);
            }
        }
        (MutationOp::SwapArguments, SExpr::Call(n, args, sp)) => {
            if let Some(i) = (0..args.len().saturating_sub(1)).find(|&i| args[i] != args[i + 1]) {
                let mut args = args.clone();
                *done = Some(format!("{n}: swap arguments {} and {}", i + 1, i + 2));
                args.swap(i, i + 1);
                return SExpr::Call(n.clone(), args, *sp);
            }
        }
        (MutationOp::SwapArguments, SExpr::App(..)) => {
            let (head, args) = spine(e);
            if let Some(i) = (0..args.len().saturating_sub(1)).find(|&i| args[i] != args[i + 1]) {
                let mut args: Vec<SExpr> = args.into_iter().cloned().collect();
                *done = Some(format!("{}: swap operands {} and {}", print_expr(head), i + 1, i + 2));
                args.swap(i, i + 1);
                return rebuild(head.clone(), args);
            }
        }
        (MutationOp::DropBinder, SExpr::Binder(BinderKind::Lam, names, ty, body)) => {
            *done = Some(format!("drop binder {}", names[0]));
            return if names.len() > 1 {
                SExpr::Binder(BinderKind::Lam, names[1..].to_vec(), ty.clone(), body.clone())
            } else {
                body.as_ref().clone()
            };
        }
        _ => {}
    }
    let mut go = |x: &SExpr| Box::new(apply(x, op, done));
    match e {
        SExpr::Star(_) | SExpr::Ident(..) => e.clone(),
        SExpr::Call(n, args, sp) => SExpr::Call(n.clone(), args.iter().map(|a| *go(a)).collect(), *sp),
        SExpr::App(f, a) => {
            let f = go(f);
            SExpr::App(f, go(a))
        }
        SExpr::Binder(k, names, ty, body) => {
            let ty = go(ty);
            SExpr::Binder(*k, names.clone(), ty, go(body))
        }
        SExpr::Arrow(k, a, b) => {
            let a = go(a);
            SExpr::Arrow(*k, a, go(b))
        }
        SExpr::Op(op, args, sp) => SExpr::Op(*op, args.iter().map(|a| *go(a)).collect(), *sp),
        SExpr::SetBuilder(x, ty, body) => {
            let ty = go(ty);
            SExpr::SetBuilder(x.clone(), ty, go(body))
        }
        SExpr::Class(x, r, sp) => {
            let x = go(x);
            SExpr::Class(x, go(r), *sp)
        }
    }
}

/// Mutates the body of definition `target`. Returns the new script and a
/// description, or `None` when the operator does not apply.
pub fn mutate(script: &SurfaceScript, target: &str, op: MutationOp) -> Option<(SurfaceScript, String)> {
    let mut out = script.clone();
    for item in &mut out.items {
        if let FlagItem::Def(d) = item {
            if d.name == target && d.kind == DefKind::Descriptive {
                let body = d.body.as_ref()?;
                let mut done = None;
                let new = apply(body, op, &mut done);
                let desc = done?;
                d.body = Some(new);
                return Some((out, desc));
            }
        }
    }
    None
}

/// Every applicable operator on every listed target.
pub fn standard_mutations(scripts: &[LoadedScript], targets: &[&str]) -> Vec<Mutation> {
    let mut out = Vec::new();
    for target in targets {
        let Some(idx) = scripts.iter().position(|s| {
            s.script.items.iter().any(|i| matches!(i, FlagItem::Def(d) if d.name == *target))
        }) else {
            continue;
        };
        for op in MutationOp::ALL {
            if let Some((mutated, description)) = mutate(&scripts[idx].script, target, op) {
                out.push(Mutation { target: target.to_string(), op, description, script_index: idx, mutated });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_script;

    #[test]
    fn each_operator_changes_the_body_once() {
        let s = parse_script("flag A : * { def t : * := \\u, v : A. and-el1(f u, v) ; }").unwrap();
        let (m, d) = mutate(&s, "t", MutationOp::SwapEliminator).unwrap();
        assert_eq!(d, "and-el1 -> and-el2");
        assert_ne!(m, s);
        let (_, d) = mutate(&s, "t", MutationOp::SwapArguments).unwrap();
        assert!(d.contains("swap"));
        let (m, _) = mutate(&s, "t", MutationOp::DropBinder).unwrap();
        let FlagItem::Def(d) = &m.items[1] else { panic!() };
        assert!(matches!(d.body.as_ref().unwrap(), SExpr::Binder(_, names, _, _) if names == &vec!["v".to_string()]));
        assert!(mutate(&s, "missing", MutationOp::DropBinder).is_none());
    }
}
