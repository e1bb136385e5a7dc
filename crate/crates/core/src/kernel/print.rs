//! Plain-text rendering of kernel terms in the script syntax, with every
//! constant written as an explicit call. Binder names are freshened so the
//! output re-reads to the same term.

use super::expr::{Expr, ExprKind, Name, Sort};

#[derive(Default)]
pub struct Printer;

impl Printer {
    pub fn new() -> Self {
        Printer
    }

    /// Renders `e` under the given context names (outermost first).
    pub fn expr(&self, e: &Expr, names: &[Name]) -> String {
        let mut scope: Vec<String> = names.iter().map(|n| n.to_string()).collect();
        let mut out = String::new();
        write_expr(e, &mut scope, 0, &mut out);
        out
    }
}

pub fn show(e: &Expr, names: &[Name]) -> String {
    Printer::new().expr(e, names)
}

fn fresh(base: &str, scope: &[String]) -> String {
    let base = if base == "_" || base.is_empty() { "x" } else { base };
    let mut name = base.to_string();
    while scope.contains(&name) {
        name.push('\'');
    }
    name
}

// precedence: 0 binder/arrow, 1 application, 2 atom
fn write_expr(e: &Expr, scope: &mut Vec<String>, prec: u8, out: &mut String) {
    match e.kind() {
        ExprKind::Sort(Sort::Star) => out.push('*'),
        ExprKind::Sort(Sort::Box) => out.push_str("[]"),
        ExprKind::Var(i) => {
            if *i < scope.len() {
                out.push_str(&scope[scope.len() - 1 - i]);
            } else {
                out.push_str(&format!("#{}", i - scope.len()));
            }
        }
        ExprKind::Const(n, args) => {
            out.push_str(n);
            if !args.is_empty() {
                out.push('(');
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_expr(a, scope, 0, out);
                }
                out.push(')');
            }
        }
        ExprKind::App(..) => {
            let (head, args) = e.spine();
            if prec > 1 {
                out.push('(');
            }
            write_expr(&head, scope, 2, out);
            for a in &args {
                out.push(' ');
                write_expr(a, scope, 2, out);
            }
            if prec > 1 {
                out.push(')');
            }
        }
        ExprKind::Pi(n, dom, cod) if !cod.has_loose(0) => {
            if prec > 0 {
                out.push('(');
            }
            write_expr(dom, scope, 1, out);
            out.push_str(" -> ");
            scope.push(String::from("\u{0}"));
            write_expr(cod, scope, 0, out);
            scope.pop();
            let _ = n;
            if prec > 0 {
                out.push(')');
            }
        }
        ExprKind::Lam(n, dom, body) | ExprKind::Pi(n, dom, body) => {
            if prec > 0 {
                out.push('(');
            }
            out.push(if matches!(e.kind(), ExprKind::Lam(..)) { '\\' } else { '!' });
            let name = fresh(n, scope);
            out.push_str(&name);
            out.push_str(" : ");
            write_expr(dom, scope, 0, out);
            out.push_str(". ");
            scope.push(name);
            write_expr(body, scope, 0, out);
            scope.pop();
            if prec > 0 {
                out.push(')');
            }
        }
    }
}
