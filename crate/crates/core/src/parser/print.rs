use std::fmt::Write;

use super::syntax::*;

/// Renders an expression so that parsing the output yields it back.
pub fn print_expr(e: &SExpr) -> String {
    render_expr(e, Style::Ascii)
}

/// Output vocabulary. LaTeX output is for reading only: it folds nested
/// binders and is never parsed back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Ascii,
    Latex,
}

pub fn render_expr(e: &SExpr, style: Style) -> String {
    let mut out = String::new();
    Printer { style }.fmt(&mut out, e, 1, true);
    out
}

/// Renders a whole script, one step per line, with notes as trailing
/// comments.
pub fn print_script(script: &SurfaceScript) -> String {
    let mut out = String::new();
    let mut depth = 0usize;
    for item in &script.items {
        if matches!(item, FlagItem::CloseFlag(_)) {
            depth = depth.saturating_sub(1);
        }
        out.push_str(&"  ".repeat(depth));
        match item {
            FlagItem::OpenFlag(decls, _) => {
                let parts: Vec<String> = decls.iter().map(print_decl).collect();
                let _ = writeln!(out, "flag {} {{", parts.join(", "));
                depth += 1;
            }
            FlagItem::CloseFlag(_) => out.push_str("}\n"),
            FlagItem::Def(d) => {
                let kw = match d.kind {
                    DefKind::Descriptive => "def",
                    DefKind::Primitive => "prim",
                };
                let _ = write!(out, "{kw} {}", d.name);
                if let Params::Named(ps) = &d.params {
                    let _ = write!(out, "({})", ps.join(", "));
                }
                if let Some(ty) = &d.ty {
                    let _ = write!(out, " : {}", print_expr(ty));
                }
                if let Some(b) = &d.body {
                    let _ = write!(out, " := {}", print_expr(b));
                }
                finish(&mut out, &d.note);
            }
            FlagItem::Notation(n) => {
                let _ = write!(out, "notation \"{}\" := {}", n.symbol, n.target);
                finish(&mut out, &n.note);
            }
            FlagItem::Check(c) => {
                let _ = write!(out, "check {} : {}", print_expr(&c.subject), print_expr(&c.classifier));
                finish(&mut out, &c.note);
            }
        }
    }
    out
}

pub(crate) fn print_decl(d: &Decl) -> String {
    format!("{} : {}", d.names.join(", "), print_header_type(&d.ty))
}

/// A flag header type is followed by `{`, so set builders in argument
/// position need parentheses; `fmt` always adds them there.
fn print_header_type(e: &SExpr) -> String {
    print_expr(e)
}

fn finish(out: &mut String, note: &Option<String>) {
    out.push_str(" ;");
    if let Some(n) = note {
        let _ = write!(out, " # {n}");
    }
    out.push('\n');
}

fn star(tag: StarTag) -> &'static str {
    match tag {
        StarTag::Plain => "*",
        StarTag::Prop => "*p",
        StarTag::Set => "*s",
    }
}

pub(crate) fn op_symbol(op: Op) -> &'static str {
    match op {
        Op::Not => "~",
        Op::Converse => "^-1",
        Op::Compose => "o",
        Op::Intersect => "&",
        Op::Union => "|",
        Op::Equal => "=",
        Op::ExtEqual => "==",
        Op::SubRel => "<=",
        Op::Subset => "sub",
        Op::Elem => "eps",
        Op::And => "/\\",
        Op::Or => "\\/",
        Op::Iff => "<=>",
        Op::Less => "<",
    }
}

/// Binding level of the outermost construct: 0 binders, 1 arrows, 2
/// conjunction, 3 relations, 4 union, 5 intersection, 6 composition, 7
/// negation, 8 application, 9 postfix, 10 atoms.
fn level(e: &SExpr) -> u8 {
    match e {
        SExpr::Binder(..) => 0,
        SExpr::Arrow(..) => 1,
        SExpr::Op(op, ..) => match op {
            Op::Iff => 1,
            Op::And | Op::Or => 2,
            Op::Equal | Op::ExtEqual | Op::SubRel | Op::Subset | Op::Elem | Op::Less => 3,
            Op::Union => 4,
            Op::Intersect => 5,
            Op::Compose => 6,
            Op::Not => 7,
            Op::Converse => 9,
        },
        SExpr::App(..) => 8,
        SExpr::Class(..) => 9,
        SExpr::SetBuilder(..) => 8,
        SExpr::Star(_) | SExpr::Ident(..) | SExpr::Call(..) => 10,
    }
}

struct Printer {
    style: Style,
}

impl Printer {
    fn fmt(&self, out: &mut String, e: &SExpr, min: u8, rightmost: bool) {
        let lvl = level(e);
        let parens = if lvl == 0 { !(rightmost && min <= 8) } else { lvl < min };
        if parens {
            out.push('(');
            self.fmt_inner(out, e, true);
            out.push(')');
        } else {
            self.fmt_inner(out, e, rightmost);
        }
    }

    fn fmt_inner(&self, out: &mut String, e: &SExpr, rightmost: bool) {
        let latex = self.style == Style::Latex;
        match e {
            SExpr::Star(tag) if latex => out.push_str(latex_star(*tag)),
            SExpr::Star(tag) => out.push_str(star(*tag)),
            SExpr::Ident(name, _) => self.name(out, name),
            SExpr::Call(name, args, _) => {
                self.name(out, name);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(if latex { "," } else { ", " });
                    }
                    self.fmt(out, a, 1, true);
                }
                out.push(')');
            }
            SExpr::App(f, a) => {
                self.fmt(out, f, 8, false);
                out.push_str(if latex { "\\," } else { " " });
                self.fmt(out, a, 9, rightmost);
            }
            SExpr::Binder(kind, names, ty, body) if latex => {
                out.push_str(match kind {
                    BinderKind::Lam => "\\lambda ",
                    BinderKind::Pi => "\\Pi ",
                    BinderKind::Forall => "\\forall ",
                    BinderKind::Exists => "\\exists ",
                });
                let mut names = names.clone();
                let mut body = body;
                while let SExpr::Binder(k, more, t, b) = &**body {
                    if k != kind || t != ty {
                        break;
                    }
                    names.extend(more.iter().cloned());
                    body = b;
                }
                for (i, n) in names.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    self.name(out, n);
                }
                out.push(':');
                self.fmt(out, ty, 1, true);
                out.push('.');
                self.fmt(out, body, 1, rightmost);
            }
            SExpr::Binder(kind, names, ty, body) => {
                out.push_str(match kind {
                    BinderKind::Lam => "\\",
                    BinderKind::Pi => "!",
                    BinderKind::Forall => "forall ",
                    BinderKind::Exists => "exists ",
                });
                out.push_str(&names.join(", "));
                out.push_str(" : ");
                self.fmt(out, ty, 1, true);
                out.push_str(". ");
                self.fmt(out, body, 1, rightmost);
            }
            SExpr::Arrow(kind, a, b) => {
                self.fmt(out, a, 2, false);
                out.push_str(match (kind, latex) {
                    (ArrowKind::Type, false) => " -> ",
                    (ArrowKind::Implies, false) => " => ",
                    (ArrowKind::Type, true) => "\\rightarrow ",
                    (ArrowKind::Implies, true) => "\\Rightarrow ",
                });
                self.fmt(out, b, 1, rightmost);
            }
            SExpr::SetBuilder(x, ty, body) => {
                out.push_str(if latex { "\\{" } else { "{" });
                self.name(out, x);
                out.push_str(if latex { ":" } else { " : " });
                self.fmt(out, ty, 5, false);
                out.push_str(if latex { "\\mid " } else { " | " });
                self.fmt(out, body, 1, true);
                out.push_str(if latex { "\\}" } else { "}" });
            }
            SExpr::Class(x, r, _) if latex => {
                out.push('[');
                self.fmt(out, x, 1, true);
                out.push_str("]_{");
                self.fmt(out, r, 1, true);
                out.push('}');
            }
            SExpr::Class(x, r, _) => {
                out.push('[');
                self.fmt(out, x, 1, true);
                out.push_str("]_");
                self.fmt(out, r, 9, rightmost);
            }
            SExpr::Op(op, args, _) => match op {
                Op::Not => {
                    out.push_str(if latex { "\\neg " } else { "~" });
                    self.fmt(out, &args[0], 7, rightmost);
                }
                Op::Converse => {
                    let inner = &args[0];
                    let min = if matches!(inner, SExpr::Op(Op::Converse, ..)) { 9 } else { 10 };
                    self.fmt(out, inner, min, false);
                    out.push_str(if latex { "^{-1}" } else { "^-1" });
                }
                Op::Equal => {
                    self.fmt(out, &args[1], 4, false);
                    out.push_str(if latex { "=_{" } else { " =[" });
                    self.fmt(out, &args[0], 1, true);
                    out.push_str(if latex { "}" } else { "] " });
                    self.fmt(out, &args[2], 4, rightmost);
                }
                _ => {
                    let (l, r) = match level(e) {
                        1 => (2, 1),
                        2 => (2, 3),
                        3 => (4, 4),
                        n => (n, n + 1),
                    };
                    self.fmt(out, &args[0], l, false);
                    if latex {
                        out.push_str(latex_op(*op));
                    } else {
                        let _ = write!(out, " {} ", op_symbol(*op));
                    }
                    self.fmt(out, &args[1], r, rightmost);
                }
            },
        }
    }

    fn name(&self, out: &mut String, name: &str) {
        match self.style {
            Style::Ascii => out.push_str(name),
            Style::Latex => out.push_str(&latex_name(name)),
        }
    }
}

/// Single letters are math variables, with trailing digits as a
/// subscript; longer names are set upright.
pub(crate) fn latex_name(name: &str) -> String {
    let mut chars = name.chars();
    let first = chars.next();
    let rest = chars.as_str();
    if rest.is_empty() {
        name.to_string()
    } else if first.is_some_and(|c| c.is_ascii_alphabetic()) && rest.chars().all(|c| c.is_ascii_digit()) {
        format!("{}_{{{rest}}}", &name[..1])
    } else {
        format!("\\text{{{name}}}")
    }
}

fn latex_star(tag: StarTag) -> &'static str {
    match tag {
        StarTag::Plain => "*",
        StarTag::Prop => "*_p",
        StarTag::Set => "*_s",
    }
}

/// Infix operators with their surrounding spacing. Both equalities print
/// as `=`, as they are interchangeable under extensionality.
fn latex_op(op: Op) -> &'static str {
    match op {
        Op::Compose => "\\circ ",
        Op::Intersect => "\\cap ",
        Op::Union => "\\cup ",
        Op::ExtEqual | Op::Equal => "=",
        Op::SubRel | Op::Subset => "\\subseteq ",
        Op::Elem => "\\varepsilon ",
        Op::And => "\\wedge ",
        Op::Or => "\\vee ",
        Op::Iff => "\\Leftrightarrow ",
        Op::Less => "<",
        Op::Not => "\\neg ",
        Op::Converse => "^{-1}",
    }
}
