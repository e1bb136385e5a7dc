use std::collections::HashSet;
use std::fmt::Write;

use super::{ExportError, DEFAULT_MAX_DEPTH, DEFAULT_WRAP};
use crate::parser::{
    render_expr, ArrowKind, BinderKind, Decl, DefKind, FlagItem, NotationKind, NotationTable, Op, Params, SExpr, StarTag,
    Style, SurfaceScript,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExportOptions {
    /// Deepest flag nesting rendered before giving up.
    pub max_depth: usize,
    /// Source column after which a step's type moves to its own line.
    pub wrap: usize,
    /// Wrap the fragment in a minimal document.
    pub standalone: bool,
}

impl Default for ExportOptions {
    fn default() -> Self {
        ExportOptions { max_depth: DEFAULT_MAX_DEPTH, wrap: DEFAULT_WRAP, standalone: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Open,
    Step,
    /// Closes this many flags at once.
    Close(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    /// Depth the row is drawn at: before the flag for `Open`, after the
    /// flags are gone for `Close`.
    pub depth: usize,
    pub kind: RowKind,
    /// LaTeX source, possibly several lines.
    pub text: String,
    /// Defined constant, for steps that define one.
    pub defines: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlagLayout {
    pub rows: Vec<Row>,
}

impl FlagLayout {
    pub fn max_depth(&self) -> usize {
        self.rows.iter().map(|r| if r.kind == RowKind::Open { r.depth + 1 } else { r.depth }).max().unwrap_or(0)
    }

    /// Depth after the last row.
    pub fn final_depth(&self) -> usize {
        self.rows.last().map_or(0, |r| if r.kind == RowKind::Open { r.depth + 1 } else { r.depth })
    }

    /// Opens add exactly one level, closes remove their count, steps keep
    /// the depth, and the layout ends where it started.
    pub fn is_balanced(&self) -> bool {
        let mut depth = 0usize;
        for r in &self.rows {
            match r.kind {
                RowKind::Open if r.depth == depth => depth += 1,
                RowKind::Step if r.depth == depth => {}
                RowKind::Close(k) if k >= 1 && k <= depth && r.depth == depth - k => depth -= k,
                _ => return false,
            }
        }
        depth == 0
    }

    /// Nesting depth of the top-level block that defines `name`.
    pub fn block_depth(&self, name: &str) -> Option<usize> {
        let at = self.rows.iter().position(|r| r.defines.as_deref() == Some(name))?;
        let start = self.rows[..at].iter().rposition(|r| r.depth == 0 && r.kind == RowKind::Open).unwrap_or(at);
        let end = self.rows[at..]
            .iter()
            .position(|r| r.depth == 0 && matches!(r.kind, RowKind::Close(_)))
            .map_or(self.rows.len(), |i| at + i + 1);
        Some(FlagLayout { rows: self.rows[start..end].to_vec() }.max_depth())
    }

    pub fn to_latex(&self, standalone: bool) -> String {
        let mut out = String::from("\\begin{flagderiv}\n");
        for r in &self.rows {
            out.push_str(&r.text);
        }
        out.push_str("\\end{flagderiv}\n");
        if standalone {
            out = standalone_document(&out);
        }
        out
    }
}

/// Wraps a fragment in a minimal document.
pub fn standalone_document(body: &str) -> String {
    format!("{PREAMBLE}{body}\\end{{document}}\n")
}

const PREAMBLE: &str = "\\documentclass{article}\n\\usepackage{amsmath,amssymb}\n\\usepackage{flagderiv}\n\
\\providecommand{\\Bot}{\\perp\\!\\!\\!\\perp}\n\\begin{document}\n";

/// Lays a script out as flag rows. Rendering does not require the script
/// to check.
pub fn layout(script: &SurfaceScript, notations: &NotationTable, opts: &ExportOptions) -> Result<FlagLayout, ExportError> {
    let mut rows: Vec<Row> = Vec::new();
    let mut open: Vec<Vec<Decl>> = Vec::new();
    let mut props = Props::default();
    let indent = |d: usize| "  ".repeat(d);
    for item in &script.items {
        let depth = open.len();
        match item {
            FlagItem::OpenFlag(decls, span) => {
                if depth + 1 > opts.max_depth {
                    return Err(ExportError::RenderDepthExceeded { depth: depth + 1, max: opts.max_depth, span: *span });
                }
                let macro_name = if decls.iter().any(|d| props.is_prop(&d.ty)) { "assume" } else { "introduce" };
                for d in decls {
                    for n in &d.names {
                        props.declare(n, &d.ty);
                    }
                }
                let parts: Vec<String> = decls.iter().map(decl).collect();
                let line = format!("{}\\{macro_name}*{{}}{{{}}}{{}}", indent(depth), parts.join("\\;|\\;"));
                let text = wrap_source(&line, &indent(depth), opts.wrap);
                rows.push(Row { depth, kind: RowKind::Open, text, defines: None });
                open.push(decls.clone());
            }
            FlagItem::CloseFlag(span) => {
                if open.pop().is_none() {
                    return Err(ExportError::Unbalanced { span: *span });
                }
                let line = format!("{}\\done\n", indent(depth - 1));
                match rows.last_mut() {
                    Some(Row { kind: RowKind::Close(k), depth: d, text, .. }) => {
                        *k += 1;
                        *d -= 1;
                        text.push_str(&line);
                    }
                    _ => rows.push(Row { depth: depth - 1, kind: RowKind::Close(1), text: line, defines: None }),
                }
            }
            FlagItem::Def(d) => {
                let params: Vec<String> = match &d.params {
                    Params::FromFlags => open.iter().flatten().flat_map(|x| x.names.clone()).collect(),
                    Params::Named(ps) => ps.clone(),
                };
                let mut head = format!("\\textbf{{{}}}", escape(&d.name));
                if !params.is_empty() {
                    let ps: Vec<String> = params.iter().map(|p| render_expr(&SExpr::ident(p), Style::Latex)).collect();
                    let _ = write!(head, "({})", ps.join(","));
                }
                match (&d.kind, &d.body) {
                    (DefKind::Primitive, _) => head.push_str(":=\\Bot"),
                    (DefKind::Descriptive, Some(b)) => {
                        let _ = write!(head, ":={}", render_expr(b, Style::Latex));
                    }
                    (DefKind::Descriptive, None) => {}
                }
                if d.ty.as_ref().is_some_and(|t| matches!(t, SExpr::Star(StarTag::Prop))) {
                    props.prop_names.insert(d.name.clone());
                }
                let ty = d.ty.as_ref().map(|t| render_expr(t, Style::Latex));
                let text = step(&indent(depth), &head, ty.as_deref(), &d.note, opts.wrap);
                rows.push(Row { depth, kind: RowKind::Step, text, defines: Some(d.name.clone()) });
            }
            FlagItem::Notation(n) => {
                let symbol = notations.get(&n.symbol).map_or_else(|| escape(&n.symbol), |e| latex_symbol(e.kind));
                let head = format!("\\text{{Notation}}: \\boldsymbol{{{symbol}}} \\text{{ for }} \\text{{{}}}", escape(&n.target));
                let text = step(&indent(depth), &head, None, &n.note, opts.wrap);
                rows.push(Row { depth, kind: RowKind::Step, text, defines: None });
            }
            FlagItem::Check(c) => {
                let head = render_expr(&c.subject, Style::Latex);
                let ty = render_expr(&c.classifier, Style::Latex);
                let text = step(&indent(depth), &head, Some(&ty), &c.note, opts.wrap);
                rows.push(Row { depth, kind: RowKind::Step, text, defines: None });
            }
        }
    }
    Ok(FlagLayout { rows })
}

pub fn export_latex(script: &SurfaceScript, notations: &NotationTable, opts: &ExportOptions) -> Result<String, ExportError> {
    Ok(layout(script, notations, opts)?.to_latex(opts.standalone))
}

/// One `\step*`, moving the type ascription to a second step when the
/// line would pass the wrap column.
fn step(indent: &str, head: &str, ty: Option<&str>, note: &Option<String>, wrap: usize) -> String {
    let note = note.as_deref().map_or_else(String::new, |n| format!("\\text{{{}}}", escape(n)));
    let one = match ty {
        Some(t) => format!("{indent}\\step*{{}}{{{head}\\;:\\;{t}}}{{{note}}}\n"),
        None => format!("{indent}\\step*{{}}{{{head}}}{{{note}}}\n"),
    };
    let text = match ty {
        Some(t) if one.trim_end().chars().count() > wrap => {
            format!("{indent}\\step*{{}}{{{head}}}{{}}\n{indent}\\step*{{}}{{\\qquad:\\;{t}}}{{{note}}}\n")
        }
        _ => one,
    };
    text.lines().map(|l| wrap_source(l, indent, wrap)).collect()
}

/// Breaks a source line before control sequences outside `\text{..}`,
/// where a newline is just more math-mode whitespace.
fn wrap_source(line: &str, indent: &str, wrap: usize) -> String {
    let chars: Vec<char> = line.chars().collect();
    let mut breaks = Vec::new();
    let (mut text_depth, mut depth) = (None, 0usize);
    for i in 0..chars.len() {
        match chars[i] {
            '{' => depth += 1,
            '}' => {
                depth = depth.saturating_sub(1);
                if text_depth == Some(depth) {
                    text_depth = None;
                }
            }
            '\\' if text_depth.is_none() && i > 0 && chars[i - 1] != '\\' => {
                if chars[i + 1..].starts_with(&['t', 'e', 'x', 't', '{']) || chars[i + 1..].starts_with(&['t', 'e', 'x', 't', 'b', 'f', '{']) {
                    text_depth = Some(depth);
                }
                breaks.push(i);
            }
            _ => {}
        }
    }
    let mut out = String::new();
    let (mut start, mut col) = (0usize, 0usize);
    let cont = format!("{indent}    ");
    let mut last = None;
    for &b in breaks.iter().chain(std::iter::once(&chars.len())) {
        if col + (b - start) > wrap {
            if let Some(l) = last.filter(|&l| l > start) {
                out.extend(&chars[start..l]);
                out.push('\n');
                out.push_str(&cont);
                col = cont.len();
                start = l;
            }
        }
        last = Some(b);
    }
    out.extend(&chars[start..]);
    out.push('\n');
    out
}

fn decl(d: &Decl) -> String {
    let names: Vec<String> = d.names.iter().map(|n| render_expr(&SExpr::ident(n), Style::Latex)).collect();
    format!("{}:{}", names.join(","), render_expr(&d.ty, Style::Latex))
}

/// Whether a declared type is a proposition, judged from the syntax and
/// the types of the open variables and the script's own definitions.
/// Assumptions get an `\assume` flag, everything else `\introduce`.
#[derive(Default)]
struct Props {
    /// Variables and definitions whose values are propositions.
    prop_names: HashSet<String>,
    /// Variables whose applications are propositions, like predicates.
    pred_names: HashSet<String>,
}

impl Props {
    fn is_prop(&self, ty: &SExpr) -> bool {
        match ty {
            SExpr::Star(_) | SExpr::SetBuilder(..) | SExpr::Class(..) => false,
            SExpr::Ident(n, _) | SExpr::Call(n, _, _) => self.prop_names.contains(n),
            SExpr::App(f, _) => {
                let mut head = &**f;
                while let SExpr::App(g, _) = head {
                    head = g;
                }
                match head {
                    SExpr::Ident(n, _) => !self.prop_names.contains(n) || self.pred_names.contains(n),
                    _ => true,
                }
            }
            SExpr::Op(op, ..) => !matches!(op, Op::Converse | Op::Compose | Op::Union | Op::Intersect),
            SExpr::Arrow(ArrowKind::Implies, ..) => true,
            SExpr::Arrow(ArrowKind::Type, _, b) => self.is_prop(b),
            SExpr::Binder(BinderKind::Forall | BinderKind::Exists, ..) => true,
            SExpr::Binder(BinderKind::Pi, _, _, b) => self.is_prop(b),
            SExpr::Binder(BinderKind::Lam, ..) => false,
        }
    }

    fn declare(&mut self, name: &str, ty: &SExpr) {
        if matches!(ty, SExpr::Star(StarTag::Prop)) {
            self.prop_names.insert(name.to_string());
        } else if ends_in_prop(ty) {
            self.pred_names.insert(name.to_string());
        }
    }
}

fn ends_in_prop(ty: &SExpr) -> bool {
    match ty {
        SExpr::Star(StarTag::Prop) => true,
        SExpr::Arrow(ArrowKind::Type, _, b) | SExpr::Binder(BinderKind::Pi, _, _, b) => ends_in_prop(b),
        SExpr::Call(n, ..) => n == "br",
        _ => false,
    }
}

fn latex_symbol(kind: NotationKind) -> String {
    match kind {
        NotationKind::Op(op) => match op {
            Op::Not => "\\neg",
            Op::Converse => "^{-1}",
            Op::Compose => "\\circ",
            Op::Intersect => "\\cap",
            Op::Union => "\\cup",
            Op::Equal | Op::ExtEqual => "=",
            Op::SubRel | Op::Subset => "\\subseteq",
            Op::Elem => "\\varepsilon",
            Op::And => "\\wedge",
            Op::Or => "\\vee",
            Op::Iff => "\\Leftrightarrow",
            Op::Less => "<",
        }
        .to_string(),
        NotationKind::Forall => "\\forall".to_string(),
        NotationKind::Exists => "\\exists".to_string(),
        NotationKind::Class => "[x]_{R}".to_string(),
        NotationKind::Builtin => String::new(),
    }
}

/// Escapes text-mode specials.
fn escape(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            _ => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_script;

    fn render(src: &str) -> (FlagLayout, String) {
        let s = parse_script(src).unwrap();
        let t = NotationTable::standard();
        let l = layout(&s, &t, &ExportOptions::default()).unwrap();
        let tex = l.to_latex(false);
        (l, tex)
    }

    #[test]
    fn empty_script_is_an_empty_environment() {
        let (l, tex) = render("");
        assert!(l.rows.is_empty());
        assert_eq!(tex, "\\begin{flagderiv}\n\\end{flagderiv}\n");
    }

    #[test]
    fn identity_relation_has_one_flag_and_one_step() {
        let (l, tex) = render("flag S : *s {\n  def id : br(S) := \\x, y : S. x =[S] y ;  # Identity relation\n}\n");
        let kinds: Vec<RowKind> = l.rows.iter().map(|r| r.kind).collect();
        assert_eq!(kinds, [RowKind::Open, RowKind::Step, RowKind::Close(1)]);
        assert!(tex.contains("\\introduce*{}{S:*_s}{}"));
        assert!(tex.contains("\\text{Identity relation}"));
        assert!(tex.contains("\\textbf{id}(S):=\\lambda x,y:S.x=_{S}y\\;:\\;\\text{br}(S)"));
    }

    #[test]
    fn consecutive_closes_share_a_row() {
        let (l, tex) = render("flag A : *p { flag u : A { def a : A := u ; } }");
        assert_eq!(l.rows.last().unwrap().kind, RowKind::Close(2));
        assert!(l.is_balanced());
        assert_eq!(l.max_depth(), 2);
        assert_eq!(tex.matches("\\done").count(), 2);
        assert!(tex.contains("\\assume*{}{u:A}{}"));
    }

    #[test]
    fn depth_limit_is_enforced() {
        let s = parse_script("flag A : *p { flag B : *p { flag C : *p { } } }").unwrap();
        let opts = ExportOptions { max_depth: 2, ..ExportOptions::default() };
        let e = layout(&s, &NotationTable::standard(), &opts).unwrap_err();
        assert!(matches!(e, ExportError::RenderDepthExceeded { depth: 3, max: 2, .. }));
    }

    #[test]
    fn long_steps_wrap_their_type() {
        let (_, tex) = render("flag A, B : *p { def long-name-for-a-step : A => B => A => B => A => B => A => B => A => B => A := \\u : A. \\v : B. \\w : A. \\x : B. u ; }");
        assert!(tex.lines().all(|l| l.len() <= 100), "{tex}");
        assert!(tex.contains("\\qquad:"));
    }
}
