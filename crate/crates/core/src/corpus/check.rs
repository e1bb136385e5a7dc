use std::collections::{HashMap, HashSet};

use super::load::LoadedScript;
use super::manifest::CorpusManifest;
use crate::kernel::print::show;
use crate::kernel::{admit_opaque, check_type, extend_checked, Context, Definition, Environment, Expr, KernelError, Name, TypeChecker};
use crate::parser::{ElabError, Elaborator, NotationTable, Obligation, ObligationKind, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Definition,
    Primitive,
    Statement,
    Notation,
}

#[derive(Debug, Clone)]
pub struct StepReport {
    pub script: String,
    pub name: String,
    pub kind: StepKind,
    pub status: Status,
    /// Stated type (definitions) or classifier (statements), rendered.
    pub ty: Option<String>,
    pub errors: Vec<String>,
    pub error_codes: Vec<&'static str>,
    pub span: Span,
    pub depth: usize,
    /// Constants mentioned by the step.
    pub references: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ExportReport {
    pub name: String,
    pub anchor: String,
    pub script: String,
    pub status: Status,
    pub ty: Option<String>,
    /// Messages of the export's own step and of failed helper steps it uses.
    pub errors: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct CorpusReport {
    pub steps: Vec<StepReport>,
    pub exports: Vec<ExportReport>,
    pub env: Environment,
    /// Notation bindings made by the corpus scripts.
    pub notations: NotationTable,
}

impl CorpusReport {
    /// True iff every step and every export passed.
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.status == Status::Pass) && self.exports.iter().all(|e| e.status == Status::Pass)
    }

    pub fn failed_exports(&self) -> Vec<&str> {
        self.exports.iter().filter(|e| e.status == Status::Fail).map(|e| e.name.as_str()).collect()
    }

    pub fn step(&self, name: &str) -> Option<&StepReport> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn export(&self, name: &str) -> Option<&ExportReport> {
        self.exports.iter().find(|e| e.name == name)
    }

    /// Per-export table, one row per export in manifest order.
    pub fn table(&self) -> String {
        let width = self.exports.iter().map(|e| e.name.len()).max().unwrap_or(4).max(6);
        let mut out = String::new();
        for e in &self.exports {
            out.push_str(&format!("{:<4}  {:<width$}  {:<14}  {}\n", e.status.label(), e.name, e.script, e.anchor));
            if e.status == Status::Fail {
                for msg in &e.errors {
                    for line in msg.lines() {
                        out.push_str(&format!("        {line}\n"));
                    }
                }
            }
        }
        let passed = self.exports.iter().filter(|e| e.status == Status::Pass).count();
        out.push_str(&format!("{passed}/{} exports pass\n", self.exports.len()));
        out
    }
}

/// Renders a kernel error with the terms involved, using normal forms where
/// the kernel attached them.
pub fn describe_kernel_error(err: &KernelError) -> String {
    let root = err.root();
    let head = match err {
        KernelError::InDefinition { name, .. } => format!("in `{name}`: "),
        _ => String::new(),
    };
    match root {
        KernelError::TypeMismatch { names, term, expected, found } => format!(
            "{head}type mismatch for {}\n  expected (normal form): {}\n  found    (normal form): {}",
            show(term, names),
            show(expected, names),
            show(found, names)
        ),
        KernelError::ApplicationMismatch { reason, names, function, function_type, argument } => {
            let mut s = format!("{head}{reason}\n  function: {}\n  its type: {}", show(function, names), show(function_type, names));
            if let Some((arg, ty)) = argument {
                s.push_str(&format!("\n  argument: {} : {}", show(arg, names), show(ty, names)));
            }
            s
        }
        KernelError::IllFormedProduct { reason, names, term } => format!("{head}{reason}: {}", show(term, names)),
        KernelError::NotASort { names, term, ty } => {
            format!("{head}{} is not a type: its type is {}", show(term, names), show(ty, names))
        }
        other => format!("{head}{other}"),
    }
}

fn references(env: &Environment, ob: &Obligation) -> Vec<String> {
    let mut out = constants_of(&ob.kind);
    if !ob.errors.is_empty() {
        for m in &ob.mentions {
            if env.contains(m) && *m != ob.name && !out.contains(m) {
                out.push(m.clone());
            }
        }
    }
    out
}

fn constants_of(kind: &ObligationKind) -> Vec<String> {
    let mut out: Vec<Name> = Vec::new();
    let mut add = |e: &Expr| out.extend(e.constants());
    match kind {
        ObligationKind::Define(d) | ObligationKind::Opaque(d) => {
            d.params.iter().for_each(|(_, t)| add(t));
            add(&d.ty);
            if let Some(b) = &d.body {
                add(b);
            }
        }
        ObligationKind::Check { ctx, subject, classifier } => {
            ctx.decls().iter().for_each(|(_, t)| add(t));
            add(subject);
            add(classifier);
        }
        ObligationKind::Broken => {}
    }
    let mut seen = HashSet::new();
    out.into_iter().map(|n| n.to_string()).filter(|n| seen.insert(n.clone())).collect()
}

fn elab_messages(errors: &[ElabError]) -> (Vec<String>, Vec<&'static str>) {
    (errors.iter().map(|e| e.to_string()).collect(), errors.iter().map(|e| e.code()).collect())
}

fn infer_definition_type(env: &Environment, def: &Definition) -> Result<Expr, KernelError> {
    let tc = TypeChecker::new(env);
    let mut ctx = Context::new();
    for (n, t) in &def.params {
        tc.infer_sort(&mut ctx, t)?;
        ctx.push(n.clone(), t.clone());
    }
    let body = def.body.as_ref().ok_or_else(|| KernelError::MissingBody(def.name.to_string()))?;
    tc.infer(&mut ctx, body)
}

/// Runs one obligation through the kernel, extending `env`.
fn run_obligation(env: &mut Environment, script: &str, ob: &Obligation) -> StepReport {
    let kind = match &ob.kind {
        ObligationKind::Check { .. } => StepKind::Statement,
        _ if ob.name.starts_with("notation@") => StepKind::Notation,
        _ if ob.primitive => StepKind::Primitive,
        _ => StepKind::Definition,
    };
    let (mut errors, mut codes) = elab_messages(&ob.errors);
    let mut ty = None;
    match &ob.kind {
        ObligationKind::Define(def) => {
            let mut def = def.clone();
            if ob.infer_type {
                match infer_definition_type(env, &def) {
                    Ok(t) => def.ty = t,
                    Err(e) => {
                        errors.push(describe_kernel_error(&e));
                        codes.push(e.code());
                    }
                }
            }
            let def = &def;
            let names: Vec<Name> = def.params.iter().map(|(n, _)| n.clone()).collect();
            ty = Some(show(&def.ty, &names));
            if errors.is_empty() {
                if let Err(e) = extend_checked(env, def.clone()) {
                    errors.push(describe_kernel_error(&e));
                    codes.push(e.code());
                    // keep later steps checkable against the stated type
                    let _ = admit_opaque(env, def);
                }
            }
        }
        ObligationKind::Opaque(def) => {
            let names: Vec<Name> = def.params.iter().map(|(n, _)| n.clone()).collect();
            ty = Some(show(&def.ty, &names));
            if let Err(e) = admit_opaque(env, def) {
                errors.push(describe_kernel_error(&e));
                codes.push(e.code());
            }
        }
        ObligationKind::Check { ctx, subject, classifier } => {
            ty = Some(show(classifier, &ctx.names()));
            let report = check_type(env, ctx, subject, classifier);
            if let Some(e) = report.error {
                errors.push(describe_kernel_error(&e));
                codes.push(e.code());
            }
        }
        ObligationKind::Broken => {}
    }
    let status = if errors.is_empty() && !matches!(ob.kind, ObligationKind::Opaque(_) | ObligationKind::Broken) {
        Status::Pass
    } else {
        Status::Fail
    };
    StepReport {
        script: script.to_string(),
        name: ob.name.clone(),
        kind,
        status,
        ty,
        errors,
        error_codes: codes,
        span: ob.span,
        depth: ob.depth,
        references: references(env, ob),
    }
}

/// Elaborates and checks scripts in order, without export bookkeeping.
pub fn check_scripts(env0: Environment, scripts: &[LoadedScript]) -> (Vec<StepReport>, Environment) {
    let (steps, env, _) = check_scripts_with(env0, NotationTable::standard(), scripts);
    (steps, env)
}

/// As [`check_scripts`], starting from the notation bindings in `table` and
/// returning the bindings in force afterwards.
pub fn check_scripts_with(env0: Environment, table: NotationTable, scripts: &[LoadedScript]) -> (Vec<StepReport>, Environment, NotationTable) {
    let mut env = env0;
    let mut el = Elaborator::new(&env, table);
    for s in scripts {
        el.announce(s.script.items.iter().filter_map(|i| match i {
            crate::parser::FlagItem::Def(d) => Some(d.name.clone()),
            _ => None,
        }));
    }
    let mut steps = Vec::new();
    for s in scripts {
        for ob in el.script(&s.script) {
            steps.push(run_obligation(&mut env, &s.path, &ob));
        }
    }
    let table = el.table().clone();
    (steps, env, table)
}

/// Checks the scripts and reports every export of the manifest. An export
/// fails when its own step fails, when a non-exported helper it relies on
/// fails, or when no script defines it.
pub fn check_corpus(env0: Environment, scripts: &[LoadedScript], manifest: &CorpusManifest) -> CorpusReport {
    let (steps, env, notations) = check_scripts_with(env0, NotationTable::standard(), scripts);
    let exported: HashSet<&str> = manifest.exports().iter().map(|(n, _, _)| *n).collect();
    let by_name: HashMap<&str, &StepReport> = steps.iter().filter(|s| s.kind != StepKind::Statement).map(|s| (s.name.as_str(), s)).collect();
    let mut exports = Vec::new();
    for (name, anchor, script) in manifest.exports() {
        let Some(step) = by_name.get(name) else {
            exports.push(ExportReport {
                name: name.to_string(),
                anchor: anchor.to_string(),
                script: script.to_string(),
                status: Status::Fail,
                ty: None,
                errors: vec![format!("`{name}` is not defined by any script")],
            });
            continue;
        };
        let mut errors = step.errors.clone();
        let mut ok = step.status == Status::Pass;
        // helpers reached through non-exported steps only
        let mut stack: Vec<&str> = step.references.iter().map(String::as_str).collect();
        let mut seen: HashSet<&str> = HashSet::new();
        while let Some(r) = stack.pop() {
            if exported.contains(r) || !seen.insert(r) {
                continue;
            }
            if let Some(h) = by_name.get(r) {
                if h.status == Status::Fail {
                    ok = false;
                    errors.push(format!("helper `{}` failed", h.name));
                    errors.extend(h.errors.iter().cloned());
                }
                stack.extend(h.references.iter().map(String::as_str));
            }
        }
        exports.push(ExportReport {
            name: name.to_string(),
            anchor: anchor.to_string(),
            script: script.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            ty: step.ty.clone(),
            errors,
        });
    }
    CorpusReport { steps, exports, env, notations }
}
