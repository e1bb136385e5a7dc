//! One line per acceptance criterion, run at the stated tolerances. Runs
//! without the test harness so the lines are always shown.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use lambdad::corpus::{
    check_corpus, embedded_file, embedded_manifest, load_embedded, load_with, reachable_users, standard_mutations,
    CorpusReport, LoadedScript, Status,
};
use lambdad::export::{layout, ExportOptions};
use lambdad::kernel::{check_type, convertible, infer_type, normalize, Context, Environment, Expr, Reducer};
use lambdad::oracle::{registry, strictness_witness, verify_all, verify_theorem, Mode, Statement, Verifier};
use lambdad::parser::{parse_script, print_script, NotationTable};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus() -> (Vec<LoadedScript>, CorpusReport) {
    let (manifest, scripts) = load_embedded().expect("embedded corpus loads");
    let report = check_corpus(Environment::new(), &scripts, &manifest);
    (scripts, report)
}

/// Export names standing for every required definition, lemma and theorem.
const COVERAGE: &[&str] = &[
    "false", "not", "and-in", "and-el1", "and-el2", "or-in1", "or-in2", "or-el", "bi-impl", "forall", "exists-in",
    "exists-el", "exc-thrd", "doub-neg", "ps", "element", "eq", "eq-refl", "eq-subs", "eq-cong", "eq-sym", "eq-trans",
    "br", "subrel", "ex-eq", "ext-axiom", "id", "conv", "cup", "cap", "comp", "prod-term", "rel-equal", "conv-conv",
    "conv-prod", "conv-cap", "conv-cup", "comp-cup-left", "comp-cup-right", "comp-cap-left", "comp-cap-right",
    "comp-assoc", "refl", "sym", "antisym", "trans", "equiv-rel", "part-ord", "refl-criterion", "sym-criterion1",
    "sym-criterion", "antisym-criterion", "trans-criterion", "refl-sym-antisym-id", "conv-refl", "conv-sym",
    "conv-antisym", "conv-trans", "cap-refl", "cap-sym", "cap-antisym", "cap-trans", "cup-refl", "cup-sym",
    "comp-conv-sym", "comp-refl", "comp-sym", "class", "partition", "equiv-partition", "partition-equiv",
    "conv-equiv", "cap-equiv", "conv-part-ord", "cap-part-ord", "subset-part-ord", "least", "lt", "well-ord",
    "trans-ind",
];

fn corpus_soundness() -> Outcome {
    let start = Instant::now();
    let (_, report) = corpus();
    let elapsed = start.elapsed();
    ensure(report.passed(), || format!("failing exports: {:?}", report.failed_exports()))?;
    for name in COVERAGE {
        let e = report.export(name).ok_or_else(|| format!("`{name}` is not exported"))?;
        ensure(e.status == Status::Pass, || format!("`{name}` fails"))?;
    }
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{} exports pass in {:.2?}", report.exports.len(), elapsed))
}

fn kernel_axiom() -> Outcome {
    let ty = infer_type(&Environment::new(), &Context::new(), &Expr::star()).map_err(|e| e.to_string())?;
    ensure(ty == Expr::boxed(), || format!("type of * is {ty:?}"))?;
    Ok("* : []".to_string())
}

/// Theorems and lemmas whose proofs are mutated.
const MUTATION_TARGETS: &[&str] = &[
    "eq-sym", "eq-trans", "eq-cong", "conv-conv", "conv-prod", "conv-cap", "conv-cup", "comp-cup-left",
    "comp-cap-left", "comp-assoc", "sym-criterion", "antisym-criterion", "trans-criterion", "refl-sym-antisym-id",
    "conv-trans", "cap-sym", "cup-refl", "cup-sym", "comp-refl", "conv-equiv", "cap-part-ord", "partition-equiv",
    "trans-ind",
];

fn mutation_suite() -> Outcome {
    let (manifest, scripts) = load_embedded().map_err(|e| e.to_string())?;
    let mutations = standard_mutations(&scripts, MUTATION_TARGETS);
    ensure(mutations.len() >= 20, || format!("only {} mutations", mutations.len()))?;
    let mut false_passes = Vec::new();
    for m in &mutations {
        let mut mutated = scripts.clone();
        mutated[m.script_index].script = m.mutated.clone();
        let report = check_corpus(Environment::new(), &mutated, &manifest);
        let failed = report.failed_exports();
        if failed != [m.target.as_str()] {
            false_passes.push(format!("{} ({}): failed {:?}", m.target, m.description, failed));
        }
    }
    ensure(false_passes.is_empty(), || false_passes.join("; "))?;
    Ok(format!("{} mutations over {} exports each fail only their export", mutations.len(), MUTATION_TARGETS.len()))
}

fn classical_isolation() -> Outcome {
    let (scripts, report) = corpus();
    let classical: BTreeSet<&str> =
        report.steps.iter().filter(|s| s.script == "classical.ld").map(|s| s.name.as_str()).collect();
    for axiom in ["exc-thrd", "doub-neg"] {
        let users = reachable_users(&report.steps, axiom);
        let stray: Vec<&str> = users
            .iter()
            .copied()
            .filter(|u| !classical.contains(u) && *u != "trans-ind" && !u.starts_with("ti-"))
            .collect();
        ensure(stray.is_empty(), || format!("{axiom} reaches {stray:?}"))?;
        ensure(users.contains("trans-ind"), || format!("{axiom} is not used by trans-ind"))?;
    }
    let direct: Vec<&str> = report
        .steps
        .iter()
        .filter(|s| s.references.iter().any(|r| r == "doub-neg") && !classical.contains(s.name.as_str()))
        .map(|s| s.name.as_str())
        .collect();
    ensure(direct.len() == 2, || format!("doub-neg used directly by {direct:?}"))?;

    let manifest = embedded_manifest().without("classical.ld");
    let reduced = load_with(&manifest, |p| embedded_file(p).map(str::to_string)).map_err(|e| e.to_string())?;
    ensure(reduced.len() + 1 == scripts.len(), || "classical.ld still loaded".to_string())?;
    let report = check_corpus(Environment::new(), &reduced, &manifest);
    let failed = report.failed_exports();
    ensure(failed == ["trans-ind"], || format!("without classical.ld: failed {failed:?}"))?;
    let unbound = report.export("trans-ind").map_or(0, |e| e.errors.iter().filter(|m| m.contains("doub-neg")).count());
    ensure(unbound == 2, || format!("{unbound} doub-neg errors"))?;
    Ok(format!("doub-neg used directly by {} only; removal fails trans-ind alone", direct.join(" and ")))
}

fn oracle_registry() -> Outcome {
    let start = Instant::now();
    let reports = verify_all(&Verifier { max_n: 3, ..Verifier::default() });
    let induction = verify_theorem("6.5", &Verifier { max_n: 5, ..Verifier::default() }).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(reports.len() == registry().len(), || "missing reports".to_string())?;
    for (t, r) in registry().iter().zip(&reports) {
        ensure(r.passed(), || r.line())?;
        if let Statement::Holds(_) | Statement::Iff(..) = t.statement {
            let size = |n: u8| r.sizes.iter().find(|s| s.n == n).cloned().ok_or_else(|| format!("{} lacks n={n}", t.id));
            match t.arity {
                1 => {
                    let s = size(3)?;
                    ensure(s.mode == Mode::Exhaustive && s.instances == 512, || r.line())?;
                }
                2 => {
                    let (s2, s3) = (size(2)?, size(3)?);
                    ensure(s2.mode == Mode::Exhaustive && s2.instances == 256, || r.line())?;
                    ensure(s3.instances >= 100_000, || r.line())?;
                }
                _ => {
                    let s = size(2)?;
                    ensure(s.mode == Mode::Exhaustive && s.instances == 4096, || r.line())?;
                }
            }
        }
    }
    ensure(induction.passed() && induction.sizes.len() == 5, || induction.line())?;
    ensure(induction.sizes.iter().all(|s| s.mode == Mode::Exhaustive), || induction.line())?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    let total: u64 = reports.iter().map(|r| r.instances).sum::<u64>() + induction.instances;
    Ok(format!("{} theorems, {total} instances, no counterexample, {:.2?}", reports.len(), elapsed))
}

fn strictness() -> Outcome {
    let (r, p, q) = strictness_witness(3).ok_or("no witness up to n = 3")?;
    let lhs = r.compose(&p.intersection(&q));
    let rhs = r.compose(&p).intersection(&r.compose(&q));
    ensure(lhs.is_subset(&rhs) && lhs != rhs, || "witness is not strict".to_string())?;
    Ok(format!("R = {r}, P = {p}, Q = {q}: {lhs} < {rhs}"))
}

fn metatheory() -> Outcome {
    let (_, report) = corpus();
    ensure(report.passed(), || "corpus does not check".to_string())?;
    let env = &report.env;
    let (mut subjects, mut reducts, mut normals) = (0, 0, 0);
    for def in env.iter() {
        let ctx = Context::from_decls(def.params.clone());
        let mut terms = vec![def.ty.clone()];
        if let Some(body) = &def.body {
            let inferred = infer_type(env, &ctx, body).map_err(|e| format!("{}: {e}", def.name))?;
            let same = convertible(env, &inferred, &def.ty).map_err(|e| format!("{}: {e}", def.name))?;
            ensure(same, || format!("{}: inferred type differs from the stated one", def.name))?;
            subjects += 1;
            for r in Reducer::new(env).one_step_reducts(body).map_err(|e| e.to_string())? {
                let rep = check_type(env, &ctx, &r, &def.ty);
                ensure(rep.is_ok(), || format!("{}: a one-step reduct loses its type", def.name))?;
                reducts += 1;
            }
            terms.push(body.clone());
        }
        for t in terms {
            let n = normalize(env, &t).map_err(|e| format!("{}: {e}", def.name))?;
            let again = normalize(env, &n).map_err(|e| format!("{}: {e}", def.name))?;
            ensure(again == n, || format!("{}: normal form is not normal", def.name))?;
            normals += 1;
        }
    }
    Ok(format!("{subjects} bodies unique up to conversion, {reducts} reducts keep their type, {normals} normal forms stable"))
}

fn round_trips() -> Outcome {
    let (scripts, report) = corpus();
    let table: &NotationTable = &report.notations;
    for s in &scripts {
        let printed = print_script(&s.script);
        let reparsed = parse_script(&printed).map_err(|e| format!("{}: {e}", s.path))?;
        ensure(reparsed == s.script, || format!("{}: print/parse differs", s.path))?;
        let l = layout(&s.script, table, &ExportOptions::default()).map_err(|e| format!("{}: {e}", s.path))?;
        ensure(l.is_balanced() && l.final_depth() == 0, || format!("{}: unbalanced export", s.path))?;
    }
    let rel = scripts.iter().find(|s| s.path == "rel_thms.ld").ok_or("rel_thms.ld missing")?;
    let depth = layout(&rel.script, table, &ExportOptions::default())
        .map_err(|e| e.to_string())?
        .block_depth("conv-prod");
    ensure(depth == Some(4), || format!("conv-prod nests {depth:?} flags"))?;
    Ok(format!("{} scripts round-trip and balance; conv-prod nests 4 flags", scripts.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("corpus soundness", corpus_soundness),
        ("kernel axiom", kernel_axiom),
        ("mutation suite", mutation_suite),
        ("classical isolation", classical_isolation),
        ("oracle registry", oracle_registry),
        ("strictness witness", strictness),
        ("kernel metatheory", metatheory),
        ("round-trips", round_trips),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
