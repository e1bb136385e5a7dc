use lambdad::corpus::{check_corpus, load_embedded};
use lambdad::export::{export_latex, layout, ExportError, ExportOptions, RowKind};
use lambdad::kernel::Environment;
use lambdad::parser::{parse_script, NotationTable};

#[test]
fn corpus_exports_are_balanced_and_deterministic() {
    let (m, scripts) = load_embedded().unwrap();
    let report = check_corpus(Environment::new(), &scripts, &m);
    let opts = ExportOptions::default();
    for s in &scripts {
        let l = layout(&s.script, &report.notations, &opts).unwrap();
        assert!(l.is_balanced(), "{}", s.path);
        assert_eq!(l.final_depth(), 0);
        let a = export_latex(&s.script, &report.notations, &opts).unwrap();
        let b = export_latex(&s.script, &report.notations, &opts).unwrap();
        assert_eq!(a, b);
        assert!(a.lines().all(|line| line.chars().count() <= opts.wrap), "{}", s.path);
    }
}

#[test]
fn converse_of_composition_nests_four_flags() {
    let (m, scripts) = load_embedded().unwrap();
    let report = check_corpus(Environment::new(), &scripts, &m);
    let rel = scripts.iter().find(|s| s.path == "rel_thms.ld").unwrap();
    let l = layout(&rel.script, &report.notations, &ExportOptions::default()).unwrap();
    assert_eq!(l.block_depth("conv-prod"), Some(4));
    assert_eq!(l.block_depth("conv-conv"), Some(3));
}

#[test]
fn symbols_are_resugared() {
    let mut table = NotationTable::standard();
    for (sym, target) in [("o", "comp"), ("^-1", "conv"), ("<=", "subrel"), ("==", "ex-eq")] {
        table.bind(sym, target);
    }
    let s = parse_script(
        "flag S : *s, R, Q : br(S) {\n  check t : (R o Q)^-1 <= Q^-1 o R^-1 ;\n}\nnotation \"o\" := comp ;\n",
    )
    .unwrap();
    let tex = export_latex(&s, &table, &ExportOptions::default()).unwrap();
    assert!(tex.contains("(R\\circ Q)^{-1}\\subseteq Q^{-1}\\circ R^{-1}"), "{tex}");
    assert!(tex.contains("\\boldsymbol{\\circ}"), "{tex}");
}

#[test]
fn standalone_documents_and_depth_limits() {
    let s = parse_script("flag A : *p { flag u : A { def a : A := u ; } }").unwrap();
    let table = NotationTable::standard();
    let doc = export_latex(&s, &table, &ExportOptions { standalone: true, ..ExportOptions::default() }).unwrap();
    assert!(doc.starts_with("\\documentclass{article}"));
    assert!(doc.trim_end().ends_with("\\end{document}"));
    let l = layout(&s, &table, &ExportOptions::default()).unwrap();
    let kinds: Vec<RowKind> = l.rows.iter().map(|r| r.kind).collect();
    assert_eq!(kinds, [RowKind::Open, RowKind::Open, RowKind::Step, RowKind::Close(2)]);
    let err = layout(&s, &table, &ExportOptions { max_depth: 1, ..ExportOptions::default() }).unwrap_err();
    assert!(matches!(err, ExportError::RenderDepthExceeded { depth: 2, max: 1, .. }));
}
