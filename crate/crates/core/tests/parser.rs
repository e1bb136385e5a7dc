use lambdad::corpus::{check_corpus, load_embedded, CorpusReport};
use lambdad::kernel::{Environment, Expr};
use lambdad::parser::{
    elaborate, parse_expr, parse_script, print_expr, ArrowKind, BinderKind, FlagItem, ObligationKind, Op,
    ParseError, SExpr, Span, StarTag,
};
use proptest::prelude::*;

fn corpus() -> CorpusReport {
    let (manifest, scripts) = load_embedded().unwrap();
    check_corpus(Environment::new(), &scripts, &manifest)
}

fn body_of(report: &CorpusReport, src: &str) -> Expr {
    let el = elaborate(&parse_script(src).unwrap(), &report.env, &report.notations);
    let ob = el.obligations.last().unwrap();
    assert!(ob.errors.is_empty(), "{:?}", ob.errors);
    match &ob.kind {
        ObligationKind::Define(d) => d.body.clone().unwrap(),
        other => panic!("{other:?}"),
    }
}

#[test]
fn parse_examples() {
    let s = parse_script("flag S : * { def idS() : br(S) := \\x:S.\\y:S. x =[S] y ; }").unwrap();
    assert_eq!(s.items.len(), 3);
    assert!(matches!(&s.items[0], FlagItem::OpenFlag(d, _) if d.len() == 1));
    assert!(matches!(&s.items[1], FlagItem::Def(d) if d.name == "idS"));
    assert!(parse_script("").unwrap().items.is_empty());
    assert!(matches!(parse_script("flag A : * {"), Err(ParseError::UnbalancedFlag { .. })));
}

#[test]
fn notations_desugar_to_constants() {
    let r = corpus();
    let conv = body_of(&r, "flag S : *s, R : br(S) { def t : br(S) := R conv ; }");
    assert_eq!(conv, Expr::constant("conv", vec![Expr::var(1), Expr::var(0)]));
    let elem = body_of(&r, "flag S : *s, x : S, V : ps(S) { def t : *p := x eps V ; }");
    assert_eq!(elem, Expr::constant("element", vec![Expr::var(2), Expr::var(1), Expr::var(0)]));
    let imp = body_of(&r, "flag A, B : *p { def t : *p := A => B ; }");
    assert_eq!(imp, Expr::pi("_", Expr::var(1), Expr::var(1)));
}

#[test]
fn name_resolution() {
    let r = corpus();
    body_of(&r, "flag S : *s, x : S { def t : x =[S] x := eq-refl(S, x) ; }");

    let src = "flag A : *p, u : A { def early : A := later ; def later : A := u ; }";
    let el = elaborate(&parse_script(src).unwrap(), &Environment::new(), &Default::default());
    assert_eq!(el.obligations[0].errors[0].code(), "ForwardReference");
    assert!(el.obligations[1].errors.is_empty());
}

const NAMES: &[&str] = &["x", "y", "S", "R", "Q", "f", "eq-refl", "a1"];

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(NAMES).prop_map(str::to_string)
}

fn sexpr() -> impl Strategy<Value = SExpr> {
    let leaf = prop_oneof![
        name().prop_map(|n| SExpr::Ident(n, Span::default())),
        prop::sample::select(vec![StarTag::Plain, StarTag::Prop, StarTag::Set]).prop_map(SExpr::Star),
    ];
    leaf.prop_recursive(5, 48, 3, |inner| {
        let binary = prop::sample::select(vec![
            Op::Compose,
            Op::Intersect,
            Op::Union,
            Op::ExtEqual,
            Op::SubRel,
            Op::Subset,
            Op::Elem,
            Op::And,
            Op::Or,
            Op::Iff,
            Op::Less,
        ]);
        let binder = prop::sample::select(vec![BinderKind::Lam, BinderKind::Pi, BinderKind::Forall, BinderKind::Exists]);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| SExpr::app(f, a)),
            (name(), prop::collection::vec(inner.clone(), 1..3)).prop_map(|(n, a)| SExpr::Call(n, a, Span::default())),
            (binary, inner.clone(), inner.clone()).prop_map(|(op, a, b)| SExpr::Op(op, vec![a, b], Span::default())),
            (inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(s, a, b)| SExpr::Op(Op::Equal, vec![s, a, b], Span::default())),
            inner.clone().prop_map(|a| SExpr::Op(Op::Converse, vec![a], Span::default())),
            inner.clone().prop_map(|a| SExpr::Op(Op::Not, vec![a], Span::default())),
            (binder, prop::collection::vec(name(), 1..3), inner.clone(), inner.clone())
                .prop_map(|(k, ns, t, b)| SExpr::Binder(k, ns, Box::new(t), Box::new(b))),
            (any::<bool>(), inner.clone(), inner.clone()).prop_map(|(imp, a, b)| {
                let k = if imp { ArrowKind::Implies } else { ArrowKind::Type };
                SExpr::Arrow(k, Box::new(a), Box::new(b))
            }),
            (name(), name(), inner.clone())
                .prop_map(|(x, t, b)| SExpr::SetBuilder(x, Box::new(SExpr::ident(&t)), Box::new(b))),
            (inner.clone(), inner).prop_map(|(x, r)| SExpr::Class(Box::new(x), Box::new(r), Span::default())),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_then_parse_is_identity(e in sexpr()) {
        let printed = print_expr(&e);
        let back = parse_expr(&printed).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
        prop_assert_eq!(back, e, "printed as {}", printed);
    }
}
