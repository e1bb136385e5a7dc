use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::relation::{blocks, check_property, from_blocks, is_partition, FiniteRelation, Property, MAX_CARRIER};
use super::OracleError;

/// Largest number of tuples enumerated exhaustively at one carrier size.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;
pub const DEFAULT_SAMPLE_BUDGET: u64 = 100_000;
/// Identifier of a deliberately false statement, used to test that the
/// search finds counterexamples.
pub const COMMUTE_PROBE: &str = "commute";

type Pred = fn(&[FiniteRelation]) -> bool;

/// How a theorem is interpreted over finite carriers.
#[derive(Clone, Copy)]
pub enum Statement {
    /// Holds for every tuple of relations.
    Holds(Pred),
    /// Both sides agree on every tuple; each direction is counted.
    Iff(Pred, Pred),
    /// Inclusion is a partial order on the subsets of the carrier.
    SubsetOrder,
    /// Induction along every well-ordering, for every predicate.
    Induction,
}

#[derive(Clone, Copy)]
pub struct Theorem {
    pub id: &'static str,
    pub title: &'static str,
    /// Number of relations the statement quantifies over.
    pub arity: usize,
    pub statement: Statement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub n: u8,
    pub mode: Mode,
    pub instances: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub n: u8,
    pub relations: Vec<FiniteRelation>,
    /// Subsets of the carrier involved, as bitsets: the predicate for
    /// induction, the subsets for the inclusion order.
    pub sets: Vec<u64>,
    /// Failing direction of a biconditional.
    pub direction: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub id: String,
    pub title: String,
    pub sizes: Vec<SizeReport>,
    pub instances: u64,
    /// For biconditionals: instances where the left side held, and where
    /// the right side held. Every one was checked against the other side.
    pub forward: Option<u64>,
    pub backward: Option<u64>,
    pub counterexample: Option<Counterexample>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let sizes: Vec<String> = self
            .sizes
            .iter()
            .map(|s| match s.mode {
                Mode::Exhaustive => format!("n={}:{}", s.n, s.instances),
                Mode::Sampled => format!("n={}:{}~", s.n, s.instances),
            })
            .collect();
        let mut line = format!("{status}  {:<8} {:>9}  {}", self.id, self.instances, sizes.join(" "));
        if let (Some(f), Some(b)) = (self.forward, self.backward) {
            line.push_str(&format!("  forward {f} backward {b}"));
        }
        if let Some(c) = &self.counterexample {
            let rels: Vec<String> = c.relations.iter().map(|r| r.to_string()).collect();
            line.push_str(&format!("  counterexample n={} {}", c.n, rels.join(" ; ")));
            if !c.sets.is_empty() {
                let sets: Vec<String> = c.sets.iter().map(|s| format!("{s:#x}")).collect();
                line.push_str(&format!(" sets {}", sets.join(",")));
            }
            if let Some(d) = c.direction {
                line.push_str(&format!(" ({d})"));
            }
        }
        line
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "title": self.title,
            "sizes": self.sizes.iter().map(|s| json!({"n": s.n, "mode": s.mode.label(), "instances": s.instances})).collect::<Vec<_>>(),
            "instances": self.instances,
            "passed": self.passed(),
            "forward": self.forward,
            "backward": self.backward,
            "counterexample": self.counterexample.as_ref().map(|c| json!({
                "n": c.n,
                "relations": c.relations.iter().map(|r| r.hex()).collect::<Vec<_>>(),
                "sets": c.sets.iter().map(|s| format!("{s:#x}")).collect::<Vec<_>>(),
                "direction": c.direction,
            })),
        })
    }
}

/// Enumeration settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verifier {
    pub max_n: u8,
    pub seed: u64,
    pub sample_budget: u64,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier { max_n: 3, seed: 0, sample_budget: DEFAULT_SAMPLE_BUDGET }
    }
}

fn c(r: &FiniteRelation) -> FiniteRelation {
    r.converse()
}

fn id(r: &FiniteRelation) -> FiniteRelation {
    FiniteRelation::identity(r.n())
}

fn has(p: Property, r: &FiniteRelation) -> bool {
    check_property(p, r)
}

fn partition_side(r: &[FiniteRelation]) -> bool {
    let family = blocks(&r[0]);
    is_partition(&family) && from_blocks(r[0].n(), &family) == r[0]
}

const fn th(id: &'static str, title: &'static str, arity: usize, statement: Statement) -> Theorem {
    Theorem { id, title, arity, statement }
}

use Property::*;
use Statement::*;

static REGISTRY: &[Theorem] = &[
    th("4.3.1", "(R^-1)^-1 = R", 1, Holds(|r| c(&c(&r[0])) == r[0])),
    th("4.3.2", "(R o Q)^-1 = Q^-1 o R^-1", 2, Holds(|r| c(&r[0].compose(&r[1])) == c(&r[1]).compose(&c(&r[0])))),
    th("4.3.3", "(R & Q)^-1 = R^-1 & Q^-1", 2, Holds(|r| c(&r[0].intersection(&r[1])) == c(&r[0]).intersection(&c(&r[1])))),
    th("4.3.4", "(R | Q)^-1 = R^-1 | Q^-1", 2, Holds(|r| c(&r[0].union(&r[1])) == c(&r[0]).union(&c(&r[1])))),
    th("4.3.5", "R o (P | Q) = R o P | R o Q", 3, Holds(|r| r[0].compose(&r[1].union(&r[2])) == r[0].compose(&r[1]).union(&r[0].compose(&r[2])))),
    th("4.3.6", "(P | Q) o R = P o R | Q o R", 3, Holds(|r| r[1].union(&r[2]).compose(&r[0]) == r[1].compose(&r[0]).union(&r[2].compose(&r[0])))),
    th("4.3.7", "R o (P & Q) <= R o P & R o Q", 3, Holds(|r| r[0].compose(&r[1].intersection(&r[2])).is_subset(&r[0].compose(&r[1]).intersection(&r[0].compose(&r[2]))))),
    th("4.3.8", "(P & Q) o R <= P o R & Q o R", 3, Holds(|r| r[1].intersection(&r[2]).compose(&r[0]).is_subset(&r[1].compose(&r[0]).intersection(&r[2].compose(&r[0]))))),
    th("4.3.9", "(R o P) o Q = R o (P o Q)", 3, Holds(|r| r[0].compose(&r[1]).compose(&r[2]) == r[0].compose(&r[1].compose(&r[2])))),
    th("5.1.1", "refl R <=> id <= R", 1, Iff(|r| has(Refl, &r[0]), |r| id(&r[0]).is_subset(&r[0]))),
    th("5.1.2", "sym R <=> R^-1 <= R", 1, Iff(|r| has(Sym, &r[0]), |r| c(&r[0]).is_subset(&r[0]))),
    th("5.1.3", "sym R <=> R^-1 = R", 1, Iff(|r| has(Sym, &r[0]), |r| c(&r[0]) == r[0])),
    th("5.1.4", "antisym R <=> R^-1 & R <= id", 1, Iff(|r| has(Antisym, &r[0]), |r| c(&r[0]).intersection(&r[0]).is_subset(&id(&r[0])))),
    th("5.1.5", "trans R <=> R o R <= R", 1, Iff(|r| has(Trans, &r[0]), |r| r[0].compose(&r[0]).is_subset(&r[0]))),
    th("5.2", "refl, sym and antisym R => R = id", 1, Holds(|r| !(has(Refl, &r[0]) && has(Sym, &r[0]) && has(Antisym, &r[0])) || r[0] == id(&r[0]))),
    th("5.3.1", "refl R => refl R^-1", 1, Holds(|r| !has(Refl, &r[0]) || has(Refl, &c(&r[0])))),
    th("5.3.2", "sym R => sym R^-1", 1, Holds(|r| !has(Sym, &r[0]) || has(Sym, &c(&r[0])))),
    th("5.3.3", "antisym R => antisym R^-1", 1, Holds(|r| !has(Antisym, &r[0]) || has(Antisym, &c(&r[0])))),
    th("5.3.4", "trans R => trans R^-1", 1, Holds(|r| !has(Trans, &r[0]) || has(Trans, &c(&r[0])))),
    th("5.4.1", "refl R, refl Q => refl (R & Q)", 2, Holds(|r| !(has(Refl, &r[0]) && has(Refl, &r[1])) || has(Refl, &r[0].intersection(&r[1])))),
    th("5.4.2", "sym R, sym Q => sym (R & Q)", 2, Holds(|r| !(has(Sym, &r[0]) && has(Sym, &r[1])) || has(Sym, &r[0].intersection(&r[1])))),
    th("5.4.3", "antisym R or antisym Q => antisym (R & Q)", 2, Holds(|r| !(has(Antisym, &r[0]) || has(Antisym, &r[1])) || has(Antisym, &r[0].intersection(&r[1])))),
    th("5.4.4", "trans R, trans Q => trans (R & Q)", 2, Holds(|r| !(has(Trans, &r[0]) && has(Trans, &r[1])) || has(Trans, &r[0].intersection(&r[1])))),
    th("5.5.1", "refl R or refl Q => refl (R | Q)", 2, Holds(|r| !(has(Refl, &r[0]) || has(Refl, &r[1])) || has(Refl, &r[0].union(&r[1])))),
    th("5.5.2", "sym R, sym Q => sym (R | Q)", 2, Holds(|r| !(has(Sym, &r[0]) && has(Sym, &r[1])) || has(Sym, &r[0].union(&r[1])))),
    th("5.6.1", "sym (R o R^-1)", 1, Holds(|r| has(Sym, &r[0].compose(&c(&r[0]))))),
    th("5.6.2", "refl R, refl Q => refl (R o Q)", 2, Holds(|r| !(has(Refl, &r[0]) && has(Refl, &r[1])) || has(Refl, &r[0].compose(&r[1])))),
    th("5.6.3", "sym R, sym Q => (sym (R o Q) <=> R o Q = Q o R)", 2, Holds(|r| {
        !(has(Sym, &r[0]) && has(Sym, &r[1])) || has(Sym, &r[0].compose(&r[1])) == (r[0].compose(&r[1]) == r[1].compose(&r[0]))
    })),
    th("6.1.1", "equiv R => equiv R^-1", 1, Holds(|r| !has(Equiv, &r[0]) || has(Equiv, &c(&r[0])))),
    th("6.1.2", "equiv R, equiv Q => equiv (R & Q)", 2, Holds(|r| !(has(Equiv, &r[0]) && has(Equiv, &r[1])) || has(Equiv, &r[0].intersection(&r[1])))),
    th("6.2", "equiv R <=> R is a partition", 1, Iff(|r| has(Equiv, &r[0]), partition_side)),
    th("6.3.1", "part-ord R => part-ord R^-1", 1, Holds(|r| !has(PartOrd, &r[0]) || has(PartOrd, &c(&r[0])))),
    th("6.3.2", "part-ord R, part-ord Q => part-ord (R & Q)", 2, Holds(|r| !(has(PartOrd, &r[0]) && has(PartOrd, &r[1])) || has(PartOrd, &r[0].intersection(&r[1])))),
    th("6.4", "inclusion is a partial order on ps(S)", 0, SubsetOrder),
    th("6.5", "transfinite induction", 0, Induction),
];

static PROBE: Theorem = th(COMMUTE_PROBE, "R o Q = Q o R (false)", 2, Holds(|r| r[0].compose(&r[1]) == r[1].compose(&r[0])));

/// Every registered theorem, in presentation order. The commute probe is
/// not included.
pub fn registry() -> &'static [Theorem] {
    REGISTRY
}

fn lookup(id: &str) -> Result<&'static Theorem, OracleError> {
    if id == COMMUTE_PROBE {
        return Ok(&PROBE);
    }
    REGISTRY.iter().find(|t| t.id == id).ok_or_else(|| OracleError::UnknownTheorem(id.to_string()))
}

pub fn verify_theorem(id: &str, v: &Verifier) -> Result<TheoremReport, OracleError> {
    Ok(v.verify(lookup(id)?))
}

pub fn verify_all(v: &Verifier) -> Vec<TheoremReport> {
    REGISTRY.iter().map(|t| v.verify(t)).collect()
}

/// Re-evaluates a counterexample against theorem `id`. True when the
/// failure reproduces.
pub fn replay(id: &str, c: &Counterexample) -> Result<bool, OracleError> {
    let t = lookup(id)?;
    for r in &c.relations {
        if r.n() != c.n {
            return Err(OracleError::CarrierMismatch { expected: c.n, found: r.n() });
        }
    }
    Ok(match t.statement {
        Holds(p) => !p(&c.relations),
        Iff(l, r) => l(&c.relations) != r(&c.relations),
        SubsetOrder => {
            let sub = |x: u64, y: u64| x & !y == 0;
            match c.sets[..] {
                [x, y, z] => !(sub(x, x) && (!(sub(x, y) && sub(y, x)) || x == y) && (!(sub(x, y) && sub(y, z)) || sub(x, z))),
                _ => false,
            }
        }
        Induction => match (&c.relations[..], &c.sets[..]) {
            ([le], [pred]) => check_property(Property::WellOrd, le) && induction_fails(c.n, le, *pred),
            _ => false,
        },
    })
}

/// Relations `(R, P, Q)` where `R o (P & Q)` is strictly smaller than
/// `R o P & R o Q`, searching carriers up to `max_n`.
pub fn strictness_witness(max_n: u8) -> Option<(FiniteRelation, FiniteRelation, FiniteRelation)> {
    (1..=max_n.min(3)).find_map(|n| {
        let total = FiniteRelation::count(n).pow(3);
        (0..total).map(|i| split(n, 3, i)).find_map(|r| {
            let lhs = r[0].compose(&r[1].intersection(&r[2]));
            let rhs = r[0].compose(&r[1]).intersection(&r[0].compose(&r[2]));
            (lhs.is_subset(&rhs) && lhs != rhs).then(|| (r[0], r[1], r[2]))
        })
    })
}

/// Tuple number `index` of `arity` relations on carrier `n`, the first
/// relation in the lowest bits.
fn split(n: u8, arity: usize, index: u64) -> Vec<FiniteRelation> {
    let width = n as u32 * n as u32;
    (0..arity)
        .map(|k| FiniteRelation::new(n, index >> (k as u32 * width)).expect("carrier size in range"))
        .collect()
}

impl Verifier {
    pub fn verify(&self, t: &Theorem) -> TheoremReport {
        let mut report = TheoremReport {
            id: t.id.to_string(),
            title: t.title.to_string(),
            sizes: Vec::new(),
            instances: 0,
            forward: None,
            backward: None,
            counterexample: None,
        };
        if let Iff(..) = t.statement {
            report.forward = Some(0);
            report.backward = Some(0);
        }
        for n in 1..=self.max_n.min(MAX_CARRIER) {
            let size = match t.statement {
                Holds(_) | Iff(..) => self.relations(t, n, &mut report),
                SubsetOrder => subset_order(n, &mut report),
                Induction => induction(n, &mut report),
            };
            report.instances += size.instances;
            report.sizes.push(size);
            if report.counterexample.is_some() {
                break;
            }
        }
        report
    }

    fn relations(&self, t: &Theorem, n: u8, report: &mut TheoremReport) -> SizeReport {
        let width = t.arity as u32 * n as u32 * n as u32;
        let mut instances = 0u64;
        let mut run = |rels: Vec<FiniteRelation>, report: &mut TheoremReport| -> bool {
            instances += 1;
            let failure = match t.statement {
                Holds(p) => (!p(&rels)).then_some(None),
                Iff(l, r) => {
                    let (lv, rv) = (l(&rels), r(&rels));
                    if lv {
                        *report.forward.get_or_insert(0) += 1;
                    }
                    if rv {
                        *report.backward.get_or_insert(0) += 1;
                    }
                    match (lv, rv) {
                        (true, false) => Some(Some("forward")),
                        (false, true) => Some(Some("backward")),
                        _ => None,
                    }
                }
                _ => None,
            };
            if let Some(direction) = failure {
                report.counterexample = Some(Counterexample { n, relations: rels, sets: Vec::new(), direction });
                return false;
            }
            true
        };
        if width < 63 && (1u64 << width) <= EXHAUSTIVE_LIMIT {
            for index in 0..1u64 << width {
                if !run(split(n, t.arity, index), report) {
                    break;
                }
            }
            SizeReport { n, mode: Mode::Exhaustive, instances }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ mix(t.id, n));
            for _ in 0..self.sample_budget {
                let rels = (0..t.arity)
                    .map(|_| FiniteRelation::new(n, rng.gen::<u64>()).expect("carrier size in range"))
                    .collect();
                if !run(rels, report) {
                    break;
                }
            }
            SizeReport { n, mode: Mode::Sampled, instances }
        }
    }
}

/// Per-theorem, per-size stream separation for sampling.
fn mix(id: &str, n: u8) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes().chain(std::iter::once(n)) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn subset_order(n: u8, report: &mut TheoremReport) -> SizeReport {
    let sets = 1u64 << n;
    let sub = |x: u64, y: u64| x & !y == 0;
    let mut instances = 0;
    for x in 0..sets {
        for y in 0..sets {
            for z in 0..sets {
                instances += 1;
                let refl = sub(x, x);
                let antisym = !(sub(x, y) && sub(y, x)) || x == y;
                let trans = !(sub(x, y) && sub(y, z)) || sub(x, z);
                if !(refl && antisym && trans) {
                    report.counterexample = Some(Counterexample { n, relations: Vec::new(), sets: vec![x, y, z], direction: None });
                    return SizeReport { n, mode: Mode::Exhaustive, instances };
                }
            }
        }
    }
    SizeReport { n, mode: Mode::Exhaustive, instances }
}

/// The well-orderings of an `n`-point carrier: all relations satisfying the
/// definition when they can be enumerated, otherwise the orders induced by
/// permutations, which are exactly the well-orderings of a finite set.
fn well_orders(n: u8) -> Vec<FiniteRelation> {
    if FiniteRelation::count(n) <= EXHAUSTIVE_LIMIT {
        return FiniteRelation::all(n).filter(|r| check_property(Property::WellOrd, r)).collect();
    }
    let mut out = Vec::new();
    let mut perm: Vec<u8> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let mut r = FiniteRelation::empty(n);
        for i in 0..n as usize {
            for j in i..n as usize {
                r.set(p[i], p[j], true);
            }
        }
        out.push(r);
    });
    out
}

fn permutations(p: &mut Vec<u8>, k: usize, f: &mut dyn FnMut(&[u8])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Premise holds for predicate `pred` along `le` but some point is missed.
fn induction_fails(n: u8, le: &FiniteRelation, pred: u64) -> bool {
    let p = |x: u8| pred >> x & 1 == 1;
    let premise = (0..n).all(|x| !(0..n).all(|y| !(le.get(y, x) && y != x) || p(y)) || p(x));
    premise && !(0..n).all(p)
}

fn induction(n: u8, report: &mut TheoremReport) -> SizeReport {
    let mut instances = 0;
    for le in well_orders(n) {
        for pred in 0..1u64 << n {
            instances += 1;
            if induction_fails(n, &le, pred) {
                report.counterexample = Some(Counterexample { n, relations: vec![le], sets: vec![pred], direction: None });
                return SizeReport { n, mode: Mode::Exhaustive, instances };
            }
        }
    }
    SizeReport { n, mode: Mode::Exhaustive, instances }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(id: &str, max_n: u8) -> TheoremReport {
        verify_theorem(id, &Verifier { max_n, ..Verifier::default() }).unwrap()
    }

    #[test]
    fn associativity_is_exhaustive_on_pairs_of_points() {
        let r = run("4.3.9", 2);
        assert!(r.passed());
        assert_eq!(r.sizes[1], SizeReport { n: 2, mode: Mode::Exhaustive, instances: 4096 });
    }

    #[test]
    fn second_symmetry_criterion_covers_all_512_relations() {
        let r = run("5.1.3", 3);
        assert!(r.passed());
        assert_eq!(r.sizes[2].instances, 512);
        // symmetric relations on three points: 2^3 diagonal bits times 2^3 pairs
        assert_eq!(r.sizes[2].mode, Mode::Exhaustive);
        assert_eq!(r.forward, r.backward);
        assert_eq!(r.forward, Some(2 + 8 + 64));
    }

    #[test]
    fn induction_holds_for_every_order_and_predicate() {
        let r = run("6.5", 5);
        assert!(r.passed());
        let expected: Vec<u64> = (1..=5u64).map(|n| (1..=n).product::<u64>() << n).collect();
        assert_eq!(r.sizes.iter().map(|s| s.instances).collect::<Vec<_>>(), expected);
    }

    #[test]
    fn commute_probe_is_refuted_on_two_points() {
        let r = run(COMMUTE_PROBE, 3);
        let c = r.counterexample.expect("composition does not commute");
        assert_eq!(c.n, 2);
        let (a, b) = (c.relations[0], c.relations[1]);
        assert_ne!(a.compose(&b), b.compose(&a));
        assert!(replay(COMMUTE_PROBE, &c).unwrap());
        assert!(!replay("4.3.9", &Counterexample { relations: vec![a, b, a], ..c }).unwrap());
    }

    #[test]
    fn unknown_ids_are_rejected() {
        assert_eq!(
            verify_theorem("9.9", &Verifier::default()).unwrap_err(),
            OracleError::UnknownTheorem("9.9".to_string())
        );
    }

    #[test]
    fn strict_inclusion_is_witnessed() {
        let (r, p, q) = strictness_witness(3).expect("witness");
        assert!(r.n() <= 3);
        assert_ne!(r.compose(&p.intersection(&q)), r.compose(&p).intersection(&r.compose(&q)));
    }

    #[test]
    fn sampling_is_reproducible() {
        let v = Verifier { max_n: 3, seed: 7, sample_budget: 500 };
        let a = verify_theorem("4.3.9", &v).unwrap();
        assert_eq!(a.sizes[2], SizeReport { n: 3, mode: Mode::Sampled, instances: 500 });
        assert_eq!(a, verify_theorem("4.3.9", &v).unwrap());
    }
}
