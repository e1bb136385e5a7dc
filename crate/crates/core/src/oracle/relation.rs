use std::fmt;

use super::OracleError;

/// Largest carrier a [`FiniteRelation`] can hold: n² bits must fit a u64.
pub const MAX_CARRIER: u8 = 6;

/// A binary relation on `{0, .., n-1}`; bit `i*n + j` is set iff the
/// relation holds at `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiniteRelation {
    n: u8,
    bits: u64,
}

impl FiniteRelation {
    pub fn new(n: u8, bits: u64) -> Result<Self, OracleError> {
        if n == 0 || n > MAX_CARRIER {
            return Err(OracleError::CarrierSize(n));
        }
        Ok(FiniteRelation { n, bits: bits & full_mask(n) })
    }

    pub fn empty(n: u8) -> Self {
        Self::new(n, 0).expect("carrier size in range")
    }

    pub fn total(n: u8) -> Self {
        Self::new(n, u64::MAX).expect("carrier size in range")
    }

    pub fn identity(n: u8) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.set(i, i, true);
        }
        r
    }

    pub fn from_pairs(n: u8, pairs: &[(u8, u8)]) -> Result<Self, OracleError> {
        let mut r = Self::new(n, 0)?;
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(OracleError::PointOutOfRange { point: i.max(j), n });
            }
            r.set(i, j, true);
        }
        Ok(r)
    }

    /// Number of distinct relations on a carrier of size `n`.
    pub fn count(n: u8) -> u64 {
        1u64 << (n as u32 * n as u32)
    }

    /// All relations on a carrier of size `n`, in bit order.
    pub fn all(n: u8) -> impl Iterator<Item = FiniteRelation> {
        (0..Self::count(n)).map(move |b| FiniteRelation { n, bits: b })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: u8, j: u8) -> bool {
        self.bits >> (i as u32 * self.n as u32 + j as u32) & 1 == 1
    }

    pub fn set(&mut self, i: u8, j: u8, v: bool) {
        let b = 1u64 << (i as u32 * self.n as u32 + j as u32);
        if v {
            self.bits |= b;
        } else {
            self.bits &= !b;
        }
    }

    /// Row `i` as a bitset over the carrier.
    pub fn row(&self, i: u8) -> u64 {
        (self.bits >> (i as u32 * self.n as u32)) & row_mask(self.n)
    }

    pub fn pairs(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn converse(&self) -> Self {
        let mut r = Self::empty(self.n);
        for (i, j) in self.pairs() {
            r.set(j, i, true);
        }
        r
    }

    pub fn union(&self, other: &Self) -> Self {
        FiniteRelation { n: self.n, bits: self.bits | other.bits }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        FiniteRelation { n: self.n, bits: self.bits & other.bits }
    }

    /// `(self o other)(i, j)` iff some `k` has `self(i, k)` and `other(k, j)`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.n;
        let mut bits = 0u64;
        for i in 0..n {
            let mut row = 0u64;
            let mut mid = self.row(i);
            while mid != 0 {
                let k = mid.trailing_zeros() as u8;
                row |= other.row(k);
                mid &= mid - 1;
            }
            bits |= row << (i as u32 * n as u32);
        }
        FiniteRelation { n, bits }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn hex(&self) -> String {
        format!("{:#x}", self.bits)
    }
}

impl fmt::Display for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (i, j)) in self.pairs().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({i},{j})")?;
        }
        write!(f, "}} on n={}", self.n)
    }
}

fn row_mask(n: u8) -> u64 {
    (1u64 << n) - 1
}

fn full_mask(n: u8) -> u64 {
    let k = n as u32 * n as u32;
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Relation operations evaluated by [`eval_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelOp {
    Converse,
    Union,
    Intersection,
    Compose,
    Identity,
}

impl RelOp {
    pub fn arity(self) -> usize {
        match self {
            RelOp::Identity => 0,
            RelOp::Converse => 1,
            RelOp::Union | RelOp::Intersection | RelOp::Compose => 2,
        }
    }
}

/// Applies `op` to relations on a carrier of size `n`.
pub fn eval_op(op: RelOp, n: u8, args: &[FiniteRelation]) -> Result<FiniteRelation, OracleError> {
    if args.len() != op.arity() {
        return Err(OracleError::Arity { expected: op.arity(), found: args.len() });
    }
    if let Some(bad) = args.iter().find(|a| a.n() != n) {
        return Err(OracleError::CarrierMismatch { expected: n, found: bad.n() });
    }
    Ok(match op {
        RelOp::Identity => {
            FiniteRelation::new(n, 0)?;
            FiniteRelation::identity(n)
        },
        RelOp::Converse => args[0].converse(),
        RelOp::Union => args[0].union(&args[1]),
        RelOp::Intersection => args[0].intersection(&args[1]),
        RelOp::Compose => args[0].compose(&args[1]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Refl,
    Sym,
    Antisym,
    Trans,
    Equiv,
    PartOrd,
    WellOrd,
}

pub fn check_property(prop: Property, r: &FiniteRelation) -> bool {
    let n = r.n();
    match prop {
        Property::Refl => (0..n).all(|x| r.get(x, x)),
        Property::Sym => r.pairs().into_iter().all(|(x, y)| r.get(y, x)),
        Property::Antisym => r.pairs().into_iter().all(|(x, y)| !r.get(y, x) || x == y),
        Property::Trans => r.compose(r).is_subset(r),
        Property::Equiv => [Property::Refl, Property::Sym, Property::Trans].iter().all(|&p| check_property(p, r)),
        Property::PartOrd => [Property::Refl, Property::Antisym, Property::Trans].iter().all(|&p| check_property(p, r)),
        Property::WellOrd => check_property(Property::PartOrd, r) && every_subset_has_least(r),
    }
}

/// Every nonempty subset `X` has some `x` in `X` below all of `X`.
fn every_subset_has_least(r: &FiniteRelation) -> bool {
    let n = r.n();
    (1u64..1 << n).all(|set| {
        (0..n).any(|x| set >> x & 1 == 1 && (0..n).all(|y| set >> y & 1 == 0 || r.get(x, y)))
    })
}

/// The blocks `x -> {y | R x y}` of a relation read as a family of subsets.
pub fn blocks(r: &FiniteRelation) -> Vec<u64> {
    (0..r.n()).map(|x| r.row(x)).collect()
}

/// The two partition clauses for a family of subsets indexed by the
/// carrier: every `x` lies in its own block, and overlapping blocks agree.
pub fn is_partition(family: &[u64]) -> bool {
    let n = family.len();
    let own = (0..n).all(|x| family[x] >> x & 1 == 1);
    let overlap = (0..n).all(|x| (0..n).all(|y| family[x] & family[y] == 0 || family[x] == family[y]));
    own && overlap
}

/// The relation "x and y share a block".
pub fn from_blocks(n: u8, family: &[u64]) -> FiniteRelation {
    let mut r = FiniteRelation::empty(n);
    for block in family {
        for x in 0..n {
            for y in 0..n {
                if block >> x & 1 == 1 && block >> y & 1 == 1 {
                    r.set(x, y, true);
                }
            }
        }
    }
    r
}

/// Turns an equivalence relation into its blocks, checks the partition
/// clauses, and rebuilds the relation from the blocks.
pub fn partition_round_trip(r: &FiniteRelation) -> Result<bool, OracleError> {
    if !check_property(Property::Equiv, r) {
        return Err(OracleError::NotEquivalence(*r));
    }
    let family = blocks(r);
    Ok(is_partition(&family) && from_blocks(r.n(), &family) == *r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(n: u8, pairs: &[(u8, u8)]) -> FiniteRelation {
        FiniteRelation::from_pairs(n, pairs).unwrap()
    }

    #[test]
    fn operations_follow_pointwise_semantics() {
        let r = rel(2, &[(0, 1)]);
        assert_eq!(eval_op(RelOp::Converse, 2, &[eval_op(RelOp::Converse, 2, &[r]).unwrap()]).unwrap(), r);
        assert_eq!(eval_op(RelOp::Compose, 2, &[r, rel(2, &[(1, 0)])]).unwrap(), rel(2, &[(0, 0)]));
        assert_eq!(eval_op(RelOp::Identity, 3, &[]).unwrap().pairs(), vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn mismatched_carriers_are_rejected() {
        let err = eval_op(RelOp::Union, 2, &[FiniteRelation::empty(2), FiniteRelation::empty(3)]).unwrap_err();
        assert_eq!(err, OracleError::CarrierMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn enumeration_is_complete_and_distinct() {
        for n in 1..=3 {
            let all: std::collections::HashSet<_> = FiniteRelation::all(n).collect();
            assert_eq!(all.len() as u64, 1u64 << (n * n));
        }
    }

    #[test]
    fn properties_of_small_relations() {
        assert!(check_property(Property::Refl, &FiniteRelation::identity(3)));
        assert!(!check_property(Property::Sym, &rel(2, &[(0, 1)])));
        let chain = rel(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)]);
        assert!(check_property(Property::WellOrd, &chain));
        assert!(!check_property(Property::WellOrd, &FiniteRelation::identity(2)));
    }

    #[test]
    fn well_orders_on_three_points_are_the_total_orders() {
        let count = FiniteRelation::all(3).filter(|r| check_property(Property::WellOrd, r)).count();
        assert_eq!(count, 6);
    }

    #[test]
    fn partitions_round_trip() {
        let two_blocks = rel(3, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]);
        assert_eq!(partition_round_trip(&two_blocks), Ok(true));
        assert_eq!(partition_round_trip(&FiniteRelation::identity(3)), Ok(true));
        assert_eq!(partition_round_trip(&FiniteRelation::total(3)), Ok(true));
        assert!(matches!(partition_round_trip(&rel(2, &[(0, 1)])), Err(OracleError::NotEquivalence(_))));
    }
}
