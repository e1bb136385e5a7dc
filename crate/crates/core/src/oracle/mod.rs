//! Finite-model checking of the relation theorems: every statement is
//! evaluated on all relations over small carriers, or on a seeded sample
//! when the carrier is too large to enumerate.

mod registry;
mod relation;

use thiserror::Error;

pub use registry::{
    registry, replay, strictness_witness, verify_all, verify_theorem, Counterexample, Mode, SizeReport, Statement, Theorem,
    TheoremReport, Verifier, COMMUTE_PROBE, DEFAULT_SAMPLE_BUDGET, EXHAUSTIVE_LIMIT,
};
pub use relation::{
    blocks, check_property, eval_op, from_blocks, is_partition, partition_round_trip, FiniteRelation, Property, RelOp,
    MAX_CARRIER,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("carrier size {0} is outside 1..=6")]
    CarrierSize(u8),
    #[error("carrier mismatch: expected size {expected}, found {found}")]
    CarrierMismatch { expected: u8, found: u8 },
    #[error("operation takes {expected} relations, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("point {point} is outside a carrier of size {n}")]
    PointOutOfRange { point: u8, n: u8 },
    #[error("unknown theorem `{0}`")]
    UnknownTheorem(String),
    #[error("{0} is not an equivalence relation")]
    NotEquivalence(FiniteRelation),
}
