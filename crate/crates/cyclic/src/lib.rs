//! Cyclic group symmetries of bounded cochain complexes, held strictly:
//! a generator that closes up on the nose, inflation along quotients of
//! cyclic groups, averaging fixed points when the subgroup order is
//! invertible, homotopy fixed points through the two-periodic resolution
//! with an explicit correctness window, towers of complexes indexed by
//! divisibility, and the stabilized colimit of twisted cone towers.

mod action;
mod chern;
mod system;

pub use action::{
    fixed_map, fixed_points, homotopy_fixed_points, homotopy_fixed_points_map, CyclicAction,
    FixedPoints, HomotopyFixedPoints,
};
pub use chern::{chern_colimit, ChernColimit, ChernDatum};
pub use system::{categorical_lemma_check, DivisibilityDiagram, LevelSystem};

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[derive(Debug, thiserror::Error)]
pub enum CyclicError {
    #[error("generator must be an endomorphism of one complex")]
    NotEndomorphism,
    #[error("generator does not close up: power {order} differs from the identity")]
    NotPeriodic { order: u64 },
    #[error("{m} does not divide the action order {order}")]
    NotASubgroup { m: u64, order: u64 },
    #[error("averaging needs gcd({m}, {ell}) = 1; the divisible part is a job for homotopy_fixed_points")]
    OrderNotInvertible { m: u64, ell: u64 },
    #[error("bad level set: {0}")]
    BadLevels(String),
    #[error("level {level}: {what}")]
    BadLevel { level: u64, what: String },
    #[error("transition {from} -> {to}: {what}")]
    BadTransition { from: u64, to: u64, what: String },
    #[error("composition through {mid} disagrees with the direct transition {from} -> {to}")]
    NotFunctorial { from: u64, mid: u64, to: u64 },
    #[error("not stabilized: {0}")]
    NotStabilized(String),
}
