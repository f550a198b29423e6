use thiserror::Error;

use crate::point::PointId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("step budget of {budget} exceeded; the instance violates its cost condition")]
    StepBudgetExceeded { budget: u64 },
    #[error("invariant violated at point {point}: {message}")]
    InvariantViolation { point: PointId, message: String },
    #[error("neighbor set of {point} has {count} elements, bound is {bound}")]
    CardinalityBoundViolated {
        point: PointId,
        count: u64,
        bound: u64,
    },
    #[error("descent from source {s} (rank {rank}) to {child} (rank {child_rank}) does not lower the rank")]
    RankViolation {
        s: PointId,
        rank: u64,
        child: PointId,
        child_rank: u64,
    },
    #[error("step {from} -> {to} in row {s} does not lower the cost ({from_cost} -> {to_cost})")]
    CostViolation {
        s: PointId,
        from: PointId,
        to: PointId,
        from_cost: u64,
        to_cost: u64,
    },
    #[error("rank-zero row {s} has no neighbor for target {target}")]
    Rank0SelfLoopMissing { s: PointId, target: PointId },
    #[error("{component} is undefined at source {s}, target {target:?}")]
    MissingComponent {
        component: &'static str,
        s: PointId,
        target: Option<PointId>,
    },
    #[error("source {s} has no targets")]
    EmptyTargetSpace { s: PointId },
    #[error("domain of {bits} bits exceeds the enumeration limit of {limit} bits")]
    DomainTooLarge { bits: u64, limit: u32 },
}
