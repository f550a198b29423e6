//! Search problems: PLS, nested PLS, their solvers and exhaustive checkers.

mod error;
pub mod npls;
pub mod pls;
pub mod trace;
pub mod verify;

pub use error::SearchError;
pub use npls::{
    brute_force_npls, is_solution, solve_npls, solve_npls_default, NplsInstance, Rank0Pls,
};
pub use pls::{
    default_max_steps, derive_self_loop_predicate, local_minimum_check, neighbor_set, solve_pls,
    FnPls, PlsInstance, PredicatePls, SelfLoopPls, SteepestDescent,
};
pub use trace::{Row, SearchTrace, StepAction, TraceStep};
pub use verify::{
    verify_npls_conditions, verify_npls_conditions_within, verify_pls_conditions, Condition,
    ConditionReport, ConditionResult, PlsCondition, PlsConditionReport,
};
