//! Cost-decreasing digraphs, families of them nested by rank, and their
//! PLS / nPLS instances.

mod digraph;
mod family;
mod generate;

use thiserror::Error;

pub use digraph::{find_sink, pls_from_digraph, CostedDigraph, DigraphPls};
pub use family::{npls_from_family, ChildLink, FamilyNpls, FamilyProblem, NestedGraphFamily};
pub use generate::{generate_family, MAX_GENERATED_RANK, MAX_GENERATED_WIDTH};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {from} -> {to} does not lower the cost")]
    CostConditionViolated { from: usize, to: usize },
    #[error("problem {problem:?}: edge {from} -> {to} does not lower the cost")]
    CostConditionViolatedIn {
        problem: usize,
        from: usize,
        to: usize,
    },
    #[error("node {node} is out of range")]
    NodeOutOfRange { node: usize },
    #[error("node {node} has {degree} out-edges, bound is {bound}")]
    CardinalityBoundViolated {
        node: usize,
        degree: u64,
        bound: u64,
    },
    #[error("node {node} of problem {problem:?} has no out-edge")]
    TotalityViolated { problem: Option<usize>, node: usize },
    #[error("node {node} of problem {problem} is backed by problem {child} of no lower rank")]
    RankViolation {
        problem: usize,
        node: usize,
        child: usize,
    },
    #[error("node {node} of problem {problem} has no child problem")]
    MissingChild { problem: usize, node: usize },
    #[error("node {node} of problem {problem}: child solution {solution} does not map to an out-neighbor")]
    MissingSolutionEdge {
        problem: usize,
        node: usize,
        solution: usize,
    },
    #[error("malformed graph: {0}")]
    Malformed(String),
}

impl GraphError {
    fn in_problem(self, problem: usize) -> Self {
        match self {
            GraphError::CostConditionViolated { from, to } => {
                GraphError::CostConditionViolatedIn { problem, from, to }
            }
            other => other,
        }
    }
}
