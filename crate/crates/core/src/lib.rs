//! Nested polynomial local search: solvers and exhaustive condition checks,
//! nested digraph families, a small bounded-arithmetic proof kernel, and the
//! compilers that turn derivations into search problems whose solutions
//! carry a witness.

pub mod cli;
pub mod extract;
pub mod fixtures;
pub mod graph;
pub mod json;
pub mod point;
pub mod proof;
pub mod search;
