//! Compiling derivations of Σb1 sentences into search problems whose
//! solutions carry a witness: Σb1 derivations into PLS, Σb2 derivations
//! into nested PLS.

mod context;
mod npls;
mod pls;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::proof::{NodePath, ProofError, ValidationReport};
use crate::search::{SearchError, SearchTrace};

pub use context::ExtractionContext;
pub use npls::{
    build_npls, extract_witness_npls, npls_cost, npls_extract, npls_gen_source, npls_neighbor_rel,
    npls_rank0_step, npls_sources, npls_targets, source_condition, DerivationNpls,
};
pub use pls::{
    build_pls, extract_witness_pls, pls_feasible, pls_neighbor, rightmost_goal, target_condition,
    DerivationPls,
};

/// Solver step budget; valid derivations finish far below it.
pub const STEP_BUDGET: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtractionMode {
    /// Σb1 derivations, compiled into a PLS.
    Pls,
    /// Σb2 derivations with Σb2 cuts, compiled into a nested PLS.
    Npls,
}

impl fmt::Display for ExtractionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtractionMode::Pls => "pls",
            ExtractionMode::Npls => "npls",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("{mode} mode does not accept the {reason} at {path}")]
    Mode {
        mode: ExtractionMode,
        path: NodePath,
        reason: &'static str,
    },
    #[error("context was not built for {0} mode")]
    WrongContext(ExtractionMode),
    #[error("derivation is invalid:\n{0}")]
    ValidationFailed(ValidationReport),
    #[error("root sequent is not a single Σb1 formula with a closed bound")]
    EndFormula,
    #[error("no node at {0}")]
    NoSuchNode(NodePath),
    #[error("{0} has no witnessing term")]
    NoWitness(NodePath),
    #[error("no goal on the rightmost walk from {0}")]
    GoalNotFound(NodePath),
    #[error("{0} is not a point of the search problem")]
    NotFeasible(NodePath),
    #[error("{tau} is not a target of {sigma}")]
    NotATarget { sigma: NodePath, tau: NodePath },
    #[error("{tau} does not solve {sigma}")]
    NotASolution { sigma: NodePath, tau: NodePath },
    #[error("step from {from} to {to} does not go down in post-order")]
    KbViolation { from: NodePath, to: NodePath },
    #[error("principal formula of {0} is the end-formula")]
    EndFormulaPrincipal(NodePath),
    #[error("rank-zero source {sigma} has the Sb2 target {tau}")]
    Unreachable { sigma: NodePath, tau: NodePath },
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// The witness read off a solution, and whether it checks out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub mode: ExtractionMode,
    pub witness: u64,
    /// The solution of the search problem.
    pub solution_node: NodePath,
    /// The Sb1 node whose witnessing term gave `witness`.
    pub goal_node: NodePath,
    pub verified: bool,
    pub trace: SearchTrace,
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode      {}", self.mode)?;
        writeln!(f, "witness   {}", self.witness)?;
        writeln!(f, "solution  {}", self.solution_node)?;
        writeln!(f, "goal      {}", self.goal_node)?;
        writeln!(f, "verified  {}", self.verified)?;
        writeln!(f, "steps     {}", self.trace.step_count())
    }
}
