use crate::point::{PointId, Polynomial};
use crate::proof::NodePath;
use crate::search::{default_max_steps, solve_pls, PlsInstance};

use super::{ExtractError, ExtractionContext, ExtractionMode, WitnessReport, STEP_BUDGET};

/// No literal of the sequent at `sigma` is true.
pub fn target_condition(ctx: &ExtractionContext, sigma: &NodePath) -> bool {
    ctx.try_idx(sigma)
        .is_some_and(|i| ctx.info[i].target_condition)
}

/// The lowest node on the rightmost walk up from `sigma` that is an Sb1
/// node with true auxiliary, or in npls mode also any Sb2 node.
pub fn rightmost_goal(ctx: &ExtractionContext, sigma: &NodePath) -> Result<NodePath, ExtractError> {
    let i = ctx.idx(sigma)?;
    ctx.rightmost_goal_idx(i).map(|g| ctx.path(g).clone())
}

fn feasible_idx(ctx: &ExtractionContext, i: usize) -> bool {
    i == 0 || (ctx.info[i].left_upper && ctx.info[i].target_condition)
}

/// Whether `sigma` is a point of the PLS: the root, or a left upper sequent
/// of a cut without true literals.
pub fn pls_feasible(ctx: &ExtractionContext, sigma: &NodePath) -> bool {
    ctx.try_idx(sigma).is_some_and(|i| feasible_idx(ctx, i))
}

fn pls_neighbor_idx(ctx: &ExtractionContext, i: usize) -> Result<usize, ExtractError> {
    let t = ctx.rightmost_goal_idx(i)?;
    let Some(k) = ctx.cut_upper_for(t)? else {
        return Ok(i);
    };
    if ctx.kb(k) >= ctx.kb(i) {
        return Err(ExtractError::KbViolation {
            from: ctx.path(i).clone(),
            to: ctx.path(k).clone(),
        });
    }
    Ok(k)
}

/// The next point: `sigma` itself when its goal witnesses the end-formula,
/// else the left upper sequent of the cut that introduced the goal's
/// principal formula, selected by the goal's witness.
pub fn pls_neighbor(ctx: &ExtractionContext, sigma: &NodePath) -> Result<NodePath, ExtractError> {
    let i = ctx.idx(sigma)?;
    if !feasible_idx(ctx, i) {
        return Err(ExtractError::NotFeasible(sigma.clone()));
    }
    pls_neighbor_idx(ctx, i).map(|k| ctx.path(k).clone())
}

/// The PLS of a Σb1 derivation. Points are nodes in pre-order; the cost of a
/// node is its post-order index.
#[derive(Debug, Clone)]
pub struct DerivationPls<'a> {
    ctx: &'a ExtractionContext,
    /// neighbor of each feasible node
    next: Vec<Option<usize>>,
}

impl DerivationPls<'_> {
    pub fn context(&self) -> &ExtractionContext {
        self.ctx
    }

    /// Feasible nodes in pre-order.
    pub fn feasible_paths(&self) -> Vec<NodePath> {
        (0..self.ctx.len())
            .filter(|&i| self.next[i].is_some())
            .map(|i| self.ctx.path(i).clone())
            .collect()
    }
}

/// Assembles the PLS, computing every neighbor up front.
pub fn build_pls(ctx: &ExtractionContext) -> Result<DerivationPls<'_>, ExtractError> {
    if ctx.mode() != ExtractionMode::Pls {
        return Err(ExtractError::WrongContext(ExtractionMode::Pls));
    }
    let mut next = vec![None; ctx.len()];
    for (i, slot) in next.iter_mut().enumerate() {
        if feasible_idx(ctx, i) {
            *slot = Some(pls_neighbor_idx(ctx, i)?);
        }
    }
    Ok(DerivationPls { ctx, next })
}

impl PlsInstance for DerivationPls<'_> {
    fn d_bound(&self) -> &Polynomial {
        self.ctx.d_bound()
    }

    fn feasible(&self, _x: u64, s: PointId) -> bool {
        self.ctx
            .idx_of_point(s)
            .is_some_and(|i| self.next[i].is_some())
    }

    fn initial(&self, _x: u64) -> PointId {
        PointId(0)
    }

    fn neighbor(&self, _x: u64, s: PointId) -> PointId {
        self.ctx
            .idx_of_point(s)
            .and_then(|i| self.next[i])
            .map_or(s, |k| PointId(k as u64))
    }

    fn cost(&self, _x: u64, s: PointId) -> u64 {
        self.ctx.idx_of_point(s).map_or(0, |i| self.ctx.kb(i))
    }
}

/// Solves the PLS and reads the witness off the goal above the solution.
pub fn extract_witness_pls(ctx: &ExtractionContext) -> Result<WitnessReport, ExtractError> {
    let pls = build_pls(ctx)?;
    let x = ctx.x();
    let steps = default_max_steps(pls.d_bound().at_len_of(x)).max(STEP_BUDGET);
    let (sol, trace) = solve_pls(&pls, x, steps)?;
    let i = ctx.idx_of_point(sol).expect("solver stays in the domain");
    let g = ctx.rightmost_goal_idx(i)?;
    let witness = ctx.witness_at(g)?;
    Ok(WitnessReport {
        mode: ExtractionMode::Pls,
        witness,
        solution_node: ctx.path(i).clone(),
        goal_node: ctx.path(g).clone(),
        verified: ctx.witness_holds(witness),
        trace,
    })
}
