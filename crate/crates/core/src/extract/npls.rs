use crate::point::{PointId, Polynomial};
use crate::proof::NodePath;
use crate::search::{default_max_steps, solve_npls, NplsInstance};

use super::{ExtractError, ExtractionContext, ExtractionMode, WitnessReport, STEP_BUDGET};

/// No proper prefix of `sigma` is an Sb1 node with true auxiliary.
pub fn source_condition(ctx: &ExtractionContext, sigma: &NodePath) -> bool {
    ctx.try_idx(sigma).is_some() && source_condition_idx(ctx, sigma)
}

fn source_condition_idx(ctx: &ExtractionContext, sigma: &NodePath) -> bool {
    sigma
        .prefixes()
        .take(sigma.len())
        .all(|p| ctx.try_idx(&p).is_some_and(|i| !ctx.info[i].true_goal))
}

fn is_source(ctx: &ExtractionContext, i: usize) -> bool {
    let n = &ctx.info[i];
    i == 0 || (n.left_upper && n.target_condition && source_condition_idx(ctx, ctx.path(i)))
}

fn is_target(ctx: &ExtractionContext, s: usize, t: usize) -> bool {
    let n = &ctx.info[t];
    if !is_source(ctx, s) || !n.target_condition {
        return false;
    }
    let sigma = ctx.path(s);
    let case_a = n.sb2
        && sigma.is_prefix_of(ctx.path(t))
        && n.deepest_left_upper.is_none_or(|len| len <= sigma.len());
    let case_b = n.true_goal && n.principal.is_some_and(|p| ctx.seq_has(s, p));
    case_a || case_b
}

/// `sigma` is the root or a left upper sequent of a cut, and neither it nor
/// anything below it makes the search trivial.
pub fn npls_sources(ctx: &ExtractionContext, sigma: &NodePath) -> bool {
    ctx.try_idx(sigma).is_some_and(|i| is_source(ctx, i))
}

/// `tau` is an Sb2 node reached from `sigma` without entering a left upper
/// sequent, or an Sb1 node with true auxiliary whose principal formula
/// occurs at `sigma`.
pub fn npls_targets(ctx: &ExtractionContext, sigma: &NodePath, tau: &NodePath) -> bool {
    match (ctx.try_idx(sigma), ctx.try_idx(tau)) {
        (Some(s), Some(t)) => is_target(ctx, s, t),
        _ => false,
    }
}

fn cost(ctx: &ExtractionContext, t: usize) -> u64 {
    if ctx.info[t].sb2 {
        ctx.d_max() - ctx.path(t).len() as u64
    } else {
        0
    }
}

/// `d_max - depth` for Sb2 targets, 0 otherwise.
pub fn npls_cost(ctx: &ExtractionContext, tau: &NodePath) -> u64 {
    ctx.try_idx(tau).map_or(0, |t| cost(ctx, t))
}

fn neighbor(ctx: &ExtractionContext, s: usize, y: usize, z: usize) -> bool {
    if !is_target(ctx, s, y) || !is_target(ctx, s, z) {
        return false;
    }
    if ctx.info[y].sb2 {
        !ctx.info[z].sb2 || ctx.path(y).is_proper_prefix_of(ctx.path(z))
    } else {
        y == z
    }
}

pub fn npls_neighbor_rel(
    ctx: &ExtractionContext,
    sigma: &NodePath,
    tau: &NodePath,
    rho: &NodePath,
) -> bool {
    match (ctx.try_idx(sigma), ctx.try_idx(tau), ctx.try_idx(rho)) {
        (Some(s), Some(y), Some(z)) => neighbor(ctx, s, y, z),
        _ => false,
    }
}

fn gen_source(ctx: &ExtractionContext, s: usize, y: usize) -> Result<usize, ExtractError> {
    if !is_target(ctx, s, y) {
        return Err(ExtractError::NotATarget {
            sigma: ctx.path(s).clone(),
            tau: ctx.path(y).clone(),
        });
    }
    if !ctx.info[y].sb2 {
        return Ok(s);
    }
    let k = ctx
        .cut_upper_for(y)?
        .ok_or_else(|| ExtractError::EndFormulaPrincipal(ctx.path(y).clone()))?;
    if ctx.kb(k) >= ctx.kb(s) {
        return Err(ExtractError::KbViolation {
            from: ctx.path(s).clone(),
            to: ctx.path(k).clone(),
        });
    }
    Ok(k)
}

/// For an Sb2 target: the left upper sequent `κ` of the cut that introduced
/// its principal formula, selected by its witness. For an Sb1 target:
/// `sigma` itself.
pub fn npls_gen_source(
    ctx: &ExtractionContext,
    sigma: &NodePath,
    tau: &NodePath,
) -> Result<NodePath, ExtractError> {
    let k = gen_source(ctx, ctx.idx(sigma)?, ctx.idx(tau)?)?;
    Ok(ctx.path(k).clone())
}

fn extract(ctx: &ExtractionContext, s: usize, y: usize, z: usize) -> Result<usize, ExtractError> {
    let k = gen_source(ctx, s, y)?;
    if !neighbor(ctx, k, z, z) {
        return Err(ExtractError::NotASolution {
            sigma: ctx.path(k).clone(),
            tau: ctx.path(z).clone(),
        });
    }
    if !ctx.info[y].sb2 {
        return Ok(y);
    }
    let p = ctx.info[z].principal.expect("solutions are Sb1 nodes");
    let parent = ctx.path(k).parent().expect("left uppers have a parent");
    let below = ctx.idx(&parent)?;
    if ctx.seq_has(k, p) && !ctx.seq_has(below, p) {
        let m = ctx.witness_at(z)?;
        let child = ctx
            .path(y)
            .child(u32::try_from(m).map_err(|_| ExtractError::NoSuchNode(ctx.path(y).clone()))?);
        let c = ctx.idx(&child)?;
        ctx.rightmost_goal_idx(c)
    } else {
        Ok(z)
    }
}

/// The next target of `sigma` after `tau`, given a solution `rho` of the
/// generated source. If `rho` witnesses the formula that the cut added at
/// the generated source, its witness `m` selects the upper sequent
/// `tau*⟨m⟩` and the walk continues from there; otherwise `rho` itself.
pub fn npls_extract(
    ctx: &ExtractionContext,
    sigma: &NodePath,
    tau: &NodePath,
    rho: &NodePath,
) -> Result<NodePath, ExtractError> {
    let k = extract(ctx, ctx.idx(sigma)?, ctx.idx(tau)?, ctx.idx(rho)?)?;
    Ok(ctx.path(k).clone())
}

/// The rank-zero step: an Sb1 target is its own neighbor; an Sb2 target
/// cannot occur.
pub fn npls_rank0_step(
    ctx: &ExtractionContext,
    sigma: &NodePath,
    tau: &NodePath,
) -> Result<NodePath, ExtractError> {
    let t = ctx.idx(tau)?;
    if ctx.info[t].sb2 {
        return Err(ExtractError::Unreachable {
            sigma: sigma.clone(),
            tau: tau.clone(),
        });
    }
    Ok(tau.clone())
}

/// The nested PLS of a Σb2 derivation. Sources and targets are nodes in
/// pre-order; the rank of a source is its post-order index.
#[derive(Debug, Clone, Copy)]
pub struct DerivationNpls<'a> {
    ctx: &'a ExtractionContext,
}

impl DerivationNpls<'_> {
    pub fn context(&self) -> &ExtractionContext {
        self.ctx
    }
}

/// Assembles the nested PLS. Fails if some source has no initial target.
pub fn build_npls(ctx: &ExtractionContext) -> Result<DerivationNpls<'_>, ExtractError> {
    if ctx.mode() != ExtractionMode::Npls {
        return Err(ExtractError::WrongContext(ExtractionMode::Npls));
    }
    for i in (0..ctx.len()).filter(|&i| is_source(ctx, i)) {
        ctx.rightmost_goal_idx(i)?;
    }
    Ok(DerivationNpls { ctx })
}

impl DerivationNpls<'_> {
    fn idx(&self, s: PointId) -> Option<usize> {
        self.ctx.idx_of_point(s)
    }

    fn pt(i: usize) -> PointId {
        PointId(i as u64)
    }
}

impl NplsInstance for DerivationNpls<'_> {
    fn d_bound(&self) -> &Polynomial {
        self.ctx.d_bound()
    }

    fn is_source(&self, _x: u64, s: PointId) -> bool {
        self.idx(s).is_some_and(|i| is_source(self.ctx, i))
    }

    fn is_target(&self, _x: u64, s: PointId, t: PointId) -> bool {
        match (self.idx(s), self.idx(t)) {
            (Some(s), Some(t)) => is_target(self.ctx, s, t),
            _ => false,
        }
    }

    fn neighbor(&self, _x: u64, s: PointId, y: PointId, z: PointId) -> bool {
        match (self.idx(s), self.idx(y), self.idx(z)) {
            (Some(s), Some(y), Some(z)) => neighbor(self.ctx, s, y, z),
            _ => false,
        }
    }

    fn rank0_neighbor(&self, _x: u64, s: PointId, y: PointId) -> Option<PointId> {
        let (s, y) = (self.idx(s)?, self.idx(y)?);
        if !is_target(self.ctx, s, y) || self.ctx.info[y].sb2 {
            return None;
        }
        Some(Self::pt(y))
    }

    fn initial_source(&self, _x: u64) -> PointId {
        PointId(0)
    }

    fn initial_target(&self, _x: u64, s: PointId) -> Option<PointId> {
        let s = self.idx(s)?;
        self.ctx.info[s].goal.map(Self::pt)
    }

    fn cost(&self, _x: u64, t: PointId) -> u64 {
        self.idx(t).map_or(0, |t| cost(self.ctx, t))
    }

    fn gen_source(&self, _x: u64, s: PointId, y: PointId) -> Option<PointId> {
        gen_source(self.ctx, self.idx(s)?, self.idx(y)?)
            .ok()
            .map(Self::pt)
    }

    fn extract(&self, _x: u64, s: PointId, y: PointId, z: PointId) -> Option<PointId> {
        extract(self.ctx, self.idx(s)?, self.idx(y)?, self.idx(z)?)
            .ok()
            .map(Self::pt)
    }

    fn rank(&self, _x: u64, s: PointId) -> u64 {
        self.idx(s).map_or(0, |i| self.ctx.kb(i))
    }
}

/// Solves the nested PLS from the root and reads the witness off the
/// solution, an Sb1 node for the end-formula.
pub fn extract_witness_npls(ctx: &ExtractionContext) -> Result<WitnessReport, ExtractError> {
    let inst = build_npls(ctx)?;
    let x = ctx.x();
    let steps = default_max_steps(inst.d_bound().at_len_of(x)).max(STEP_BUDGET);
    let (sol, trace) = solve_npls(&inst, x, steps)?;
    let i = ctx.idx_of_point(sol).expect("solver stays in the domain");
    let witness = ctx.witness_at(i)?;
    Ok(WitnessReport {
        mode: ExtractionMode::Npls,
        witness,
        solution_node: ctx.path(i).clone(),
        goal_node: ctx.path(i).clone(),
        verified: ctx.witness_holds(witness),
        trace,
    })
}
