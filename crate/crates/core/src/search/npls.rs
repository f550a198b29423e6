//! Nested polynomial local search.
//!
//! Sources are search problems; each source owns a target space ordered by
//! cost. At rank zero the neighborhood of a target is an ordinary function. At
//! higher ranks a step from target `y` is found by solving the lower-rank source
//! `gen_source(s, y)` and reading the next target off that solution with
//! `extract`.

use crate::point::{PointId, Polynomial};

use super::error::SearchError;
use super::pls::{default_max_steps, enumerable, PlsInstance, ENUMERATION_LIMIT_BITS};
use super::trace::{SearchTrace, StepAction, TraceStep};

/// The components of a nested PLS problem.
///
/// Every component is total over points; the partial ones answer `None`
/// outside their domain.
pub trait NplsInstance {
    /// Bit bound on sources and targets.
    fn d_bound(&self) -> &Polynomial;
    fn is_source(&self, x: u64, s: PointId) -> bool;
    fn is_target(&self, x: u64, s: PointId, t: PointId) -> bool;
    /// The neighborhood relation `N(x, s, y, z)`; `y` is a solution of `s` iff
    /// `neighbor(x, s, y, y)`.
    fn neighbor(&self, x: u64, s: PointId, y: PointId, z: PointId) -> bool;
    /// Neighborhood function of rank-zero sources; `None` at positive rank.
    fn rank0_neighbor(&self, x: u64, s: PointId, y: PointId) -> Option<PointId>;
    fn initial_source(&self, x: u64) -> PointId;
    fn initial_target(&self, x: u64, s: PointId) -> Option<PointId>;
    fn cost(&self, x: u64, t: PointId) -> u64;
    /// The lower-rank source whose solution yields a neighbor of `y`.
    fn gen_source(&self, x: u64, s: PointId, y: PointId) -> Option<PointId>;
    /// The neighbor of `y` read off a solution `z` of `gen_source(s, y)`.
    fn extract(&self, x: u64, s: PointId, y: PointId, z: PointId) -> Option<PointId>;
    fn rank(&self, x: u64, s: PointId) -> u64;

    /// `d_bound` evaluated at `|x|`.
    fn d_bits(&self, x: u64) -> u64 {
        self.d_bound().at_len_of(x)
    }
}

impl<T: NplsInstance + ?Sized> NplsInstance for &T {
    fn d_bound(&self) -> &Polynomial {
        (**self).d_bound()
    }
    fn is_source(&self, x: u64, s: PointId) -> bool {
        (**self).is_source(x, s)
    }
    fn is_target(&self, x: u64, s: PointId, t: PointId) -> bool {
        (**self).is_target(x, s, t)
    }
    fn neighbor(&self, x: u64, s: PointId, y: PointId, z: PointId) -> bool {
        (**self).neighbor(x, s, y, z)
    }
    fn rank0_neighbor(&self, x: u64, s: PointId, y: PointId) -> Option<PointId> {
        (**self).rank0_neighbor(x, s, y)
    }
    fn initial_source(&self, x: u64) -> PointId {
        (**self).initial_source(x)
    }
    fn initial_target(&self, x: u64, s: PointId) -> Option<PointId> {
        (**self).initial_target(x, s)
    }
    fn cost(&self, x: u64, t: PointId) -> u64 {
        (**self).cost(x, t)
    }
    fn gen_source(&self, x: u64, s: PointId, y: PointId) -> Option<PointId> {
        (**self).gen_source(x, s, y)
    }
    fn extract(&self, x: u64, s: PointId, y: PointId, z: PointId) -> Option<PointId> {
        (**self).extract(x, s, y, z)
    }
    fn rank(&self, x: u64, s: PointId) -> u64 {
        (**self).rank(x, s)
    }
}

/// `y` solves the instance at `x` iff it is a self-loop of the initial source.
pub fn is_solution<N: NplsInstance + ?Sized>(inst: &N, x: u64, y: PointId) -> bool {
    inst.neighbor(x, inst.initial_source(x), y, y)
}

struct Solver<'a, N: ?Sized> {
    inst: &'a N,
    x: u64,
    max_steps: u64,
    trace: SearchTrace,
}

impl<N: NplsInstance + ?Sized> Solver<'_, N> {
    fn record(
        &mut self,
        level: usize,
        source: PointId,
        target: PointId,
        rank: u64,
        action: StepAction,
    ) -> Result<(), SearchError> {
        if self.trace.step_count() as u64 >= self.max_steps {
            return Err(SearchError::StepBudgetExceeded {
                budget: self.max_steps,
            });
        }
        let cost = self.inst.cost(self.x, target);
        self.trace.push(TraceStep {
            level,
            source,
            target,
            rank,
            cost,
            action,
        });
        Ok(())
    }

    fn lower_cost(&self, s: PointId, from: PointId, to: PointId) -> Result<(), SearchError> {
        let (from_cost, to_cost) = (self.inst.cost(self.x, from), self.inst.cost(self.x, to));
        if to_cost < from_cost {
            Ok(())
        } else {
            Err(SearchError::CostViolation {
                s,
                from,
                to,
                from_cost,
                to_cost,
            })
        }
    }

    fn solve_row(&mut self, s: PointId, level: usize) -> Result<PointId, SearchError> {
        let (inst, x) = (self.inst, self.x);
        let rank = inst.rank(x, s);
        let mut y = inst
            .initial_target(x, s)
            .ok_or(SearchError::MissingComponent {
                component: "initial target",
                s,
                target: None,
            })?;
        if !inst.is_target(x, s, y) {
            return Err(SearchError::InvariantViolation {
                point: s,
                message: format!("initial target {y} is not a target"),
            });
        }
        self.record(level, s, y, rank, StepAction::InitTarget)?;

        if rank == 0 {
            loop {
                let z = inst
                    .rank0_neighbor(x, s, y)
                    .ok_or(SearchError::Rank0SelfLoopMissing { s, target: y })?;
                if z == y {
                    self.record(level, s, y, rank, StepAction::Solved)?;
                    return Ok(y);
                }
                self.lower_cost(s, y, z)?;
                y = z;
                self.record(level, s, y, rank, StepAction::Rank0Step)?;
            }
        }

        loop {
            if inst.neighbor(x, s, y, y) {
                self.record(level, s, y, rank, StepAction::Solved)?;
                return Ok(y);
            }
            let child = inst
                .gen_source(x, s, y)
                .ok_or(SearchError::MissingComponent {
                    component: "generated source",
                    s,
                    target: Some(y),
                })?;
            let child_rank = inst.rank(x, child);
            if child_rank >= rank {
                return Err(SearchError::RankViolation {
                    s,
                    rank,
                    child,
                    child_rank,
                });
            }
            if !inst.is_source(x, child) {
                return Err(SearchError::InvariantViolation {
                    point: s,
                    message: format!("generated source {child} for target {y} is not a source"),
                });
            }
            self.record(level, s, y, rank, StepAction::Descend { child, child_rank })?;
            let z = self.solve_row(child, level + 1)?;
            let u = inst
                .extract(x, s, y, z)
                .ok_or(SearchError::MissingComponent {
                    component: "extracted result",
                    s,
                    target: Some(y),
                })?;
            if !inst.neighbor(x, s, y, u) {
                return Err(SearchError::InvariantViolation {
                    point: s,
                    message: format!("extracted {u} from solution {z} is not a neighbor of {y}"),
                });
            }
            self.lower_cost(s, y, u)?;
            y = u;
            self.record(level, s, y, rank, StepAction::Extract)?;
        }
    }
}

/// Solves the instance at `x` by recursive rank descent.
///
/// Within each row the cost strictly falls and every descent strictly lowers
/// the rank, so a conforming instance always terminates; any broken condition
/// met along the way is reported instead.
pub fn solve_npls<N: NplsInstance + ?Sized>(
    inst: &N,
    x: u64,
    max_steps: u64,
) -> Result<(PointId, SearchTrace), SearchError> {
    let mut solver = Solver {
        inst,
        x,
        max_steps,
        trace: SearchTrace::new(),
    };
    let y = solver.solve_row(inst.initial_source(x), 0)?;
    Ok((y, solver.trace))
}

/// [`solve_npls`] with the default budget of `2^(d + 2)` steps.
pub fn solve_npls_default<N: NplsInstance + ?Sized>(
    inst: &N,
    x: u64,
) -> Result<(PointId, SearchTrace), SearchError> {
    solve_npls(inst, x, default_max_steps(inst.d_bits(x)))
}

/// Scans every point for the targets of `s` and returns the cheapest one
/// (lowest point on ties).
pub fn brute_force_npls<N: NplsInstance + ?Sized>(
    inst: &N,
    x: u64,
    s: PointId,
) -> Result<PointId, SearchError> {
    let size = enumerable(inst.d_bits(x), ENUMERATION_LIMIT_BITS)?;
    (0..size)
        .map(PointId)
        .filter(|&t| inst.is_target(x, s, t))
        .min_by_key(|&t| (inst.cost(x, t), t))
        .ok_or(SearchError::EmptyTargetSpace { s })
}

/// The PLS induced by the initial source of a rank-zero instance: its targets,
/// its initial target and its rank-zero neighborhood function.
pub struct Rank0Pls<N>(pub N);

impl<N: NplsInstance> PlsInstance for Rank0Pls<N> {
    fn d_bound(&self) -> &Polynomial {
        self.0.d_bound()
    }
    fn feasible(&self, x: u64, s: PointId) -> bool {
        self.0.is_target(x, self.0.initial_source(x), s)
    }
    fn initial(&self, x: u64) -> PointId {
        let src = self.0.initial_source(x);
        self.0.initial_target(x, src).unwrap_or(PointId(0))
    }
    fn neighbor(&self, x: u64, s: PointId) -> PointId {
        let src = self.0.initial_source(x);
        self.0.rank0_neighbor(x, src, s).unwrap_or(s)
    }
    fn cost(&self, x: u64, s: PointId) -> u64 {
        self.0.cost(x, s)
    }
}
