//! Polynomial local search: feasible points, an initial point, a neighborhood
//! and a cost that the neighborhood must lower until it reaches a fixed point.

use crate::point::{PointId, Polynomial};

use super::error::SearchError;
use super::trace::{SearchTrace, StepAction, TraceStep};

/// Widest point space the brute-force scans will enumerate.
pub const ENUMERATION_LIMIT_BITS: u32 = 24;

/// Checks that a `bits`-wide space can be scanned and returns its size.
pub fn enumerable(bits: u64, limit: u32) -> Result<u64, SearchError> {
    if bits > u64::from(limit) {
        return Err(SearchError::DomainTooLarge { bits, limit });
    }
    Ok(1u64 << bits)
}

/// Step budget used when the caller gives none: `2^(d + 2)`.
pub fn default_max_steps(d_bits: u64) -> u64 {
    1u64.checked_shl((d_bits + 2).min(63) as u32)
        .unwrap_or(u64::MAX)
}

/// A PLS problem with a neighborhood function.
pub trait PlsInstance {
    fn d_bound(&self) -> &Polynomial;
    fn feasible(&self, x: u64, s: PointId) -> bool;
    fn initial(&self, x: u64) -> PointId;
    fn neighbor(&self, x: u64, s: PointId) -> PointId;
    fn cost(&self, x: u64, s: PointId) -> u64;
}

type Pred2 = Box<dyn Fn(u64, PointId) -> bool + Send + Sync>;
type Fun1 = Box<dyn Fn(u64) -> PointId + Send + Sync>;
type Fun2 = Box<dyn Fn(u64, PointId) -> PointId + Send + Sync>;
type Cost2 = Box<dyn Fn(u64, PointId) -> u64 + Send + Sync>;

/// A [`PlsInstance`] assembled from closures.
pub struct FnPls {
    d_bound: Polynomial,
    feasible: Pred2,
    initial: Fun1,
    neighbor: Fun2,
    cost: Cost2,
}

impl FnPls {
    pub fn new(
        d_bound: Polynomial,
        feasible: impl Fn(u64, PointId) -> bool + Send + Sync + 'static,
        initial: impl Fn(u64) -> PointId + Send + Sync + 'static,
        neighbor: impl Fn(u64, PointId) -> PointId + Send + Sync + 'static,
        cost: impl Fn(u64, PointId) -> u64 + Send + Sync + 'static,
    ) -> Self {
        FnPls {
            d_bound,
            feasible: Box::new(feasible),
            initial: Box::new(initial),
            neighbor: Box::new(neighbor),
            cost: Box::new(cost),
        }
    }
}

impl PlsInstance for FnPls {
    fn d_bound(&self) -> &Polynomial {
        &self.d_bound
    }
    fn feasible(&self, x: u64, s: PointId) -> bool {
        (self.feasible)(x, s)
    }
    fn initial(&self, x: u64) -> PointId {
        (self.initial)(x)
    }
    fn neighbor(&self, x: u64, s: PointId) -> PointId {
        (self.neighbor)(x, s)
    }
    fn cost(&self, x: u64, s: PointId) -> u64 {
        (self.cost)(x, s)
    }
}

/// Follows the neighborhood function from the initial point to a fixed point.
///
/// The trace is a single row: one record per visited point, the last of which
/// is the returned solution.
pub fn solve_pls<P: PlsInstance + ?Sized>(
    inst: &P,
    x: u64,
    max_steps: u64,
) -> Result<(PointId, SearchTrace), SearchError> {
    let row = inst.initial(x);
    let mut s = row;
    if !inst.feasible(x, s) {
        return Err(SearchError::InvariantViolation {
            point: s,
            message: "initial point is not feasible".into(),
        });
    }
    let mut trace = SearchTrace::new();
    let mut cost = inst.cost(x, s);
    trace.push(TraceStep {
        level: 0,
        source: row,
        target: s,
        rank: 0,
        cost,
        action: StepAction::InitTarget,
    });
    loop {
        let next = inst.neighbor(x, s);
        if next == s {
            return Ok((s, trace));
        }
        if trace.step_count() as u64 >= max_steps {
            return Err(SearchError::StepBudgetExceeded { budget: max_steps });
        }
        if !inst.feasible(x, next) {
            return Err(SearchError::InvariantViolation {
                point: s,
                message: format!("neighbor {next} is not feasible"),
            });
        }
        let next_cost = inst.cost(x, next);
        if next_cost >= cost {
            return Err(SearchError::InvariantViolation {
                point: s,
                message: format!("neighbor {next} does not lower the cost ({cost} -> {next_cost})"),
            });
        }
        s = next;
        cost = next_cost;
        trace.push(TraceStep {
            level: 0,
            source: row,
            target: s,
            rank: 0,
            cost,
            action: StepAction::Rank0Step,
        });
    }
}

/// A PLS problem whose neighborhood is a relation with polynomially many
/// successors per point.
pub trait PredicatePls {
    fn d_bound(&self) -> &Polynomial;
    /// Bound on the number of feasible neighbors of a feasible point.
    fn p_bound(&self) -> &Polynomial;
    fn feasible(&self, x: u64, s: PointId) -> bool;
    fn initial(&self, x: u64) -> PointId;
    fn neighbor_rel(&self, x: u64, s: PointId, t: PointId) -> bool;
    fn cost(&self, x: u64, s: PointId) -> u64;

    /// Points that may be neighbors of `s`. The default scans the whole space;
    /// implementations with adjacency lists should override it.
    fn neighbor_candidates(&self, x: u64, s: PointId) -> Result<Vec<PointId>, SearchError> {
        let size = enumerable(self.d_bound().at_len_of(x), ENUMERATION_LIMIT_BITS)?;
        Ok((0..size)
            .map(PointId)
            .filter(|&t| self.neighbor_rel(x, s, t))
            .collect())
    }
}

/// Feasible neighbors of `s`, checked against the cardinality bound.
pub fn neighbor_set<P: PredicatePls + ?Sized>(
    inst: &P,
    x: u64,
    s: PointId,
) -> Result<Vec<PointId>, SearchError> {
    let mut set: Vec<PointId> = inst
        .neighbor_candidates(x, s)?
        .into_iter()
        .filter(|&t| inst.feasible(x, t) && inst.neighbor_rel(x, s, t))
        .collect();
    set.sort_unstable();
    set.dedup();
    let bound = inst.p_bound().at_len_of(x);
    if set.len() as u64 > bound {
        return Err(SearchError::CardinalityBoundViolated {
            point: s,
            count: set.len() as u64,
            bound,
        });
    }
    Ok(set)
}

/// True iff no feasible neighbor of `s` is cheaper than `s`.
pub fn local_minimum_check<P: PredicatePls + ?Sized>(
    inst: &P,
    x: u64,
    s: PointId,
) -> Result<bool, SearchError> {
    let c = inst.cost(x, s);
    Ok(neighbor_set(inst, x, s)?
        .into_iter()
        .all(|t| inst.cost(x, t) >= c))
}

/// The relation `N'`: proper edges of the original relation, plus a self-loop
/// exactly at local minima. A point is a solution iff it is its own neighbor.
pub struct SelfLoopPls<P> {
    inner: P,
    p_bound: Polynomial,
}

pub fn derive_self_loop_predicate<P: PredicatePls>(inst: P) -> SelfLoopPls<P> {
    let mut p_bound = inst.p_bound().clone();
    if p_bound.0.is_empty() {
        p_bound.0.push(0);
    }
    p_bound.0[0] = p_bound.0[0].saturating_add(1);
    SelfLoopPls {
        inner: inst,
        p_bound,
    }
}

impl<P> SelfLoopPls<P> {
    pub fn inner(&self) -> &P {
        &self.inner
    }
}

impl<P: PredicatePls> PredicatePls for SelfLoopPls<P> {
    fn d_bound(&self) -> &Polynomial {
        self.inner.d_bound()
    }
    fn p_bound(&self) -> &Polynomial {
        &self.p_bound
    }
    fn feasible(&self, x: u64, s: PointId) -> bool {
        self.inner.feasible(x, s)
    }
    fn initial(&self, x: u64) -> PointId {
        self.inner.initial(x)
    }
    /// A cardinality failure of the inner relation counts as "not a local minimum".
    fn neighbor_rel(&self, x: u64, s: PointId, t: PointId) -> bool {
        if s != t {
            self.inner.neighbor_rel(x, s, t)
        } else {
            self.inner.feasible(x, s) && local_minimum_check(&self.inner, x, s).unwrap_or(false)
        }
    }
    fn cost(&self, x: u64, s: PointId) -> u64 {
        self.inner.cost(x, s)
    }
    fn neighbor_candidates(&self, x: u64, s: PointId) -> Result<Vec<PointId>, SearchError> {
        let mut c = self.inner.neighbor_candidates(x, s)?;
        c.push(s);
        Ok(c)
    }
}

/// Turns a neighborhood relation into a function by moving to the cheapest
/// strictly cheaper neighbor (lowest point on ties), or staying put.
pub struct SteepestDescent<P>(pub P);

impl<P: PredicatePls> SteepestDescent<P> {
    fn step(&self, x: u64, s: PointId) -> Result<PointId, SearchError> {
        let c = self.0.cost(x, s);
        Ok(neighbor_set(&self.0, x, s)?
            .into_iter()
            .filter(|&t| t != s)
            .map(|t| (self.0.cost(x, t), t))
            .filter(|&(ct, _)| ct < c)
            .min()
            .map_or(s, |(_, t)| t))
    }
}

impl<P: PredicatePls> PlsInstance for SteepestDescent<P> {
    fn d_bound(&self) -> &Polynomial {
        self.0.d_bound()
    }
    fn feasible(&self, x: u64, s: PointId) -> bool {
        self.0.feasible(x, s)
    }
    fn initial(&self, x: u64) -> PointId {
        self.0.initial(x)
    }
    /// Cardinality failures leave the point in place.
    fn neighbor(&self, x: u64, s: PointId) -> PointId {
        self.step(x, s).unwrap_or(s)
    }
    fn cost(&self, x: u64, s: PointId) -> u64 {
        self.0.cost(x, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn countdown() -> FnPls {
        FnPls::new(
            Polynomial::constant(3),
            |_, s| s.0 < 8,
            |_| PointId(7),
            |_, s| PointId(s.0.saturating_sub(1)),
            |_, s| s.0,
        )
    }

    #[test]
    fn countdown_takes_eight_points() {
        let (sol, trace) = solve_pls(&countdown(), 0, 64).unwrap();
        assert_eq!(sol, PointId(0));
        assert_eq!(trace.step_count(), 8);
        let expected: Vec<PointId> = (0..8).rev().map(PointId).collect();
        assert_eq!(trace.targets(), expected);
        trace.check_monotone().unwrap();
    }

    #[test]
    fn fixed_initial_point_is_one_step() {
        let inst = FnPls::new(
            Polynomial::constant(2),
            |_, _| true,
            |_| PointId(2),
            |_, s| s,
            |_, _| 0,
        );
        let (sol, trace) = solve_pls(&inst, 5, 1).unwrap();
        assert_eq!(sol, PointId(2));
        assert_eq!(trace.step_count(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            solve_pls(&countdown(), 0, 7).unwrap_err(),
            SearchError::StepBudgetExceeded { budget: 7 }
        );
        assert!(solve_pls(&countdown(), 0, 8).is_ok());
    }

    #[test]
    fn non_decreasing_step_is_reported() {
        let inst = FnPls::new(
            Polynomial::constant(2),
            |_, _| true,
            |_| PointId(0),
            |_, s| PointId((s.0 + 1) % 4),
            |_, _| 1,
        );
        assert!(matches!(
            solve_pls(&inst, 0, 100),
            Err(SearchError::InvariantViolation { .. })
        ));
    }

    #[test]
    fn leaving_the_feasible_set_is_reported() {
        let inst = FnPls::new(
            Polynomial::constant(2),
            |_, s| s.0 > 0,
            |_| PointId(2),
            |_, s| PointId(s.0 - 1),
            |_, s| s.0,
        );
        let err = solve_pls(&inst, 0, 100).unwrap_err();
        assert!(matches!(
            err,
            SearchError::InvariantViolation {
                point: PointId(1),
                ..
            }
        ));
    }

    #[test]
    fn default_budget() {
        assert_eq!(default_max_steps(3), 32);
        assert_eq!(default_max_steps(70), 1 << 63);
    }
}
