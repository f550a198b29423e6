//! Exhaustive checking of the nested-PLS and PLS conditions over the whole
//! (small) point space of an instance.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::point::PointId;

use super::error::SearchError;
use super::npls::NplsInstance;
use super::pls::{enumerable, PlsInstance};

/// The condition groups an nPLS instance must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// Sources and targets fit in `d(|x|)` bits.
    SizeBound,
    /// The generated source of every target is a source.
    GeneratedSource,
    /// The neighborhood relation only relates targets of a source.
    NeighborDomain,
    /// At rank zero the relation is the graph of the rank-zero function.
    RankZero,
    /// A target is a solution or its generated source has lower rank.
    RankDescent,
    /// Extracting from a child solution yields a neighbor.
    Extraction,
    /// The initial source is a source.
    InitialSource,
    /// The initial target of a source is one of its targets.
    InitialTarget,
    /// Proper neighbors are strictly cheaper.
    CostDescent,
}

impl Condition {
    pub const ALL: [Condition; 9] = [
        Condition::SizeBound,
        Condition::GeneratedSource,
        Condition::NeighborDomain,
        Condition::RankZero,
        Condition::RankDescent,
        Condition::Extraction,
        Condition::InitialSource,
        Condition::InitialTarget,
        Condition::CostDescent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Condition::SizeBound => "size-bound",
            Condition::GeneratedSource => "generated-source",
            Condition::NeighborDomain => "neighbor-domain",
            Condition::RankZero => "rank-zero",
            Condition::RankDescent => "rank-descent",
            Condition::Extraction => "extraction",
            Condition::InitialSource => "initial-source",
            Condition::InitialTarget => "initial-target",
            Condition::CostDescent => "cost-descent",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub condition: Condition,
    /// First failing tuple in lexicographic order, `None` when the check passes.
    pub counterexample: Option<Vec<PointId>>,
}

impl ConditionResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub results: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(ConditionResult::passed)
    }

    pub fn get(&self, condition: Condition) -> &ConditionResult {
        self.results
            .iter()
            .find(|r| r.condition == condition)
            .expect("report covers every condition")
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            match &r.counterexample {
                None => writeln!(f, "{:<17} pass", r.condition.name())?,
                Some(tuple) => {
                    let items: Vec<String> = tuple.iter().map(|p| p.to_string()).collect();
                    writeln!(f, "{:<17} FAIL ({})", r.condition.name(), items.join(", "))?
                }
            }
        }
        Ok(())
    }
}

/// Widest domain the condition checker accepts; the neighborhood checks are
/// cubic in the domain size.
pub const VERIFY_LIMIT_BITS: u32 = 10;

struct Failures([Option<Vec<PointId>>; 9]);

impl Failures {
    fn note(&mut self, c: Condition, tuple: &[PointId]) {
        let slot = &mut self.0[c as usize];
        if slot.is_none() {
            *slot = Some(tuple.to_vec());
        }
    }

    fn failed(&self, c: Condition) -> bool {
        self.0[c as usize].is_some()
    }
}

/// Checks every condition at input `x` by enumerating the point space.
pub fn verify_npls_conditions<N: NplsInstance + ?Sized>(
    inst: &N,
    x: u64,
) -> Result<ConditionReport, SearchError> {
    verify_npls_conditions_within(inst, x, VERIFY_LIMIT_BITS)
}

pub fn verify_npls_conditions_within<N: NplsInstance + ?Sized>(
    inst: &N,
    x: u64,
    limit_bits: u32,
) -> Result<ConditionReport, SearchError> {
    let d = inst.d_bits(x);
    let n = enumerable(d, limit_bits)?;
    let mut fails = Failures(Default::default());
    let pts = || (0..n).map(PointId);

    // Size bound, probed over a space one bit wider than the bound.
    let wide = 2 * n;
    'size: for s in (0..wide).map(PointId) {
        let s_in = s.0 < n;
        if !s_in && inst.is_source(x, s) {
            fails.note(Condition::SizeBound, &[s]);
            break;
        }
        for t in (0..wide).map(PointId) {
            if (!s_in || t.0 >= n) && inst.is_target(x, s, t) {
                fails.note(Condition::SizeBound, &[s, t]);
                break 'size;
            }
        }
    }

    let source: Vec<bool> = pts().map(|s| inst.is_source(x, s)).collect();
    let rank: Vec<u64> = pts().map(|s| inst.rank(x, s)).collect();
    let target: Vec<Vec<bool>> = pts()
        .map(|s| pts().map(|t| inst.is_target(x, s, t)).collect())
        .collect();

    let init = inst.initial_source(x);
    if !inst.is_source(x, init) {
        fails.note(Condition::InitialSource, &[init]);
    }

    for s in pts() {
        let si = s.0 as usize;
        if source[si] {
            match inst.initial_target(x, s) {
                Some(t) if inst.is_target(x, s, t) => {}
                _ => fails.note(Condition::InitialTarget, &[s]),
            }
        }
        for y in pts() {
            let yi = y.0 as usize;
            let y_target = target[si][yi];
            if y_target {
                match inst.gen_source(x, s, y) {
                    Some(g) if inst.is_source(x, g) => {}
                    _ => fails.note(Condition::GeneratedSource, &[s, y]),
                }
            }
            let rank0 = if rank[si] == 0 {
                Some(inst.rank0_neighbor(x, s, y))
            } else {
                None
            };
            for z in pts() {
                let rel = inst.neighbor(x, s, y, z);
                let zi = z.0 as usize;
                if rel && !(source[si] && y_target && target[si][zi]) {
                    fails.note(Condition::NeighborDomain, &[s, y, z]);
                }
                if let Some(f) = rank0 {
                    if rel != (y_target && f == Some(z)) {
                        fails.note(Condition::RankZero, &[s, y, z]);
                    }
                }
                if rel && y != z && inst.cost(x, y) <= inst.cost(x, z) {
                    fails.note(Condition::CostDescent, &[s, y, z]);
                }
            }
        }
    }

    // Solutions of every source, for the extraction check.
    let solutions: Vec<Vec<PointId>> = pts()
        .map(|s| pts().filter(|&z| inst.neighbor(x, s, z, z)).collect())
        .collect();

    for s in pts() {
        let si = s.0 as usize;
        if rank[si] == 0 {
            continue;
        }
        for y in pts() {
            let generated = inst.gen_source(x, s, y);
            if target[si][y.0 as usize] && !inst.neighbor(x, s, y, y) {
                let descends = generated.is_some_and(|g| inst.rank(x, g) < rank[si]);
                if !descends {
                    fails.note(Condition::RankDescent, &[s, y]);
                }
            }
            if fails.failed(Condition::Extraction) {
                continue;
            }
            let Some(g) = generated else { continue };
            let sols: &[PointId] = if g.0 < n {
                &solutions[g.0 as usize]
            } else {
                &[]
            };
            for &z in sols {
                let ok = inst
                    .extract(x, s, y, z)
                    .is_some_and(|u| inst.neighbor(x, s, y, u));
                if !ok {
                    fails.note(Condition::Extraction, &[s, y, z]);
                    break;
                }
            }
        }
    }

    Ok(ConditionReport {
        results: Condition::ALL
            .iter()
            .map(|&c| ConditionResult {
                condition: c,
                counterexample: fails.0[c as usize].clone(),
            })
            .collect(),
    })
}

/// The conditions of a plain PLS instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlsCondition {
    SizeBound,
    InitialFeasible,
    NeighborFeasible,
    CostDescent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlsConditionReport {
    pub results: Vec<(PlsCondition, Option<PointId>)>,
}

impl PlsConditionReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|(_, c)| c.is_none())
    }
}

/// Checks the four PLS conditions at `x` over the point space.
pub fn verify_pls_conditions<P: PlsInstance + ?Sized>(
    inst: &P,
    x: u64,
    limit_bits: u32,
) -> Result<PlsConditionReport, SearchError> {
    let n = enumerable(inst.d_bound().at_len_of(x), limit_bits)?;
    let mut size = None;
    let mut init = None;
    let mut closed = None;
    let mut descent = None;
    for s in (0..2 * n).map(PointId) {
        if !inst.feasible(x, s) {
            continue;
        }
        if s.0 >= n {
            size.get_or_insert(s);
            continue;
        }
        let t = inst.neighbor(x, s);
        if !inst.feasible(x, t) {
            closed.get_or_insert(s);
        }
        if t != s && inst.cost(x, t) >= inst.cost(x, s) {
            descent.get_or_insert(s);
        }
    }
    let i = inst.initial(x);
    if !inst.feasible(x, i) {
        init = Some(i);
    }
    Ok(PlsConditionReport {
        results: vec![
            (PlsCondition::SizeBound, size),
            (PlsCondition::InitialFeasible, init),
            (PlsCondition::NeighborFeasible, closed),
            (PlsCondition::CostDescent, descent),
        ],
    })
}
