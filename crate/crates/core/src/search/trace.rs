//! Step-by-step records of a solver run.
//!
//! A run is a set of nested rows. Each row searches the target space of one
//! source: it opens with [`StepAction::InitTarget`], moves to cheaper targets
//! with [`StepAction::Rank0Step`] or [`StepAction::Extract`], and closes with
//! [`StepAction::Solved`]. A [`StepAction::Descend`] record opens a child row
//! one level deeper, whose solution feeds the next `Extract` of the parent.

use serde::{Deserialize, Serialize};

use crate::point::PointId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum StepAction {
    InitTarget,
    Rank0Step,
    Descend { child: PointId, child_rank: u64 },
    Extract,
    Solved,
}

impl StepAction {
    /// True for records that move the row to a new target.
    pub fn moves_target(&self) -> bool {
        matches!(
            self,
            StepAction::InitTarget | StepAction::Rank0Step | StepAction::Extract
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub level: usize,
    pub source: PointId,
    pub target: PointId,
    pub rank: u64,
    pub cost: u64,
    pub action: StepAction,
}

/// The targets visited by one row, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub level: usize,
    pub source: PointId,
    pub rank: u64,
    pub targets: Vec<(PointId, u64)>,
    pub solved: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub steps: Vec<TraceStep>,
}

impl SearchTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, step: TraceStep) {
        self.steps.push(step);
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// Targets of the target-moving records, in trace order.
    pub fn targets(&self) -> Vec<PointId> {
        self.steps
            .iter()
            .filter(|s| s.action.moves_target())
            .map(|s| s.target)
            .collect()
    }

    /// Splits the trace into rows, ordered by the position of their opening record.
    pub fn rows(&self) -> Vec<Row> {
        let mut rows: Vec<Row> = Vec::new();
        // indices into `rows` of the currently open row at each level
        let mut open: Vec<usize> = Vec::new();
        for step in &self.steps {
            if step.action == StepAction::InitTarget {
                open.truncate(step.level);
                rows.push(Row {
                    level: step.level,
                    source: step.source,
                    rank: step.rank,
                    targets: Vec::new(),
                    solved: false,
                });
                open.push(rows.len() - 1);
            }
            let Some(&idx) = open.get(step.level) else {
                continue;
            };
            let row = &mut rows[idx];
            if step.action.moves_target() {
                row.targets.push((step.target, step.cost));
            } else if step.action == StepAction::Solved {
                row.solved = true;
            }
        }
        rows
    }

    /// Checks that costs strictly fall inside every row and that every descent
    /// lowers the rank.
    pub fn check_monotone(&self) -> Result<(), String> {
        for row in self.rows() {
            for pair in row.targets.windows(2) {
                if pair[1].1 >= pair[0].1 {
                    return Err(format!(
                        "row {} (level {}): cost {} -> {} at targets {} -> {}",
                        row.source, row.level, pair[0].1, pair[1].1, pair[0].0, pair[1].0
                    ));
                }
            }
        }
        for step in &self.steps {
            if let StepAction::Descend { child, child_rank } = step.action {
                if child_rank >= step.rank {
                    return Err(format!(
                        "descent {} -> {} keeps rank {} -> {}",
                        step.source, child, step.rank, child_rank
                    ));
                }
            }
        }
        Ok(())
    }
}
