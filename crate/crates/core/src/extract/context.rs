use std::collections::HashMap;

use crate::point::{bit_len, PointId, Polynomial};
use crate::proof::{validate, Derivation, Formula, KbIndex, NodePath, ProofClass, Rule};

use super::{ExtractError, ExtractionMode};

/// Per-node facts, computed once.
#[derive(Debug, Clone)]
pub(crate) struct NodeInfo {
    /// No literal of the sequent is true.
    pub target_condition: bool,
    /// An Sb1 node whose auxiliary literal is true.
    pub true_goal: bool,
    pub sb2: bool,
    /// Not the last upper sequent of a cut.
    pub left_upper: bool,
    /// Length of the longest prefix, itself included, that is a left upper.
    pub deepest_left_upper: Option<usize>,
    /// Sorted ids of the sequent's formulas up to renaming.
    pub seq_ids: Vec<u32>,
    pub principal: Option<u32>,
    pub witness: Option<u64>,
    /// Result of the rightmost-goal walk.
    pub goal: Option<usize>,
}

/// A validated derivation of a Σb1 sentence, ready for either compiler.
#[derive(Debug, Clone)]
pub struct ExtractionContext {
    derivation: Derivation,
    mode: ExtractionMode,
    d_max: u64,
    end: Formula,
    paths: Vec<NodePath>,
    index: HashMap<NodePath, usize>,
    kb: Vec<u64>,
    pub(crate) info: Vec<NodeInfo>,
    d_bound: Polynomial,
}

impl ExtractionContext {
    /// Checks that `d` suits `mode`, validates it and indexes its nodes.
    pub fn new(derivation: Derivation, mode: ExtractionMode) -> Result<Self, ExtractError> {
        check_mode(&derivation, mode)?;
        let class = match mode {
            ExtractionMode::Pls => ProofClass::Sigma1,
            ExtractionMode::Npls => ProofClass::Sigma2,
        };
        let report = validate(&derivation, class);
        if !report.is_valid() {
            return Err(ExtractError::ValidationFailed(report));
        }
        let end = match derivation.end_formula() {
            Some(f @ Formula::ExLit { bound, .. }) if bound.eval(derivation.end_x).is_ok() => {
                f.clone()
            }
            _ => return Err(ExtractError::EndFormula),
        };
        let x = derivation.end_x;
        let paths: Vec<NodePath> = derivation.paths().cloned().collect();
        let index: HashMap<NodePath, usize> = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let kb_index = KbIndex::new(&derivation);
        let kb = paths
            .iter()
            .map(|p| kb_index.get(p).expect("every node is indexed"))
            .collect();

        let mut ids: HashMap<Formula, u32> = HashMap::new();
        let mut id_of = |f: &Formula| {
            let next = ids.len() as u32;
            *ids.entry(f.canonical()).or_insert(next)
        };
        let mut info: Vec<NodeInfo> = Vec::with_capacity(paths.len());
        for p in &paths {
            let node = derivation.node(p).expect("listed");
            let target_condition = !node
                .sequent
                .iter()
                .any(|f| matches!(f, Formula::Lit(l) if l.eval(x) == Ok(true)));
            let witness = node.rule.witness().and_then(|w| w.eval(x).ok());
            let true_goal = match &node.rule {
                Rule::Sb1 { witness, .. } => node
                    .principal_formula()
                    .and_then(|f| f.instance(witness))
                    .is_some_and(|l| l.eval(x) == Ok(true)),
                _ => false,
            };
            let left_upper = match p.parent() {
                Some(q) => {
                    matches!(derivation.node(&q).map(|n| &n.rule), Some(Rule::Cut { .. }))
                        && derivation.contains(&q.child(p.last().expect("non-root") + 1))
                }
                None => false,
            };
            let deepest_left_upper = if left_upper {
                Some(p.len())
            } else {
                p.parent().and_then(|q| info[index[&q]].deepest_left_upper)
            };
            let mut seq_ids: Vec<u32> = node.sequent.iter().map(&mut id_of).collect();
            seq_ids.sort_unstable();
            info.push(NodeInfo {
                target_condition,
                true_goal,
                sb2: matches!(node.rule, Rule::Sb2 { .. }),
                left_upper,
                deepest_left_upper,
                seq_ids,
                principal: node.principal_formula().map(&mut id_of),
                witness,
                goal: None,
            });
        }
        // children follow their parent in pre-order
        for i in (0..paths.len()).rev() {
            let n = &info[i];
            let goal = if n.true_goal || (mode == ExtractionMode::Npls && n.sb2) {
                Some(i)
            } else {
                derivation
                    .children(&paths[i])
                    .last()
                    .and_then(|c| info[index[c]].goal)
            };
            info[i].goal = goal;
        }
        let d = u64::from(bit_len(paths.len().saturating_sub(1) as u64)).max(1);
        Ok(ExtractionContext {
            d_max: derivation.depth() as u64 + 1,
            derivation,
            mode,
            end,
            paths,
            index,
            kb,
            info,
            d_bound: Polynomial::constant(d),
        })
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    pub fn mode(&self) -> ExtractionMode {
        self.mode
    }

    /// One more than the greatest node depth.
    pub fn d_max(&self) -> u64 {
        self.d_max
    }

    pub fn end_formula(&self) -> &Formula {
        &self.end
    }

    pub fn x(&self) -> u64 {
        self.derivation.end_x
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Node paths in pre-order; a node's point is its position here.
    pub fn paths(&self) -> &[NodePath] {
        &self.paths
    }

    pub fn point(&self, p: &NodePath) -> Option<PointId> {
        self.index.get(p).map(|&i| PointId(i as u64))
    }

    pub fn path_of(&self, s: PointId) -> Option<&NodePath> {
        self.paths.get(usize::try_from(s.0).ok()?)
    }

    pub(crate) fn d_bound(&self) -> &Polynomial {
        &self.d_bound
    }

    pub(crate) fn idx(&self, p: &NodePath) -> Result<usize, ExtractError> {
        self.index
            .get(p)
            .copied()
            .ok_or_else(|| ExtractError::NoSuchNode(p.clone()))
    }

    pub(crate) fn idx_of_point(&self, s: PointId) -> Option<usize> {
        usize::try_from(s.0).ok().filter(|&i| i < self.paths.len())
    }

    pub(crate) fn try_idx(&self, p: &NodePath) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub(crate) fn path(&self, i: usize) -> &NodePath {
        &self.paths[i]
    }

    pub(crate) fn kb(&self, i: usize) -> u64 {
        self.kb[i]
    }

    /// Whether the formula with id `f` occurs in the sequent of node `i`.
    pub(crate) fn seq_has(&self, i: usize, f: u32) -> bool {
        self.info[i].seq_ids.binary_search(&f).is_ok()
    }

    /// The principal formula of node `i`.
    pub(crate) fn principal_formula(&self, i: usize) -> Option<&Formula> {
        self.derivation.node(&self.paths[i])?.principal_formula()
    }

    pub(crate) fn rightmost_goal_idx(&self, i: usize) -> Result<usize, ExtractError> {
        self.info[i]
            .goal
            .ok_or_else(|| ExtractError::GoalNotFound(self.paths[i].clone()))
    }

    /// Value of the witnessing term at node `i`.
    pub(crate) fn witness_at(&self, i: usize) -> Result<u64, ExtractError> {
        self.info[i]
            .witness
            .ok_or_else(|| ExtractError::NoWitness(self.paths[i].clone()))
    }

    /// `parent(λ)*⟨n⟩`, where `λ` is the vanishing point of the principal
    /// formula of node `t` and `n` its witness value. `None` when `λ` is the root.
    pub(crate) fn cut_upper_for(&self, t: usize) -> Result<Option<usize>, ExtractError> {
        let tau = &self.paths[t];
        let a = self
            .principal_formula(t)
            .ok_or_else(|| ExtractError::NoWitness(tau.clone()))?;
        let lambda = self.derivation.vanishing_point(tau, a)?;
        let Some(parent) = lambda.parent() else {
            return Ok(None);
        };
        let n = self.witness_at(t)?;
        let kappa =
            parent.child(u32::try_from(n).map_err(|_| ExtractError::NoSuchNode(parent.clone()))?);
        self.idx(&kappa).map(Some)
    }

    /// `R(x, n)` for the end-formula `∃y<t R(x, y)`.
    pub fn witness_holds(&self, n: u64) -> bool {
        self.end
            .instance(&crate::proof::Term::num(n))
            .is_some_and(|l| l.eval(self.x()) == Ok(true))
    }
}

fn check_mode(d: &Derivation, mode: ExtractionMode) -> Result<(), ExtractError> {
    for (p, node) in d.iter() {
        let reason = match (mode, &node.rule) {
            (ExtractionMode::Pls, Rule::Sb2 { .. }) => "sb2 step",
            (
                ExtractionMode::Pls,
                Rule::Cut {
                    formula: Formula::ExAll { .. },
                },
            ) => "Σb2 cut",
            (
                ExtractionMode::Npls,
                Rule::Cut {
                    formula: Formula::ExLit { .. },
                },
            ) => "Σb1 cut",
            _ => continue,
        };
        return Err(ExtractError::Mode {
            mode,
            path: p.clone(),
            reason,
        });
    }
    Ok(())
}
