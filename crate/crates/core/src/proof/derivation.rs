use std::collections::{BTreeMap, HashMap};
use std::ops::Bound;

use thiserror::Error;

use crate::point::Polynomial;

use super::formula::{sequent_contains, Formula};
use super::path::NodePath;
use super::term::{EvalError, Term};

/// The inference that derives a node from its upper sequents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// The literal at `index` is true.
    Initial { index: usize },
    /// Σb1 introduction for the formula at `principal`.
    Sb1 { principal: usize, witness: Term },
    /// Σb2 introduction for the formula at `principal`.
    Sb2 { principal: usize, witness: Term },
    /// Cut on `∃v<s0. B`, with `s0 + 1` upper sequents.
    Cut { formula: Formula },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Initial { .. } => "initial",
            Rule::Sb1 { .. } => "sb1",
            Rule::Sb2 { .. } => "sb2",
            Rule::Cut { .. } => "cut",
        }
    }

    pub fn witness(&self) -> Option<&Term> {
        match self {
            Rule::Sb1 { witness, .. } | Rule::Sb2 { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn principal(&self) -> Option<usize> {
        match self {
            Rule::Sb1 { principal, .. } | Rule::Sb2 { principal, .. } => Some(*principal),
            _ => None,
        }
    }

    /// Replaces free occurrences of `var` by the closed term `by`.
    pub fn substitute(&self, var: &str, by: &Term) -> Rule {
        match self {
            Rule::Initial { index } => Rule::Initial { index: *index },
            Rule::Sb1 { principal, witness } => Rule::Sb1 {
                principal: *principal,
                witness: witness.substitute(var, by),
            },
            Rule::Sb2 { principal, witness } => Rule::Sb2 {
                principal: *principal,
                witness: witness.substitute(var, by),
            },
            Rule::Cut { formula } => Rule::Cut {
                formula: formula.substitute(var, by),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationNode {
    pub sequent: Vec<Formula>,
    pub rule: Rule,
}

impl DerivationNode {
    pub fn new(sequent: Vec<Formula>, rule: Rule) -> Self {
        DerivationNode { sequent, rule }
    }

    /// The principal formula of an Sb1/Sb2 node.
    pub fn principal_formula(&self) -> Option<&Formula> {
        self.sequent.get(self.rule.principal()?)
    }
}

/// A derivation written as a nested tree, for building by hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub sequent: Vec<Formula>,
    pub rule: Rule,
    pub children: Vec<ProofTree>,
}

impl ProofTree {
    pub fn new(sequent: Vec<Formula>, rule: Rule, children: Vec<ProofTree>) -> Self {
        ProofTree {
            sequent,
            rule,
            children,
        }
    }

    pub fn leaf(sequent: Vec<Formula>, index: usize) -> Self {
        ProofTree::new(sequent, Rule::Initial { index }, Vec::new())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("no node at {0}")]
    NoSuchNode(NodePath),
    #[error("{0} has no upper sequents")]
    LeafNode(NodePath),
    #[error("{path} has no principal formula")]
    NoPrincipal { path: NodePath },
    #[error("formula does not occur in the sequent at {0}")]
    FormulaAbsent(NodePath),
    #[error("at {path}: {source}")]
    Eval {
        path: NodePath,
        #[source]
        source: EvalError,
    },
}

/// A derivation: sequents and rules keyed by node path, with the parameter
/// value it was instantiated at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub end_x: u64,
    pub depth_bound: Option<Polynomial>,
    nodes: BTreeMap<NodePath, DerivationNode>,
}

impl Derivation {
    pub fn new(end_x: u64, nodes: BTreeMap<NodePath, DerivationNode>) -> Self {
        Derivation {
            end_x,
            depth_bound: None,
            nodes,
        }
    }

    pub fn from_tree(end_x: u64, tree: ProofTree) -> Self {
        let mut nodes = BTreeMap::new();
        let mut stack = vec![(NodePath::root(), tree)];
        while let Some((path, t)) = stack.pop() {
            for (i, c) in t.children.into_iter().enumerate() {
                stack.push((path.child(i as u32), c));
            }
            nodes.insert(path, DerivationNode::new(t.sequent, t.rule));
        }
        Derivation::new(end_x, nodes)
    }

    pub fn with_depth_bound(mut self, bound: Polynomial) -> Self {
        self.depth_bound = Some(bound);
        self
    }

    pub fn to_tree(&self) -> Option<ProofTree> {
        fn build(d: &Derivation, p: &NodePath) -> Option<ProofTree> {
            let n = d.node(p)?;
            let children = d
                .children(p)
                .iter()
                .map(|c| build(d, c))
                .collect::<Option<Vec<_>>>()?;
            Some(ProofTree::new(n.sequent.clone(), n.rule.clone(), children))
        }
        build(self, &NodePath::root())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, p: &NodePath) -> Option<&DerivationNode> {
        self.nodes.get(p)
    }

    pub fn node_mut(&mut self, p: &NodePath) -> Option<&mut DerivationNode> {
        self.nodes.get_mut(p)
    }

    pub fn insert(&mut self, p: NodePath, node: DerivationNode) -> Option<DerivationNode> {
        self.nodes.insert(p, node)
    }

    pub fn remove(&mut self, p: &NodePath) -> Option<DerivationNode> {
        self.nodes.remove(p)
    }

    pub fn try_node(&self, p: &NodePath) -> Result<&DerivationNode, ProofError> {
        self.node(p)
            .ok_or_else(|| ProofError::NoSuchNode(p.clone()))
    }

    pub fn contains(&self, p: &NodePath) -> bool {
        self.nodes.contains_key(p)
    }

    /// Nodes in pre-order.
    pub fn iter(&self) -> impl Iterator<Item = (&NodePath, &DerivationNode)> {
        self.nodes.iter()
    }

    pub fn paths(&self) -> impl Iterator<Item = &NodePath> {
        self.nodes.keys()
    }

    /// Immediate children present in the map, by index.
    pub fn children(&self, p: &NodePath) -> Vec<NodePath> {
        let lo = p.child(0);
        let depth = p.len() + 1;
        self.nodes
            .range((Bound::Included(lo), Bound::Unbounded))
            .map(|(k, _)| k)
            .take_while(|k| p.is_proper_prefix_of(k))
            .filter(|k| k.len() == depth)
            .cloned()
            .collect()
    }

    /// Length of the longest path.
    pub fn depth(&self) -> usize {
        self.nodes.keys().map(NodePath::len).max().unwrap_or(0)
    }

    /// The single formula of the root sequent.
    pub fn end_formula(&self) -> Option<&Formula> {
        match self.node(&NodePath::root())?.sequent.as_slice() {
            [f] => Some(f),
            _ => None,
        }
    }

    /// Replaces free occurrences of `var` in every node.
    pub fn substitute(&self, var: &str, by: &Term) -> Derivation {
        Derivation {
            end_x: self.end_x,
            depth_bound: self.depth_bound.clone(),
            nodes: self
                .nodes
                .iter()
                .map(|(p, n)| {
                    (
                        p.clone(),
                        DerivationNode::new(
                            n.sequent.iter().map(|f| f.substitute(var, by)).collect(),
                            n.rule.substitute(var, by),
                        ),
                    )
                })
                .collect(),
        }
    }

    /// The upper sequent with the largest index.
    pub fn rightmost_child(&self, p: &NodePath) -> Result<NodePath, ProofError> {
        self.try_node(p)?;
        self.children(p)
            .pop()
            .ok_or_else(|| ProofError::LeafNode(p.clone()))
    }

    /// The lowest node on the path from the root to `tau` whose sequent,
    /// like every sequent between it and `tau`, contains `a`.
    pub fn vanishing_point(&self, tau: &NodePath, a: &Formula) -> Result<NodePath, ProofError> {
        if !sequent_contains(&self.try_node(tau)?.sequent, a) {
            return Err(ProofError::FormulaAbsent(tau.clone()));
        }
        let mut lam = tau.clone();
        while let Some(parent) = lam.parent() {
            match self.node(&parent) {
                Some(n) if sequent_contains(&n.sequent, a) => lam = parent,
                _ => break,
            }
        }
        Ok(lam)
    }
}

/// Post-order numbering of the nodes: children before parents, left
/// subtrees before right ones.
#[derive(Debug, Clone)]
pub struct KbIndex {
    order: Vec<NodePath>,
    index: HashMap<NodePath, u64>,
}

impl KbIndex {
    pub fn new(d: &Derivation) -> Self {
        let mut order = Vec::with_capacity(d.len());
        if d.contains(&NodePath::root()) {
            // (node, children already pushed)
            let mut stack = vec![(NodePath::root(), false)];
            while let Some((p, expanded)) = stack.pop() {
                if expanded {
                    order.push(p);
                    continue;
                }
                let children = d.children(&p);
                stack.push((p, true));
                stack.extend(children.into_iter().rev().map(|c| (c, false)));
            }
        }
        let index = order
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u64))
            .collect();
        KbIndex { order, index }
    }

    pub fn get(&self, p: &NodePath) -> Option<u64> {
        self.index.get(p).copied()
    }

    pub fn path(&self, kb: u64) -> Option<&NodePath> {
        self.order.get(usize::try_from(kb).ok()?)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Paths in post-order.
    pub fn order(&self) -> &[NodePath] {
        &self.order
    }
}

/// Post-order index of `sigma`.
pub fn kb_index(d: &Derivation, sigma: &NodePath) -> Result<u64, ProofError> {
    KbIndex::new(d)
        .get(sigma)
        .ok_or_else(|| ProofError::NoSuchNode(sigma.clone()))
}

/// See [`Derivation::rightmost_child`].
pub fn rightmost_child(d: &Derivation, sigma: &NodePath) -> Result<NodePath, ProofError> {
    d.rightmost_child(sigma)
}

/// See [`Derivation::vanishing_point`].
pub fn vanishing_point(
    d: &Derivation,
    tau: &NodePath,
    a: &Formula,
) -> Result<NodePath, ProofError> {
    d.vanishing_point(tau, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::formula::Literal;

    fn lit(a: u64, b: u64) -> Formula {
        Literal::eq(Term::num(a), Term::num(b)).into()
    }

    /// Root with children 0 (leaf) and 1 (with two leaves).
    fn shape() -> Derivation {
        let l = |s: Vec<Formula>| ProofTree::leaf(s, 0);
        Derivation::from_tree(
            0,
            ProofTree::new(
                vec![lit(0, 0)],
                Rule::Cut { formula: lit(1, 1) },
                vec![
                    l(vec![lit(0, 0)]),
                    ProofTree::new(
                        vec![lit(0, 0), lit(2, 2)],
                        Rule::Cut { formula: lit(1, 1) },
                        vec![
                            l(vec![lit(0, 0), lit(2, 2)]),
                            l(vec![lit(0, 0), lit(2, 2), lit(3, 3)]),
                        ],
                    ),
                ],
            ),
        )
    }

    #[test]
    fn post_order() {
        let d = shape();
        let kb = KbIndex::new(&d);
        let expect = [vec![0], vec![1, 0], vec![1, 1], vec![1], vec![]];
        for (i, p) in expect.iter().enumerate() {
            assert_eq!(kb.get(&NodePath(p.clone())), Some(i as u64));
        }
        assert_eq!(
            kb_index(&d, &NodePath::from([7])),
            Err(ProofError::NoSuchNode(NodePath::from([7])))
        );
    }

    #[test]
    fn children_and_rightmost() {
        let d = shape();
        assert_eq!(
            d.children(&NodePath::root()),
            vec![NodePath::from([0]), NodePath::from([1])]
        );
        assert_eq!(
            d.rightmost_child(&NodePath::from([1])).unwrap(),
            NodePath::from([1, 1])
        );
        assert_eq!(
            d.rightmost_child(&NodePath::from([0])),
            Err(ProofError::LeafNode(NodePath::from([0])))
        );
        assert_eq!(d.depth(), 2);
        assert_eq!(d.to_tree().map(|t| Derivation::from_tree(0, t)), Some(d));
    }

    #[test]
    fn vanishing_points() {
        let d = shape();
        assert_eq!(
            d.vanishing_point(&NodePath::from([1, 1]), &lit(2, 2))
                .unwrap(),
            NodePath::from([1])
        );
        assert_eq!(
            d.vanishing_point(&NodePath::from([1, 1]), &lit(3, 3))
                .unwrap(),
            NodePath::from([1, 1])
        );
        assert_eq!(
            d.vanishing_point(&NodePath::from([1, 1]), &lit(0, 0))
                .unwrap(),
            NodePath::root()
        );
        assert_eq!(
            d.vanishing_point(&NodePath::from([0]), &lit(3, 3)),
            Err(ProofError::FormulaAbsent(NodePath::from([0])))
        );
    }
}
