use serde::{Deserialize, Serialize};

use crate::point::{bit_len, PointId, Polynomial};
use crate::search::{PredicatePls, SearchError};

use super::GraphError;

/// A finite digraph with a cost on each node. Conforming graphs only have
/// edges to strictly cheaper nodes, apart from self-loops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostedDigraph {
    pub nodes: usize,
    pub costs: Vec<u64>,
    pub edges: Vec<(usize, usize)>,
}

impl CostedDigraph {
    pub fn new(costs: Vec<u64>, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        CostedDigraph {
            nodes: costs.len(),
            costs,
            edges,
        }
    }

    pub fn cost(&self, node: usize) -> u64 {
        self.costs[node]
    }

    pub fn has_edge(&self, s: usize, t: usize) -> bool {
        self.edges.binary_search(&(s, t)).is_ok()
    }

    /// Out-neighbors of `s`, self-loop included.
    pub fn successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.edges.partition_point(|&(a, _)| a < s);
        self.edges[start..]
            .iter()
            .take_while(move |&&(a, _)| a == s)
            .map(|&(_, t)| t)
    }

    pub fn has_self_loop(&self, s: usize) -> bool {
        self.has_edge(s, s)
    }

    /// Checks sizes and endpoints.
    pub fn check_shape(&self) -> Result<(), GraphError> {
        if self.costs.len() != self.nodes {
            return Err(GraphError::Malformed(format!(
                "{} nodes but {} costs",
                self.nodes,
                self.costs.len()
            )));
        }
        if let Some(&(s, t)) = self
            .edges
            .iter()
            .find(|&&(s, t)| s >= self.nodes || t >= self.nodes)
        {
            return Err(GraphError::NodeOutOfRange { node: s.max(t) });
        }
        Ok(())
    }

    /// Every proper edge must lower the cost.
    pub fn check_cost_condition(&self) -> Result<(), GraphError> {
        self.check_shape()?;
        match self
            .edges
            .iter()
            .find(|&&(s, t)| s != t && self.costs[s] <= self.costs[t])
        {
            Some(&(from, to)) => Err(GraphError::CostConditionViolated { from, to }),
            None => Ok(()),
        }
    }

    /// A node without a self-loop and without out-edges, if any.
    pub fn check_totality(&self) -> Result<(), GraphError> {
        match (0..self.nodes).find(|&s| self.successors(s).next().is_none()) {
            Some(node) => Err(GraphError::TotalityViolated {
                problem: None,
                node,
            }),
            None => Ok(()),
        }
    }

    /// Nodes without an edge to a distinct node.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.nodes)
            .filter(|&s| self.successors(s).all(|t| t == s))
            .collect()
    }

    /// A cycle through at least two distinct nodes, found by depth-first search.
    pub fn nontrivial_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let mut mark = vec![Mark::New; self.nodes];
        for root in 0..self.nodes {
            if mark[root] != Mark::New {
                continue;
            }
            // (node, successors still to visit)
            let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, self.successors(root).collect())];
            mark[root] = Mark::Active;
            while let Some((node, pending)) = stack.last_mut() {
                let node = *node;
                match pending.pop() {
                    Some(t) if t == node => {}
                    Some(t) => match mark[t] {
                        Mark::New => {
                            mark[t] = Mark::Active;
                            stack.push((t, self.successors(t).collect()));
                        }
                        Mark::Active => {
                            let from = stack.iter().position(|(v, _)| *v == t).unwrap_or(0);
                            return Some(stack[from..].iter().map(|(v, _)| *v).collect());
                        }
                        Mark::Done => {}
                    },
                    None => {
                        mark[node] = Mark::Done;
                        stack.pop();
                    }
                }
            }
        }
        None
    }
}

/// Walks cheapest out-edges from `start` until reaching a node with no edge
/// to a distinct node.
pub fn find_sink(g: &CostedDigraph, start: usize) -> Result<usize, GraphError> {
    g.check_cost_condition()?;
    if start >= g.nodes {
        return Err(GraphError::NodeOutOfRange { node: start });
    }
    let mut s = start;
    loop {
        let next = g
            .successors(s)
            .filter(|&t| t != s)
            .min_by_key(|&t| (g.cost(t), t));
        match next {
            Some(t) => s = t,
            None => return Ok(s),
        }
    }
}

/// The PLS of a costed digraph: nodes are the feasible points and the
/// neighbors of a node are its strictly cheaper out-neighbors.
#[derive(Debug, Clone)]
pub struct DigraphPls {
    graph: CostedDigraph,
    start: usize,
    d_bound: Polynomial,
    p_bound: Polynomial,
}

impl DigraphPls {
    pub fn graph(&self) -> &CostedDigraph {
        &self.graph
    }

    fn node(&self, s: PointId) -> Option<usize> {
        usize::try_from(s.0).ok().filter(|&n| n < self.graph.nodes)
    }
}

pub fn pls_from_digraph(
    g: &CostedDigraph,
    start: usize,
    p_bound: u64,
) -> Result<DigraphPls, GraphError> {
    g.check_shape()?;
    if start >= g.nodes {
        return Err(GraphError::NodeOutOfRange { node: start });
    }
    if let Some(node) = (0..g.nodes).find(|&s| g.successors(s).count() as u64 > p_bound) {
        return Err(GraphError::CardinalityBoundViolated {
            node,
            degree: g.successors(node).count() as u64,
            bound: p_bound,
        });
    }
    let d = u64::from(bit_len(g.nodes.saturating_sub(1) as u64)).max(1);
    Ok(DigraphPls {
        graph: g.clone(),
        start,
        d_bound: Polynomial::constant(d),
        p_bound: Polynomial::constant(p_bound),
    })
}

impl PredicatePls for DigraphPls {
    fn d_bound(&self) -> &Polynomial {
        &self.d_bound
    }
    fn p_bound(&self) -> &Polynomial {
        &self.p_bound
    }
    fn feasible(&self, _x: u64, s: PointId) -> bool {
        self.node(s).is_some()
    }
    fn initial(&self, _x: u64) -> PointId {
        PointId(self.start as u64)
    }
    fn neighbor_rel(&self, _x: u64, s: PointId, t: PointId) -> bool {
        match (self.node(s), self.node(t)) {
            (Some(a), Some(b)) => {
                self.graph.has_edge(a, b) && self.graph.cost(a) > self.graph.cost(b)
            }
            _ => false,
        }
    }
    fn cost(&self, _x: u64, s: PointId) -> u64 {
        self.node(s).map_or(0, |n| self.graph.cost(n))
    }
    fn neighbor_candidates(&self, _x: u64, s: PointId) -> Result<Vec<PointId>, SearchError> {
        Ok(self
            .node(s)
            .map(|a| {
                self.graph
                    .successors(a)
                    .map(|t| PointId(t as u64))
                    .collect()
            })
            .unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{local_minimum_check, solve_pls, SteepestDescent};

    fn chain() -> CostedDigraph {
        CostedDigraph::new(vec![0, 1, 2, 3], vec![(3, 2), (2, 1), (1, 0)])
    }

    #[test]
    fn single_node_is_its_own_sink() {
        let g = CostedDigraph::new(vec![9], vec![]);
        assert_eq!(find_sink(&g, 0).unwrap(), 0);
    }

    #[test]
    fn chain_sinks_at_zero() {
        assert_eq!(find_sink(&chain(), 3).unwrap(), 0);
        assert_eq!(chain().sinks(), vec![0]);
    }

    #[test]
    fn cost_violation_is_detected() {
        let g = CostedDigraph::new(vec![0, 1], vec![(0, 1)]);
        assert_eq!(
            find_sink(&g, 0).unwrap_err(),
            GraphError::CostConditionViolated { from: 0, to: 1 }
        );
    }

    #[test]
    fn empty_edge_graph_is_all_solutions() {
        let g = CostedDigraph::new(vec![3, 1, 4], vec![]);
        let pls = pls_from_digraph(&g, 0, 1).unwrap();
        for s in 0..3 {
            assert!(local_minimum_check(&pls, 0, PointId(s)).unwrap());
        }
    }

    #[test]
    fn chain_trace_visits_each_node_once() {
        let pls = pls_from_digraph(&chain(), 3, 1).unwrap();
        let (sol, trace) = solve_pls(&SteepestDescent(pls), 0, 16).unwrap();
        assert_eq!(sol, PointId(0));
        assert_eq!(
            trace.targets(),
            vec![PointId(3), PointId(2), PointId(1), PointId(0)]
        );
    }

    #[test]
    fn degree_bound_is_enforced() {
        let g = CostedDigraph::new(vec![2, 1, 0], vec![(0, 1), (0, 2)]);
        assert!(matches!(
            pls_from_digraph(&g, 0, 1),
            Err(GraphError::CardinalityBoundViolated {
                node: 0,
                degree: 2,
                bound: 1
            })
        ));
    }

    #[test]
    fn cycles() {
        let g = CostedDigraph::new(vec![0, 0, 0], vec![(0, 1), (1, 2), (2, 0), (2, 2)]);
        let cycle = g.nontrivial_cycle().unwrap();
        assert_eq!(cycle.len(), 3);
        let looped = CostedDigraph::new(vec![1, 0], vec![(0, 0), (1, 1), (0, 1)]);
        assert_eq!(looped.nontrivial_cycle(), None);
    }
}
