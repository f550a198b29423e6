use serde::{Deserialize, Serialize};

use crate::point::{bit_len, PointId, Polynomial};
use crate::search::NplsInstance;

use super::{CostedDigraph, GraphError};

/// The child problem behind one node, and where each of its solutions leads.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildLink {
    pub node: usize,
    pub problem: usize,
    /// `(child solution node, out-neighbor of node)` pairs.
    pub solution_to_edge: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyProblem {
    pub rank: u64,
    pub graph: CostedDigraph,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ChildLink>,
}

impl FamilyProblem {
    pub fn child(&self, node: usize) -> Option<&ChildLink> {
        self.children.iter().find(|c| c.node == node)
    }
}

/// Search problems nested by rank. Problems live in one arena and refer to
/// their children by index, so a lower-rank problem may back several nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedGraphFamily {
    pub top: usize,
    pub problems: Vec<FamilyProblem>,
}

impl NestedGraphFamily {
    /// The rank-zero family of `g`, with a self-loop added at each sink.
    pub fn from_digraph(g: &CostedDigraph) -> Self {
        let mut edges = g.edges.clone();
        edges.extend(g.sinks().into_iter().map(|s| (s, s)));
        NestedGraphFamily::single(CostedDigraph::new(g.costs.clone(), edges))
    }

    /// A family consisting of one rank-zero problem.
    pub fn single(graph: CostedDigraph) -> Self {
        NestedGraphFamily {
            top: 0,
            problems: vec![FamilyProblem {
                rank: 0,
                graph,
                children: Vec::new(),
            }],
        }
    }

    pub fn top_problem(&self) -> &FamilyProblem {
        &self.problems[self.top]
    }

    pub fn max_width(&self) -> usize {
        self.problems
            .iter()
            .map(|p| p.graph.nodes)
            .max()
            .unwrap_or(0)
    }

    /// Checks every family invariant.
    pub fn check(&self) -> Result<(), GraphError> {
        if self.top >= self.problems.len() {
            return Err(GraphError::Malformed(format!(
                "top problem {} does not exist",
                self.top
            )));
        }
        for (pi, p) in self.problems.iter().enumerate() {
            let g = &p.graph;
            if g.nodes == 0 || g.nodes > 64 {
                return Err(GraphError::Malformed(format!(
                    "problem {pi} has {} nodes, expected 1..=64",
                    g.nodes
                )));
            }
            g.check_cost_condition().map_err(|e| e.in_problem(pi))?;
            if let Some(node) = (0..g.nodes).find(|&s| g.successors(s).next().is_none()) {
                return Err(GraphError::TotalityViolated {
                    problem: Some(pi),
                    node,
                });
            }
            if p.rank == 0 {
                if !p.children.is_empty() {
                    return Err(GraphError::Malformed(format!(
                        "rank-zero problem {pi} has children"
                    )));
                }
                continue;
            }
            for node in (0..g.nodes).filter(|&s| !g.has_self_loop(s)) {
                let link = p
                    .child(node)
                    .ok_or(GraphError::MissingChild { problem: pi, node })?;
                let child = self.problems.get(link.problem).ok_or_else(|| {
                    GraphError::Malformed(format!("unknown child problem {}", link.problem))
                })?;
                if child.rank >= p.rank {
                    return Err(GraphError::RankViolation {
                        problem: pi,
                        node,
                        child: link.problem,
                    });
                }
                for z in (0..child.graph.nodes).filter(|&z| child.graph.has_self_loop(z)) {
                    let to = link
                        .solution_to_edge
                        .iter()
                        .find(|&&(sol, _)| sol == z)
                        .map(|&(_, t)| t)
                        .ok_or(GraphError::MissingSolutionEdge {
                            problem: pi,
                            node,
                            solution: z,
                        })?;
                    if to == node || !g.has_edge(node, to) {
                        return Err(GraphError::MissingSolutionEdge {
                            problem: pi,
                            node,
                            solution: z,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct PackedProblem {
    rank: u64,
    costs: Vec<u64>,
    /// out-neighbor bitmask per node
    adjacency: Vec<u64>,
    /// child problem and solution map per node
    children: Vec<Option<(usize, Vec<Option<usize>>)>>,
}

/// The nested PLS of a family. Sources are problem indices; the target for
/// node `v` of problem `p` is `(p << node_bits) | v`.
#[derive(Debug, Clone)]
pub struct FamilyNpls {
    problems: Vec<PackedProblem>,
    top: usize,
    node_bits: u32,
    d_bound: Polynomial,
}

/// Checks the family and packs it as an nPLS instance.
pub fn npls_from_family(f: &NestedGraphFamily) -> Result<FamilyNpls, GraphError> {
    f.check()?;
    Ok(FamilyNpls::new_unchecked(f))
}

impl FamilyNpls {
    /// Packs the family without checking its invariants, so that broken
    /// families can be handed to the condition checker. Nodes beyond the 64th
    /// of a problem are dropped. A rank-zero problem keeps only the edge to
    /// the cheapest proper successor of each node, or its self-loop.
    pub fn new_unchecked(f: &NestedGraphFamily) -> Self {
        let width = f.max_width().clamp(1, 64);
        let node_bits = bit_len(width as u64 - 1);
        let problem_bits = bit_len(f.problems.len().saturating_sub(1) as u64);
        let d = u64::from(node_bits + problem_bits).max(1);
        let problems = f
            .problems
            .iter()
            .map(|p| {
                let n = p.graph.nodes.min(64);
                let mut adjacency = vec![0u64; n];
                for &(s, t) in &p.graph.edges {
                    if s < n && t < n {
                        adjacency[s] |= 1 << t;
                    }
                }
                if p.rank == 0 {
                    // keep only the steepest edge out of each node
                    for (s, mask) in adjacency.iter_mut().enumerate() {
                        let best = (0..n)
                            .filter(|&t| t != s && *mask & (1 << t) != 0)
                            .min_by_key(|&t| {
                                (p.graph.costs.get(t).copied().unwrap_or(u64::MAX), t)
                            });
                        if let Some(t) = best {
                            *mask = 1 << t;
                        } else {
                            *mask &= 1 << s;
                        }
                    }
                }
                let mut children = vec![None; n];
                for link in &p.children {
                    if link.node >= n {
                        continue;
                    }
                    let child_width = f
                        .problems
                        .get(link.problem)
                        .map_or(0, |c| c.graph.nodes.min(64));
                    let mut map = vec![None; child_width];
                    for &(z, t) in &link.solution_to_edge {
                        if z < child_width && t < n {
                            map[z] = Some(t);
                        }
                    }
                    children[link.node] = Some((link.problem, map));
                }
                PackedProblem {
                    rank: p.rank,
                    costs: p.graph.costs.iter().copied().take(n).collect(),
                    adjacency,
                    children,
                }
            })
            .collect();
        FamilyNpls {
            problems,
            top: f.top,
            node_bits,
            d_bound: Polynomial::constant(d),
        }
    }

    pub fn encode(&self, problem: usize, node: usize) -> PointId {
        PointId(((problem as u64) << self.node_bits) | node as u64)
    }

    fn problem(&self, s: PointId) -> Option<(usize, &PackedProblem)> {
        let i = usize::try_from(s.0).ok()?;
        self.problems.get(i).map(|p| (i, p))
    }

    /// `(problem, node)` of a target point.
    pub fn decode(&self, t: PointId) -> Option<(usize, usize)> {
        let p = usize::try_from(t.0 >> self.node_bits).ok()?;
        let node = (t.0 & ((1u64 << self.node_bits) - 1)) as usize;
        let prob = self.problems.get(p)?;
        (node < prob.costs.len()).then_some((p, node))
    }

    fn node_of(&self, s: PointId, t: PointId) -> Option<usize> {
        match self.decode(t) {
            Some((p, node)) if p as u64 == s.0 => Some(node),
            _ => None,
        }
    }

    fn self_loop(&self, p: &PackedProblem, node: usize) -> bool {
        p.adjacency[node] & (1 << node) != 0
    }
}

impl NplsInstance for FamilyNpls {
    fn d_bound(&self) -> &Polynomial {
        &self.d_bound
    }

    fn is_source(&self, _x: u64, s: PointId) -> bool {
        self.problem(s).is_some()
    }

    fn is_target(&self, _x: u64, s: PointId, t: PointId) -> bool {
        self.node_of(s, t).is_some()
    }

    fn neighbor(&self, _x: u64, s: PointId, y: PointId, z: PointId) -> bool {
        let (Some((_, p)), Some(a), Some(b)) =
            (self.problem(s), self.node_of(s, y), self.node_of(s, z))
        else {
            return false;
        };
        p.adjacency[a] & (1 << b) != 0
    }

    fn rank0_neighbor(&self, _x: u64, s: PointId, y: PointId) -> Option<PointId> {
        let (pi, p) = self.problem(s)?;
        if p.rank != 0 {
            return None;
        }
        let a = self.node_of(s, y)?;
        let mask = p.adjacency[a];
        if mask.count_ones() != 1 {
            return None;
        }
        Some(self.encode(pi, mask.trailing_zeros() as usize))
    }

    fn initial_source(&self, _x: u64) -> PointId {
        PointId(self.top as u64)
    }

    fn initial_target(&self, _x: u64, s: PointId) -> Option<PointId> {
        let (pi, _) = self.problem(s)?;
        Some(self.encode(pi, 0))
    }

    fn cost(&self, _x: u64, t: PointId) -> u64 {
        self.decode(t)
            .map_or(0, |(p, node)| self.problems[p].costs[node])
    }

    fn gen_source(&self, _x: u64, s: PointId, y: PointId) -> Option<PointId> {
        let (_, p) = self.problem(s)?;
        let a = self.node_of(s, y)?;
        if self.self_loop(p, a) || p.rank == 0 {
            return Some(s);
        }
        p.children[a].as_ref().map(|(c, _)| PointId(*c as u64))
    }

    fn extract(&self, _x: u64, s: PointId, y: PointId, z: PointId) -> Option<PointId> {
        let (pi, p) = self.problem(s)?;
        let a = self.node_of(s, y)?;
        if self.self_loop(p, a) {
            return Some(y);
        }
        let (child, map) = p.children[a].as_ref()?;
        let zc = self.node_of(PointId(*child as u64), z)?;
        map.get(zc).copied().flatten().map(|t| self.encode(pi, t))
    }

    fn rank(&self, _x: u64, s: PointId) -> u64 {
        self.problem(s).map_or(0, |(_, p)| p.rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{solve_npls_default, verify_npls_conditions};

    /// Rank-1 top with two nodes; the costly one is backed by a rank-0 chain.
    fn small() -> NestedGraphFamily {
        NestedGraphFamily {
            top: 1,
            problems: vec![
                FamilyProblem {
                    rank: 0,
                    graph: CostedDigraph::new(vec![5, 2], vec![(0, 1), (1, 1)]),
                    children: vec![],
                },
                FamilyProblem {
                    rank: 1,
                    graph: CostedDigraph::new(vec![3, 1], vec![(0, 1), (1, 1)]),
                    children: vec![ChildLink {
                        node: 0,
                        problem: 0,
                        solution_to_edge: vec![(1, 1)],
                    }],
                },
            ],
        }
    }

    #[test]
    fn small_family_conforms_and_solves() {
        let inst = npls_from_family(&small()).unwrap();
        let report = verify_npls_conditions(&inst, 0).unwrap();
        assert!(report.all_passed(), "{report}");
        let (y, trace) = solve_npls_default(&inst, 0).unwrap();
        assert_eq!(inst.decode(y), Some((1, 1)));
        trace.check_monotone().unwrap();
    }

    #[test]
    fn missing_child_is_rejected() {
        let mut f = small();
        f.problems[1].children.clear();
        assert_eq!(
            npls_from_family(&f).unwrap_err(),
            GraphError::MissingChild {
                problem: 1,
                node: 0
            }
        );
    }

    #[test]
    fn rank_violation_is_rejected() {
        let mut f = small();
        f.problems[1].children[0].problem = 1;
        assert_eq!(
            npls_from_family(&f).unwrap_err(),
            GraphError::RankViolation {
                problem: 1,
                node: 0,
                child: 1
            }
        );
    }

    #[test]
    fn totality_violation_is_rejected() {
        let mut f = small();
        f.problems[1].graph = CostedDigraph::new(vec![3, 1], vec![(0, 1)]);
        assert_eq!(
            npls_from_family(&f).unwrap_err(),
            GraphError::TotalityViolated {
                problem: Some(1),
                node: 1
            }
        );
    }

    #[test]
    fn points_round_trip() {
        let inst = npls_from_family(&small()).unwrap();
        assert_eq!(inst.decode(inst.encode(1, 1)), Some((1, 1)));
        assert_eq!(inst.decode(PointId(7)), None);
    }
}
