//! Oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use npls::graph::CostedDigraph;
use npls::point::PointId;
use npls::proof::{Derivation, DerivationNode, Formula, Literal, NodePath, Rule, Term};
use npls::search::NplsInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `a <_KB b`: `a` properly extends `b`, or is smaller at the first entry
/// where they differ.
pub fn kb_less(a: &NodePath, b: &NodePath) -> bool {
    for (x, y) in a.0.iter().zip(&b.0) {
        if x != y {
            return x < y;
        }
    }
    a.0.len() > b.0.len()
}

/// A random tree shape with `n` nodes and placeholder sequents.
pub fn random_tree(seed: u64, n: usize) -> Derivation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut paths = vec![NodePath::root()];
    let mut arity = vec![0u32];
    while paths.len() < n {
        let parent = rng.gen_range(0..paths.len());
        let child = paths[parent].child(arity[parent]);
        arity[parent] += 1;
        paths.push(child);
        arity.push(0);
    }
    let mut d = Derivation::new(0, Default::default());
    for p in paths {
        let l = Formula::Lit(Literal::eq(Term::num(0), Term::num(0)));
        d.insert(p, DerivationNode::new(vec![l], Rule::Initial { index: 0 }));
    }
    d
}

/// A random graph whose edges all go to strictly cheaper nodes.
pub fn random_dag(seed: u64, n: usize, density: f64) -> CostedDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let costs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..(2 * n as u64))).collect();
    let mut edges = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if costs[t] < costs[s] && rng.gen_bool(density) {
                edges.push((s, t));
            }
        }
    }
    CostedDigraph::new(costs, edges)
}

/// Nodes reachable from `start`, by breadth-first search.
pub fn reachable(g: &CostedDigraph, start: usize) -> HashSet<usize> {
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for &(a, b) in &g.edges {
            if a == s && seen.insert(b) {
                queue.push_back(b);
            }
        }
    }
    seen
}

/// Nodes without an edge to another node.
pub fn brute_sinks(g: &CostedDigraph) -> HashSet<usize> {
    (0..g.nodes)
        .filter(|&s| !g.edges.iter().any(|&(a, b)| a == s && b != s))
        .collect()
}

/// Every target `t` of `s` with `N(s, t, t)`, found by scanning all points.
pub fn self_loops<N: NplsInstance + ?Sized>(inst: &N, x: u64, s: PointId) -> Vec<PointId> {
    let bits = inst.d_bits(x);
    assert!(bits <= 16, "domain too large to scan");
    (0..1u64 << bits)
        .map(PointId)
        .filter(|&t| inst.is_target(x, s, t) && inst.neighbor(x, s, t, t))
        .collect()
}

pub struct Mutation {
    pub name: &'static str,
    pub class: npls::proof::ProofClass,
    pub derivation: Derivation,
    /// The node the validator must blame.
    pub path: NodePath,
}

fn p(v: &[u32]) -> NodePath {
    NodePath(v.to_vec())
}

fn lit(l: Literal) -> Formula {
    Formula::Lit(l)
}

fn set_rule(d: &mut Derivation, at: &[u32], rule: Rule) {
    d.node_mut(&p(at)).unwrap().rule = rule;
}

fn set_formula(d: &mut Derivation, at: &[u32], i: usize, f: Formula) {
    d.node_mut(&p(at)).unwrap().sequent[i] = f;
}

/// Copies the subtree at `from` to `to`.
fn graft(d: &mut Derivation, from: &[u32], to: &[u32]) {
    let moved: Vec<_> = d
        .iter()
        .filter(|(q, _)| p(from).is_prefix_of(q))
        .map(|(q, n)| {
            let mut dest = to.to_vec();
            dest.extend_from_slice(&q.0[from.len()..]);
            (NodePath(dest), n.clone())
        })
        .collect();
    for (q, n) in moved {
        d.insert(q, n);
    }
}

fn prune(d: &mut Derivation, at: &[u32]) {
    let doomed: Vec<NodePath> = d
        .paths()
        .filter(|q| p(at).is_prefix_of(q))
        .cloned()
        .collect();
    for q in doomed {
        d.remove(&q);
    }
}

/// Single-field corruptions of D2 and D3, each with the node at fault.
pub fn mutation_suite() -> Vec<Mutation> {
    use npls::fixtures::{d2, d3};
    use npls::proof::ProofClass::{Sigma1, Sigma2};
    let n = Term::num;
    let sum = || Term::add(n(1), n(1));
    let prod = |a, b| Term::mul(n(a), n(b));
    let mut out = Vec::new();
    let mut push = |name, class, base: Derivation, path: &[u32], f: &dyn Fn(&mut Derivation)| {
        let mut d = base;
        f(&mut d);
        out.push(Mutation {
            name,
            class,
            derivation: d,
            path: p(path),
        });
    };

    push("D2 false initial literal", Sigma1, d2(), &[1, 0], &|d| {
        set_formula(d, &[1, 0], 2, lit(Literal::eq(n(3), sum())))
    });
    push(
        "D2 initial index names a quantified formula",
        Sigma1,
        d2(),
        &[0],
        &|d| set_rule(d, &[0], Rule::Initial { index: 0 }),
    );
    push(
        "D2 initial index out of range",
        Sigma1,
        d2(),
        &[2, 0],
        &|d| set_rule(d, &[2, 0], Rule::Initial { index: 7 }),
    );
    push("D2 cut missing its right upper", Sigma1, d2(), &[], &|d| {
        prune(d, &[2])
    });
    push("D2 cut with an extra upper", Sigma1, d2(), &[], &|d| {
        graft(d, &[2], &[3])
    });
    push(
        "D2 Sb1 witness equals the bound",
        Sigma1,
        d2(),
        &[1],
        &|d| {
            set_rule(
                d,
                &[1],
                Rule::Sb1 {
                    principal: 0,
                    witness: n(3),
                },
            )
        },
    );
    push("D2 Sb1 witness above the bound", Sigma1, d2(), &[2], &|d| {
        set_rule(
            d,
            &[2],
            Rule::Sb1 {
                principal: 1,
                witness: n(5),
            },
        )
    });
    push(
        "D2 upper sequent drops a side formula",
        Sigma1,
        d2(),
        &[1, 0],
        &|d| {
            d.node_mut(&p(&[1, 0])).unwrap().sequent.remove(0);
        },
    );
    push(
        "D2 upper sequent adds a stray literal",
        Sigma1,
        d2(),
        &[2, 0],
        &|d| {
            d.node_mut(&p(&[2, 0]))
                .unwrap()
                .sequent
                .push(lit(Literal::eq(n(0), n(0))))
        },
    );
    push("D3 false initial literal", Sigma2, d3(), &[2, 1, 0], &|d| {
        set_formula(d, &[2, 1, 0], 3, lit(Literal::eq(prod(1, 0), n(1))))
    });
    push("D3 negated initial literal", Sigma2, d3(), &[0, 0], &|d| {
        set_formula(d, &[0, 0], 2, lit(Literal::eq(prod(0, 1), n(1))))
    });
    push(
        "D3 Sb2 witness equals the bound",
        Sigma2,
        d3(),
        &[2, 1],
        &|d| {
            set_rule(
                d,
                &[2, 1],
                Rule::Sb2 {
                    principal: 1,
                    witness: n(2),
                },
            )
        },
    );
    push("D3 Sb2 missing an upper", Sigma2, d3(), &[2, 1], &|d| {
        prune(d, &[2, 1, 1])
    });
    push("D3 cut with an extra upper", Sigma2, d3(), &[], &|d| {
        graft(d, &[1], &[3])
    });
    push(
        "D3 upper sequent drops the end-formula",
        Sigma2,
        d3(),
        &[2, 0],
        &|d| {
            d.node_mut(&p(&[2, 0])).unwrap().sequent.remove(0);
        },
    );
    push("D3 Sb2 in a Σb1 proof", Sigma1, d3(), &[2], &|_| {});
    out
}
