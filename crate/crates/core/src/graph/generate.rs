use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ChildLink, CostedDigraph, FamilyProblem, NestedGraphFamily};

pub const MAX_GENERATED_RANK: u64 = 4;
pub const MAX_GENERATED_WIDTH: usize = 16;

/// Generates a conforming family, deterministically in `seed`.
///
/// Problems are built bottom-up. Each rank below the top gets a small pool of
/// problems, and every non-solution node of a rank-`r` problem is backed by a
/// problem drawn from the rank-`r - 1` pool. The top problem has exactly
/// `max_width` nodes.
///
/// # Panics
///
/// If `max_rank > 4` or `max_width` is not in `1..=16`.
pub fn generate_family(seed: u64, max_rank: u64, max_width: usize) -> NestedGraphFamily {
    assert!(
        max_rank <= MAX_GENERATED_RANK,
        "max_rank must be at most {MAX_GENERATED_RANK}"
    );
    assert!(
        (1..=MAX_GENERATED_WIDTH).contains(&max_width),
        "max_width must be in 1..={MAX_GENERATED_WIDTH}"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut problems: Vec<FamilyProblem> = Vec::new();
    let mut pool: Vec<usize> = Vec::new();
    for rank in 0..max_rank {
        let count = rng.gen_range(1..=(max_width / 2).max(1));
        let mut next = Vec::with_capacity(count);
        for _ in 0..count {
            let width = rng.gen_range(1..=max_width);
            let p = problem(&mut rng, rank, width, &pool, &problems);
            next.push(problems.len());
            problems.push(p);
        }
        pool = next;
    }
    let top = problem(&mut rng, max_rank, max_width, &pool, &problems);
    problems.push(top);
    NestedGraphFamily {
        top: problems.len() - 1,
        problems,
    }
}

fn problem(
    rng: &mut ChaCha8Rng,
    rank: u64,
    width: usize,
    pool: &[usize],
    existing: &[FamilyProblem],
) -> FamilyProblem {
    let mut values: Vec<u64> = (0..2 * width as u64).collect();
    values.shuffle(rng);
    let costs: Vec<u64> = values[..width].to_vec();

    let mut edges = Vec::new();
    let mut children = Vec::new();
    for node in 0..width {
        let cheaper: Vec<usize> = (0..width).filter(|&t| costs[t] < costs[node]).collect();
        let out: Vec<usize> = if cheaper.is_empty() || rng.gen_bool(0.2) {
            Vec::new()
        } else if rank == 0 {
            vec![*cheaper.choose(rng).expect("non-empty")]
        } else {
            let mut pick: Vec<usize> = cheaper
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            if pick.is_empty() {
                pick.push(*cheaper.choose(rng).expect("non-empty"));
            }
            pick
        };
        if out.is_empty() {
            edges.push((node, node));
            continue;
        }
        edges.extend(out.iter().map(|&t| (node, t)));
        if rank > 0 {
            let child = *pool.choose(rng).expect("lower-rank pool is non-empty");
            let child_graph = &existing[child].graph;
            let solution_to_edge = (0..child_graph.nodes)
                .filter(|&z| child_graph.has_self_loop(z))
                .map(|z| (z, *out.choose(rng).expect("non-empty")))
                .collect();
            children.push(ChildLink {
                node,
                problem: child,
                solution_to_edge,
            });
        }
    }
    FamilyProblem {
        rank,
        graph: CostedDigraph::new(costs, edges),
        children,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_zero_family_is_one_total_digraph() {
        let f = generate_family(1, 0, 4);
        assert_eq!(f.problems.len(), 1);
        let g = &f.top_problem().graph;
        assert_eq!(g.nodes, 4);
        g.check_totality().unwrap();
        g.check_cost_condition().unwrap();
        f.check().unwrap();
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(generate_family(7, 2, 4), generate_family(7, 2, 4));
        assert_ne!(generate_family(7, 2, 4), generate_family(8, 2, 4));
    }

    #[test]
    fn generated_families_conform() {
        for seed in 0..50 {
            let f = generate_family(seed, 3, 8);
            f.check().unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            for p in &f.problems {
                assert!(p.graph.nontrivial_cycle().is_none());
                assert!(!p.graph.sinks().is_empty());
            }
        }
    }
}
