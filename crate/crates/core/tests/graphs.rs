mod common;

use common::{brute_sinks, random_dag, reachable};
use npls::fixtures;
use npls::graph::{
    find_sink, generate_family, npls_from_family, pls_from_digraph, CostedDigraph, DigraphPls,
    FamilyNpls, GraphError, NestedGraphFamily,
};
use npls::point::PointId;
use npls::search::{
    brute_force_npls, derive_self_loop_predicate, is_solution, local_minimum_check,
    solve_npls_default, solve_pls, verify_npls_conditions, verify_pls_conditions, Condition,
    NplsInstance, PredicatePls, Rank0Pls, SteepestDescent,
};
use proptest::prelude::*;

fn g1_pls() -> SteepestDescent<DigraphPls> {
    SteepestDescent(pls_from_digraph(&fixtures::g1(), 0, 3).unwrap())
}

#[test]
fn g1_steepest_descent() {
    let g = fixtures::g1();
    assert_eq!(find_sink(&g, 0).unwrap(), 5);
    assert_eq!(find_sink(&g, 2).unwrap(), 4);
    let (y, trace) = solve_pls(&g1_pls(), 0, 100).unwrap();
    assert_eq!(y, PointId(5));
    assert_eq!(trace.targets(), vec![PointId(0), PointId(3), PointId(5)]);
    assert!(verify_pls_conditions(&g1_pls(), 0, 10)
        .unwrap()
        .all_passed());
}

#[test]
fn g1_local_minima_are_the_sinks() {
    let inst = pls_from_digraph(&fixtures::g1(), 0, 3).unwrap();
    let minima: Vec<usize> = (0..6)
        .filter(|&s| local_minimum_check(&inst, 0, PointId(s as u64)).unwrap())
        .collect();
    assert_eq!(minima, vec![4, 5]);
    let looped = derive_self_loop_predicate(inst);
    for s in 0..6u64 {
        assert_eq!(looped.neighbor_rel(0, PointId(s), PointId(s)), s >= 4);
    }
    let tight = pls_from_digraph(&fixtures::g1(), 0, 2);
    assert!(matches!(
        tight,
        Err(GraphError::CardinalityBoundViolated { node: 0, .. })
    ));
}

#[test]
fn ng2_conforms() {
    let f = fixtures::ng2();
    f.check().unwrap();
    let inst = npls_from_family(&f).unwrap();
    assert!(verify_npls_conditions(&inst, 0).unwrap().all_passed());
    let (y, _) = solve_npls_default(&inst, 0).unwrap();
    assert!(is_solution(&inst, 0, y));
    let top = inst.initial_source(0);
    let best = brute_force_npls(&inst, 0, top).unwrap();
    let top_costs = &f.top_problem().graph.costs;
    assert_eq!(inst.cost(0, best), *top_costs.iter().min().unwrap());
}

#[test]
fn ng2_constant_cost_breaks_cost_descent() {
    let mut f = fixtures::ng2();
    let top = f.top;
    f.problems[top].graph.costs.iter_mut().for_each(|c| *c = 1);
    assert!(f.check().is_err());
    let report = verify_npls_conditions(&FamilyNpls::new_unchecked(&f), 0).unwrap();
    let tuple = report.get(Condition::CostDescent).counterexample.clone();
    let [_, y, z] = tuple.expect("cost descent fails")[..] else {
        panic!("expected (s, y, z)")
    };
    assert_ne!(y, z);
}

#[test]
fn ng2_raised_child_rank_breaks_rank_descent() {
    let mut f = fixtures::ng2();
    let top = f.top;
    let child = f.problems[top].children[0].problem;
    f.problems[child].rank = f.problems[top].rank;
    let report = verify_npls_conditions(&FamilyNpls::new_unchecked(&f), 0).unwrap();
    assert!(!report.get(Condition::RankDescent).passed(), "{report}");
}

fn rank0_sequences(g: &CostedDigraph) -> (Vec<PointId>, Vec<PointId>) {
    let family = npls_from_family(&NestedGraphFamily::from_digraph(g)).unwrap();
    let (_, nested) = solve_npls_default(&family, 0).unwrap();
    let plain = SteepestDescent(pls_from_digraph(g, 0, g.nodes as u64).unwrap());
    let (_, flat) = solve_pls(&plain, 0, 1 << 20).unwrap();
    (nested.targets(), flat.targets())
}

#[test]
fn rank_zero_family_matches_plain_pls() {
    let (nested, flat) = rank0_sequences(&fixtures::g1());
    assert_eq!(nested, flat);
    let f = NestedGraphFamily::from_digraph(&fixtures::g1());
    let inst = npls_from_family(&f).unwrap();
    let (_, via_rank0) = solve_pls(&Rank0Pls(&inst), 0, 100).unwrap();
    assert_eq!(via_rank0.targets(), flat);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn find_sink_reaches_a_reachable_sink(seed in any::<u64>(), n in 1usize..40, density in 0.0f64..0.6) {
        let g = random_dag(seed, n, density);
        let sinks = brute_sinks(&g);
        for start in 0..n {
            let s = find_sink(&g, start).unwrap();
            prop_assert!(sinks.contains(&s));
            prop_assert!(reachable(&g, start).contains(&s));
        }
        prop_assert_eq!(g.nontrivial_cycle(), None);
    }

    #[test]
    fn rank_zero_sequences_agree(seed in any::<u64>(), n in 1usize..30, density in 0.0f64..0.6) {
        let g = random_dag(seed, n, density);
        let (nested, flat) = rank0_sequences(&g);
        prop_assert_eq!(nested, flat);
    }

    #[test]
    fn solver_is_sound(seed in 0u64..10_000, rank in 0u64..=3, width in 1usize..=8) {
        let f = generate_family(seed, rank, width);
        let inst = npls_from_family(&f).unwrap();
        let (y, trace) = solve_npls_default(&inst, 0).unwrap();
        prop_assert!(is_solution(&inst, 0, y));
        trace.check_monotone().unwrap();
        for row in trace.rows() {
            let z = brute_force_npls(&inst, 0, row.source).unwrap();
            prop_assert!(inst.neighbor(0, row.source, z, z));
            prop_assert!(!common::self_loops(&inst, 0, row.source).is_empty());
            if row.solved {
                let last = row.targets.last().unwrap().0;
                prop_assert!(inst.neighbor(0, row.source, last, last));
            }
        }
    }
}
