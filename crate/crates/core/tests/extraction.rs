use npls::extract::*;
use npls::fixtures::{d1, d2, d3, t_d3};
use npls::point::PointId;
use npls::proof::{substitute_numeral, NodePath};
use npls::search::{
    is_solution, solve_npls_default, verify_npls_conditions, verify_pls_conditions, NplsInstance,
};

fn p<const N: usize>(v: [u32; N]) -> NodePath {
    NodePath::from(v)
}

fn root() -> NodePath {
    NodePath::root()
}

fn pls(d: npls::proof::Derivation) -> ExtractionContext {
    ExtractionContext::new(d, ExtractionMode::Pls).unwrap()
}

fn npls_ctx(d: npls::proof::Derivation) -> ExtractionContext {
    ExtractionContext::new(d, ExtractionMode::Npls).unwrap()
}

#[test]
fn target_condition_on_d2() {
    let ctx = pls(d2());
    assert!(target_condition(&ctx, &root()));
    assert!(!target_condition(&ctx, &p([0])));
    assert!(!target_condition(&ctx, &p([1, 0])));
    assert!(target_condition(&ctx, &p([1])));
}

#[test]
fn rightmost_goals() {
    let ctx = pls(d2());
    assert_eq!(rightmost_goal(&ctx, &root()).unwrap(), p([2]));
    assert_eq!(rightmost_goal(&ctx, &p([1])).unwrap(), p([1]));
    let ctx = npls_ctx(d3());
    assert_eq!(rightmost_goal(&ctx, &root()).unwrap(), p([2]));
}

#[test]
fn d1_pls() {
    let ctx = pls(d1());
    assert_eq!(pls_neighbor(&ctx, &root()).unwrap(), root());
    let inst = build_pls(&ctx).unwrap();
    assert_eq!(inst.feasible_paths(), vec![root()]);
    let r = extract_witness_pls(&ctx).unwrap();
    assert_eq!((r.witness, r.verified), (2, true));
    assert_eq!(r.trace.step_count(), 1);
}

#[test]
fn d2_pls() {
    let ctx = pls(d2());
    let inst = build_pls(&ctx).unwrap();
    assert_eq!(inst.feasible_paths(), vec![root(), p([1])]);
    assert_eq!(pls_neighbor(&ctx, &root()).unwrap(), p([1]));
    assert_eq!(pls_neighbor(&ctx, &p([1])).unwrap(), p([1]));
    assert!(matches!(
        pls_neighbor(&ctx, &p([0])),
        Err(ExtractError::NotFeasible(_))
    ));
    let r = extract_witness_pls(&ctx).unwrap();
    assert_eq!((r.witness, r.verified), (2, true));
    assert_eq!(r.solution_node, p([1]));
    let path: Vec<&NodePath> = r
        .trace
        .targets()
        .into_iter()
        .map(|t| ctx.path_of(t).unwrap())
        .collect();
    assert_eq!(path, vec![&root(), &p([1])]);
    let costs: Vec<u64> = r.trace.steps.iter().map(|s| s.cost).collect();
    assert!(costs.windows(2).all(|w| w[1] < w[0]));
    let report = verify_pls_conditions(&inst, 0, 10).unwrap();
    assert!(report.all_passed(), "{report:?}");
}

#[test]
fn d3_sources_targets_costs() {
    let ctx = npls_ctx(d3());
    assert_eq!(ctx.d_max(), 4);
    let sources: Vec<&NodePath> = ctx
        .paths()
        .iter()
        .filter(|s| npls_sources(&ctx, s))
        .collect();
    assert_eq!(sources, vec![&root(), &p([0]), &p([1])]);
    let targets: Vec<&NodePath> = ctx
        .paths()
        .iter()
        .filter(|t| npls_targets(&ctx, &root(), t))
        .collect();
    assert_eq!(targets, vec![&p([1]), &p([2]), &p([2, 1])]);
    assert_eq!(npls_cost(&ctx, &p([2])), 3);
    assert_eq!(npls_cost(&ctx, &p([2, 1])), 2);
    assert_eq!(npls_cost(&ctx, &p([1])), 0);
    assert!(source_condition(&ctx, &root()));
    assert!(source_condition(&ctx, &p([0])));
    assert!(source_condition(&ctx, &p([1])));
}

#[test]
fn d3_relation_and_maps() {
    let ctx = npls_ctx(d3());
    assert!(npls_neighbor_rel(&ctx, &root(), &p([2]), &p([2, 1])));
    assert!(!npls_neighbor_rel(&ctx, &root(), &p([2, 1]), &p([2])));
    assert!(npls_neighbor_rel(&ctx, &root(), &p([1]), &p([1])));
    assert_eq!(npls_gen_source(&ctx, &root(), &p([2])).unwrap(), p([0]));
    assert_eq!(npls_gen_source(&ctx, &root(), &p([2, 1])).unwrap(), p([1]));
    assert_eq!(
        npls_extract(&ctx, &root(), &p([2]), &p([0])).unwrap(),
        p([2, 1])
    );
    assert_eq!(
        npls_extract(&ctx, &root(), &p([2, 1]), &p([1])).unwrap(),
        p([1])
    );
    assert!(matches!(
        npls_extract(&ctx, &root(), &p([2]), &p([2, 1])),
        Err(ExtractError::NotASolution { .. })
    ));
    assert_eq!(npls_rank0_step(&ctx, &root(), &p([1])).unwrap(), p([1]));
    assert!(matches!(
        npls_rank0_step(&ctx, &root(), &p([2])),
        Err(ExtractError::Unreachable { .. })
    ));
}

#[test]
fn d3_npls_solves_and_conforms() {
    let ctx = npls_ctx(d3());
    let inst = build_npls(&ctx).unwrap();
    let report = verify_npls_conditions(&inst, 0).unwrap();
    assert!(report.all_passed(), "{report}");
    let (y, trace) = solve_npls_default(&inst, 0).unwrap();
    assert_eq!(ctx.path_of(y), Some(&p([1])));
    assert!(is_solution(&inst, 0, y));
    let top = &trace.rows()[0];
    let visited: Vec<&NodePath> = top
        .targets
        .iter()
        .map(|&(t, _)| ctx.path_of(t).unwrap())
        .collect();
    assert_eq!(visited, vec![&p([2]), &p([2, 1]), &p([1])]);
    let r = extract_witness_npls(&ctx).unwrap();
    assert_eq!((r.witness, r.verified), (2, true));
    assert!(inst.rank(0, PointId(0)) > inst.rank(0, ctx.point(&p([0])).unwrap()));
}

#[test]
fn mode_gate() {
    assert!(matches!(
        ExtractionContext::new(d2(), ExtractionMode::Npls),
        Err(ExtractError::Mode { .. })
    ));
    assert!(matches!(
        ExtractionContext::new(d3(), ExtractionMode::Pls),
        Err(ExtractError::Mode { .. })
    ));
    assert!(matches!(
        build_pls(&npls_ctx(d3())),
        Err(ExtractError::WrongContext(_))
    ));
}

#[test]
fn t_d3_sweep() {
    for x in 0..8 {
        let d = substitute_numeral(&t_d3(), x).unwrap();
        let ctx = npls_ctx(d);
        let r = extract_witness_npls(&ctx).unwrap();
        assert!(r.verified, "x={x}");
        assert_eq!(r.witness, x + 2);
        let inst = build_npls(&ctx).unwrap();
        if ctx.len() <= 64 {
            let report = verify_npls_conditions(&inst, x).unwrap();
            assert!(report.all_passed(), "x={x}\n{report}");
        }
    }
}

#[test]
fn d3_brute_force_agrees_with_solver() {
    use npls::search::brute_force_npls;
    let ctx = npls_ctx(d3());
    let inst = build_npls(&ctx).unwrap();
    let z = brute_force_npls(&inst, 0, PointId(0)).unwrap();
    let (y, _) = solve_npls_default(&inst, 0).unwrap();
    assert!(inst.neighbor(0, PointId(0), z, z));
    assert_eq!(inst.cost(0, z), inst.cost(0, y));
}
