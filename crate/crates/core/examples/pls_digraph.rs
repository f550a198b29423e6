//! Steepest descent on a small costed digraph, first as a plain sink search
//! and then through the generic PLS solver.

use npls::fixtures;
use npls::graph::{find_sink, pls_from_digraph};
use npls::search::{local_minimum_check, solve_pls, verify_pls_conditions, SteepestDescent};

fn main() {
    let g = fixtures::g1();
    println!("sinks of G1: {:?}", g.sinks());
    for start in 0..g.nodes {
        println!(
            "find_sink from {start} -> {}",
            find_sink(&g, start).unwrap()
        );
    }

    let inst = pls_from_digraph(&g, 0, 3).unwrap();
    let minima: Vec<u64> = (0..g.nodes as u64)
        .filter(|&s| local_minimum_check(&inst, 0, npls::point::PointId(s)).unwrap())
        .collect();
    println!("local minima: {minima:?}");

    let pls = SteepestDescent(inst);
    let (y, trace) = solve_pls(&pls, 0, 64).unwrap();
    let path: Vec<String> = trace.targets().iter().map(|p| p.to_string()).collect();
    println!("solver path {} ends at {y}", path.join(" -> "));
    println!(
        "conditions hold: {}",
        verify_pls_conditions(&pls, 0, 10).unwrap().all_passed()
    );
}
