//! Generates a rank-2 family, checks the nine condition groups and prints the
//! solver's rows.

use npls::graph::{generate_family, npls_from_family};
use npls::search::{is_solution, solve_npls_default, verify_npls_conditions};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let family = generate_family(seed, 2, 4);
    println!(
        "seed {seed}: {} problems, top has rank {}",
        family.problems.len(),
        family.top_problem().rank
    );

    let inst = npls_from_family(&family).unwrap();
    print!("{}", verify_npls_conditions(&inst, 0).unwrap());

    let (y, trace) = solve_npls_default(&inst, 0).unwrap();
    for row in trace.rows() {
        let targets: Vec<String> = row
            .targets
            .iter()
            .map(|&(t, c)| {
                let (p, v) = inst.decode(t).unwrap();
                format!("{p}:{v}(c={c})")
            })
            .collect();
        println!(
            "{}source p{} rank {}: {}",
            "  ".repeat(row.level),
            row.source,
            row.rank,
            targets.join(" ")
        );
    }
    let (p, v) = inst.decode(y).unwrap();
    println!("solution {p}:{v}, checked: {}", is_solution(&inst, 0, y));
}
