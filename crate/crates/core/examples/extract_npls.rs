//! Compiles the Σb2 fixture D3 into a nested PLS, lists its sources and the
//! targets of the root, and extracts a witness.

use npls::extract::{
    extract_witness_npls, npls_cost, npls_sources, npls_targets, ExtractionContext, ExtractionMode,
};
use npls::fixtures;
use npls::proof::NodePath;

fn main() {
    let ctx = ExtractionContext::new(fixtures::d3(), ExtractionMode::Npls).unwrap();
    let root = NodePath::root();
    let sources: Vec<String> = ctx
        .paths()
        .iter()
        .filter(|p| npls_sources(&ctx, p))
        .map(|p| p.to_string())
        .collect();
    println!("sources: {}", sources.join(" "));
    for t in ctx.paths().iter().filter(|t| npls_targets(&ctx, &root, t)) {
        println!("target {t} cost {}", npls_cost(&ctx, t));
    }
    let report = extract_witness_npls(&ctx).unwrap();
    print!("{report}");
    for s in &report.trace.steps {
        println!(
            "{}{} -> {} {:?}",
            "  ".repeat(s.level),
            ctx.path_of(s.source).unwrap(),
            ctx.path_of(s.target).unwrap(),
            s.action
        );
    }
}
