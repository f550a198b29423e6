//! Unfolds the parametrised template T-D3 at several values of x and
//! extracts the witness from each instance.

use npls::extract::{extract_witness_npls, ExtractionContext, ExtractionMode};
use npls::fixtures;
use npls::proof::substitute_numeral;

fn main() {
    let template = fixtures::t_d3();
    for x in 0..6 {
        let d = substitute_numeral(&template, x).unwrap();
        let nodes = d.len();
        let ctx = ExtractionContext::new(d, ExtractionMode::Npls).unwrap();
        let r = extract_witness_npls(&ctx).unwrap();
        println!(
            "x={x} nodes={nodes:>3} end-formula {} witness={} verified={}",
            ctx.end_formula(),
            r.witness,
            r.verified
        );
    }
}
