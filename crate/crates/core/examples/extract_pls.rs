//! Compiles the Σb1 fixture D2 into a PLS and reads the witness off its
//! solution.

use npls::extract::{
    build_pls, extract_witness_pls, pls_neighbor, ExtractionContext, ExtractionMode,
};
use npls::fixtures;

fn main() {
    let ctx = ExtractionContext::new(fixtures::d2(), ExtractionMode::Pls).unwrap();
    println!("end-formula {}", ctx.end_formula());
    let pls = build_pls(&ctx).unwrap();
    for p in pls.feasible_paths() {
        println!("  {p} -> {}", pls_neighbor(&ctx, &p).unwrap());
    }
    print!("{}", extract_witness_pls(&ctx).unwrap());
}
