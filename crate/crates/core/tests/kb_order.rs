mod common;

use common::{kb_less, random_tree};
use npls::fixtures;
use npls::proof::{Derivation, KbIndex};
use proptest::prelude::*;

fn assert_kb_agrees(d: &Derivation) {
    let kb = KbIndex::new(d);
    let mut seen: Vec<u64> = d.paths().map(|p| kb.get(p).unwrap()).collect();
    seen.sort_unstable();
    assert_eq!(seen, (0..d.len() as u64).collect::<Vec<_>>());
    for a in d.paths() {
        for b in d.paths() {
            assert_eq!(kb_less(a, b), kb.get(a) < kb.get(b), "{a} vs {b}");
        }
    }
}

#[test]
fn fixture_trees() {
    for d in [
        fixtures::d1(),
        fixtures::d2(),
        fixtures::d3(),
        fixtures::kb15(),
    ] {
        assert_kb_agrees(&d);
    }
    let kb15 = fixtures::kb15();
    assert_eq!(KbIndex::new(&kb15).get(&Default::default()), Some(14));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn random_trees(seed in any::<u64>(), n in 1usize..=200) {
        assert_kb_agrees(&random_tree(seed, n));
    }
}
