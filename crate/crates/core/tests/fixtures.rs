//! The frozen JSON fixtures must match the values built in code.
//! Run with `NPLS_BLESS=1` to rewrite them.

use std::fs;
use std::path::PathBuf;

use npls::fixtures::{self, FIXTURE_FILES};
use npls::json::*;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn serialised(name: &str) -> String {
    match name {
        "G1" => digraph_to_json(&fixtures::g1()),
        "NG2" => family_to_json(&fixtures::ng2()),
        "D1" => derivation_to_json(&fixtures::d1()),
        "D2" => derivation_to_json(&fixtures::d2()),
        "D3" => derivation_to_json(&fixtures::d3()),
        "T-D2" => template_to_json(&fixtures::t_d2()),
        "T-D3" => template_to_json(&fixtures::t_d3()),
        "KB15" => derivation_to_json(&fixtures::kb15()),
        _ => unreachable!("unknown fixture {name}"),
    }
}

#[test]
fn files_match_builders() {
    let bless = std::env::var_os("NPLS_BLESS").is_some();
    for (name, file) in FIXTURE_FILES {
        let path = dir().join(file);
        let want = serialised(name);
        if bless {
            fs::create_dir_all(dir()).unwrap();
            fs::write(&path, &want).unwrap();
        }
        let got = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(got, want, "{name} is stale; rerun with NPLS_BLESS=1");
    }
}

#[test]
fn files_round_trip() {
    for (name, file) in FIXTURE_FILES {
        let text = fs::read_to_string(dir().join(file)).unwrap();
        let back = match parse_input(&text).unwrap() {
            InputFile::Derivation(d) => derivation_to_json(&d),
            InputFile::Template(t) => template_to_json(&t),
            InputFile::Family(f) => family_to_json(&f),
            InputFile::Digraph(g) => digraph_to_json(&g),
        };
        assert_eq!(back, text, "{name}");
    }
    assert_eq!(
        derivation_from_json(&derivation_to_json(&fixtures::d3())).unwrap(),
        fixtures::d3()
    );
    assert_eq!(
        template_from_json(&template_to_json(&fixtures::t_d3())).unwrap(),
        fixtures::t_d3()
    );
    assert_eq!(
        family_from_json(&family_to_json(&fixtures::ng2())).unwrap(),
        fixtures::ng2()
    );
    assert_eq!(
        digraph_from_json(&digraph_to_json(&fixtures::g1())).unwrap(),
        fixtures::g1()
    );
}
