//! The fixture corpus, built in code. The JSON files under `fixtures/` are
//! the frozen serialisations of these values.

use std::path::{Path, PathBuf};

use crate::graph::{generate_family, CostedDigraph, NestedGraphFamily};
use crate::proof::{
    Derivation, DerivationNode, DerivationTemplate, Formula, Literal, NodePath, ProofTree, Rule,
    TemplateChild, TemplateNode, Term,
};

/// Environment variable that overrides the fixture directory.
pub const FIXTURES_ENV: &str = "NPLS_FIXTURES";

/// `(name, file)` of every frozen fixture.
pub const FIXTURE_FILES: [(&str, &str); 8] = [
    ("G1", "g1.json"),
    ("NG2", "ng2.json"),
    ("D1", "d1.json"),
    ("D2", "d2.json"),
    ("D3", "d3.json"),
    ("T-D2", "t-d2.json"),
    ("T-D3", "t-d3.json"),
    ("KB15", "kb15.json"),
];

/// The fixture directory: `$NPLS_FIXTURES`, else the one shipped with the crate.
pub fn fixture_dir() -> PathBuf {
    std::env::var_os(FIXTURES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

/// Resolves a fixture name like `D3` to its file; other arguments are
/// returned unchanged.
pub fn resolve(name_or_path: &str) -> PathBuf {
    FIXTURE_FILES
        .iter()
        .find(|(name, _)| name.eq_ignore_ascii_case(name_or_path))
        .map(|(_, file)| fixture_dir().join(file))
        .unwrap_or_else(|| PathBuf::from(name_or_path))
}

fn n(v: u64) -> Term {
    Term::num(v)
}

fn v(s: &str) -> Term {
    Term::var(s)
}

fn lit(l: Literal) -> Formula {
    Formula::Lit(l)
}

fn sb1(principal: usize, witness: Term) -> Rule {
    Rule::Sb1 { principal, witness }
}

fn sb2(principal: usize, witness: Term) -> Rule {
    Rule::Sb2 { principal, witness }
}

/// Six nodes with costs 5,4,4,2,1,0; the sinks are 4 and 5.
pub fn g1() -> CostedDigraph {
    CostedDigraph::new(
        vec![5, 4, 4, 2, 1, 0],
        vec![(0, 1), (0, 2), (0, 3), (1, 3), (1, 4), (2, 4), (3, 5)],
    )
}

/// The rank-2 family generated from seed 7 with width 4.
pub fn ng2() -> NestedGraphFamily {
    generate_family(7, 2, 4)
}

/// `∃y<4. y+y=4`, proved by one Sb1 step with witness 2.
pub fn d1() -> Derivation {
    let e = Formula::exists("y", n(4), Literal::eq(Term::add(v("y"), v("y")), n(4)));
    let aux = lit(Literal::eq(Term::add(n(2), n(2)), n(4)));
    Derivation::from_tree(
        0,
        ProofTree::new(
            vec![e.clone()],
            sb1(0, n(2)),
            vec![ProofTree::leaf(vec![e, aux], 1)],
        ),
    )
}

/// `∃y<3. y=1+1`, with a Σb1 cut on `∃z<2. z+1=2`.
pub fn d2() -> Derivation {
    let e = d2_end();
    let c = Formula::exists("z", n(2), Literal::eq(Term::add(v("z"), n(1)), n(2)));
    let not_c = |k: u64| lit(Literal::ne(Term::add(n(k), n(1)), n(2)));
    let left0 = ProofTree::leaf(vec![e.clone(), not_c(0)], 1);
    let left1 = ProofTree::new(
        vec![e.clone(), not_c(1)],
        sb1(0, n(2)),
        vec![ProofTree::leaf(
            vec![
                e.clone(),
                not_c(1),
                lit(Literal::eq(n(2), Term::add(n(1), n(1)))),
            ],
            2,
        )],
    );
    let right = ProofTree::new(
        vec![e.clone(), c.clone()],
        sb1(1, n(1)),
        vec![ProofTree::leaf(
            vec![
                e.clone(),
                c.clone(),
                lit(Literal::eq(Term::add(n(1), n(1)), n(2))),
            ],
            2,
        )],
    );
    Derivation::from_tree(
        0,
        ProofTree::new(vec![e], Rule::Cut { formula: c }, vec![left0, left1, right]),
    )
}

fn d2_end() -> Formula {
    Formula::exists("y", n(3), Literal::eq(v("y"), Term::add(n(1), n(1))))
}

/// `∃y<3. y=1+1`, with a Σb2 cut on `∃z<2 ∀y<2. z·y=y`.
pub fn d3() -> Derivation {
    let e = d2_end();
    let a = Formula::exists_forall(
        "z",
        n(2),
        "y",
        n(2),
        Literal::eq(Term::mul(v("z"), v("y")), v("y")),
    );
    let not_b = |k: u64| Formula::exists("y", n(2), Literal::ne(Term::mul(n(k), v("y")), v("y")));
    let prod = |a: u64, b: u64| Literal::eq(Term::mul(n(a), n(b)), n(b));

    let left0 = ProofTree::new(
        vec![e.clone(), not_b(0)],
        sb1(1, n(1)),
        vec![ProofTree::leaf(
            vec![e.clone(), not_b(0), lit(prod(0, 1).negate())],
            2,
        )],
    );
    let left1 = ProofTree::new(
        vec![e.clone(), not_b(1)],
        sb1(0, n(2)),
        vec![ProofTree::leaf(
            vec![
                e.clone(),
                not_b(1),
                lit(Literal::eq(n(2), Term::add(n(1), n(1)))),
            ],
            2,
        )],
    );
    let base = vec![e.clone(), a.clone()];
    let with = |extra: &[Literal]| {
        let mut s = base.clone();
        s.extend(extra.iter().cloned().map(lit));
        s
    };
    let inner = ProofTree::new(
        with(&[prod(0, 1)]),
        sb2(1, n(1)),
        vec![
            ProofTree::leaf(with(&[prod(0, 1), prod(1, 0)]), 3),
            ProofTree::leaf(with(&[prod(0, 1), prod(1, 1)]), 3),
        ],
    );
    let right = ProofTree::new(
        base.clone(),
        sb2(1, n(0)),
        vec![ProofTree::leaf(with(&[prod(0, 0)]), 2), inner],
    );
    Derivation::from_tree(
        0,
        ProofTree::new(vec![e], Rule::Cut { formula: a }, vec![left0, left1, right]),
    )
}

fn lift(t: ProofTree) -> TemplateNode {
    TemplateNode::new(
        t.sequent,
        t.rule,
        t.children
            .into_iter()
            .map(|c| TemplateChild::Node(lift(c)))
            .collect(),
    )
}

/// D2 as a template; it does not depend on the parameter.
pub fn t_d2() -> DerivationTemplate {
    DerivationTemplate::new(lift(d2().to_tree().expect("D2 is a tree")))
}

/// `∃y<x+3. y=x+2`, with a Σb2 cut on `∃z<x+2 ∀y<2. (z∸x)·y=y`. The first
/// `x+1` left uppers refute the cut formula's instance; the last proves the
/// end-formula with witness `x+2`.
pub fn t_d3() -> DerivationTemplate {
    let x = v("x");
    let xp = |k: u64| Term::add(x.clone(), n(k));
    let e = Formula::exists("y", xp(3), Literal::eq(v("y"), xp(2)));
    let body = |z: Term, y: Term| Literal::eq(Term::mul(Term::monus(z, x.clone()), y.clone()), y);
    let c = Formula::exists_forall("z", xp(2), "y", n(2), body(v("z"), v("y")));
    let not_b = |z: Term| Formula::exists("y", n(2), body(z, v("y")).negate());

    let refute = TemplateNode::new(
        vec![e.clone(), not_b(v("n"))],
        sb1(1, n(1)),
        vec![TemplateNode::leaf(
            vec![e.clone(), not_b(v("n")), lit(body(v("n"), n(1)).negate())],
            2,
        )
        .into()],
    );
    let prove = TemplateNode::new(
        vec![e.clone(), not_b(v("n"))],
        sb1(0, xp(2)),
        vec![TemplateNode::leaf(
            vec![e.clone(), not_b(v("n")), lit(Literal::eq(xp(2), xp(2)))],
            2,
        )
        .into()],
    );
    let base = vec![e.clone(), c.clone()];
    let with = |extra: &[Literal]| {
        let mut s = base.clone();
        s.extend(extra.iter().cloned().map(lit));
        s
    };
    let inner = TemplateNode::new(
        with(&[body(n(0), n(1))]),
        sb2(1, xp(1)),
        vec![
            TemplateNode::leaf(with(&[body(n(0), n(1)), body(xp(1), n(0))]), 3).into(),
            TemplateNode::leaf(with(&[body(n(0), n(1)), body(xp(1), n(1))]), 3).into(),
        ],
    );
    let right = TemplateNode::new(
        base.clone(),
        sb2(1, n(0)),
        vec![
            TemplateNode::leaf(with(&[body(n(0), n(0))]), 2).into(),
            inner.into(),
        ],
    );
    DerivationTemplate::new(TemplateNode::new(
        vec![e],
        Rule::Cut { formula: c },
        vec![
            TemplateChild::Family {
                index: "n".into(),
                from: None,
                bound: xp(1),
                body: refute,
            },
            TemplateChild::Family {
                index: "n".into(),
                from: Some(xp(1)),
                bound: xp(2),
                body: prove,
            },
            right.into(),
        ],
    ))
}

/// A 15-node tree of uneven shape, for order checks. Its sequents are
/// placeholders and it is not a valid derivation.
pub fn kb15() -> Derivation {
    let paths: [&[u32]; 15] = [
        &[],
        &[0],
        &[0, 0],
        &[0, 1],
        &[0, 1, 0],
        &[1],
        &[2],
        &[2, 0],
        &[2, 0, 0],
        &[2, 0, 1],
        &[2, 0, 2],
        &[2, 1],
        &[2, 1, 0],
        &[2, 1, 0, 0],
        &[2, 2],
    ];
    let mut d = Derivation::new(0, Default::default());
    for p in paths {
        let node = DerivationNode::new(
            vec![lit(Literal::eq(n(p.len() as u64), n(p.len() as u64)))],
            Rule::Initial { index: 0 },
        );
        d.insert(NodePath(p.to_vec()), node);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{substitute_numeral, validate, ProofClass};

    #[test]
    fn derivation_fixtures_are_valid() {
        assert!(validate(&d1(), ProofClass::Sigma1).is_valid());
        assert!(validate(&d2(), ProofClass::Sigma1).is_valid());
        let r = validate(&d3(), ProofClass::Sigma2);
        assert!(r.is_valid(), "{r}");
        assert_eq!(d3().len(), 10);
        assert_eq!(kb15().len(), 15);
    }

    #[test]
    fn templates_unfold() {
        assert_eq!(substitute_numeral(&t_d2(), 0).unwrap(), d2());
        for x in 0..8 {
            let d = substitute_numeral(&t_d3(), x).unwrap_or_else(|e| panic!("x={x}: {e}"));
            assert_eq!(d.children(&NodePath::root()).len() as u64, x + 3);
        }
    }

    #[test]
    fn names_resolve() {
        assert!(resolve("d3").ends_with("d3.json"));
        assert_eq!(resolve("some/file.json"), PathBuf::from("some/file.json"));
    }
}
