//! Builds a one-step derivation by hand, validates it, then breaks it.

use npls::proof::{
    validate, Derivation, Formula, Literal, NodePath, ProofClass, ProofTree, Rule, Term,
};

fn main() {
    let y = Term::var("y");
    // ∃y<4. y+y=4
    let end = Formula::exists(
        "y",
        Term::num(4),
        Literal::eq(Term::add(y.clone(), y), Term::num(4)),
    );
    let instance = end.instance(&Term::num(2)).unwrap();
    println!("end-formula {end}, instance at 2: {instance}");

    let tree = ProofTree::new(
        vec![end.clone()],
        Rule::Sb1 {
            principal: 0,
            witness: Term::num(2),
        },
        vec![ProofTree::leaf(
            vec![end.clone(), Formula::Lit(instance)],
            1,
        )],
    );
    let mut d = Derivation::from_tree(0, tree);
    print!("{}", validate(&d, ProofClass::Sigma1));

    d.node_mut(&NodePath::root()).unwrap().rule = Rule::Sb1 {
        principal: 0,
        witness: Term::num(3),
    };
    print!("{}", validate(&d, ProofClass::Sigma1));
}
