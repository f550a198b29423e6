use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::derivation::{Derivation, ProofTree, Rule};
use super::formula::{sequent_contains, Formula, Literal};
use super::term::Term;
use super::validate::ProofClass;

/// Bound on quantifier enumeration while generating.
const EVAL_LIMIT: u64 = 64;

/// Shape limits for [`generate_derivation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivationShape {
    pub class: ProofClass,
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl DerivationShape {
    pub fn new(class: ProofClass) -> Self {
        DerivationShape {
            class,
            max_depth: 10,
            max_nodes: 500,
        }
    }
}

/// Generates a valid derivation of a true Σb1 formula, deterministically in
/// `seed`. The root is always a cut.
///
/// Every sequent in the tree contains a true formula, so any branch can be
/// closed in at most two more steps. Between those, the generator adds cuts
/// on random formulas and steps with wrong witnesses.
pub fn generate_derivation(seed: u64, shape: DerivationShape) -> Derivation {
    assert!(shape.max_depth >= 3, "max_depth must be at least 3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let end = loop {
            let f = random_sigma1(&mut rng);
            if truth(&f) {
                break f;
            }
        };
        let mut g = Gen {
            rng: &mut rng,
            shape,
            nodes: 0,
        };
        if let Some(tree) = g.prove(vec![end], 0, true) {
            return Derivation::from_tree(0, tree);
        }
    }
}

fn truth(f: &Formula) -> bool {
    f.eval_bounded(0, EVAL_LIMIT)
        .ok()
        .flatten()
        .unwrap_or(false)
}

fn num(n: u64) -> Term {
    Term::num(n)
}

/// A literal over the terms `a` and `b`.
fn random_literal(rng: &mut ChaCha8Rng, a: Term, b: Term) -> Literal {
    let k = num(rng.gen_range(0..4));
    let (lhs, rhs) = match rng.gen_range(0..7) {
        0 => (Term::mul(a, b.clone()), b),
        1 => (Term::add(a, b), k),
        2 => (Term::monus(a, b), k),
        3 => (a, b),
        4 => (Term::div2(Term::add(a, b)), k),
        5 => (Term::mul(a, b), k),
        _ => (Term::cond(a, b, num(rng.gen_range(0..3))), k),
    };
    if rng.gen_bool(0.5) {
        Literal::ne(lhs, rhs)
    } else {
        Literal::eq(lhs, rhs)
    }
}

fn random_sigma1(rng: &mut ChaCha8Rng) -> Formula {
    let var = ["y", "u", "w"].choose(rng).expect("non-empty");
    let c = num(rng.gen_range(0..4));
    let body = if rng.gen_bool(0.5) {
        random_literal(rng, Term::var(var), c)
    } else {
        random_literal(rng, c, Term::var(var))
    };
    Formula::exists(var, num(rng.gen_range(1..=4)), body)
}

fn random_cut_formula(rng: &mut ChaCha8Rng, class: ProofClass) -> Formula {
    let s0 = num(rng.gen_range(1..=3));
    match class {
        ProofClass::Sigma1 => {
            let c = num(rng.gen_range(0..4));
            Formula::exists("z", s0, random_literal(rng, Term::var("z"), c))
        }
        ProofClass::Sigma2 => {
            let s1 = num(rng.gen_range(1..=2));
            Formula::exists_forall(
                "z",
                s0,
                "v",
                s1,
                random_literal(rng, Term::var("z"), Term::var("v")),
            )
        }
    }
}

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    shape: DerivationShape,
    nodes: usize,
}

impl Gen<'_> {
    fn node(&mut self) -> Option<()> {
        self.nodes += 1;
        (self.nodes <= self.shape.max_nodes).then_some(())
    }

    /// A derivation of the true sequent `gamma` rooted at `depth`.
    fn prove(&mut self, gamma: Vec<Formula>, depth: usize, force_cut: bool) -> Option<ProofTree> {
        self.node()?;
        let room = self.shape.max_depth - depth;
        let true_lit = gamma
            .iter()
            .position(|f| matches!(f, Formula::Lit(l) if l.eval(0) == Ok(true)));
        if let Some(i) = true_lit {
            if !force_cut && (room < 2 || self.rng.gen_bool(0.6)) {
                return Some(ProofTree::leaf(gamma, i));
            }
        }
        let fill = self.nodes as f64 / self.shape.max_nodes as f64;
        if room >= 2 && (force_cut || self.rng.gen_bool((0.55 * (1.0 - fill)).max(0.0))) {
            let moves = self.wrong_witness_moves(&gamma);
            if force_cut || moves.is_empty() || self.rng.gen_bool(0.7) {
                return self.cut(gamma, depth);
            }
            let &(i, w) = moves.choose(self.rng).expect("non-empty");
            return self.step(gamma, depth, i, w);
        }
        if let Some(i) = true_lit {
            return Some(ProofTree::leaf(gamma, i));
        }
        let finishes: Vec<(usize, u64)> = gamma
            .iter()
            .enumerate()
            .filter_map(|(i, f)| correct_witness(f).map(|w| (i, w)))
            .collect();
        let &(i, w) = finishes.choose(self.rng)?;
        self.step(gamma, depth, i, w)
    }

    /// Sb1/Sb2 on the formula at `i` with witness value `w`.
    fn step(&mut self, gamma: Vec<Formula>, depth: usize, i: usize, w: u64) -> Option<ProofTree> {
        let f = gamma[i].clone();
        let witness = self.witness_term(w);
        let (rule, aux): (Rule, Vec<Literal>) = match &f {
            Formula::ExLit { .. } => (
                Rule::Sb1 {
                    principal: i,
                    witness: witness.clone(),
                },
                vec![f.instance(&witness)?],
            ),
            Formula::ExAll { .. } => {
                let k = f.inner_bound_at(&witness)?.eval(0).ok()?;
                (
                    Rule::Sb2 {
                        principal: i,
                        witness: witness.clone(),
                    },
                    (0..k)
                        .map(|m| f.instance2(&witness, m))
                        .collect::<Option<_>>()?,
                )
            }
            Formula::Lit(_) => return None,
        };
        let mut children = Vec::with_capacity(aux.len());
        for l in aux {
            let mut upper = gamma.clone();
            upper.push(l.into());
            children.push(self.prove(upper, depth + 1, false)?);
        }
        Some(ProofTree::new(gamma, rule, children))
    }

    fn cut(&mut self, gamma: Vec<Formula>, depth: usize) -> Option<ProofTree> {
        let c = loop {
            let c = random_cut_formula(self.rng, self.shape.class);
            if !sequent_contains(&gamma, &c) {
                break c;
            }
        };
        let s0 = c.bound()?.eval(0).ok()?;
        let mut children = Vec::new();
        for n in 0..s0 {
            let mut upper = gamma.clone();
            upper.push(c.negated_instance(n)?);
            children.push(self.prove(upper, depth + 1, false)?);
        }
        let mut upper = gamma.clone();
        upper.push(c.clone());
        children.push(self.prove(upper, depth + 1, false)?);
        Some(ProofTree::new(gamma, Rule::Cut { formula: c }, children))
    }

    /// Steps whose new literals are not all true.
    fn wrong_witness_moves(&self, gamma: &[Formula]) -> Vec<(usize, u64)> {
        let mut out = Vec::new();
        for (i, f) in gamma.iter().enumerate() {
            if self.shape.class == ProofClass::Sigma1
                && f.class() > super::formula::FormulaClass::Sigma1
            {
                continue;
            }
            let Some(b) = f.bound().and_then(|b| b.eval(0).ok()) else {
                continue;
            };
            for w in 0..b.min(EVAL_LIMIT) {
                let wrong = match f {
                    Formula::ExLit { .. } => {
                        !f.instance(&num(w)).is_some_and(|l| l.eval(0) == Ok(true))
                    }
                    Formula::ExAll { .. } => f.negated_instance(w).is_some_and(|neg| truth(&neg)),
                    Formula::Lit(_) => false,
                };
                if wrong {
                    out.push((i, w));
                }
            }
        }
        out
    }

    /// A closed term with value `w`, sometimes written as a sum.
    fn witness_term(&mut self, w: u64) -> Term {
        if w > 0 && self.rng.gen_bool(0.25) {
            let a = self.rng.gen_range(0..w);
            Term::add(num(a), num(w - a))
        } else {
            num(w)
        }
    }
}

/// The least witness that makes every new literal true.
fn correct_witness(f: &Formula) -> Option<u64> {
    let b = f.bound()?.eval(0).ok()?.min(EVAL_LIMIT);
    (0..b).find(|&w| match f {
        Formula::ExLit { .. } => f.instance(&num(w)).is_some_and(|l| l.eval(0) == Ok(true)),
        Formula::ExAll { .. } => f.negated_instance(w).is_some_and(|neg| !truth(&neg)),
        Formula::Lit(_) => false,
    })
}
