use std::fmt;

use serde::{Deserialize, Serialize};

use super::derivation::{Derivation, DerivationNode, Rule};
use super::formula::{multiset_difference, Formula, FormulaClass};
use super::path::NodePath;
use super::term::Term;

/// Highest quantifier class a derivation may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofClass {
    /// Σb1 formulas and Σb1 cuts only.
    Sigma1,
    /// Σb2 formulas allowed.
    Sigma2,
}

impl ProofClass {
    fn max_formula(self) -> FormulaClass {
        match self {
            ProofClass::Sigma1 => FormulaClass::Sigma1,
            ProofClass::Sigma2 => FormulaClass::Sigma2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationFailure {
    pub path: NodePath,
    pub message: String,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    /// Failures at `path`.
    pub fn at(&self, path: &NodePath) -> impl Iterator<Item = &ValidationFailure> {
        let path = path.clone();
        self.failures.iter().filter(move |f| f.path == path)
    }

    fn fail(&mut self, path: &NodePath, message: impl Into<String>) {
        self.failures.push(ValidationFailure {
            path: path.clone(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return writeln!(f, "valid");
        }
        for fail in &self.failures {
            writeln!(f, "{fail}")?;
        }
        Ok(())
    }
}

/// Checks every node of `d` against its rule, at parameter `d.end_x`.
pub fn validate(d: &Derivation, class: ProofClass) -> ValidationReport {
    let mut report = ValidationReport::default();
    let root = NodePath::root();
    if !d.contains(&root) {
        report.fail(&root, "derivation has no root");
        return report;
    }
    let depth_limit = d.depth_bound.as_ref().map(|b| b.at_len_of(d.end_x));
    for (path, node) in d.iter() {
        if let Some(parent) = path.parent() {
            if !d.contains(&parent) {
                report.fail(path, format!("parent {parent} is missing"));
            }
        }
        if let Some(limit) = depth_limit {
            if path.len() as u64 > limit {
                report.fail(
                    path,
                    format!("depth {} exceeds the bound {limit}", path.len()),
                );
            }
        }
        for f in &node.sequent {
            if f.class() > class.max_formula() {
                report.fail(path, format!("{f} is above the allowed class"));
            }
            if !f.is_closed() {
                report.fail(path, format!("{f} has free variables"));
            }
        }
        let children = d.children(path);
        if let Some((i, c)) = children
            .iter()
            .enumerate()
            .find(|(i, c)| c.last() != Some(*i as u32))
        {
            report.fail(
                path,
                format!(
                    "upper sequent {} is missing before {c}",
                    path.child(i as u32)
                ),
            );
        }
        check_rule(d, path, node, &children, class, &mut report);
    }
    report
}

fn check_rule(
    d: &Derivation,
    path: &NodePath,
    node: &DerivationNode,
    children: &[NodePath],
    class: ProofClass,
    report: &mut ValidationReport,
) {
    let x = d.end_x;
    let value = |t: &Term, report: &mut ValidationReport| match t.eval(x) {
        Ok(v) => Some(v),
        Err(e) => {
            report.fail(path, format!("cannot evaluate {t}: {e}"));
            None
        }
    };
    // The upper sequents must be the lower sequent plus the given formulas.
    let expect_children = |expected: Vec<Formula>, report: &mut ValidationReport| {
        if children.len() != expected.len() {
            report.fail(
                path,
                format!(
                    "{} has {} upper sequents, expected {}",
                    node.rule.name(),
                    children.len(),
                    expected.len()
                ),
            );
            return;
        }
        for (c, want) in children.iter().zip(expected) {
            let Some(upper) = d.node(c) else { continue };
            match multiset_difference(&upper.sequent, &node.sequent) {
                None => report.fail(c, "upper sequent does not contain its lower sequent"),
                Some(extra) if extra.len() == 1 && extra[0].alpha_eq(&want) => {}
                Some(extra) => {
                    let got: Vec<String> = extra.iter().map(|f| f.to_string()).collect();
                    report.fail(
                        c,
                        format!("upper sequent adds [{}], expected [{want}]", got.join(", ")),
                    );
                }
            }
        }
    };

    match &node.rule {
        Rule::Initial { index } => {
            if !children.is_empty() {
                report.fail(path, "initial sequent has upper sequents");
            }
            match node.sequent.get(*index) {
                None => report.fail(path, format!("initial index {index} is out of range")),
                Some(Formula::Lit(l)) => match l.eval(x) {
                    Ok(true) => {}
                    Ok(false) => report.fail(path, format!("initial literal is false: {l}")),
                    Err(e) => report.fail(path, format!("cannot evaluate {l}: {e}")),
                },
                Some(f) => report.fail(path, format!("initial formula {f} is not a literal")),
            }
        }
        Rule::Sb1 { principal, witness } => {
            let Some(f @ Formula::ExLit { bound, .. }) = node.sequent.get(*principal) else {
                report.fail(
                    path,
                    format!("sb1 principal {principal} is not a Σb1 formula"),
                );
                return;
            };
            if let (Some(w), Some(b)) = (value(witness, report), value(bound, report)) {
                if w >= b {
                    report.fail(
                        path,
                        format!("witness {witness} = {w} is not below the bound {b}"),
                    );
                }
            }
            let aux = f.instance(witness).expect("Σb1");
            expect_children(vec![aux.into()], report);
        }
        Rule::Sb2 { principal, witness } => {
            if class == ProofClass::Sigma1 {
                report.fail(path, "sb2 step in a Σb1 derivation");
            }
            let Some(f @ Formula::ExAll { bound, .. }) = node.sequent.get(*principal) else {
                report.fail(
                    path,
                    format!("sb2 principal {principal} is not a Σb2 formula"),
                );
                return;
            };
            let (Some(w), Some(b)) = (value(witness, report), value(bound, report)) else {
                return;
            };
            if w >= b {
                report.fail(
                    path,
                    format!("witness {witness} = {w} is not below the bound {b}"),
                );
            }
            let inner = f.inner_bound_at(witness).expect("Σb2");
            let Some(k) = value(&inner, report) else {
                return;
            };
            if k != children.len() as u64 {
                report.fail(
                    path,
                    format!("sb2 has {} upper sequents, expected {k}", children.len()),
                );
                return;
            }
            let aux = (0..k)
                .map(|m| f.instance2(witness, m).expect("Σb2").into())
                .collect();
            expect_children(aux, report);
        }
        Rule::Cut { formula } => {
            let banned = matches!(
                (class, formula),
                (_, Formula::Lit(_)) | (ProofClass::Sigma1, Formula::ExAll { .. })
            );
            if banned {
                report.fail(path, format!("cut formula {formula} is not allowed"));
                return;
            }
            if !formula.is_closed() {
                report.fail(path, format!("cut formula {formula} has free variables"));
                return;
            }
            let Some(s0) = value(formula.bound().expect("quantified"), report) else {
                return;
            };
            if s0 + 1 != children.len() as u64 {
                report.fail(
                    path,
                    format!(
                        "cut has {} upper sequents, expected {}",
                        children.len(),
                        s0 + 1
                    ),
                );
                return;
            }
            let mut expected: Vec<Formula> = (0..s0)
                .map(|n| formula.negated_instance(n).expect("quantified"))
                .collect();
            expected.push(formula.clone());
            expect_children(expected, report);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::derivation::ProofTree;
    use crate::proof::formula::Literal;

    fn e() -> Formula {
        let y = Term::var("y");
        Formula::exists(
            "y",
            Term::num(4),
            Literal::eq(Term::add(y.clone(), y), Term::num(4)),
        )
    }

    fn one_step(w: u64) -> Derivation {
        let aux: Formula = Literal::eq(Term::add(Term::num(w), Term::num(w)), Term::num(4)).into();
        Derivation::from_tree(
            0,
            ProofTree::new(
                vec![e()],
                Rule::Sb1 {
                    principal: 0,
                    witness: Term::num(w),
                },
                vec![ProofTree::leaf(vec![e(), aux], 1)],
            ),
        )
    }

    #[test]
    fn accepts_one_step() {
        let r = validate(&one_step(2), ProofClass::Sigma1);
        assert!(r.is_valid(), "{r}");
    }

    #[test]
    fn false_initial_is_reported_at_its_path() {
        let r = validate(&one_step(1), ProofClass::Sigma1);
        assert_eq!(r.failures.len(), 1, "{r}");
        assert_eq!(r.failures[0].path, NodePath::from([0]));
        assert!(r.failures[0]
            .message
            .starts_with("initial literal is false"));
    }

    #[test]
    fn witness_out_of_range() {
        let r = validate(&one_step(4), ProofClass::Sigma1);
        assert!(r
            .at(&NodePath::root())
            .any(|f| f.message.contains("not below the bound")));
    }

    #[test]
    fn wrong_upper_sequent() {
        let mut d = one_step(2);
        d.node_mut(&NodePath::from([0])).unwrap().sequent.remove(0);
        let r = validate(&d, ProofClass::Sigma1);
        assert!(r
            .at(&NodePath::from([0]))
            .any(|f| f.message.contains("does not contain")));
    }

    #[test]
    fn missing_root() {
        let mut d = one_step(2);
        d.remove(&NodePath::root());
        let r = validate(&d, ProofClass::Sigma1);
        assert_eq!(r.to_string(), "⟨⟩: derivation has no root\n");
    }
}
