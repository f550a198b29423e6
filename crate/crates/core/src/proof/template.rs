use thiserror::Error;

use crate::point::Polynomial;

use super::derivation::{Derivation, ProofTree, Rule};
use super::formula::Formula;
use super::term::{EvalError, Term, PARAMETER};
use super::validate::{validate, ProofClass, ValidationReport};

/// Node limit for unfolded templates.
pub const MAX_TEMPLATE_NODES: usize = 1 << 20;

/// A node of a derivation template. Sequents, witnesses and cut formulas may
/// mention the parameter and the indices of enclosing families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateNode {
    pub sequent: Vec<Formula>,
    pub rule: Rule,
    pub children: Vec<TemplateChild>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateChild {
    Node(TemplateNode),
    /// One copy of `body` for each `index` in `from..bound`.
    Family {
        index: String,
        from: Option<Term>,
        bound: Term,
        body: TemplateNode,
    },
}

impl TemplateNode {
    pub fn new(sequent: Vec<Formula>, rule: Rule, children: Vec<TemplateChild>) -> Self {
        TemplateNode {
            sequent,
            rule,
            children,
        }
    }

    pub fn leaf(sequent: Vec<Formula>, index: usize) -> Self {
        TemplateNode::new(sequent, Rule::Initial { index }, Vec::new())
    }

    fn substitute(&self, var: &str, by: &Term) -> TemplateNode {
        TemplateNode {
            sequent: self.sequent.iter().map(|f| f.substitute(var, by)).collect(),
            rule: self.rule.substitute(var, by),
            children: self
                .children
                .iter()
                .map(|c| match c {
                    TemplateChild::Node(n) => TemplateChild::Node(n.substitute(var, by)),
                    TemplateChild::Family {
                        index,
                        from,
                        bound,
                        body,
                    } => TemplateChild::Family {
                        index: index.clone(),
                        from: from.as_ref().map(|t| t.substitute(var, by)),
                        bound: bound.substitute(var, by),
                        // an inner family index shadows the outer variable
                        body: if index == var {
                            body.clone()
                        } else {
                            body.substitute(var, by)
                        },
                    },
                })
                .collect(),
        }
    }
}

impl From<TemplateNode> for TemplateChild {
    fn from(n: TemplateNode) -> Self {
        TemplateChild::Node(n)
    }
}

/// A family of derivations, one for each value of the parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTemplate {
    pub root: TemplateNode,
    pub depth_bound: Option<Polynomial>,
}

impl DerivationTemplate {
    pub fn new(root: TemplateNode) -> Self {
        DerivationTemplate {
            root,
            depth_bound: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("family bound cannot be evaluated: {0}")]
    Eval(#[from] EvalError),
    #[error("unfolded derivation exceeds {0} nodes")]
    TooLarge(usize),
    #[error("unfolded derivation is invalid:\n{0}")]
    ValidationFailed(ValidationReport),
}

/// Unfolds the template at parameter `x` without validating it.
pub fn unfold(template: &DerivationTemplate, x: u64) -> Result<Derivation, TemplateError> {
    let root = template.root.substitute(PARAMETER, &Term::num(x));
    let mut budget = MAX_TEMPLATE_NODES;
    let tree = expand(&root, x, &mut budget)?;
    let d = Derivation::from_tree(x, tree);
    Ok(match &template.depth_bound {
        Some(b) => d.with_depth_bound(b.clone()),
        None => d,
    })
}

/// Unfolds the template at parameter `x` and validates the result.
pub fn substitute_numeral(
    template: &DerivationTemplate,
    x: u64,
) -> Result<Derivation, TemplateError> {
    let d = unfold(template, x)?;
    let report = validate(&d, ProofClass::Sigma2);
    if report.is_valid() {
        Ok(d)
    } else {
        Err(TemplateError::ValidationFailed(report))
    }
}

fn expand(node: &TemplateNode, x: u64, budget: &mut usize) -> Result<ProofTree, TemplateError> {
    if *budget == 0 {
        return Err(TemplateError::TooLarge(MAX_TEMPLATE_NODES));
    }
    *budget -= 1;
    let mut children = Vec::new();
    for c in &node.children {
        match c {
            TemplateChild::Node(n) => children.push(expand(n, x, budget)?),
            TemplateChild::Family {
                index,
                from,
                bound,
                body,
            } => {
                let lo = from.as_ref().map(|t| t.eval(x)).transpose()?.unwrap_or(0);
                let hi = bound.eval(x)?;
                if hi.saturating_sub(lo) > *budget as u64 {
                    return Err(TemplateError::TooLarge(MAX_TEMPLATE_NODES));
                }
                for i in lo..hi {
                    children.push(expand(&body.substitute(index, &Term::num(i)), x, budget)?);
                }
            }
        }
    }
    Ok(ProofTree::new(
        node.sequent.clone(),
        node.rule.clone(),
        children,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::formula::Literal;
    use crate::proof::path::NodePath;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    /// A cut on `∃z<x. z = z+1` whose left uppers are one family.
    fn cut_family() -> DerivationTemplate {
        let e = Formula::exists("y", Term::num(1), Literal::eq(v("y"), Term::num(0)));
        let c = Formula::exists(
            "z",
            v("x"),
            Literal::eq(v("z"), Term::add(v("z"), Term::num(1))),
        );
        let not_c =
            |n: Term| -> Formula { Literal::ne(n.clone(), Term::add(n, Term::num(1))).into() };
        let zero: Formula = Literal::eq(Term::num(0), Term::num(0)).into();
        DerivationTemplate::new(TemplateNode::new(
            vec![e.clone()],
            Rule::Cut { formula: c.clone() },
            vec![
                TemplateChild::Family {
                    index: "n".into(),
                    from: None,
                    bound: v("x"),
                    body: TemplateNode::leaf(vec![e.clone(), not_c(v("n"))], 1),
                },
                TemplateNode::new(
                    vec![e.clone(), c.clone()],
                    Rule::Sb1 {
                        principal: 0,
                        witness: Term::num(0),
                    },
                    vec![TemplateNode::leaf(vec![e, c, zero], 2).into()],
                )
                .into(),
            ],
        ))
    }

    #[test]
    fn family_bound_follows_parameter() {
        for x in 0..5 {
            let d = substitute_numeral(&cut_family(), x).unwrap();
            assert_eq!(d.children(&NodePath::root()).len() as u64, x + 1);
        }
    }

    #[test]
    fn constant_template_is_unchanged() {
        let d = substitute_numeral(&cut_family(), 2).unwrap();
        let tree = d.to_tree().unwrap();
        fn lift(t: ProofTree) -> TemplateNode {
            TemplateNode::new(
                t.sequent,
                t.rule,
                t.children.into_iter().map(|c| lift(c).into()).collect(),
            )
        }
        let again = substitute_numeral(&DerivationTemplate::new(lift(tree)), 9).unwrap();
        assert_eq!(again.to_tree(), d.to_tree());
    }

    #[test]
    fn invalid_unfolding_is_reported() {
        let mut t = cut_family();
        t.root.rule = Rule::Cut {
            formula: Formula::exists(
                "z",
                Term::add(v("x"), Term::num(1)),
                Literal::eq(v("z"), v("z")),
            ),
        };
        assert!(matches!(
            substitute_numeral(&t, 1),
            Err(TemplateError::ValidationFailed(_))
        ));
    }
}
