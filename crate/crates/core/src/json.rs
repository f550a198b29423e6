//! JSON forms of terms, formulas, derivations, templates, digraphs and
//! families.
//!
//! ```text
//! term      {"num": 3} | {"var": "x"} | {"op": "add", "args": [term, term]}
//! literal   {"neg": false, "lhs": term, "rhs": term}
//! Σb1       {"ex": {"v": "y", "bound": term, "body": literal}}
//! Σb2       {"ex": {"v": "z", "bound": term, "all": {"v": "y", "bound": term, "body": literal}}}
//! rule      {"initial": {"index": 0}} | {"sb1": {"principal": 0, "witness": term}}
//!           | {"sb2": {...}} | {"cut": {"formula": formula}}
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CostedDigraph, NestedGraphFamily};
use crate::point::Polynomial;
use crate::proof::{
    Derivation, DerivationNode, DerivationTemplate, Formula, Literal, NodePath, Op, Rule,
    TemplateChild, TemplateNode, Term,
};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("malformed input: {0}")]
    Malformed(String),
}

fn malformed(msg: impl Into<String>) -> JsonError {
    JsonError::Malformed(msg.into())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum TermRepr {
    Num { num: u64 },
    Var { var: String },
    App { op: String, args: Vec<TermRepr> },
}

impl From<&Term> for TermRepr {
    fn from(t: &Term) -> Self {
        match t {
            Term::Num(n) => TermRepr::Num { num: *n },
            Term::Var(v) => TermRepr::Var { var: v.clone() },
            Term::App(op, args) => TermRepr::App {
                op: op.name().to_string(),
                args: args.iter().map(TermRepr::from).collect(),
            },
        }
    }
}

impl TryFrom<TermRepr> for Term {
    type Error = JsonError;
    fn try_from(r: TermRepr) -> Result<Self, JsonError> {
        Ok(match r {
            TermRepr::Num { num } => Term::Num(num),
            TermRepr::Var { var } => Term::Var(var),
            TermRepr::App { op, args } => {
                let op = Op::from_name(&op)
                    .ok_or_else(|| malformed(format!("unknown function {op}")))?;
                let args = args
                    .into_iter()
                    .map(Term::try_from)
                    .collect::<Result<Vec<_>, _>>()?;
                if args.len() != op.arity() {
                    return Err(malformed(format!(
                        "{} takes {} arguments",
                        op.name(),
                        op.arity()
                    )));
                }
                Term::App(op, args)
            }
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LiteralRepr {
    #[serde(default)]
    neg: bool,
    lhs: TermRepr,
    rhs: TermRepr,
}

impl From<&Literal> for LiteralRepr {
    fn from(l: &Literal) -> Self {
        LiteralRepr {
            neg: l.negated,
            lhs: (&l.lhs).into(),
            rhs: (&l.rhs).into(),
        }
    }
}

impl TryFrom<LiteralRepr> for Literal {
    type Error = JsonError;
    fn try_from(r: LiteralRepr) -> Result<Self, JsonError> {
        Ok(Literal {
            negated: r.neg,
            lhs: r.lhs.try_into()?,
            rhs: r.rhs.try_into()?,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AllRepr {
    v: String,
    bound: TermRepr,
    body: LiteralRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ExRepr {
    v: String,
    bound: TermRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    body: Option<LiteralRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    all: Option<AllRepr>,
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum FormulaRepr {
    Ex { ex: ExRepr },
    Lit(LiteralRepr),
}

impl From<&Formula> for FormulaRepr {
    fn from(f: &Formula) -> Self {
        match f {
            Formula::Lit(l) => FormulaRepr::Lit(l.into()),
            Formula::ExLit { var, bound, body } => FormulaRepr::Ex {
                ex: ExRepr {
                    v: var.clone(),
                    bound: bound.into(),
                    body: Some(body.into()),
                    all: None,
                },
            },
            Formula::ExAll {
                var,
                bound,
                inner_var,
                inner_bound,
                body,
            } => FormulaRepr::Ex {
                ex: ExRepr {
                    v: var.clone(),
                    bound: bound.into(),
                    body: None,
                    all: Some(AllRepr {
                        v: inner_var.clone(),
                        bound: inner_bound.into(),
                        body: body.into(),
                    }),
                },
            },
        }
    }
}

impl TryFrom<FormulaRepr> for Formula {
    type Error = JsonError;
    fn try_from(r: FormulaRepr) -> Result<Self, JsonError> {
        Ok(match r {
            FormulaRepr::Lit(l) => Formula::Lit(l.try_into()?),
            FormulaRepr::Ex { ex } => match (ex.body, ex.all) {
                (Some(body), None) => Formula::ExLit {
                    var: ex.v,
                    bound: ex.bound.try_into()?,
                    body: body.try_into()?,
                },
                (None, Some(all)) => Formula::ExAll {
                    var: ex.v,
                    bound: ex.bound.try_into()?,
                    inner_var: all.v,
                    inner_bound: all.bound.try_into()?,
                    body: all.body.try_into()?,
                },
                _ => {
                    return Err(malformed(
                        "\"ex\" needs exactly one of \"body\" and \"all\"",
                    ))
                }
            },
        })
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RuleRepr {
    Initial { index: usize },
    Sb1 { principal: usize, witness: TermRepr },
    Sb2 { principal: usize, witness: TermRepr },
    Cut { formula: FormulaRepr },
}

impl From<&Rule> for RuleRepr {
    fn from(r: &Rule) -> Self {
        match r {
            Rule::Initial { index } => RuleRepr::Initial { index: *index },
            Rule::Sb1 { principal, witness } => RuleRepr::Sb1 {
                principal: *principal,
                witness: witness.into(),
            },
            Rule::Sb2 { principal, witness } => RuleRepr::Sb2 {
                principal: *principal,
                witness: witness.into(),
            },
            Rule::Cut { formula } => RuleRepr::Cut {
                formula: formula.into(),
            },
        }
    }
}

impl TryFrom<RuleRepr> for Rule {
    type Error = JsonError;
    fn try_from(r: RuleRepr) -> Result<Self, JsonError> {
        Ok(match r {
            RuleRepr::Initial { index } => Rule::Initial { index },
            RuleRepr::Sb1 { principal, witness } => Rule::Sb1 {
                principal,
                witness: witness.try_into()?,
            },
            RuleRepr::Sb2 { principal, witness } => Rule::Sb2 {
                principal,
                witness: witness.try_into()?,
            },
            RuleRepr::Cut { formula } => Rule::Cut {
                formula: formula.try_into()?,
            },
        })
    }
}

fn sequent_repr(s: &[Formula]) -> Vec<FormulaRepr> {
    s.iter().map(FormulaRepr::from).collect()
}

fn sequent_from(s: Vec<FormulaRepr>) -> Result<Vec<Formula>, JsonError> {
    s.into_iter().map(Formula::try_from).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct NodeRepr {
    path: NodePath,
    rule: RuleRepr,
    sequent: Vec<FormulaRepr>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DerivationRepr {
    end_x: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth_bound: Option<Polynomial>,
    nodes: Vec<NodeRepr>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TemplateNodeRepr {
    sequent: Vec<FormulaRepr>,
    rule: RuleRepr,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<TemplateChildRepr>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FamilyRepr {
    index: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    from: Option<TermRepr>,
    bound: TermRepr,
    body: TemplateNodeRepr,
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum TemplateChildRepr {
    Family { family: Box<FamilyRepr> },
    Node(TemplateNodeRepr),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TemplateRepr {
    template: TemplateNodeRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth_bound: Option<Polynomial>,
}

impl From<&TemplateNode> for TemplateNodeRepr {
    fn from(n: &TemplateNode) -> Self {
        TemplateNodeRepr {
            sequent: sequent_repr(&n.sequent),
            rule: (&n.rule).into(),
            children: n
                .children
                .iter()
                .map(|c| match c {
                    TemplateChild::Node(n) => TemplateChildRepr::Node(n.into()),
                    TemplateChild::Family {
                        index,
                        from,
                        bound,
                        body,
                    } => TemplateChildRepr::Family {
                        family: Box::new(FamilyRepr {
                            index: index.clone(),
                            from: from.as_ref().map(TermRepr::from),
                            bound: bound.into(),
                            body: body.into(),
                        }),
                    },
                })
                .collect(),
        }
    }
}

impl TryFrom<TemplateNodeRepr> for TemplateNode {
    type Error = JsonError;
    fn try_from(r: TemplateNodeRepr) -> Result<Self, JsonError> {
        Ok(TemplateNode {
            sequent: sequent_from(r.sequent)?,
            rule: r.rule.try_into()?,
            children: r
                .children
                .into_iter()
                .map(|c| {
                    Ok(match c {
                        TemplateChildRepr::Node(n) => TemplateChild::Node(n.try_into()?),
                        TemplateChildRepr::Family { family } => TemplateChild::Family {
                            index: family.index,
                            from: family.from.map(Term::try_from).transpose()?,
                            bound: family.bound.try_into()?,
                            body: family.body.try_into()?,
                        },
                    })
                })
                .collect::<Result<_, JsonError>>()?,
        })
    }
}

pub fn derivation_to_json(d: &Derivation) -> String {
    let repr = DerivationRepr {
        end_x: d.end_x,
        depth_bound: d.depth_bound.clone(),
        nodes: d
            .iter()
            .map(|(p, n)| NodeRepr {
                path: p.clone(),
                rule: (&n.rule).into(),
                sequent: sequent_repr(&n.sequent),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&repr).expect("serializable") + "\n"
}

pub fn derivation_from_json(s: &str) -> Result<Derivation, JsonError> {
    let repr: DerivationRepr = serde_json::from_str(s)?;
    derivation_from_repr(repr)
}

fn derivation_from_repr(repr: DerivationRepr) -> Result<Derivation, JsonError> {
    let mut d = Derivation::new(repr.end_x, Default::default());
    d.depth_bound = repr.depth_bound;
    for n in repr.nodes {
        let node = DerivationNode::new(sequent_from(n.sequent)?, n.rule.try_into()?);
        if d.insert(n.path.clone(), node).is_some() {
            return Err(malformed(format!("node {} appears twice", n.path)));
        }
    }
    Ok(d)
}

pub fn template_to_json(t: &DerivationTemplate) -> String {
    let repr = TemplateRepr {
        template: (&t.root).into(),
        depth_bound: t.depth_bound.clone(),
    };
    serde_json::to_string_pretty(&repr).expect("serializable") + "\n"
}

pub fn template_from_json(s: &str) -> Result<DerivationTemplate, JsonError> {
    let repr: TemplateRepr = serde_json::from_str(s)?;
    template_from_repr(repr)
}

fn template_from_repr(repr: TemplateRepr) -> Result<DerivationTemplate, JsonError> {
    Ok(DerivationTemplate {
        root: repr.template.try_into()?,
        depth_bound: repr.depth_bound,
    })
}

pub fn family_to_json(f: &NestedGraphFamily) -> String {
    serde_json::to_string_pretty(f).expect("serializable") + "\n"
}

pub fn family_from_json(s: &str) -> Result<NestedGraphFamily, JsonError> {
    Ok(serde_json::from_str(s)?)
}

pub fn digraph_to_json(g: &CostedDigraph) -> String {
    serde_json::to_string_pretty(g).expect("serializable") + "\n"
}

pub fn digraph_from_json(s: &str) -> Result<CostedDigraph, JsonError> {
    let g: CostedDigraph = serde_json::from_str(s)?;
    // normalise edge order
    Ok(CostedDigraph::new(g.costs, g.edges))
}

/// Any of the supported input files.
#[derive(Debug, Clone)]
pub enum InputFile {
    Derivation(Derivation),
    Template(DerivationTemplate),
    Family(NestedGraphFamily),
    Digraph(CostedDigraph),
}

impl InputFile {
    pub fn kind(&self) -> &'static str {
        match self {
            InputFile::Derivation(_) => "derivation",
            InputFile::Template(_) => "template",
            InputFile::Family(_) => "family",
            InputFile::Digraph(_) => "digraph",
        }
    }
}

/// Parses a file of any kind, telling them apart by their top-level keys.
pub fn parse_input(s: &str) -> Result<InputFile, JsonError> {
    let value: serde_json::Value = serde_json::from_str(s)?;
    let obj = value
        .as_object()
        .ok_or_else(|| malformed("expected a JSON object"))?;
    // digraphs also carry a `nodes` count, so look for `edges` first
    if obj.contains_key("edges") {
        let g: CostedDigraph = serde_json::from_value(value)?;
        Ok(InputFile::Digraph(CostedDigraph::new(g.costs, g.edges)))
    } else if obj.contains_key("nodes") {
        derivation_from_repr(serde_json::from_value(value)?).map(InputFile::Derivation)
    } else if obj.contains_key("template") {
        template_from_repr(serde_json::from_value(value)?).map(InputFile::Template)
    } else if obj.contains_key("problems") {
        Ok(InputFile::Family(serde_json::from_value(value)?))
    } else {
        Err(malformed(
            "unrecognised file: expected one of edges, nodes, template, problems",
        ))
    }
}
