//! Terms, bounded formulas and sequent derivations with Σb1/Σb2 rules and
//! cuts, plus validation and parameterised templates.

mod derivation;
mod formula;
mod generate;
mod path;
mod template;
mod term;
mod validate;

pub use derivation::{
    kb_index, rightmost_child, vanishing_point, Derivation, DerivationNode, KbIndex, ProofError,
    ProofTree, Rule,
};
pub use formula::{
    eval_literal, multiset_difference, sequent_contains, Formula, FormulaClass, Literal,
};
pub use generate::{generate_derivation, DerivationShape};
pub use path::NodePath;
pub use template::{
    substitute_numeral, unfold, DerivationTemplate, TemplateChild, TemplateError, TemplateNode,
    MAX_TEMPLATE_NODES,
};
pub use term::{eval_term, EvalError, Op, Term, DEFAULT_VALUE_BITS, PARAMETER};
pub use validate::{validate, ProofClass, ValidationFailure, ValidationReport};
