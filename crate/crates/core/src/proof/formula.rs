use std::fmt;

use super::term::{EvalError, Term, PARAMETER};

/// `lhs = rhs`, or its negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub negated: bool,
    pub lhs: Term,
    pub rhs: Term,
}

impl Literal {
    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Literal {
            negated: false,
            lhs,
            rhs,
        }
    }

    pub fn ne(lhs: Term, rhs: Term) -> Self {
        Literal {
            negated: true,
            lhs,
            rhs,
        }
    }

    pub fn negate(&self) -> Self {
        Literal {
            negated: !self.negated,
            ..self.clone()
        }
    }

    pub fn substitute(&self, var: &str, by: &Term) -> Self {
        Literal {
            negated: self.negated,
            lhs: self.lhs.substitute(var, by),
            rhs: self.rhs.substitute(var, by),
        }
    }

    pub fn eval(&self, x: u64) -> Result<bool, EvalError> {
        Ok((self.lhs.eval(x)? == self.rhs.eval(x)?) != self.negated)
    }

    fn free_vars(&self, out: &mut Vec<String>) {
        self.lhs.free_vars(out);
        self.rhs.free_vars(out);
    }
}

/// Truth value of a closed literal.
pub fn eval_literal(l: &Literal, x: u64) -> Result<bool, EvalError> {
    l.eval(x)
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.negated { "≠" } else { "=" };
        write!(f, "{}{rel}{}", self.lhs, self.rhs)
    }
}

/// Quantifier class: literals are class 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormulaClass {
    Literal,
    Sigma1,
    Sigma2,
}

/// The formulas that occur in sequents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Lit(Literal),
    /// `∃var<bound. body`
    ExLit {
        var: String,
        bound: Term,
        body: Literal,
    },
    /// `∃var<bound ∀inner_var<inner_bound. body`
    ExAll {
        var: String,
        bound: Term,
        inner_var: String,
        inner_bound: Term,
        body: Literal,
    },
}

impl From<Literal> for Formula {
    fn from(l: Literal) -> Self {
        Formula::Lit(l)
    }
}

impl Formula {
    pub fn exists(var: &str, bound: Term, body: Literal) -> Self {
        Formula::ExLit {
            var: var.to_string(),
            bound,
            body,
        }
    }

    pub fn exists_forall(
        var: &str,
        bound: Term,
        inner_var: &str,
        inner_bound: Term,
        body: Literal,
    ) -> Self {
        Formula::ExAll {
            var: var.to_string(),
            bound,
            inner_var: inner_var.to_string(),
            inner_bound,
            body,
        }
    }

    pub fn class(&self) -> FormulaClass {
        match self {
            Formula::Lit(_) => FormulaClass::Literal,
            Formula::ExLit { .. } => FormulaClass::Sigma1,
            Formula::ExAll { .. } => FormulaClass::Sigma2,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Formula::Lit(l) => Some(l),
            _ => None,
        }
    }

    /// Replaces free occurrences of `var` by the closed term `by`.
    pub fn substitute(&self, var: &str, by: &Term) -> Self {
        match self {
            Formula::Lit(l) => Formula::Lit(l.substitute(var, by)),
            Formula::ExLit {
                var: v,
                bound,
                body,
            } => Formula::ExLit {
                var: v.clone(),
                bound: bound.substitute(var, by),
                body: if v == var {
                    body.clone()
                } else {
                    body.substitute(var, by)
                },
            },
            Formula::ExAll {
                var: v,
                bound,
                inner_var: w,
                inner_bound,
                body,
            } => {
                let outer_bound = v == var;
                Formula::ExAll {
                    var: v.clone(),
                    bound: bound.substitute(var, by),
                    inner_var: w.clone(),
                    inner_bound: if outer_bound {
                        inner_bound.clone()
                    } else {
                        inner_bound.substitute(var, by)
                    },
                    body: if outer_bound || w == var {
                        body.clone()
                    } else {
                        body.substitute(var, by)
                    },
                }
            }
        }
    }

    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            Formula::Lit(l) => l.free_vars(&mut out),
            Formula::ExLit { var, bound, body } => {
                bound.free_vars(&mut out);
                let mut inner = Vec::new();
                body.free_vars(&mut inner);
                out.extend(inner.into_iter().filter(|v| v != var));
            }
            Formula::ExAll {
                var,
                bound,
                inner_var,
                inner_bound,
                body,
            } => {
                bound.free_vars(&mut out);
                let mut ib = Vec::new();
                inner_bound.free_vars(&mut ib);
                out.extend(ib.into_iter().filter(|v| v != var));
                let mut inner = Vec::new();
                body.free_vars(&mut inner);
                out.extend(inner.into_iter().filter(|v| v != var && v != inner_var));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// No free variables other than the parameter.
    pub fn is_closed(&self) -> bool {
        self.free_vars().iter().all(|v| v == PARAMETER)
    }

    /// The same formula with bound variables renamed to fixed names.
    pub fn canonical(&self) -> Self {
        match self {
            Formula::Lit(_) => self.clone(),
            Formula::ExLit { var, bound, body } => {
                let v0 = Term::var("#0");
                Formula::ExLit {
                    var: "#0".into(),
                    bound: bound.clone(),
                    body: body.substitute(var, &v0),
                }
            }
            Formula::ExAll {
                var,
                bound,
                inner_var,
                inner_bound,
                body,
            } => {
                let v0 = Term::var("#0");
                let v1 = Term::var("#1");
                let body = if inner_var == var {
                    body.substitute(inner_var, &v1)
                } else {
                    body.substitute(var, &v0).substitute(inner_var, &v1)
                };
                Formula::ExAll {
                    var: "#0".into(),
                    bound: bound.clone(),
                    inner_var: "#1".into(),
                    inner_bound: inner_bound.substitute(var, &v0),
                    body,
                }
            }
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self == other || self.canonical() == other.canonical()
    }

    /// The auxiliary formula of a Σb1 step: `body[var := witness]`.
    pub fn instance(&self, witness: &Term) -> Option<Literal> {
        match self {
            Formula::ExLit { var, body, .. } => Some(body.substitute(var, witness)),
            _ => None,
        }
    }

    /// The auxiliary formula of the `m`-th upper sequent of a Σb2 step.
    pub fn instance2(&self, witness: &Term, m: u64) -> Option<Literal> {
        match self {
            Formula::ExAll {
                var,
                inner_var,
                body,
                ..
            } => {
                let b = if var == inner_var {
                    body.clone()
                } else {
                    body.substitute(var, witness)
                };
                Some(b.substitute(inner_var, &Term::num(m)))
            }
            _ => None,
        }
    }

    /// The bound of the universal quantifier once the outer variable is `witness`.
    pub fn inner_bound_at(&self, witness: &Term) -> Option<Term> {
        match self {
            Formula::ExAll {
                var, inner_bound, ..
            } => Some(inner_bound.substitute(var, witness)),
            _ => None,
        }
    }

    /// `¬B(n)` for a cut formula `∃v<s B(v)`. The negation of a literal body
    /// is a literal; the negation of `∀w<t L` is `∃w<t ¬L`.
    pub fn negated_instance(&self, n: u64) -> Option<Formula> {
        let num = Term::num(n);
        match self {
            Formula::Lit(_) => None,
            Formula::ExLit { var, body, .. } => {
                Some(Formula::Lit(body.substitute(var, &num).negate()))
            }
            Formula::ExAll {
                var,
                inner_var,
                inner_bound,
                body,
                ..
            } => {
                let b = if var == inner_var {
                    body.clone()
                } else {
                    body.substitute(var, &num)
                };
                Some(Formula::ExLit {
                    var: inner_var.clone(),
                    bound: inner_bound.substitute(var, &num),
                    body: b.negate(),
                })
            }
        }
    }

    /// The outer bound of a quantified formula.
    pub fn bound(&self) -> Option<&Term> {
        match self {
            Formula::Lit(_) => None,
            Formula::ExLit { bound, .. } | Formula::ExAll { bound, .. } => Some(bound),
        }
    }

    /// Truth value by enumerating the bounded quantifiers. Bounds above
    /// `limit` are refused with `None`.
    pub fn eval_bounded(&self, x: u64, limit: u64) -> Result<Option<bool>, EvalError> {
        match self {
            Formula::Lit(l) => l.eval(x).map(Some),
            Formula::ExLit { bound, .. } => {
                let b = bound.eval(x)?;
                if b > limit {
                    return Ok(None);
                }
                for n in 0..b {
                    if self.instance(&Term::num(n)).expect("Σb1").eval(x)? {
                        return Ok(Some(true));
                    }
                }
                Ok(Some(false))
            }
            Formula::ExAll { bound, .. } => {
                let b = bound.eval(x)?;
                if b > limit {
                    return Ok(None);
                }
                for n in 0..b {
                    let neg = self.negated_instance(n).expect("Σb2");
                    match neg.eval_bounded(x, limit)? {
                        None => return Ok(None),
                        Some(false) => return Ok(Some(true)),
                        Some(true) => {}
                    }
                }
                Ok(Some(false))
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Lit(l) => write!(f, "{l}"),
            Formula::ExLit { var, bound, body } => write!(f, "∃{var}<{bound}.{body}"),
            Formula::ExAll {
                var,
                bound,
                inner_var,
                inner_bound,
                body,
            } => write!(f, "∃{var}<{bound}∀{inner_var}<{inner_bound}.{body}"),
        }
    }
}

/// Multiset inclusion up to renaming of bound variables. On success returns
/// the formulas of `big` left over once `small` is matched.
pub fn multiset_difference<'a>(big: &'a [Formula], small: &[Formula]) -> Option<Vec<&'a Formula>> {
    let canon_big: Vec<Formula> = big.iter().map(Formula::canonical).collect();
    let mut used = vec![false; big.len()];
    for f in small {
        let c = f.canonical();
        let i = (0..big.len()).find(|&i| !used[i] && canon_big[i] == c)?;
        used[i] = true;
    }
    Some(
        big.iter()
            .zip(used)
            .filter(|(_, u)| !u)
            .map(|(f, _)| f)
            .collect(),
    )
}

/// Whether `a` occurs in `seq`, up to renaming of bound variables.
pub fn sequent_contains(seq: &[Formula], a: &Formula) -> bool {
    let c = a.canonical();
    seq.iter().any(|f| f.canonical() == c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Term {
        Term::num(v)
    }

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    #[test]
    fn alpha_equivalence() {
        let a = Formula::exists("y", n(4), Literal::eq(Term::add(v("y"), v("y")), n(4)));
        let b = Formula::exists("z", n(4), Literal::eq(Term::add(v("z"), v("z")), n(4)));
        let c = Formula::exists("z", n(5), Literal::eq(Term::add(v("z"), v("z")), n(4)));
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
        let p = Formula::exists_forall(
            "z",
            n(2),
            "y",
            n(2),
            Literal::eq(Term::mul(v("z"), v("y")), v("y")),
        );
        let q = Formula::exists_forall(
            "a",
            n(2),
            "b",
            n(2),
            Literal::eq(Term::mul(v("a"), v("b")), v("b")),
        );
        let r = Formula::exists_forall(
            "a",
            n(2),
            "b",
            n(2),
            Literal::eq(Term::mul(v("b"), v("a")), v("b")),
        );
        assert!(p.alpha_eq(&q));
        assert!(!p.alpha_eq(&r));
    }

    #[test]
    fn substitution_respects_binders() {
        let f = Formula::exists("y", v("x"), Literal::eq(v("y"), v("x")));
        let g = f.substitute("x", &n(3));
        assert_eq!(g, Formula::exists("y", n(3), Literal::eq(v("y"), n(3))));
        assert_eq!(f.substitute("y", &n(1)), f);
        assert!(f.is_closed());
        assert!(!Formula::Lit(Literal::eq(v("y"), n(0))).is_closed());
    }

    #[test]
    fn negated_instances() {
        let c = Formula::exists("z", n(2), Literal::eq(Term::add(v("z"), n(1)), n(2)));
        assert_eq!(
            c.negated_instance(0),
            Some(Formula::Lit(Literal::ne(Term::add(n(0), n(1)), n(2))))
        );
        let a = Formula::exists_forall(
            "z",
            n(2),
            "y",
            n(2),
            Literal::eq(Term::mul(v("z"), v("y")), v("y")),
        );
        assert_eq!(
            a.negated_instance(0),
            Some(Formula::exists(
                "y",
                n(2),
                Literal::ne(Term::mul(n(0), v("y")), v("y"))
            ))
        );
        assert_eq!(
            a.instance2(&n(1), 1),
            Some(Literal::eq(Term::mul(n(1), n(1)), n(1)))
        );
    }

    #[test]
    fn bounded_truth() {
        let a = Formula::exists_forall(
            "z",
            n(2),
            "y",
            n(2),
            Literal::eq(Term::mul(v("z"), v("y")), v("y")),
        );
        assert_eq!(a.eval_bounded(0, 16), Ok(Some(true)));
        let e = Formula::exists("y", n(2), Literal::eq(v("y"), n(5)));
        assert_eq!(e.eval_bounded(0, 16), Ok(Some(false)));
        assert_eq!(e.eval_bounded(0, 1), Ok(None));
    }

    #[test]
    fn multisets() {
        let a: Formula = Literal::eq(n(0), n(0)).into();
        let b: Formula = Literal::eq(n(1), n(1)).into();
        let big = vec![a.clone(), b.clone(), a.clone()];
        let rest = multiset_difference(&big, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(rest, vec![&a]);
        assert!(multiset_difference(&big, &[b.clone(), b]).is_none());
    }
}
