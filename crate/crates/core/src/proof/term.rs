use std::fmt;

use thiserror::Error;

use crate::point::bit_len;

/// The parameter that numeral substitution replaces.
pub const PARAMETER: &str = "x";

/// Default bit width of term values.
pub const DEFAULT_VALUE_BITS: u32 = 64;

/// The fixed function signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Add,
    Mul,
    /// truncated subtraction
    Monus,
    /// binary length
    Len,
    /// `a # b = 2^(|a|·|b|)`
    Smash,
    Div2,
    /// `cond(a, b, c) = b` if `a > 0`, else `c`
    Cond,
}

impl Op {
    pub const ALL: [Op; 7] = [
        Op::Add,
        Op::Mul,
        Op::Monus,
        Op::Len,
        Op::Smash,
        Op::Div2,
        Op::Cond,
    ];

    pub fn arity(self) -> usize {
        match self {
            Op::Len | Op::Div2 => 1,
            Op::Cond => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Mul => "mul",
            Op::Monus => "monus",
            Op::Len => "len",
            Op::Smash => "smash",
            Op::Div2 => "div2",
            Op::Cond => "cond",
        }
    }

    pub fn from_name(name: &str) -> Option<Op> {
        Op::ALL.into_iter().find(|op| op.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("term has free variable {0}")]
    OpenTerm(String),
    #[error("value exceeds {0} bits")]
    ValueOverflow(u32),
    #[error("{op} takes {expected} arguments, got {found}")]
    Arity {
        op: &'static str,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Num(u64),
    Var(String),
    App(Op, Vec<Term>),
}

impl Term {
    pub fn num(n: u64) -> Term {
        Term::Num(n)
    }

    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(op: Op, args: Vec<Term>) -> Term {
        Term::App(op, args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Term, b: Term) -> Term {
        Term::App(Op::Add, vec![a, b])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Term, b: Term) -> Term {
        Term::App(Op::Mul, vec![a, b])
    }

    pub fn monus(a: Term, b: Term) -> Term {
        Term::App(Op::Monus, vec![a, b])
    }

    pub fn len(a: Term) -> Term {
        Term::App(Op::Len, vec![a])
    }

    pub fn smash(a: Term, b: Term) -> Term {
        Term::App(Op::Smash, vec![a, b])
    }

    pub fn div2(a: Term) -> Term {
        Term::App(Op::Div2, vec![a])
    }

    pub fn cond(a: Term, b: Term, c: Term) -> Term {
        Term::App(Op::Cond, vec![a, b, c])
    }

    /// Replaces free occurrences of `var`. `by` is expected to be closed.
    pub fn substitute(&self, var: &str, by: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => by.clone(),
            Term::Num(_) | Term::Var(_) => self.clone(),
            Term::App(op, args) => {
                Term::App(*op, args.iter().map(|a| a.substitute(var, by)).collect())
            }
        }
    }

    pub fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Num(_) => {}
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.free_vars(out)),
        }
    }

    pub fn mentions(&self, var: &str) -> bool {
        match self {
            Term::Num(_) => false,
            Term::Var(v) => v == var,
            Term::App(_, args) => args.iter().any(|a| a.mentions(var)),
        }
    }

    /// Value with the parameter bound to `x`, capped at `bits` bits.
    pub fn eval_capped(&self, x: u64, bits: u32) -> Result<u64, EvalError> {
        let v = match self {
            Term::Num(n) => *n,
            Term::Var(v) if v == PARAMETER => x,
            Term::Var(v) => return Err(EvalError::OpenTerm(v.clone())),
            Term::App(op, args) => {
                if args.len() != op.arity() {
                    return Err(EvalError::Arity {
                        op: op.name(),
                        expected: op.arity(),
                        found: args.len(),
                    });
                }
                let overflow = EvalError::ValueOverflow(bits);
                let arg = |i: usize| args[i].eval_capped(x, bits);
                match op {
                    Op::Add => arg(0)?.checked_add(arg(1)?).ok_or(overflow)?,
                    Op::Mul => arg(0)?.checked_mul(arg(1)?).ok_or(overflow)?,
                    Op::Monus => arg(0)?.saturating_sub(arg(1)?),
                    Op::Len => u64::from(bit_len(arg(0)?)),
                    Op::Smash => {
                        let e = u64::from(bit_len(arg(0)?)) * u64::from(bit_len(arg(1)?));
                        if e >= u64::from(bits.min(64)) {
                            return Err(overflow);
                        }
                        1u64 << e
                    }
                    Op::Div2 => arg(0)? / 2,
                    Op::Cond => {
                        if arg(0)? > 0 {
                            arg(1)?
                        } else {
                            arg(2)?
                        }
                    }
                }
            }
        };
        if bits < 64 && v >> bits != 0 {
            return Err(EvalError::ValueOverflow(bits));
        }
        Ok(v)
    }

    pub fn eval(&self, x: u64) -> Result<u64, EvalError> {
        self.eval_capped(x, DEFAULT_VALUE_BITS)
    }
}

/// Value of `t` with the parameter bound to `x`.
pub fn eval_term(t: &Term, x: u64) -> Result<u64, EvalError> {
    t.eval(x)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
            match t {
                Term::App(Op::Add | Op::Mul | Op::Monus | Op::Smash, _) => write!(f, "({t})"),
                _ => write!(f, "{t}"),
            }
        }
        match self {
            Term::Num(n) => write!(f, "{n}"),
            Term::Var(v) => f.write_str(v),
            Term::App(op, args) if args.len() == op.arity() => match op {
                Op::Add | Op::Mul | Op::Monus | Op::Smash => {
                    let sym = match op {
                        Op::Add => "+",
                        Op::Mul => "·",
                        Op::Monus => "∸",
                        _ => "#",
                    };
                    operand(f, &args[0])?;
                    f.write_str(sym)?;
                    operand(f, &args[1])
                }
                Op::Len => write!(f, "|{}|", args[0]),
                Op::Div2 => write!(f, "⌊{}/2⌋", args[0]),
                Op::Cond => write!(f, "cond({}, {}, {})", args[0], args[1], args[2]),
            },
            Term::App(op, args) => {
                let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "{}({})", op.name(), parts.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Term {
        Term::num(v)
    }

    #[test]
    fn monus_truncates() {
        assert_eq!(eval_term(&Term::monus(n(3), n(5)), 0), Ok(0));
        assert_eq!(eval_term(&Term::monus(n(5), n(3)), 0), Ok(2));
    }

    #[test]
    fn smash_is_two_to_product_of_lengths() {
        // |3| = 2, so 3 # 3 = 2^(2*2)
        assert_eq!(eval_term(&Term::smash(n(3), n(3)), 0), Ok(16));
        assert_eq!(eval_term(&Term::smash(n(0), n(9)), 0), Ok(1));
    }

    #[test]
    fn cond_branches() {
        assert_eq!(eval_term(&Term::cond(n(0), n(7), n(9)), 0), Ok(9));
        assert_eq!(eval_term(&Term::cond(n(2), n(7), n(9)), 0), Ok(7));
    }

    #[test]
    fn len_and_div2() {
        assert_eq!(eval_term(&Term::len(n(0)), 0), Ok(0));
        assert_eq!(eval_term(&Term::len(n(8)), 0), Ok(4));
        assert_eq!(eval_term(&Term::div2(n(7)), 0), Ok(3));
    }

    #[test]
    fn parameter_and_open_terms() {
        let t = Term::add(Term::var("x"), n(2));
        assert_eq!(eval_term(&t, 5), Ok(7));
        assert_eq!(
            eval_term(&Term::var("y"), 0),
            Err(EvalError::OpenTerm("y".into()))
        );
    }

    #[test]
    fn overflow_is_an_error() {
        assert_eq!(
            eval_term(&Term::mul(n(u64::MAX), n(2)), 0),
            Err(EvalError::ValueOverflow(64))
        );
        // |2^32 - 1| = 32, and 32·32 >= 64
        let big = n((1 << 32) - 1);
        assert_eq!(
            eval_term(&Term::smash(big.clone(), big), 0),
            Err(EvalError::ValueOverflow(64))
        );
        assert_eq!(n(256).eval_capped(0, 8), Err(EvalError::ValueOverflow(8)));
        assert_eq!(n(255).eval_capped(0, 8), Ok(255));
    }

    #[test]
    fn arity_is_checked() {
        let bad = Term::App(Op::Cond, vec![n(1), n(2)]);
        assert!(matches!(
            eval_term(&bad, 0),
            Err(EvalError::Arity {
                expected: 3,
                found: 2,
                ..
            })
        ));
    }

    #[test]
    fn display() {
        let t = Term::mul(n(0), Term::add(Term::var("y"), n(1)));
        assert_eq!(t.to_string(), "0·(y+1)");
    }
}
