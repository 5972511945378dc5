//! First-order sentences in the language of groups, evaluated over finite
//! groups by exhaustive quantification.
//!
//! Concrete syntax:
//!
//! ```text
//! formula := "A" var "." formula | "E" var "." formula | imp
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | quantifier | "(" formula ")" | term "=" term
//! term    := factor (("*")? factor)*
//! factor  := ("e" | var | "(" term ")") ("^-1")*
//! ```
//!
//! `A`, `E` and `e` are reserved; everything else matching
//! `[A-Za-z_][A-Za-z0-9_]*` is a variable.

mod eval;
mod parse;
mod sentence;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::groups::GroupError;

pub use eval::{evaluate, evaluate_sentence, Binding, EvalReport, Evaluation, DEFAULT_EVAL_BUDGET};
pub use parse::{parse, read_sentences, SentenceLine};
pub use sentence::{folner_sentence, predicted_size, SentenceOptions, MAX_FORMULA_NODES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoError {
    #[error("syntax error at line {line}, column {column}: expected {expected}, found {found}")]
    Syntax { line: usize, column: usize, expected: String, found: String },
    #[error("free variables without a value: {}", .0.join(", "))]
    FreeVariables(Vec<String>),
    #[error("evaluation would visit about {estimated} assignments, budget is {budget}")]
    BudgetExceeded { estimated: u128, budget: u64 },
    #[error("formula would have {size} nodes, cap is {cap}")]
    TooLarge { size: u128, cap: u64 },
    #[error("invalid request: {0}")]
    Invalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl FoError {
    /// `(line, column)` of a syntax error.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            FoError::Syntax { line, column, .. } => Some((*line, *column)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Identity,
    Mul(Box<Term>, Box<Term>),
    Inv(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn inv(a: Term) -> Term {
        Term::Inv(Box::new(a))
    }

    pub fn size(&self) -> u64 {
        match self {
            Term::Var(_) | Term::Identity => 1,
            Term::Mul(a, b) => 1 + a.size() + b.size(),
            Term::Inv(a) => 1 + a.size(),
        }
    }

    fn vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::Identity => {}
            Term::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Term::Inv(a) => a.vars(out),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(f))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    /// `e = e`
    pub fn truth() -> Formula {
        Formula::Eq(Term::Identity, Term::Identity)
    }

    /// `!(e = e)`
    pub fn falsity() -> Formula {
        Formula::not(Formula::truth())
    }

    /// Left-nested conjunction; `truth()` when empty.
    pub fn all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::and).unwrap_or_else(Formula::truth)
    }

    /// Left-nested disjunction; `falsity()` when empty.
    pub fn any(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::or).unwrap_or_else(Formula::falsity)
    }

    /// Node count, terms included.
    pub fn size(&self) -> u64 {
        match self {
            Formula::Eq(a, b) => 1 + a.size() + b.size(),
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Maximal nesting of quantifiers.
    pub fn quantifier_depth(&self) -> u32 {
        match self {
            Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.quantifier_depth(),
        }
    }

    /// Variables occurring free, sorted.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Eq(a, b) => {
                    let mut vs = vec![];
                    a.vars(&mut vs);
                    b.vars(&mut vs);
                    for v in vs {
                        if !bound.iter().any(|x| x == v) {
                            out.insert(v.to_string());
                        }
                    }
                }
                Formula::Not(f) => go(f, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Forall(v, f) | Formula::Exists(v, f) => {
                    bound.push(v.clone());
                    go(f, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut vec![], &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Variables bound again inside their own scope. Legal (the inner
    /// binding wins) but usually a slip.
    pub fn shadowed(&self) -> Vec<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match f {
                Formula::Eq(..) => {}
                Formula::Not(f) => go(f, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Forall(v, f) | Formula::Exists(v, f) => {
                    if bound.contains(v) && !out.contains(v) {
                        out.push(v.clone());
                    }
                    bound.push(v.clone());
                    go(f, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = vec![];
        go(self, &mut vec![], &mut out);
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Identity => f.write_str("e"),
            Term::Mul(a, b) => write!(f, "({a} * {b})"),
            Term::Inv(a) => write!(f, "{a}^-1"),
        }
    }
}

/// Canonical form: every connective and quantifier in parentheses, so
/// `parse(&f.to_string())` gives back `f`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(p) => write!(f, "!({p})"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Forall(v, p) => write!(f, "(A {v}. {p})"),
            Formula::Exists(v, p) => write!(f, "(E {v}. {p})"),
        }
    }
}

/// Renders a formula; same as `to_string`.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_and_shadowed() {
        let f = parse("A x. x * y = e & (E x. x = x)").unwrap();
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
        assert!(!f.is_sentence());
        assert_eq!(f.shadowed(), vec!["x".to_string()]);
        assert_eq!(f.quantifier_depth(), 2);
    }

    #[test]
    fn printing() {
        let f = parse("E x. !(x = e) & x*x = e").unwrap();
        assert_eq!(print(&f), "(E x. (!(x = e) & (x * x) = e))");
        let g = parse("A x. (x y)^-1^-1 = e").unwrap();
        assert_eq!(g.to_string(), "(A x. (x * y)^-1^-1 = e)");
    }
}
