//! Local sentences: a two-sorted first-order language over a field with a
//! ball-basis topology.
//!
//! Lower-case variables range over the field, capitalised variables range
//! over neighbourhoods of zero. Universal neighbourhood quantifiers may only
//! bind variables occurring positively, existential ones only variables
//! occurring negatively; such sentences can be evaluated on a filter basis.

mod builtin;
mod eval;
mod parse;
mod polarity;

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;

pub use builtin::{GENERATION, GENERATION_CONVERSE, LOCALITY};
pub use eval::{
    audit, evaluate, BoundValue, EvalError, Model, Outcome, SearchBounds, Step, StepChoice, Verdict,
};
pub use parse::{parse, SyntaxError};
pub use polarity::{check_polarity, Violation};

/// The topology a neighbourhood quantifier ranges over when none is named.
pub const DEFAULT_TOPOLOGY: &str = "tau";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Num(BigInt),
    /// The constant `i`.
    Imag,
    Var(String),
    Neg(Box<Term>),
    Bin(BinOp, Box<Term>, Box<Term>),
}

/// `U` or `c*U`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Nbhd {
    pub var: String,
    pub scale: Option<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Binder {
    /// A field variable, optionally restricted to nonzero values.
    Field { name: String, nonzero: bool },
    /// A neighbourhood variable over the named topology.
    Nbhd { name: String, topology: Option<String> },
}

impl Binder {
    pub fn name(&self) -> &str {
        match self {
            Binder::Field { name, .. } | Binder::Nbhd { name, .. } => name,
        }
    }

    pub fn topology(&self) -> &str {
        match self {
            Binder::Nbhd { topology: Some(t), .. } => t,
            _ => DEFAULT_TOPOLOGY,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Ne(Term, Term),
    In(Term, Nbhd),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant(Quantifier, Binder, Box<Formula>),
}

impl Formula {
    /// Free variables, in order of first occurrence.
    pub fn free_vars(&self) -> alloc::vec::Vec<String> {
        let mut out = alloc::vec::Vec::new();
        let mut bound = alloc::vec::Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut alloc::vec::Vec<String>, out: &mut alloc::vec::Vec<String>) {
        let mut note = |name: &str, bound: &alloc::vec::Vec<String>| {
            if !bound.iter().any(|b| b == name) && !out.iter().any(|o| o == name) {
                out.push(name.into());
            }
        };
        match self {
            Formula::Eq(a, b) | Formula::Ne(a, b) => {
                for v in a.vars().into_iter().chain(b.vars()) {
                    note(&v, bound);
                }
            }
            Formula::In(t, n) => {
                for v in t.vars() {
                    note(&v, bound);
                }
                if let Some(s) = &n.scale {
                    for v in s.vars() {
                        note(&v, bound);
                    }
                }
                note(&n.var, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, binder, body) => {
                bound.push(binder.name().into());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

impl Term {
    pub fn vars(&self) -> alloc::vec::Vec<String> {
        match self {
            Term::Num(_) | Term::Imag => alloc::vec::Vec::new(),
            Term::Var(v) => alloc::vec![v.clone()],
            Term::Neg(t) => t.vars(),
            Term::Bin(_, a, b) => {
                let mut v = a.vars();
                v.extend(b.vars());
                v
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Num(n) => write!(f, "{n}"),
            Term::Imag => f.write_str("i"),
            Term::Var(v) => f.write_str(v),
            Term::Neg(t) => write!(f, "(-{t})"),
            Term::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {sym} {b})")
            }
        }
    }
}

impl fmt::Display for Nbhd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.scale {
            None => f.write_str(&self.var),
            Some(s) => write!(f, "{s}*{}", self.var),
        }
    }
}

impl fmt::Display for Binder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binder::Field { name, nonzero: false } => f.write_str(name),
            Binder::Field { name, nonzero: true } => write!(f, "{name} != 0"),
            Binder::Nbhd { name, topology: None } => f.write_str(name),
            Binder::Nbhd { name, topology: Some(t) } => write!(f, "{name} in {t}"),
        }
    }
}

/// Operands of binary connectives: quantifiers are parenthesised because
/// their scope extends as far right as possible.
struct Operand<'a>(&'a Formula);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::Quant(..) => write!(f, "({})", self.0),
            other => write!(f, "{other}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Ne(a, b) => write!(f, "{a} != {b}"),
            Formula::In(t, n) => write!(f, "{t} in {n}"),
            Formula::Not(g) => match g.as_ref() {
                Formula::Eq(..) | Formula::Ne(..) | Formula::In(..) => write!(f, "not ({g})"),
                _ => write!(f, "not {g}"),
            },
            Formula::And(a, b) => write!(f, "({} and {})", Operand(a), Operand(b)),
            Formula::Or(a, b) => write!(f, "({} or {})", Operand(a), Operand(b)),
            Formula::Implies(a, b) => write!(f, "({} -> {})", Operand(a), Operand(b)),
            Formula::Quant(q, binder, body) => {
                let kw = match q {
                    Quantifier::Forall => "forall",
                    Quantifier::Exists => "exists",
                };
                write!(f, "{kw} {binder} : {body}")
            }
        }
    }
}
