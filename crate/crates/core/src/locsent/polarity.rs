use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{Binder, Formula, Quantifier};

/// A neighbourhood variable occurring with the wrong sign for its quantifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub variable: String,
    pub quantifier: Quantifier,
    /// Connectives from the binder down to the offending occurrence.
    pub path: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (q, want) = match self.quantifier {
            Quantifier::Forall => ("forall", "positively"),
            Quantifier::Exists => ("exists", "negatively"),
        };
        write!(
            f,
            "{q} {} must occur only {want}; offending occurrence at {}",
            self.variable, self.path
        )
    }
}

/// Checks that universally bound neighbourhood variables occur only
/// positively and existentially bound ones only negatively.
pub fn check_polarity(f: &Formula) -> Vec<Violation> {
    let mut out = Vec::new();
    walk(f, &mut out);
    out
}

fn walk(f: &Formula, out: &mut Vec<Violation>) {
    match f {
        Formula::Quant(q, binder, body) => {
            if let Binder::Nbhd { name, .. } = binder {
                let label = match q {
                    Quantifier::Forall => alloc::format!("forall {name}"),
                    Quantifier::Exists => alloc::format!("exists {name}"),
                };
                let mut path = alloc::vec![label];
                scan(body, name, *q, true, &mut path, out);
            }
            walk(body, out);
        }
        Formula::Not(g) => walk(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            walk(a, out);
            walk(b, out);
        }
        Formula::Eq(..) | Formula::Ne(..) | Formula::In(..) => {}
    }
}

fn scan(f: &Formula, var: &str, q: Quantifier, positive: bool, path: &mut Vec<String>, out: &mut Vec<Violation>) {
    let descend = |g: &Formula, label: &str, pos: bool, path: &mut Vec<String>, out: &mut Vec<Violation>| {
        path.push(label.into());
        scan(g, var, q, pos, path, out);
        path.pop();
    };
    match f {
        Formula::In(_, n) if n.var == var => {
            let ok = match q {
                Quantifier::Forall => positive,
                Quantifier::Exists => !positive,
            };
            if !ok {
                out.push(Violation {
                    variable: var.into(),
                    quantifier: q,
                    path: path.join(" > "),
                });
            }
        }
        Formula::Eq(..) | Formula::Ne(..) | Formula::In(..) => {}
        Formula::Not(g) => descend(g, "not", !positive, path, out),
        Formula::And(a, b) => {
            descend(a, "and left", positive, path, out);
            descend(b, "and right", positive, path, out);
        }
        Formula::Or(a, b) => {
            descend(a, "or left", positive, path, out);
            descend(b, "or right", positive, path, out);
        }
        Formula::Implies(a, b) => {
            descend(a, "-> left", !positive, path, out);
            descend(b, "-> right", positive, path, out);
        }
        Formula::Quant(q2, binder, body) => {
            // the parser rejects shadowing, but a hand-built tree may not
            if binder.name() == var {
                return;
            }
            let label = match q2 {
                Quantifier::Forall => alloc::format!("forall {}", binder.name()),
                Quantifier::Exists => alloc::format!("exists {}", binder.name()),
            };
            descend(body, &label, positive, path, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locsent::{parse, GENERATION, GENERATION_CONVERSE, LOCALITY};

    #[test]
    fn builtins_are_well_polarised() {
        for s in [LOCALITY, GENERATION, GENERATION_CONVERSE] {
            assert!(check_polarity(&parse(s).unwrap()).is_empty(), "{s}");
        }
    }

    #[test]
    fn reports_path_of_bad_occurrence() {
        let f = parse("exists U forall x : not (x in U -> x = 0)").unwrap();
        let v = check_polarity(&f);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].variable, "U");
        assert_eq!(v[0].quantifier, Quantifier::Exists);
        assert_eq!(v[0].path, "exists U > forall x > not > -> left");

        let g = parse("forall U forall x : x in U -> x in U").unwrap();
        let v = check_polarity(&g);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].path, "forall U > forall x > -> left");
    }
}
