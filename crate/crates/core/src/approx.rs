//! Constructive weak approximation over `Q` and `Q(i)`.
//!
//! Each target is turned into a congruence modulo a prime power in `Z` or
//! `Z[i]`, the system is solved by the Chinese remainder theorem, and the
//! solution is divided by a product of prime powers to reach negative
//! valuations. The result is checked against every target before it is
//! returned.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::field::{FieldElem, FieldId, GaussianInt, ParseError};
use crate::valuation::{Valuation, ValuationError, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("no targets given")]
    NoTargets,
    #[error("element of {found} is not in {expected}")]
    FieldMismatch { expected: FieldId, found: FieldId },
    #[error("valuation {0} appears in more than one target")]
    InconsistentTargets(Valuation),
    #[error("separating a valuation from itself")]
    SameValuation,
    #[error("approximation output failed verification")]
    VerificationFailed,
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetMode {
    /// `val(x) = n`
    ExactValue(i64),
    /// `val(x - center) >= min_val`
    Congruence { center: FieldElem, min_val: i64 },
    /// `val(x) >= n`
    AtLeast(i64),
    /// `val(x) > n`, realized as `val(x) = n + 1`
    GreaterThan(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueTarget {
    pub valuation: Valuation,
    pub mode: TargetMode,
}

impl ValueTarget {
    pub fn exact(valuation: Valuation, n: i64) -> Self {
        ValueTarget {
            valuation,
            mode: TargetMode::ExactValue(n),
        }
    }

    pub fn at_least(valuation: Valuation, n: i64) -> Self {
        ValueTarget {
            valuation,
            mode: TargetMode::AtLeast(n),
        }
    }

    pub fn greater_than(valuation: Valuation, n: i64) -> Self {
        ValueTarget {
            valuation,
            mode: TargetMode::GreaterThan(n),
        }
    }

    pub fn congruence(valuation: Valuation, center: FieldElem, min_val: i64) -> Self {
        ValueTarget {
            valuation,
            mode: TargetMode::Congruence { center, min_val },
        }
    }

    pub fn is_satisfied_by(&self, x: &FieldElem) -> Result<bool, ValuationError> {
        let v = &self.valuation;
        Ok(match &self.mode {
            TargetMode::ExactValue(n) => v.val(x)? == Value::Finite(*n),
            TargetMode::AtLeast(n) => v.val(x)? >= Value::Finite(*n),
            TargetMode::GreaterThan(n) => v.val(x)? > Value::Finite(*n),
            TargetMode::Congruence { center, min_val } => {
                v.val(&(x - center))? >= Value::Finite(*min_val)
            }
        })
    }
}

/// `Q:2=1`, `Q:2>=1`, `Q:2>1`, or the congruence form `Q:3:x-1>=2`.
impl fmt::Display for ValueTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.valuation;
        match &self.mode {
            TargetMode::ExactValue(n) => write!(f, "{v}={n}"),
            TargetMode::AtLeast(n) => write!(f, "{v}>={n}"),
            TargetMode::GreaterThan(n) => write!(f, "{v}>{n}"),
            TargetMode::Congruence { center, min_val } => {
                if center.is_zero() {
                    write!(f, "{v}:x>={min_val}")
                } else {
                    write!(f, "{v}:x-({center})>={min_val}")
                }
            }
        }
    }
}

impl FromStr for ValueTarget {
    type Err = ApproxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: alloc::string::String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |msg: &str| ApproxError::Valuation(ParseError::new(0, msg.to_string()).into());
        if let Some(at) = s.find(":x") {
            let valuation: Valuation = s[..at].parse()?;
            let rest = &s[at + 2..];
            let ge = rest.find(">=").ok_or_else(|| bad("congruence target needs `>=`"))?;
            let min_val: i64 = rest[ge + 2..].parse().map_err(|_| bad("bad exponent"))?;
            let shift = &rest[..ge];
            let field = valuation.field();
            let center = if shift.is_empty() {
                FieldElem::zero(field)
            } else if let Some(c) = shift.strip_prefix('-') {
                FieldElem::parse_in(field, c).map_err(ValuationError::from)?
            } else if let Some(c) = shift.strip_prefix('+') {
                -&FieldElem::parse_in(field, c).map_err(ValuationError::from)?
            } else {
                return Err(bad("expected `x-c` or `x+c`"));
            };
            return Ok(ValueTarget::congruence(valuation, center, min_val));
        }
        let (at, len, ctor): (usize, usize, fn(Valuation, i64) -> ValueTarget) =
            if let Some(at) = s.find(">=") {
                (at, 2, ValueTarget::at_least)
            } else if let Some(at) = s.find('>') {
                (at, 1, ValueTarget::greater_than)
            } else if let Some(at) = s.find('=') {
                (at, 1, ValueTarget::exact)
            } else {
                return Err(bad("expected `=`, `>=` or `>`"));
            };
        let valuation: Valuation = s[..at].parse()?;
        let n: i64 = s[at + len..].parse().map_err(|_| bad("bad exponent"))?;
        Ok(ctor(valuation, n))
    }
}

/// One congruence `y = residue (mod prime^exponent)` of the integral system.
struct Congruence {
    prime: GaussianInt,
    exponent: u32,
    residue: GaussianInt,
}

/// Reduces a `prime`-integral field element modulo `prime^exponent`.
fn reduce_integral(x: &FieldElem, prime: &GaussianInt, exponent: u32) -> GaussianInt {
    let modulus = prime.pow(exponent);
    if exponent == 0 || x.is_zero() {
        return GaussianInt::zero();
    }
    let (mut num, d) = x.integral_parts();
    let mut den = GaussianInt::from_int(d);
    while let Some(q) = den.exact_div(prime) {
        den = q;
        num = num.exact_div(prime).expect("element is integral at the prime");
    }
    let inv = den.inverse_mod(&modulus).expect("denominator is prime to the modulus");
    (&num * &inv).reduce_mod(&modulus)
}

/// Solves a system of congruences with pairwise coprime moduli.
fn crt(system: &[Congruence]) -> (GaussianInt, GaussianInt) {
    let mut acc = GaussianInt::zero();
    let mut modulus = GaussianInt::one();
    for c in system {
        let m = c.prime.pow(c.exponent);
        if m.is_unit() {
            continue;
        }
        // acc + modulus * t = residue (mod m)
        let inv = modulus.inverse_mod(&m).expect("moduli are coprime");
        let t = (&(&c.residue - &acc) * &inv).reduce_mod(&m);
        acc = &acc + &(&modulus * &t);
        modulus = &modulus * &m;
        acc = acc.reduce_mod(&modulus);
    }
    (acc, modulus)
}

fn check_targets(targets: &[ValueTarget]) -> Result<FieldId, ApproxError> {
    let first = targets.first().ok_or(ApproxError::NoTargets)?;
    let field = first.valuation.field();
    for (k, t) in targets.iter().enumerate() {
        if t.valuation.field() != field {
            return Err(ApproxError::FieldMismatch {
                expected: field,
                found: t.valuation.field(),
            });
        }
        if let TargetMode::Congruence { center, .. } = &t.mode {
            if !field.contains(center.field()) && !center.im().is_zero() {
                return Err(ApproxError::FieldMismatch {
                    expected: field,
                    found: center.field(),
                });
            }
        }
        if targets[..k].iter().any(|o| o.valuation == t.valuation) {
            return Err(ApproxError::InconsistentTargets(t.valuation.clone()));
        }
    }
    Ok(field)
}

/// Returns a nonzero `x` satisfying every target.
///
/// The output is not canonical; callers should check properties of the
/// result rather than compare it to a fixed value.
pub fn approximate(targets: &[ValueTarget]) -> Result<FieldElem, ApproxError> {
    let field = check_targets(targets)?;

    // Shift exponents so every condition becomes integral: x = y / d.
    let mut shifts = Vec::with_capacity(targets.len());
    for t in targets {
        let v = &t.valuation;
        let s = match &t.mode {
            TargetMode::ExactValue(n) | TargetMode::AtLeast(n) => (-n).max(0),
            TargetMode::GreaterThan(n) => (-(n + 1)).max(0),
            TargetMode::Congruence { center, min_val } => {
                let c = match v.val(center)? {
                    Value::Finite(c) => -c,
                    Value::Infinity => 0,
                };
                (-min_val).max(c).max(0)
            }
        };
        shifts.push(s);
    }
    let mut d = GaussianInt::one();
    for (t, s) in targets.iter().zip(&shifts) {
        d = &d * &t.valuation.prime_element().pow(*s as u32);
    }
    let d_elem = FieldElem::from_gaussian_in(field, &d).expect("d is real over Q");

    let mut system = Vec::with_capacity(targets.len());
    for (t, s) in targets.iter().zip(&shifts) {
        let prime = t.valuation.prime_element();
        let c = match &t.mode {
            TargetMode::ExactValue(n) | TargetMode::GreaterThan(n) => {
                let n = if matches!(t.mode, TargetMode::GreaterThan(_)) { n + 1 } else { *n };
                let e = (n + s) as u32;
                Congruence {
                    residue: prime.pow(e),
                    prime,
                    exponent: e + 1,
                }
            }
            TargetMode::AtLeast(n) => Congruence {
                prime,
                exponent: (n + s) as u32,
                residue: GaussianInt::zero(),
            },
            TargetMode::Congruence { center, min_val } => {
                let e = (min_val + s) as u32;
                let shifted = center * &d_elem;
                Congruence {
                    residue: reduce_integral(&shifted, &prime, e),
                    prime,
                    exponent: e,
                }
            }
        };
        system.push(c);
    }

    let (mut y, modulus) = crt(&system);
    if y.is_zero() {
        y = modulus;
    }
    let y = FieldElem::from_gaussian_in(field, &y).map_err(|_| ApproxError::VerificationFailed)?;
    let x = y.checked_div(&d_elem).expect("d is nonzero");
    for t in targets {
        if !t.is_satisfied_by(&x)? {
            return Err(ApproxError::VerificationFailed);
        }
    }
    Ok(x)
}

/// Some `x` with `val1(x) > 0` and `val2(x - 1) > 0`.
pub fn separate(v1: &Valuation, v2: &Valuation) -> Result<FieldElem, ApproxError> {
    if v1 == v2 {
        return Err(ApproxError::SameValuation);
    }
    if v1.field() != v2.field() {
        return Err(ApproxError::FieldMismatch {
            expected: v1.field(),
            found: v2.field(),
        });
    }
    let field = v1.field();
    approximate(&[
        ValueTarget::congruence(v1.clone(), FieldElem::zero(field), 1),
        ValueTarget::congruence(v2.clone(), FieldElem::one(field), 1),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn v(s: &str) -> Valuation {
        s.parse().unwrap()
    }

    fn q(n: i64) -> FieldElem {
        FieldElem::from_int(FieldId::Rationals, n)
    }

    #[test]
    fn exact_values_with_a_pole() {
        let targets = [
            ValueTarget::exact(v("Q:2"), 1),
            ValueTarget::exact(v("Q:3"), 0),
            ValueTarget::exact(v("Q:5"), -1),
        ];
        let x = approximate(&targets).unwrap();
        assert_eq!(v("Q:2").val(&x).unwrap(), Value::Finite(1));
        assert_eq!(v("Q:3").val(&x).unwrap(), Value::Finite(0));
        assert_eq!(v("Q:5").val(&x).unwrap(), Value::Finite(-1));
    }

    #[test]
    fn congruences_give_least_residue() {
        let targets = [
            ValueTarget::congruence(v("Q:2"), q(0), 2),
            ValueTarget::congruence(v("Q:3"), q(1), 2),
        ];
        assert_eq!(approximate(&targets).unwrap(), q(28));
    }

    #[test]
    fn single_exact_target_is_a_power() {
        assert_eq!(approximate(&[ValueTarget::exact(v("Q:5"), 3)]).unwrap(), q(125));
    }

    #[test]
    fn zero_solution_is_replaced() {
        let x = approximate(&[ValueTarget::congruence(v("Q:2"), q(0), 2)]).unwrap();
        assert!(!x.is_zero());
        assert_eq!(x, q(4));
    }

    #[test]
    fn gaussian_congruences() {
        let qi = FieldId::GaussianRationals;
        let center = FieldElem::parse_in(qi, "1/3+1/2*i").unwrap();
        let targets = [
            ValueTarget::congruence(v("Qi:2+1*i"), center.clone(), 3),
            ValueTarget::exact(v("Qi:2-1*i"), -2),
            ValueTarget::greater_than(v("Qi:3"), 1),
        ];
        let x = approximate(&targets).unwrap();
        for t in &targets {
            assert!(t.is_satisfied_by(&x).unwrap(), "{t} fails for {x}");
        }
    }

    #[test]
    fn errors() {
        assert_eq!(approximate(&[]), Err(ApproxError::NoTargets));
        let dup = [ValueTarget::exact(v("Q:2"), 1), ValueTarget::at_least(v("Q:2"), 0)];
        assert!(matches!(approximate(&dup), Err(ApproxError::InconsistentTargets(_))));
        let mixed = [ValueTarget::exact(v("Q:2"), 1), ValueTarget::exact(v("Qi:3"), 0)];
        assert!(matches!(approximate(&mixed), Err(ApproxError::FieldMismatch { .. })));
        assert_eq!(separate(&v("Q:2"), &v("Q:2")), Err(ApproxError::SameValuation));
    }

    #[test]
    fn separation() {
        assert_eq!(separate(&v("Q:2"), &v("Q:3")).unwrap(), q(4));
        assert_eq!(separate(&v("Q:3"), &v("Q:2")).unwrap(), q(3));
        let (a, b) = (v("Qi:2+1*i"), v("Qi:2-1*i"));
        let x = separate(&a, &b).unwrap();
        assert!(a.residue(&x).unwrap().is_zero());
        assert_eq!(b.residue(&x).unwrap(), b.residue_field().one());
    }

    #[test]
    fn target_syntax_round_trips() {
        for s in ["Q:2=1", "Q:3>=0", "Q:5>-1", "Q:3:x-(1)>=2", "Qi:2+1*i:x-(1+1*i)>=2", "Q:7:x>=1"] {
            let t: ValueTarget = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
        let t: ValueTarget = "Q:3:x-1>=2".parse().unwrap();
        assert_eq!(t, ValueTarget::congruence(v("Q:3"), q(1), 2));
        let t: ValueTarget = "Q:3:x+1>=2".parse().unwrap();
        assert_eq!(t, ValueTarget::congruence(v("Q:3"), q(-1), 2));
    }
}
