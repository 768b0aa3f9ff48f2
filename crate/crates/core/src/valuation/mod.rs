//! Rank-one valuations on `Q` and `Q(i)` and their extended residue maps.
//!
//! A valuation on `Q` is the `p`-adic valuation for a rational prime `p`. A
//! valuation on `Q(i)` is the `pi`-adic valuation for a Gaussian prime `pi`
//! in canonical form (see [`GaussianInt::canonical_associate`]). Two
//! valuations are equivalent exactly when their descriptors are equal.

mod residue;

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::field::{is_prime_u64, FieldElem, FieldId, GaussianInt, ParseError};

pub use residue::{ResidueElem, ResidueField};
pub(crate) use residue::powmod;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("element of {found} is not in {expected}")]
    FieldMismatch { expected: FieldId, found: FieldId },
    #[error("{0} is not prime")]
    NotPrime(alloc::string::String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// How a rational prime `p` behaves in `Z[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Splitting {
    /// `p = 1 mod 4`: two conjugate primes, residue field `F_p`.
    Split,
    /// `p = 3 mod 4`: `p` stays prime, residue field `F_{p^2}`.
    Inert,
    /// `p = 2 = -i(1+i)^2`, residue field `F_2`.
    Ramified,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValuationKind {
    RationalPrime(u64),
    GaussianPrime {
        pi: GaussianInt,
        over: u64,
        splitting: Splitting,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation {
    kind: ValuationKind,
}

/// A value in `Z ∪ {+∞}`; `Finite(_) < Infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Finite(i64),
    Infinity,
}

impl Value {
    pub fn finite(self) -> Option<i64> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinity => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Value::Finite(_))
    }
}

impl core::ops::Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinity,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinity => f.write_str("inf"),
        }
    }
}

/// Componentwise values of one element under a list of valuations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValueVector(pub Vec<Value>);

impl ValueVector {
    pub fn entries(&self) -> &[Value] {
        &self.0
    }
}

impl fmt::Display for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl Valuation {
    pub fn rational(p: u64) -> Result<Valuation, ValuationError> {
        if !is_prime_u64(p) {
            return Err(ValuationError::NotPrime(p.to_string()));
        }
        Ok(Valuation {
            kind: ValuationKind::RationalPrime(p),
        })
    }

    /// The valuation of a Gaussian prime, given by any associate.
    pub fn gaussian(g: &GaussianInt) -> Result<Valuation, ValuationError> {
        let not_prime = || ValuationError::NotPrime(g.to_string());
        if g.is_zero() {
            return Err(not_prime());
        }
        let pi = g.canonical_associate().1;
        let norm = pi.norm().to_u64().ok_or_else(not_prime)?;
        let (over, splitting) = if is_prime_u64(norm) {
            if norm == 2 {
                (2, Splitting::Ramified)
            } else {
                (norm, Splitting::Split)
            }
        } else {
            let p = pi.re.to_u64().filter(|_| pi.im.is_zero()).ok_or_else(not_prime)?;
            if is_prime_u64(p) && p % 4 == 3 {
                (p, Splitting::Inert)
            } else {
                return Err(not_prime());
            }
        };
        Ok(Valuation {
            kind: ValuationKind::GaussianPrime { pi, over, splitting },
        })
    }

    /// All valuations of `field` lying over the rational prime `p`, sorted.
    pub fn over_prime(field: FieldId, p: u64) -> Result<Vec<Valuation>, ValuationError> {
        if !is_prime_u64(p) {
            return Err(ValuationError::NotPrime(p.to_string()));
        }
        Ok(match field {
            FieldId::Rationals => alloc::vec![Valuation::rational(p)?],
            FieldId::GaussianRationals => {
                if p == 2 {
                    alloc::vec![Valuation::gaussian(&GaussianInt::new(1, 1))?]
                } else if p % 4 == 3 {
                    alloc::vec![Valuation::gaussian(&GaussianInt::from_int(p))?]
                } else {
                    let (a, b) = crate::field::two_squares(&BigInt::from(p)).expect("split prime");
                    let pi = GaussianInt::new(a, b);
                    let mut v = alloc::vec![
                        Valuation::gaussian(&pi)?,
                        Valuation::gaussian(&pi.conj())?
                    ];
                    v.sort();
                    v
                }
            }
        })
    }

    pub fn kind(&self) -> &ValuationKind {
        &self.kind
    }

    pub fn field(&self) -> FieldId {
        match self.kind {
            ValuationKind::RationalPrime(_) => FieldId::Rationals,
            ValuationKind::GaussianPrime { .. } => FieldId::GaussianRationals,
        }
    }

    /// The rational prime below this valuation.
    pub fn prime(&self) -> u64 {
        match &self.kind {
            ValuationKind::RationalPrime(p) => *p,
            ValuationKind::GaussianPrime { over, .. } => *over,
        }
    }

    pub fn splitting(&self) -> Option<Splitting> {
        match &self.kind {
            ValuationKind::RationalPrime(_) => None,
            ValuationKind::GaussianPrime { splitting, .. } => Some(*splitting),
        }
    }

    /// `p` or `pi` as a Gaussian integer.
    pub fn prime_element(&self) -> GaussianInt {
        match &self.kind {
            ValuationKind::RationalPrime(p) => GaussianInt::from_int(*p),
            ValuationKind::GaussianPrime { pi, .. } => pi.clone(),
        }
    }

    pub fn uniformizer(&self) -> FieldElem {
        FieldElem::from_gaussian_in(self.field(), &self.prime_element())
            .expect("prime element lies in its own field")
    }

    pub fn residue_field(&self) -> ResidueField {
        match self.splitting() {
            Some(Splitting::Inert) => ResidueField::quadratic(self.prime()),
            _ => ResidueField::prime(self.prime()),
        }
    }

    /// The valuation `x ↦ val(conj x)`; the identity on `Q`.
    pub fn conjugate(&self) -> Valuation {
        match &self.kind {
            ValuationKind::RationalPrime(_) => self.clone(),
            ValuationKind::GaussianPrime { pi, .. } => {
                Valuation::gaussian(&pi.conj()).expect("conjugate of a prime is prime")
            }
        }
    }

    pub fn check_field(&self, x: &FieldElem) -> Result<(), ValuationError> {
        if self.field().contains(x.field()) {
            Ok(())
        } else {
            Err(ValuationError::FieldMismatch {
                expected: self.field(),
                found: x.field(),
            })
        }
    }

    /// Multiplicity of the prime in a nonzero Gaussian integer.
    pub fn val_gaussian_int(&self, g: &GaussianInt) -> Value {
        if g.is_zero() {
            return Value::Infinity;
        }
        let pi = self.prime_element();
        let mut rest = g.clone();
        let mut e = 0;
        while let Some(q) = rest.exact_div(&pi) {
            rest = q;
            e += 1;
        }
        Value::Finite(e)
    }

    pub fn val(&self, x: &FieldElem) -> Result<Value, ValuationError> {
        self.check_field(x)?;
        if x.is_zero() {
            return Ok(Value::Infinity);
        }
        let (g, d) = x.integral_parts();
        let num = self.val_gaussian_int(&g).finite().expect("nonzero");
        let den = self
            .val_gaussian_int(&GaussianInt::from_int(d))
            .finite()
            .expect("nonzero");
        Ok(Value::Finite(num - den))
    }

    /// Image in the residue field of a Gaussian integer.
    fn map_integral(&self, g: &GaussianInt) -> ResidueElem {
        let k = self.residue_field();
        let p = self.prime();
        match &self.kind {
            ValuationKind::RationalPrime(_) => k.from_int(&g.re),
            ValuationKind::GaussianPrime { pi, splitting, .. } => match splitting {
                Splitting::Inert => k.from_parts(&g.re, &g.im),
                Splitting::Ramified => k.from_int(&(&g.re + &g.im)),
                Splitting::Split => {
                    // pi = a + b*i = 0 forces i = -a/b (mod p)
                    let a = residue::reduce(&pi.re, p);
                    let b = residue::reduce(&pi.im, p);
                    let binv = residue::powmod(b, p - 2, p);
                    let root = ((p - a) as u128 * binv as u128 % p as u128) as u64;
                    k.from_int(&(&g.re + &g.im * BigInt::from(root)))
                }
            },
        }
    }

    /// The extended residue map: `Infinity` when `val(x) < 0`.
    pub fn residue(&self, x: &FieldElem) -> Result<ResidueElem, ValuationError> {
        match self.val(x)? {
            Value::Infinity => return Ok(self.residue_field().zero()),
            Value::Finite(v) if v < 0 => return Ok(ResidueElem::Infinity),
            Value::Finite(_) => {}
        }
        let (g, d) = x.integral_parts();
        let pi = self.prime_element();
        let mut num = g;
        let mut den = GaussianInt::from_int(d);
        while let Some(q) = den.exact_div(&pi) {
            den = q;
            num = num.exact_div(&pi).expect("val(x) >= 0");
        }
        let den_res = self.map_integral(&den).inv().expect("denominator is a unit at pi");
        Ok(self.map_integral(&num).mul(den_res))
    }

    pub fn is_integral_at(&self, x: &FieldElem) -> Result<bool, ValuationError> {
        Ok(self.val(x)? >= Value::Finite(0))
    }
}

pub fn value_vector(vals: &[Valuation], x: &FieldElem) -> Result<ValueVector, ValuationError> {
    vals.iter()
        .map(|v| v.val(x))
        .collect::<Result<Vec<_>, _>>()
        .map(ValueVector)
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ValuationKind::RationalPrime(p) => write!(f, "Q:{p}"),
            ValuationKind::GaussianPrime { pi, .. } => {
                if pi.im.is_zero() {
                    write!(f, "Qi:{}", pi.re)
                } else {
                    write!(f, "Qi:{}", FieldElem::from_gaussian(pi))
                }
            }
        }
    }
}

/// `Q:p` or `Qi:a+b*i`; any associate of a Gaussian prime is accepted and
/// canonicalized.
impl FromStr for Valuation {
    type Err = ValuationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (tag, body) = s
            .split_once(':')
            .ok_or_else(|| ParseError::new(0, "expected `Q:p` or `Qi:a+b*i`"))?;
        let at = tag.len() + 1;
        let field: FieldId = tag.parse()?;
        let x = FieldElem::parse_in(field, body)
            .map_err(|e| ParseError::new(at + e.position, e.message))?;
        if !x.is_integral() {
            return Err(ParseError::new(at, "prime must be integral").into());
        }
        let (g, _) = x.integral_parts();
        match field {
            FieldId::Rationals => {
                let p = g.re.to_u64().ok_or_else(|| ValuationError::NotPrime(body.to_string()))?;
                Valuation::rational(p)
            }
            FieldId::GaussianRationals => Valuation::gaussian(&g),
        }
    }
}

/// Parses a comma-separated list of valuations.
pub fn parse_valuations(text: &str) -> Result<Vec<Valuation>, ValuationError> {
    text.split(',').map(str::parse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn qi(s: &str) -> FieldElem {
        FieldElem::parse_in(FieldId::GaussianRationals, s).unwrap()
    }

    fn q(s: &str) -> FieldElem {
        FieldElem::parse_in(FieldId::Rationals, s).unwrap()
    }

    fn v(s: &str) -> Valuation {
        s.parse().unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(v("Q:5").val(&q("50/3")).unwrap(), Value::Finite(2));
        assert_eq!(v("Qi:2+1*i").val(&qi("5")).unwrap(), Value::Finite(1));
        assert_eq!(v("Qi:2+1*i").val(&qi("i")).unwrap(), Value::Finite(0));
        assert_eq!(v("Q:7").val(&q("0")).unwrap(), Value::Infinity);
        assert_eq!(v("Qi:1+1*i").val(&qi("2")).unwrap(), Value::Finite(2));
        assert_eq!(v("Qi:3").val(&qi("1/9+3*i")).unwrap(), Value::Finite(-2));
    }

    #[test]
    fn residue_examples() {
        assert_eq!(v("Qi:2+1*i").residue(&qi("i")).unwrap().to_string(), "3 in F_5");
        assert_eq!(v("Qi:2-1*i").residue(&qi("i")).unwrap().to_string(), "2 in F_5");
        assert!(v("Q:5").residue(&q("1/5")).unwrap().is_infinite());
        assert_eq!(v("Qi:3").residue(&qi("1+2*i")).unwrap().to_string(), "1+2*t in F_9");
        assert_eq!(v("Qi:1+1*i").residue(&qi("i")).unwrap().to_string(), "1 in F_2");
        assert_eq!(v("Q:5").residue(&q("3/2")).unwrap().to_string(), "4 in F_5");
    }

    #[test]
    fn residue_clears_shared_denominators() {
        // (2+i)/5 = 1/(2-i): a unit at 2+i with residue 1/res(2-i)
        let x = qi("2/5+1/5*i");
        let v1 = v("Qi:2+1*i");
        assert_eq!(v1.val(&x).unwrap(), Value::Finite(0));
        let r = v1.residue(&x).unwrap();
        let r2 = v1.residue(&qi("2-i")).unwrap();
        assert_eq!(r.mul(r2), v1.residue_field().one());
    }

    #[test]
    fn uniformizers() {
        assert_eq!(v("Q:3").uniformizer(), q("3"));
        assert_eq!(v("Qi:2+1*i").uniformizer(), qi("2+i"));
        assert_eq!(v("Qi:1+1*i").uniformizer(), qi("1+i"));
        for s in ["Q:3", "Qi:2+1*i", "Qi:1+1*i", "Qi:7"] {
            let val = v(s);
            assert_eq!(val.val(&val.uniformizer()).unwrap(), Value::Finite(1));
        }
    }

    #[test]
    fn value_vectors() {
        let vals = [v("Q:2"), v("Q:3")];
        assert_eq!(value_vector(&vals, &q("12")).unwrap().0, alloc::vec![Value::Finite(2), Value::Finite(1)]);
        let conj = [v("Qi:2+1*i"), v("Qi:2-1*i")];
        assert_eq!(value_vector(&conj, &qi("5")).unwrap().0, alloc::vec![Value::Finite(1), Value::Finite(1)]);
        assert_eq!(value_vector(&vals, &q("0")).unwrap().0, alloc::vec![Value::Infinity, Value::Infinity]);
    }

    #[test]
    fn parsing_canonicalizes() {
        assert_eq!(v("Qi:1+2*i").to_string(), "Qi:2-1*i");
        assert_eq!(v("Qi:-1+1*i").to_string(), "Qi:1+1*i");
        assert_eq!(v("Qi:-3").to_string(), "Qi:3");
        assert_eq!(v(" Q:5 ").to_string(), "Q:5");
        assert!(matches!("Q:6".parse::<Valuation>(), Err(ValuationError::NotPrime(_))));
        assert!(matches!("Qi:5".parse::<Valuation>(), Err(ValuationError::NotPrime(_))));
        assert!(matches!("Qi:3+3*i".parse::<Valuation>(), Err(ValuationError::NotPrime(_))));
        assert!("R:5".parse::<Valuation>().is_err());
    }

    #[test]
    fn splitting_matches_prime_mod_four() {
        for p in [2u64, 3, 5, 7, 13, 19, 29] {
            for val in Valuation::over_prime(FieldId::GaussianRationals, p).unwrap() {
                let expect = match p % 4 {
                    1 => Splitting::Split,
                    3 => Splitting::Inert,
                    _ => Splitting::Ramified,
                };
                assert_eq!(val.splitting(), Some(expect));
            }
        }
        assert_eq!(Valuation::over_prime(FieldId::GaussianRationals, 13).unwrap().len(), 2);
    }

    #[test]
    fn field_mismatch() {
        assert!(matches!(
            v("Q:5").val(&qi("i")),
            Err(ValuationError::FieldMismatch { .. })
        ));
        // rationals embed into Q(i)
        assert_eq!(v("Qi:2+1*i").val(&q("10")).unwrap(), Value::Finite(1));
    }

    #[test]
    fn rational_integers_reduce_mod_p() {
        for s in ["Q:7", "Qi:2+1*i", "Qi:3", "Qi:1+1*i", "Qi:2-1*i"] {
            let val = v(s);
            for c in -20i64..20 {
                let r = val.residue(&FieldElem::from_int(val.field(), c)).unwrap();
                assert_eq!(r, val.residue_field().from_int(&BigInt::from(c)));
            }
        }
    }
}
