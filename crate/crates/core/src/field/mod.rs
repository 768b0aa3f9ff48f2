//! Exact arithmetic in `Q` and `Q(i)`.
//!
//! Every [`FieldElem`] carries the [`FieldId`] it lives in. `Q` is treated as
//! a subfield of `Q(i)`: binary operations return an element of the larger of
//! the two fields.

mod factor;
mod gaussian;
mod parse;

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use factor::{
    gaussian_factor, is_prime_u64, rational_factor, sqrt_minus_one_mod, two_squares,
    GaussianFactorization, RationalFactorization,
};
pub use gaussian::GaussianInt;
pub use parse::{parse_tuple, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldId {
    Rationals,
    GaussianRationals,
}

impl FieldId {
    /// The smallest of the two fields containing both.
    pub fn join(self, other: FieldId) -> FieldId {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Whether elements of `other` are elements of `self`.
    pub fn contains(self, other: FieldId) -> bool {
        self >= other
    }

    pub fn tag(self) -> &'static str {
        match self {
            FieldId::Rationals => "Q",
            FieldId::GaussianRationals => "Qi",
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl core::str::FromStr for FieldId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Q" => Ok(FieldId::Rationals),
            "Qi" => Ok(FieldId::GaussianRationals),
            other => Err(ParseError::new(0, alloc::format!("unknown field `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element of {found} is not in {expected}")]
    FieldMismatch { expected: FieldId, found: FieldId },
    #[error("nonzero imaginary part in an element of Q")]
    ImaginaryInRationals,
    #[error("zero input")]
    ZeroInput,
}

/// An element `re + im*i` with exact rational parts.
///
/// Both parts are kept in lowest terms with positive denominator (the
/// invariant of [`BigRational`]). Equality and hashing look at the value
/// only, so `5` tagged `Q` equals `5` tagged `Q(i)`.
#[derive(Clone, Debug)]
pub struct FieldElem {
    re: BigRational,
    im: BigRational,
    field: FieldId,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

impl Eq for FieldElem {}

impl core::hash::Hash for FieldElem {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.re.hash(state);
        self.im.hash(state);
    }
}

impl FieldElem {
    pub fn new(field: FieldId, re: BigRational, im: BigRational) -> Result<Self, FieldError> {
        if field == FieldId::Rationals && !im.is_zero() {
            return Err(FieldError::ImaginaryInRationals);
        }
        Ok(FieldElem { re, im, field })
    }

    pub fn rational(q: BigRational) -> Self {
        FieldElem {
            re: q,
            im: BigRational::zero(),
            field: FieldId::Rationals,
        }
    }

    pub fn from_int(field: FieldId, n: impl Into<BigInt>) -> Self {
        FieldElem {
            re: BigRational::from_integer(n.into()),
            im: BigRational::zero(),
            field,
        }
    }

    pub fn from_ratio(field: FieldId, numer: i64, denom: i64) -> Result<Self, FieldError> {
        if denom == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(FieldElem {
            re: BigRational::new(numer.into(), denom.into()),
            im: BigRational::zero(),
            field,
        })
    }

    pub fn from_gaussian(g: &GaussianInt) -> Self {
        FieldElem {
            re: BigRational::from_integer(g.re.clone()),
            im: BigRational::from_integer(g.im.clone()),
            field: FieldId::GaussianRationals,
        }
    }

    /// Gaussian integer viewed in the requested field; fails if `g` is not
    /// real and `field` is `Q`.
    pub fn from_gaussian_in(field: FieldId, g: &GaussianInt) -> Result<Self, FieldError> {
        FieldElem::new(
            field,
            BigRational::from_integer(g.re.clone()),
            BigRational::from_integer(g.im.clone()),
        )
    }

    pub fn zero(field: FieldId) -> Self {
        FieldElem::from_int(field, 0)
    }

    pub fn one(field: FieldId) -> Self {
        FieldElem::from_int(field, 1)
    }

    pub fn i() -> Self {
        FieldElem::from_gaussian(&GaussianInt::i())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    /// The same element, regarded as an element of `field`.
    pub fn in_field(&self, field: FieldId) -> Result<FieldElem, FieldError> {
        if field == FieldId::Rationals && !self.im.is_zero() {
            return Err(FieldError::FieldMismatch {
                expected: field,
                found: self.field,
            });
        }
        Ok(FieldElem {
            re: self.re.clone(),
            im: self.im.clone(),
            field,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> FieldElem {
        FieldElem {
            re: self.re.clone(),
            im: -&self.im,
            field: self.field,
        }
    }

    /// The field norm down to `Q` (`x * conj(x)`); equals `x^2` on `Q`.
    pub fn norm(&self) -> BigRational {
        match self.field {
            FieldId::Rationals => &self.re * &self.re,
            FieldId::GaussianRationals => &self.re * &self.re + &self.im * &self.im,
        }
    }

    pub fn inv(&self) -> Result<FieldElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Ok(FieldElem {
            re: &self.re / &n,
            im: -(&self.im / &n),
            field: self.field,
        })
    }

    pub fn checked_div(&self, rhs: &FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, exp: i64) -> Result<FieldElem, FieldError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = FieldElem::one(self.field);
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Writes `self = g / d` with `g` a Gaussian integer and `d` the least
    /// positive integer that clears both denominators.
    pub fn integral_parts(&self) -> (GaussianInt, BigInt) {
        let d = self.re.denom().lcm(self.im.denom());
        let re = self.re.numer() * (&d / self.re.denom());
        let im = self.im.numer() * (&d / self.im.denom());
        (GaussianInt { re, im }, d)
    }

    /// `true` when the element lies in `Z[i]` (in `Z` for elements of `Q`).
    pub fn is_integral(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    /// Largest absolute value among the numerators and denominators.
    pub fn height(&self) -> BigInt {
        [self.re.numer(), self.re.denom(), self.im.numer(), self.im.denom()]
            .into_iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigInt::one)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        FieldElem {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
            field: self.field.join(rhs.field),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        FieldElem {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
            field: self.field.join(rhs.field),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        FieldElem {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
            field: self.field.join(rhs.field),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            re: -&self.re,
            im: -&self.im,
            field: self.field,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn normal_forms() {
        let x = FieldElem::new(FieldId::Rationals, q(2, 4), q(0, 1)).unwrap();
        assert_eq!(x.re(), &q(1, 2));
        assert_eq!(x.to_string(), "1/2");
        let z = FieldElem::new(FieldId::Rationals, q(0, 5), q(0, 1)).unwrap();
        assert_eq!(z, FieldElem::zero(FieldId::Rationals));
        assert_eq!(z.re().denom(), &BigInt::one());
        let w = FieldElem::new(FieldId::GaussianRationals, q(3, 6), q(2, 8)).unwrap();
        assert_eq!(w.to_string(), "1/2+1/4*i");
    }

    #[test]
    fn rejects_imaginary_rationals() {
        assert_eq!(
            FieldElem::new(FieldId::Rationals, q(1, 1), q(1, 1)),
            Err(FieldError::ImaginaryInRationals)
        );
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let x = FieldElem::one(FieldId::Rationals);
        assert_eq!(
            x.checked_div(&FieldElem::zero(FieldId::Rationals)),
            Err(FieldError::DivisionByZero)
        );
        assert!(FieldElem::from_ratio(FieldId::Rationals, 1, 0).is_err());
    }

    #[test]
    fn inverse_of_gaussian() {
        let x = FieldElem::from_gaussian(&GaussianInt::new(2, 1));
        let inv = x.inv().unwrap();
        assert_eq!(inv.to_string(), "2/5-1/5*i");
        assert!((&x * &inv).is_one());
    }

    #[test]
    fn fields_join_under_arithmetic() {
        let a = FieldElem::from_int(FieldId::Rationals, 3);
        let b = FieldElem::i();
        assert_eq!((&a + &b).field(), FieldId::GaussianRationals);
        assert_eq!((&a * &a).field(), FieldId::Rationals);
    }

    #[test]
    fn integral_parts_clear_denominators() {
        let x = FieldElem::new(FieldId::GaussianRationals, q(1, 6), q(3, 4)).unwrap();
        let (g, d) = x.integral_parts();
        assert_eq!(d, BigInt::from(12));
        assert_eq!(g, GaussianInt::new(2, 9));
    }
}
