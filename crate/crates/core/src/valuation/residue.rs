use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// `F_p` (degree 1) or `F_p[t]/(t^2 + 1)` (degree 2, used for inert primes).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueField {
    p: u64,
    degree: u8,
}

impl ResidueField {
    pub fn prime(p: u64) -> Self {
        ResidueField { p, degree: 1 }
    }

    /// `F_p[t]/(t^2 + 1)`; a field exactly when `p = 3 mod 4`.
    pub fn quadratic(p: u64) -> Self {
        ResidueField { p, degree: 2 }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn size(&self) -> u64 {
        if self.degree == 1 {
            self.p
        } else {
            self.p * self.p
        }
    }

    pub fn zero(self) -> ResidueElem {
        ResidueElem::Finite { field: self, a: 0, b: 0 }
    }

    pub fn one(self) -> ResidueElem {
        ResidueElem::Finite { field: self, a: 1 % self.p, b: 0 }
    }

    /// Image of a rational integer (the prime-field embedding).
    pub fn from_int(self, n: &BigInt) -> ResidueElem {
        ResidueElem::Finite {
            field: self,
            a: reduce(n, self.p),
            b: 0,
        }
    }

    pub fn from_parts(self, a: &BigInt, b: &BigInt) -> ResidueElem {
        ResidueElem::Finite {
            field: self,
            a: reduce(a, self.p),
            b: if self.degree == 2 { reduce(b, self.p) } else { 0 },
        }
    }

    /// All elements, in the order `a + b*t` with `b` major.
    pub fn elements(self) -> Vec<ResidueElem> {
        let bs = if self.degree == 2 { self.p } else { 1 };
        let mut out = Vec::with_capacity(self.size() as usize);
        for b in 0..bs {
            for a in 0..self.p {
                out.push(ResidueElem::Finite { field: self, a, b });
            }
        }
        out
    }
}

impl fmt::Display for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.size())
    }
}

pub(crate) fn reduce(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Value of the extended residue map: a residue-field element, or the
/// sentinel `Infinity` for elements of negative valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidueElem {
    Finite { field: ResidueField, a: u64, b: u64 },
    Infinity,
}

impl ResidueElem {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ResidueElem::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ResidueElem::Finite { a: 0, b: 0, .. })
    }

    pub fn field(&self) -> Option<ResidueField> {
        match self {
            ResidueElem::Finite { field, .. } => Some(*field),
            ResidueElem::Infinity => None,
        }
    }

    /// Residue classes of the coefficients: `(a, b)` for `a + b*t`.
    pub fn parts(&self) -> Option<(u64, u64)> {
        match self {
            ResidueElem::Finite { a, b, .. } => Some((*a, *b)),
            ResidueElem::Infinity => None,
        }
    }

    fn combine(self, rhs: ResidueElem, op: impl Fn(ResidueField, (u64, u64), (u64, u64)) -> (u64, u64)) -> ResidueElem {
        match (self, rhs) {
            (ResidueElem::Finite { field, a, b }, ResidueElem::Finite { field: f2, a: c, b: d }) => {
                assert_eq!(field, f2, "residues from different residue fields");
                let (a, b) = op(field, (a, b), (c, d));
                ResidueElem::Finite { field, a, b }
            }
            _ => ResidueElem::Infinity,
        }
    }

    pub fn add(self, rhs: ResidueElem) -> ResidueElem {
        self.combine(rhs, |f, (a, b), (c, d)| ((a + c) % f.p, (b + d) % f.p))
    }

    pub fn neg(self) -> ResidueElem {
        match self {
            ResidueElem::Finite { field, a, b } => ResidueElem::Finite {
                field,
                a: (field.p - a) % field.p,
                b: (field.p - b) % field.p,
            },
            ResidueElem::Infinity => ResidueElem::Infinity,
        }
    }

    pub fn sub(self, rhs: ResidueElem) -> ResidueElem {
        self.add(rhs.neg())
    }

    pub fn mul(self, rhs: ResidueElem) -> ResidueElem {
        self.combine(rhs, |f, (a, b), (c, d)| {
            let p = f.p;
            // (a + bt)(c + dt) with t^2 = -1
            let re = (mulmod(a, c, p) + p - mulmod(b, d, p)) % p;
            let im = (mulmod(a, d, p) + mulmod(b, c, p)) % p;
            (re, im)
        })
    }

    /// Multiplicative inverse; `None` for zero and for `Infinity`.
    pub fn inv(self) -> Option<ResidueElem> {
        match self {
            ResidueElem::Finite { field, a, b } => {
                let p = field.p;
                // 1/(a + bt) = (a - bt)/(a^2 + b^2)
                let n = (mulmod(a, a, p) + mulmod(b, b, p)) % p;
                if n == 0 {
                    return None;
                }
                let ninv = powmod(n, p - 2, p);
                Some(ResidueElem::Finite {
                    field,
                    a: mulmod(a, ninv, p),
                    b: mulmod((p - b) % p, ninv, p),
                })
            }
            ResidueElem::Infinity => None,
        }
    }
}

impl fmt::Display for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueElem::Infinity => f.write_str("inf"),
            ResidueElem::Finite { field, a, b } => {
                if field.degree == 1 || *b == 0 {
                    write!(f, "{a} in {field}")
                } else if *a == 0 {
                    write!(f, "{b}*t in {field}")
                } else {
                    write!(f, "{a}+{b}*t in {field}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = ResidueField::prime(5);
        for x in f.elements().into_iter().skip(1) {
            assert_eq!(x.mul(x.inv().unwrap()), f.one());
        }
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn quadratic_field_inverse() {
        let f = ResidueField::quadratic(7);
        assert_eq!(f.elements().len(), 49);
        for x in f.elements().into_iter().skip(1) {
            assert_eq!(x.mul(x.inv().unwrap()), f.one());
        }
    }

    #[test]
    fn infinity_absorbs() {
        let f = ResidueField::prime(3);
        assert!(f.one().add(ResidueElem::Infinity).is_infinite());
        assert!(ResidueElem::Infinity.mul(f.zero()).is_infinite());
    }

    #[test]
    fn display() {
        let f = ResidueField::quadratic(3);
        assert_eq!(alloc::format!("{}", f.from_parts(&1.into(), &2.into())), "1+2*t in F_9");
        assert_eq!(alloc::format!("{}", ResidueField::prime(5).from_int(&(-2).into())), "3 in F_5");
    }
}
