use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// An element `re + im*i` of the Gaussian integers Z[i].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        GaussianInt::new(n, 0)
    }

    pub fn zero() -> Self {
        GaussianInt::new(0, 0)
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussianInt::new(0, 1)
    }

    /// The four units `1, i, -1, -i`, in that order.
    pub fn units() -> [GaussianInt; 4] {
        [
            GaussianInt::new(1, 0),
            GaussianInt::new(0, 1),
            GaussianInt::new(-1, 0),
            GaussianInt::new(0, -1),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> GaussianInt {
        GaussianInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn pow(&self, exp: u32) -> GaussianInt {
        let mut acc = GaussianInt::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division with the quotient rounded to the nearest lattice
    /// point, so that `N(remainder) <= N(divisor) / 2`.
    ///
    /// Returns `None` when `divisor` is zero.
    pub fn div_rem(&self, divisor: &GaussianInt) -> Option<(GaussianInt, GaussianInt)> {
        if divisor.is_zero() {
            return None;
        }
        let n = divisor.norm();
        let numer = self * &divisor.conj();
        let q = GaussianInt {
            re: round_div(&numer.re, &n),
            im: round_div(&numer.im, &n),
        };
        let r = self - &(&q * divisor);
        Some((q, r))
    }

    /// Exact quotient `self / divisor` if it lies in Z[i].
    pub fn exact_div(&self, divisor: &GaussianInt) -> Option<GaussianInt> {
        if divisor.is_zero() {
            return None;
        }
        let n = divisor.norm();
        let numer = self * &divisor.conj();
        if numer.re.is_multiple_of(&n) && numer.im.is_multiple_of(&n) {
            Some(GaussianInt {
                re: numer.re / &n,
                im: numer.im / &n,
            })
        } else {
            None
        }
    }

    pub fn divides(&self, other: &GaussianInt) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.exact_div(self).is_some()
    }

    /// Extended Euclid: returns `(g, s, t)` with `g = s*a + t*b`.
    pub fn ext_gcd(a: &GaussianInt, b: &GaussianInt) -> (GaussianInt, GaussianInt, GaussianInt) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (GaussianInt::one(), GaussianInt::zero());
        let (mut t0, mut t1) = (GaussianInt::zero(), GaussianInt::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = core::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = core::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = core::mem::replace(&mut t1, t);
        }
        (r0, s0, t0)
    }

    pub fn gcd(a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
        let (g, _, _) = GaussianInt::ext_gcd(a, b);
        if g.is_zero() {
            g
        } else {
            g.canonical_associate().0
        }
    }

    /// Inverse of `self` modulo `m`, if `self` and `m` are coprime.
    pub fn inverse_mod(&self, m: &GaussianInt) -> Option<GaussianInt> {
        if m.is_unit() {
            return Some(GaussianInt::zero());
        }
        let (g, s, _) = GaussianInt::ext_gcd(self, m);
        if !g.is_unit() {
            return None;
        }
        // g is a unit, so g^-1 = conj(g).
        Some((&s * &g.conj()).reduce_mod(m))
    }

    /// Canonical representative of `self` modulo `m`.
    ///
    /// For rational `self` and `m` the result is the least nonnegative
    /// residue; otherwise it is the rounded Euclidean remainder.
    pub fn reduce_mod(&self, m: &GaussianInt) -> GaussianInt {
        if m.is_unit() {
            return GaussianInt::zero();
        }
        if self.is_real() && m.is_real() {
            return GaussianInt::from_int(self.re.mod_floor(&m.re.abs()));
        }
        self.div_rem(m).expect("nonzero modulus").1
    }

    /// Splits `self` as `unit * canonical` where `canonical` is the associate
    /// with `re > 0` and `re >= |im|`, ties (`re == |im|`) broken toward
    /// `im > 0`. Zero maps to `(1, 0)`.
    pub fn canonical_associate(&self) -> (GaussianInt, GaussianInt) {
        if self.is_zero() {
            return (GaussianInt::one(), GaussianInt::zero());
        }
        for u in GaussianInt::units() {
            // candidate = self * u^-1 = self * conj(u)
            let cand = self * &u.conj();
            let ok = cand.re.is_positive()
                && (cand.re > cand.im.abs() || (cand.re == cand.im.abs() && cand.im.is_positive()));
            if ok {
                return (u, cand);
            }
        }
        unreachable!("every nonzero Gaussian integer has a canonical associate")
    }

    pub fn is_canonical(&self) -> bool {
        !self.is_zero() && self.canonical_associate().0.is_one_unit()
    }

    fn is_one_unit(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
}

fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    // floor((2n + d) / 2d) for d > 0
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * &two))
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}*i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl<'a> Add<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: GaussianInt) -> GaussianInt {
        &self + &rhs
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: GaussianInt) -> GaussianInt {
        &self - &rhs
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: GaussianInt) -> GaussianInt {
        &self * &rhs
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        -&self
    }
}
