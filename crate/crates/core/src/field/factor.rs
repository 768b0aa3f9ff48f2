use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{FieldError, GaussianInt};

/// `q = sign * prod(p^e)` with exponents in Z, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFactorization {
    pub sign: i8,
    pub factors: Vec<(BigInt, i64)>,
}

impl RationalFactorization {
    pub fn value(&self) -> BigRational {
        let mut acc = BigRational::from_integer(BigInt::from(self.sign));
        for (p, e) in &self.factors {
            let pe = BigRational::from_integer(num_traits::pow(p.clone(), e.unsigned_abs() as usize));
            acc = if *e >= 0 { acc * pe } else { acc / pe };
        }
        acc
    }
}

/// `g = unit * prod(pi^e)` with each `pi` a canonical Gaussian prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianFactorization {
    pub unit: GaussianInt,
    pub factors: Vec<(GaussianInt, u32)>,
}

impl GaussianFactorization {
    pub fn product(&self) -> GaussianInt {
        self.factors
            .iter()
            .fold(self.unit.clone(), |acc, (p, e)| &acc * &p.pow(*e))
    }
}

/// Trial-division factorization of a positive integer, primes ascending.
pub(crate) fn factor_natural(n: &BigInt) -> Vec<(BigInt, u32)> {
    debug_assert!(n.is_positive());
    if let Some(small) = n.to_u64() {
        return factor_u64(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect();
    }
    let mut out = Vec::new();
    let mut m = n.clone();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0;
        while m.is_multiple_of(&d) {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if !m.is_one() {
        out.push((m, 1));
    }
    out
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn rational_factor(q: &BigRational) -> Result<RationalFactorization, FieldError> {
    if q.is_zero() {
        return Err(FieldError::ZeroInput);
    }
    let sign = if q.is_negative() { -1 } else { 1 };
    let mut factors: Vec<(BigInt, i64)> = Vec::new();
    let num = q.numer().abs();
    if !num.is_one() {
        for (p, e) in factor_natural(&num) {
            factors.push((p, e as i64));
        }
    }
    if !q.denom().is_one() {
        for (p, e) in factor_natural(q.denom()) {
            factors.push((p, -(e as i64)));
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(RationalFactorization { sign, factors })
}

/// A square root of -1 modulo a prime `p` with `p % 4 == 1`.
pub fn sqrt_minus_one_mod(p: &BigInt) -> Option<BigInt> {
    let four = BigInt::from(4);
    if !(p % &four).is_one() {
        return None;
    }
    let minus_one = p - 1u32;
    let half = &minus_one / 2u32;
    let quarter = &minus_one / &four;
    let mut c = BigInt::from(2);
    while &c < p {
        if c.modpow(&half, p) == minus_one {
            return Some(c.modpow(&quarter, p));
        }
        c += 1;
    }
    None
}

/// Writes a prime `p % 4 == 1` as `a^2 + b^2` with `a > b > 0`.
pub fn two_squares(p: &BigInt) -> Option<(BigInt, BigInt)> {
    let t = sqrt_minus_one_mod(p)?;
    let (mut a, mut b) = (p.clone(), t);
    while &b * &b > *p {
        let r = &a % &b;
        a = core::mem::replace(&mut b, r);
    }
    let rest = p - &b * &b;
    let c = rest.sqrt();
    if &c * &c != rest {
        return None;
    }
    Some(if b > c { (b, c) } else { (c, b) })
}

fn strip(g: &mut GaussianInt, pi: &GaussianInt) -> u32 {
    let mut e = 0;
    while let Some(q) = g.exact_div(pi) {
        *g = q;
        e += 1;
    }
    e
}

/// Factors a nonzero Gaussian integer by trial division on its norm.
///
/// Factors are ordered by norm, then by `(re, im)`.
pub fn gaussian_factor(g: &GaussianInt) -> Result<GaussianFactorization, FieldError> {
    if g.is_zero() {
        return Err(FieldError::ZeroInput);
    }
    let mut rest = g.clone();
    let mut factors = Vec::new();
    for (p, _) in factor_natural(&g.norm()) {
        let candidates: Vec<GaussianInt> = if p == BigInt::from(2) {
            alloc::vec![GaussianInt::new(1, 1)]
        } else if (&p % 4u32) == BigInt::from(3) {
            alloc::vec![GaussianInt::from_int(p.clone())]
        } else {
            let (a, b) = two_squares(&p).expect("p = 1 mod 4 is a sum of two squares");
            let pi = GaussianInt::new(a, b);
            alloc::vec![pi.canonical_associate().1, pi.conj().canonical_associate().1]
        };
        for pi in candidates {
            let e = strip(&mut rest, &pi);
            if e > 0 {
                factors.push((pi, e));
            }
        }
    }
    factors.sort_by(|a, b| a.0.norm().cmp(&b.0.norm()).then_with(|| a.0.cmp(&b.0)));
    debug_assert!(rest.is_unit());
    Ok(GaussianFactorization {
        unit: rest,
        factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GaussianInt {
        GaussianInt::new(a, b)
    }

    #[test]
    fn factor_five_splits() {
        let f = gaussian_factor(&g(5, 0)).unwrap();
        assert_eq!(f.factors, alloc::vec![(g(2, -1), 1), (g(2, 1), 1)]);
        assert_eq!(f.product(), g(5, 0));
    }

    #[test]
    fn factor_two_ramifies() {
        let f = gaussian_factor(&g(2, 0)).unwrap();
        assert_eq!(f.factors, alloc::vec![(g(1, 1), 2)]);
        assert_eq!(f.unit, g(0, -1));
        assert_eq!(f.product(), g(2, 0));
    }

    #[test]
    fn factor_seven_inert() {
        let f = gaussian_factor(&g(7, 0)).unwrap();
        assert_eq!(f.factors, alloc::vec![(g(7, 0), 1)]);
        assert!(f.unit.is_unit());
    }

    #[test]
    fn zero_input() {
        assert_eq!(gaussian_factor(&g(0, 0)), Err(FieldError::ZeroInput));
        assert_eq!(rational_factor(&BigRational::zero()), Err(FieldError::ZeroInput));
    }

    #[test]
    fn rational_factorizations() {
        let twelve = rational_factor(&BigRational::from_integer(12.into())).unwrap();
        assert_eq!(twelve.sign, 1);
        assert_eq!(twelve.factors, alloc::vec![(BigInt::from(2), 2), (BigInt::from(3), 1)]);
        let r = rational_factor(&BigRational::new((-9).into(), 8.into())).unwrap();
        assert_eq!(r.sign, -1);
        assert_eq!(r.factors, alloc::vec![(BigInt::from(2), -3), (BigInt::from(3), 2)]);
        let one = rational_factor(&BigRational::one()).unwrap();
        assert_eq!(one.sign, 1);
        assert!(one.factors.is_empty());
    }

    #[test]
    fn sums_of_two_squares() {
        for p in [5u64, 13, 17, 29, 37, 41, 1_000_000_009] {
            let (a, b) = two_squares(&BigInt::from(p)).unwrap();
            assert_eq!(&a * &a + &b * &b, BigInt::from(p));
        }
        assert!(two_squares(&BigInt::from(7)).is_none());
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, alloc::vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
