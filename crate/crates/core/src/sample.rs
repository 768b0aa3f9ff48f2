//! Seeded random sampling of field elements.
//!
//! Every randomized check draws from a `ChaCha8Rng` whose stream is derived
//! from `(seed, trial)`, so single trials can be replayed in isolation.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldElem, FieldId};

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform in `[-bound, bound]`.
pub fn int_in<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

/// `a/b` with `|a| <= height` and `1 <= b <= height`.
pub fn rational<R: Rng>(rng: &mut R, height: i64) -> BigRational {
    let a = int_in(rng, height);
    let b = rng.gen_range(1..=height.max(1));
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn element<R: Rng>(rng: &mut R, field: FieldId, height: i64) -> FieldElem {
    let re = rational(rng, height);
    let im = match field {
        FieldId::Rationals => BigRational::from_integer(0.into()),
        FieldId::GaussianRationals => rational(rng, height),
    };
    FieldElem::new(field, re, im).expect("imaginary part is zero over Q")
}

pub fn nonzero_element<R: Rng>(rng: &mut R, field: FieldId, height: i64) -> FieldElem {
    loop {
        let x = element(rng, field, height);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A Gaussian integer (a rational integer over `Q`) with coordinates bounded by `height`.
pub fn integer_element<R: Rng>(rng: &mut R, field: FieldId, height: i64) -> FieldElem {
    let re = BigRational::from_integer(int_in(rng, height).into());
    let im = match field {
        FieldId::Rationals => BigRational::from_integer(0.into()),
        FieldId::GaussianRationals => BigRational::from_integer(int_in(rng, height).into()),
    };
    FieldElem::new(field, re, im).expect("imaginary part is zero over Q")
}

/// `k` distinct entries of `pool`, in random order.
pub fn distinct<R: Rng, T: Clone>(rng: &mut R, pool: &[T], k: usize) -> Vec<T> {
    pool.choose_multiple(rng, k).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<i64> = (0..8).map(|_| int_in(&mut trial_rng(7, 3), 1000)).collect();
        let b: Vec<i64> = (0..8).map(|_| int_in(&mut trial_rng(7, 3), 1000)).collect();
        assert_eq!(a, b);
        let mut r3 = trial_rng(7, 3);
        let mut r4 = trial_rng(7, 4);
        let x: Vec<i64> = (0..8).map(|_| int_in(&mut r3, 1_000_000)).collect();
        let y: Vec<i64> = (0..8).map(|_| int_in(&mut r4, 1_000_000)).collect();
        assert_ne!(x, y);
    }
}
