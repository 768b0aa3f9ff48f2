//! Scrambling tuples: making every entry of a tuple share the same value at
//! each of finitely many valuations, using invertible matrices over `Q`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{FieldElem, FieldId};
use crate::valuation::{ResidueElem, Valuation, ValuationError, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScrambleError {
    #[error("tuple entry {0} is zero")]
    ZeroEntry(usize),
    #[error("no valuations given")]
    EmptyValuations,
    #[error("valuations are not over one field")]
    FieldMismatch,
    #[error("discrepancy did not decrease at step {0}")]
    NonDecreasingDiscrepancy(usize),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

/// A square matrix with rational entries, used as an element of `GL_n(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    rows: Vec<Vec<BigRational>>,
}

impl PrimeFieldMatrix {
    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| if r == c { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        PrimeFieldMatrix { rows }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(PrimeFieldMatrix { rows })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Option<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&e| BigRational::from_integer(e.into())).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> &BigRational {
        &self.rows[r][c]
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    /// `row[target] -= c * row[source]`.
    pub fn subtract_row(&mut self, target: usize, source: usize, c: &BigRational) {
        let src = self.rows[source].clone();
        for (t, s) in self.rows[target].iter_mut().zip(src) {
            *t -= c * s;
        }
    }

    pub fn determinant(&self) -> BigRational {
        let n = self.size();
        let mut m = self.rows.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return BigRational::zero();
            };
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            let p = m[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] / &p;
                for c in col..n {
                    let sub = &f * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn has_integer_entries(&self) -> bool {
        self.rows.iter().flatten().all(|e| e.is_integer())
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(x.len(), self.size(), "dimension mismatch");
        let field = x.iter().fold(FieldId::Rationals, |f, e| f.join(e.field()));
        self.rows
            .iter()
            .map(|row| {
                row.iter().zip(x).fold(FieldElem::zero(field), |acc, (m, e)| {
                    &acc + &(&FieldElem::rational(m.clone()) * e)
                })
            })
            .collect()
    }

    pub fn mul(&self, rhs: &PrimeFieldMatrix) -> PrimeFieldMatrix {
        let n = self.size();
        assert_eq!(n, rhs.size(), "dimension mismatch");
        let rows = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| (0..n).fold(BigRational::zero(), |acc, k| acc + &self.rows[r][k] * &rhs.rows[k][c]))
                    .collect()
            })
            .collect();
        PrimeFieldMatrix { rows }
    }
}

impl fmt::Display for PrimeFieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (r, row) in self.rows.iter().enumerate() {
            if r > 0 {
                f.write_str("; ")?;
            }
            for (c, e) in row.iter().enumerate() {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
        }
        f.write_str("]")
    }
}

/// One elementary operation `x[target] <- x[target] - c * x[source]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScrambleStep {
    pub target: usize,
    pub source: usize,
    pub c: BigInt,
    pub discrepancy_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScrambleTrace {
    pub initial: Vec<FieldElem>,
    pub initial_discrepancy: usize,
    pub steps: Vec<ScrambleStep>,
    pub result: Vec<FieldElem>,
    pub matrix: PrimeFieldMatrix,
}

fn common_field(vals: &[Valuation]) -> Result<FieldId, ScrambleError> {
    let first = vals.first().ok_or(ScrambleError::EmptyValuations)?;
    if vals.iter().any(|v| v.field() != first.field()) {
        return Err(ScrambleError::FieldMismatch);
    }
    Ok(first.field())
}

/// The least integer `c >= 0` with `val_i(z - c*w) = min(val_i(z), val_i(w))`
/// for every valuation; `0` when `w = 0`.
pub fn scramble_step(z: &FieldElem, w: &FieldElem, vals: &[Valuation]) -> Result<BigInt, ScrambleError> {
    common_field(vals)?;
    for v in vals {
        v.check_field(z)?;
        v.check_field(w)?;
    }
    if w.is_zero() {
        return Ok(BigInt::zero());
    }
    let ratio = z.checked_div(w).expect("w is nonzero");
    // c is bad at v exactly when it reduces to res_v(z/w).
    let mut forbidden: Vec<(u64, u64)> = Vec::new();
    for v in vals {
        if let ResidueElem::Finite { a, b: 0, .. } = v.residue(&ratio)? {
            forbidden.push((v.prime(), a));
        }
    }
    let mut c: u64 = 0;
    while forbidden.iter().any(|&(p, a)| c % p == a) {
        c += 1;
    }
    Ok(BigInt::from(c))
}

fn value_rows(x: &[FieldElem], vals: &[Valuation]) -> Result<Vec<Vec<Value>>, ScrambleError> {
    vals.iter()
        .map(|v| x.iter().map(|e| v.val(e).map_err(ScrambleError::from)).collect())
        .collect()
}

fn row_discrepancy(row: &[Value]) -> usize {
    match row.iter().min() {
        Some(m) => row.iter().filter(|v| *v > m).count(),
        None => 0,
    }
}

/// Number of pairs `(i, j)` with `val_i(x_j)` above the least `val_i` over the tuple.
pub fn discrepancy(x: &[FieldElem], vals: &[Valuation]) -> Result<usize, ScrambleError> {
    common_field(vals)?;
    Ok(value_rows(x, vals)?.iter().map(|r| row_discrepancy(r)).sum())
}

/// Whether every valuation takes one value on all entries of `x`.
pub fn is_scrambled(x: &[FieldElem], vals: &[Valuation]) -> Result<bool, ScrambleError> {
    Ok(discrepancy(x, vals)? == 0)
}

/// Scrambles `x` by elementary row operations with nonnegative integer scalars.
pub fn scramble(x: &[FieldElem], vals: &[Valuation]) -> Result<ScrambleTrace, ScrambleError> {
    common_field(vals)?;
    if let Some(j) = x.iter().position(FieldElem::is_zero) {
        return Err(ScrambleError::ZeroEntry(j));
    }
    let mut y = x.to_vec();
    let mut rows = value_rows(&y, vals)?;
    let initial_discrepancy: usize = rows.iter().map(|r| row_discrepancy(r)).sum();
    let mut current = initial_discrepancy;
    let mut matrix = PrimeFieldMatrix::identity(x.len());
    let mut steps = Vec::new();

    while current > 0 {
        let (i, j) = rows
            .iter()
            .enumerate()
            .find_map(|(i, row)| {
                let m = row.iter().min()?;
                row.iter().position(|v| v > m).map(|j| (i, j))
            })
            .expect("positive discrepancy has a violating pair");
        let m = rows[i].iter().min().expect("nonempty row");
        let k = rows[i].iter().position(|v| v == m).expect("minimum is attained");

        let c = scramble_step(&y[j], &y[k], vals)?;
        let cq = BigRational::from_integer(c.clone());
        y[j] = &y[j] - &(&FieldElem::rational(cq.clone()) * &y[k]);
        matrix.subtract_row(j, k, &cq);
        rows = value_rows(&y, vals)?;
        let next: usize = rows.iter().map(|r| row_discrepancy(r)).sum();
        if next >= current {
            return Err(ScrambleError::NonDecreasingDiscrepancy(steps.len()));
        }
        current = next;
        steps.push(ScrambleStep {
            target: j,
            source: k,
            c,
            discrepancy_after: current,
        });
    }

    Ok(ScrambleTrace {
        initial: x.to_vec(),
        initial_discrepancy,
        steps,
        result: y,
        matrix,
    })
}

impl ScrambleTrace {
    /// Re-checks the trace: the output is scrambled, the matrix is invertible
    /// with integer entries and maps the input to the output, and the recorded
    /// discrepancies strictly decrease to zero.
    pub fn verify(&self, vals: &[Valuation]) -> Result<bool, ScrambleError> {
        let mut last = self.initial_discrepancy;
        for s in &self.steps {
            if s.discrepancy_after >= last {
                return Ok(false);
            }
            last = s.discrepancy_after;
        }
        Ok(last == 0
            && discrepancy(&self.initial, vals)? == self.initial_discrepancy
            && is_scrambled(&self.result, vals)?
            && self.matrix.has_integer_entries()
            && self.matrix.is_invertible()
            && self.matrix.apply(&self.initial) == self.result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_tuple;
    use crate::valuation::parse_valuations;

    fn q(n: i64) -> FieldElem {
        FieldElem::from_int(FieldId::Rationals, n)
    }

    fn vals(s: &str) -> Vec<Valuation> {
        parse_valuations(s).unwrap()
    }

    #[test]
    fn step_examples() {
        assert_eq!(scramble_step(&q(5), &q(1), &vals("Q:5")).unwrap(), BigInt::from(1));
        assert_eq!(scramble_step(&q(7), &q(0), &vals("Q:5")).unwrap(), BigInt::zero());
        assert_eq!(scramble_step(&q(1), &q(1), &vals("Q:2,Q:3")).unwrap(), BigInt::zero());
    }

    #[test]
    fn single_step_scramble() {
        let t = scramble(&[q(5), q(1)], &vals("Q:5")).unwrap();
        assert_eq!(t.result, [q(4), q(1)]);
        assert_eq!(t.initial_discrepancy, 1);
        assert_eq!(t.steps.len(), 1);
        assert!(t.verify(&vals("Q:5")).unwrap());
    }

    #[test]
    fn already_scrambled() {
        let t = scramble(&[q(1), q(1)], &vals("Q:2")).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.matrix, PrimeFieldMatrix::identity(2));
    }

    #[test]
    fn two_valuations() {
        let v = vals("Q:2,Q:3");
        let t = scramble(&[q(4), q(9)], &v).unwrap();
        assert_eq!(t.result, [q(-5), q(19)]);
        assert!(t.verify(&v).unwrap());
    }

    #[test]
    fn gaussian_tuple() {
        let v = vals("Qi:2+1*i,Qi:2-1*i");
        let x = parse_tuple(FieldId::GaussianRationals, "5; 1; i").unwrap();
        let t = scramble(&x, &v).unwrap();
        assert!(t.verify(&v).unwrap());
        let y = parse_tuple(FieldId::GaussianRationals, "5; 5*i").unwrap();
        assert!(is_scrambled(&y, &v).unwrap());
    }

    #[test]
    fn discrepancy_examples() {
        assert_eq!(discrepancy(&[q(5), q(1)], &vals("Q:5")).unwrap(), 1);
        assert_eq!(discrepancy(&[q(4), q(2), q(1)], &vals("Q:2")).unwrap(), 2);
        assert!(is_scrambled(&[q(4), q(1)], &vals("Q:5")).unwrap());
        assert!(!is_scrambled(&[q(5), q(1)], &vals("Q:5")).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(scramble(&[q(1), q(0)], &vals("Q:2")), Err(ScrambleError::ZeroEntry(1)));
        assert_eq!(scramble(&[q(1)], &[]), Err(ScrambleError::EmptyValuations));
        let mixed = [vals("Q:2")[0].clone(), vals("Qi:3")[0].clone()];
        assert_eq!(scramble(&[q(1)], &mixed), Err(ScrambleError::FieldMismatch));
    }

    #[test]
    fn determinant() {
        let m = PrimeFieldMatrix::from_int_rows(&[alloc::vec![2, 1], alloc::vec![1, 1]]).unwrap();
        assert_eq!(m.determinant(), BigRational::one());
        let s = PrimeFieldMatrix::from_int_rows(&[alloc::vec![2, 4], alloc::vec![1, 2]]).unwrap();
        assert!(!s.is_invertible());
    }
}
