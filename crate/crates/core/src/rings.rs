//! Finitely described subrings of `Q` and `Q(i)`.
//!
//! Two shapes are supported: finite intersections of valuation rings, and
//! the glued ring `{x in O_1 ∩ O_2 : res_1(x) = res_2(x)}` over two
//! valuations with a common residue field. The glued ring is local, while
//! its integral closure `O_1 ∩ O_2` is not.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::approx::{approximate, ApproxError, ValueTarget};
use crate::field::{FieldElem, FieldId};
use crate::scramble::{is_scrambled, ScrambleError};
use crate::valuation::{parse_valuations, powmod, ResidueElem, Valuation, ValuationError, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),
    #[error("element of {found} is not in {expected}")]
    FieldMismatch { expected: FieldId, found: FieldId },
    #[error("operation needs a {0} ring")]
    UnsupportedRing(&'static str),
    #[error("all generators are zero")]
    AllZero,
    #[error("element is not in the integral closure")]
    NotInClosure,
    #[error("constructed witness failed verification")]
    ConstructionFailed,
    #[error("no instance exists for these parameters")]
    NoInstance,
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Scramble(#[from] ScrambleError),
}

/// Identification of the two residue fields of a glued ring.
///
/// Distinct valuations with equal residue fields over `Q(i)` are always the
/// two primes above a split `p`, whose residue field `F_p` has no
/// nontrivial automorphism, so the identity is the only choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidueIso {
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    /// `O_1 ∩ ... ∩ O_n`
    MultiValuation(Vec<Valuation>),
    /// `{x in O_1 ∩ O_2 : iso(res_1(x)) = res_2(x)}`
    Glued {
        first: Valuation,
        second: Valuation,
        iso: ResidueIso,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    kind: RingKind,
}

impl RingSpec {
    pub fn multi_valuation(vals: Vec<Valuation>) -> Result<Self, RingError> {
        let first = vals
            .first()
            .ok_or_else(|| RingError::InvalidSpec("no valuations".to_string()))?;
        for (k, v) in vals.iter().enumerate() {
            if v.field() != first.field() {
                return Err(RingError::FieldMismatch {
                    expected: first.field(),
                    found: v.field(),
                });
            }
            if vals[..k].contains(v) {
                return Err(RingError::InvalidSpec(alloc::format!("valuation {v} repeated")));
            }
        }
        Ok(RingSpec {
            kind: RingKind::MultiValuation(vals),
        })
    }

    pub fn valuation_ring(v: Valuation) -> Self {
        RingSpec {
            kind: RingKind::MultiValuation(alloc::vec![v]),
        }
    }

    pub fn glued(first: Valuation, second: Valuation, iso: ResidueIso) -> Result<Self, RingError> {
        if first == second {
            return Err(RingError::InvalidSpec("glued valuations must differ".to_string()));
        }
        if first.field() != second.field() {
            return Err(RingError::FieldMismatch {
                expected: first.field(),
                found: second.field(),
            });
        }
        if first.residue_field() != second.residue_field() {
            return Err(RingError::InvalidSpec(alloc::format!(
                "residue fields {} and {} differ",
                first.residue_field(),
                second.residue_field()
            )));
        }
        Ok(RingSpec {
            kind: RingKind::Glued { first, second, iso },
        })
    }

    /// The glued ring over the two Gaussian primes above a split prime `p`,
    /// with the prime of positive imaginary part first.
    pub fn conjugate_glued(p: u64) -> Result<Self, RingError> {
        let vals = Valuation::over_prime(FieldId::GaussianRationals, p)?;
        if vals.len() != 2 {
            return Err(RingError::InvalidSpec(alloc::format!("{p} does not split in Z[i]")));
        }
        let (a, b) = if vals[0].prime_element().im > BigInt::zero() {
            (vals[0].clone(), vals[1].clone())
        } else {
            (vals[1].clone(), vals[0].clone())
        };
        RingSpec::glued(a, b, ResidueIso::Identity)
    }

    /// The glued ring over `(2+i)` and `(2-i)`.
    pub fn ww() -> Self {
        RingSpec::conjugate_glued(5).expect("5 splits")
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn field(&self) -> FieldId {
        match &self.kind {
            RingKind::MultiValuation(vals) => vals[0].field(),
            RingKind::Glued { first, .. } => first.field(),
        }
    }

    pub fn is_glued(&self) -> bool {
        matches!(self.kind, RingKind::Glued { .. })
    }

    /// The valuations whose rings contain this ring, in spec order.
    pub fn valuations(&self) -> Vec<Valuation> {
        match &self.kind {
            RingKind::MultiValuation(vals) => vals.clone(),
            RingKind::Glued { first, second, .. } => alloc::vec![first.clone(), second.clone()],
        }
    }

    /// The integral closure: the intersection of the underlying valuation rings.
    pub fn closure(&self) -> RingSpec {
        RingSpec {
            kind: RingKind::MultiValuation(self.valuations()),
        }
    }

    fn check_field(&self, x: &FieldElem) -> Result<(), RingError> {
        if self.field().contains(x.field()) {
            Ok(())
        } else {
            Err(RingError::FieldMismatch {
                expected: self.field(),
                found: x.field(),
            })
        }
    }

    fn values(&self, x: &FieldElem) -> Result<Vec<Value>, RingError> {
        self.check_field(x)?;
        Ok(self
            .valuations()
            .iter()
            .map(|v| v.val(x))
            .collect::<Result<Vec<_>, _>>()?)
    }

    /// Residues at the two glued valuations, after applying the iso to the first.
    fn glued_residues(first: &Valuation, second: &Valuation, x: &FieldElem) -> Result<(ResidueElem, ResidueElem), RingError> {
        Ok((first.residue(x)?, second.residue(x)?))
    }

    pub fn contains(&self, x: &FieldElem) -> Result<bool, RingError> {
        let integral = self.values(x)?.iter().all(|v| *v >= Value::Finite(0));
        match &self.kind {
            RingKind::MultiValuation(_) => Ok(integral),
            RingKind::Glued { first, second, .. } => {
                if !integral {
                    return Ok(false);
                }
                let (r1, r2) = Self::glued_residues(first, second, x)?;
                Ok(r1 == r2)
            }
        }
    }

    pub fn is_unit(&self, x: &FieldElem) -> bool {
        if x.is_zero() {
            return false;
        }
        let inv = x.inv().expect("nonzero");
        matches!((self.contains(x), self.contains(&inv)), (Ok(true), Ok(true)))
    }

    /// Membership in the Jacobson radical.
    pub fn in_jacobson(&self, x: &FieldElem) -> Result<bool, RingError> {
        let positive = self.values(x)?.iter().all(|v| *v > Value::Finite(0));
        match &self.kind {
            RingKind::MultiValuation(_) => Ok(positive),
            // both residues vanish exactly when both valuations are positive
            RingKind::Glued { .. } => Ok(positive),
        }
    }

    /// Writes `x = a/b` with `a, b` in the ring.
    pub fn fraction_witness(&self, x: &FieldElem) -> Result<(FieldElem, FieldElem), RingError> {
        let field = self.field();
        let values = self.values(x)?;
        let deficit = values.iter().filter_map(|v| v.finite()).map(|v| -v).max().unwrap_or(0).max(0);
        let mut primes: Vec<u64> = self.valuations().iter().map(Valuation::prime).collect();
        primes.sort_unstable();
        primes.dedup();
        let base = primes.iter().fold(BigInt::one(), |acc, p| acc * BigInt::from(*p));
        let b = FieldElem::from_int(field, num_traits::pow(base, (deficit + 1) as usize));
        let a = x * &b;
        if self.contains(&a)? && self.contains(&b)? && !b.is_zero() {
            Ok((a, b))
        } else {
            Err(RingError::ConstructionFailed)
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RingKind::MultiValuation(vals) => {
                f.write_str("mv(")?;
                for (k, v) in vals.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
            RingKind::Glued { first, second, .. } => write!(f, "glued({first},{second},id)"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || RingError::InvalidSpec(s.to_string());
        if compact.eq_ignore_ascii_case("ww") {
            return Ok(RingSpec::ww());
        }
        let (head, rest) = compact.split_once('(').ok_or_else(bad)?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        match head {
            "mv" => RingSpec::multi_valuation(parse_valuations(body)?),
            "glued" => {
                let parts: Vec<&str> = body.split(',').collect();
                let (a, b, iso) = match parts.as_slice() {
                    [a, b] => (a, b, "id"),
                    [a, b, iso] => (a, b, *iso),
                    _ => return Err(bad()),
                };
                if iso != "id" {
                    return Err(RingError::InvalidSpec(alloc::format!(
                        "unsupported residue identification `{iso}`"
                    )));
                }
                RingSpec::glued(a.parse()?, b.parse()?, ResidueIso::Identity)
            }
            _ => Err(bad()),
        }
    }
}

/// Why a ring is, or is not, local.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalityWitness {
    /// A single valuation ring: `x` or `1/x` lies in it.
    ValuationRing,
    /// Glued ring: a nonzero common residue makes `x` a unit, otherwise `1 - x` has residue 1.
    ResidueCaseAnalysis,
    /// A member `x` such that neither `x` nor `1 - x` is a unit.
    NonUnitPair(FieldElem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityVerdict {
    pub local: bool,
    pub witness: LocalityWitness,
}

impl LocalityVerdict {
    /// Re-checks the witness against the ring.
    pub fn verify(&self, ring: &RingSpec) -> Result<bool, RingError> {
        Ok(match &self.witness {
            LocalityWitness::ValuationRing => self.local && !ring.is_glued() && ring.valuations().len() == 1,
            LocalityWitness::ResidueCaseAnalysis => self.local && ring.is_glued(),
            LocalityWitness::NonUnitPair(x) => {
                let one_minus = &FieldElem::one(ring.field()) - x;
                !self.local && ring.contains(x)? && !ring.is_unit(x) && !ring.is_unit(&one_minus)
            }
        })
    }

    /// For a local verdict, returns whichever of `x`, `1 - x` is a unit.
    pub fn unit_for(&self, ring: &RingSpec, x: &FieldElem) -> Option<FieldElem> {
        if !self.local {
            return None;
        }
        let one_minus = &FieldElem::one(ring.field()) - x;
        if ring.is_unit(x) {
            Some(x.clone())
        } else if ring.is_unit(&one_minus) {
            Some(one_minus)
        } else {
            None
        }
    }
}

/// An element that is `0` modulo the first valuation, `1` modulo the second,
/// and integral at the others.
fn split_element(vals: &[Valuation]) -> Result<FieldElem, RingError> {
    let field = vals[0].field();
    let mut targets = alloc::vec![
        ValueTarget::congruence(vals[0].clone(), FieldElem::zero(field), 1),
        ValueTarget::congruence(vals[1].clone(), FieldElem::one(field), 1),
    ];
    targets.extend(vals[2..].iter().map(|v| ValueTarget::at_least(v.clone(), 0)));
    Ok(approximate(&targets)?)
}

pub fn is_local_ring(ring: &RingSpec) -> Result<LocalityVerdict, RingError> {
    let verdict = match &ring.kind {
        RingKind::Glued { .. } => LocalityVerdict {
            local: true,
            witness: LocalityWitness::ResidueCaseAnalysis,
        },
        RingKind::MultiValuation(vals) if vals.len() == 1 => LocalityVerdict {
            local: true,
            witness: LocalityWitness::ValuationRing,
        },
        RingKind::MultiValuation(vals) => LocalityVerdict {
            local: false,
            witness: LocalityWitness::NonUnitPair(split_element(vals)?),
        },
    };
    if verdict.verify(ring)? {
        Ok(verdict)
    } else {
        Err(RingError::ConstructionFailed)
    }
}

/// `target = sum coefficients[j] * generators[j]` with every coefficient in the ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleCertificate {
    pub generators: Vec<FieldElem>,
    pub target: FieldElem,
    pub coefficients: Vec<FieldElem>,
}

impl ModuleCertificate {
    pub fn verify(&self, ring: &RingSpec) -> Result<bool, RingError> {
        if self.generators.len() != self.coefficients.len() {
            return Ok(false);
        }
        let field = ring.field();
        let mut sum = FieldElem::zero(field);
        for (r, y) in self.coefficients.iter().zip(&self.generators) {
            if !ring.contains(r)? {
                return Ok(false);
            }
            sum = &sum + &(r * y);
        }
        Ok(sum == self.target)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonMembership {
    /// Every generator is zero but the target is not.
    ZeroModule,
    /// `val(x)` is below the least value of the generators at this valuation.
    ValuationBelow {
        valuation: Valuation,
        value: Value,
        bound: Value,
    },
    /// Glued ring: the residue pair of `x/g` is outside the `F_p`-span of the
    /// residue pairs of the `y_j/g`, where `g` generates the module over the
    /// integral closure.
    ResidueOutsideSpan {
        generator: FieldElem,
        target: (u64, u64),
        span: Vec<(u64, u64)>,
    },
}

impl fmt::Display for NonMembership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonMembership::ZeroModule => f.write_str("module is zero"),
            NonMembership::ValuationBelow { valuation, value, bound } => {
                write!(f, "{valuation}: value {value} below {bound}")
            }
            NonMembership::ResidueOutsideSpan { generator, target, span } => {
                write!(f, "residues of x/({generator}) = {target:?} not in span of {span:?}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(ModuleCertificate),
    NonMember(NonMembership),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// A generator of the module `sum O y_j` over `O = ⋂ O_v`, with coefficients in `O`.
fn generator_over(vals: &[Valuation], y: &[FieldElem]) -> Result<(FieldElem, Vec<FieldElem>), RingError> {
    let field = vals[0].field();
    if y.iter().all(FieldElem::is_zero) {
        return Err(RingError::AllZero);
    }
    let table: Vec<Vec<Value>> = y
        .iter()
        .map(|e| vals.iter().map(|v| v.val(e)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let minima: Vec<Value> = (0..vals.len())
        .map(|i| table.iter().map(|row| row[i]).min().expect("nonempty"))
        .collect();
    if let Some(j) = table.iter().position(|row| *row == minima) {
        let coefficients = (0..y.len())
            .map(|k| if k == j { FieldElem::one(field) } else { FieldElem::zero(field) })
            .collect();
        return Ok((y[j].clone(), coefficients));
    }
    // Some generator attains the minimum at each valuation; weight it by 1
    // there and everything else by 0, modulo the maximal ideal.
    let chosen: Vec<usize> = (0..vals.len())
        .map(|i| table.iter().position(|row| row[i] == minima[i]).expect("minimum attained"))
        .collect();
    let mut coefficients = Vec::with_capacity(y.len());
    let mut g = FieldElem::zero(field);
    for (j, yj) in y.iter().enumerate() {
        let targets: Vec<ValueTarget> = vals
            .iter()
            .zip(&chosen)
            .map(|(v, &c)| {
                let center = if c == j { FieldElem::one(field) } else { FieldElem::zero(field) };
                ValueTarget::congruence(v.clone(), center, 1)
            })
            .collect();
        let r = approximate(&targets)?;
        g = &g + &(&r * yj);
        coefficients.push(r);
    }
    for (v, m) in vals.iter().zip(&minima) {
        if v.val(&g)? != *m {
            return Err(RingError::ConstructionFailed);
        }
    }
    Ok((g, coefficients))
}

/// A single generator of `sum R y_j` for a multi-valuation ring `R`.
pub fn module_generator(y: &[FieldElem], ring: &RingSpec) -> Result<(FieldElem, ModuleCertificate), RingError> {
    let RingKind::MultiValuation(vals) = &ring.kind else {
        return Err(RingError::UnsupportedRing("multi-valuation"));
    };
    for e in y {
        ring.check_field(e)?;
    }
    let (g, coefficients) = generator_over(vals, y)?;
    let cert = ModuleCertificate {
        generators: y.to_vec(),
        target: g.clone(),
        coefficients,
    };
    if !cert.verify(ring)? {
        return Err(RingError::ConstructionFailed);
    }
    Ok((g, cert))
}

fn inv_mod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Some solution of `sum_j lambda_j * cols[j] = rhs` over `F_p`, for 2-vectors.
fn solve_span(cols: &[(u64, u64)], rhs: (u64, u64), p: u64) -> Option<Vec<u64>> {
    let n = cols.len();
    let mut rows = [
        (cols.iter().map(|c| c.0).collect::<Vec<u64>>(), rhs.0),
        (cols.iter().map(|c| c.1).collect::<Vec<u64>>(), rhs.1),
    ];
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == 2 {
            break;
        }
        let Some(pr) = (r..2).find(|&k| rows[k].0[c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = inv_mod(rows[r].0[c], p);
        for e in rows[r].0.iter_mut() {
            *e = mulmod(*e, inv);
        }
        rows[r].1 = mulmod(rows[r].1, inv);
        let other = 1 - r;
        let f = rows[other].0[c];
        if f != 0 {
            let (src, rhs_src) = (rows[r].0.clone(), rows[r].1);
            for (e, s) in rows[other].0.iter_mut().zip(&src) {
                *e = (*e + p - mulmod(f, *s)) % p;
            }
            rows[other].1 = (rows[other].1 + p - mulmod(f, rhs_src)) % p;
        }
        pivots.push((r, c));
        r += 1;
    }
    if rows[r..].iter().any(|row| row.1 != 0) {
        return None;
    }
    let mut lambda = alloc::vec![0u64; n];
    for (row, col) in pivots {
        lambda[col] = rows[row].1;
    }
    Some(lambda)
}

fn finite_residue(v: &Valuation, x: &FieldElem) -> Result<u64, RingError> {
    match v.residue(x)? {
        ResidueElem::Finite { a, .. } => Ok(a),
        ResidueElem::Infinity => Err(RingError::ConstructionFailed),
    }
}

/// Decides whether `x` lies in `sum R y_j`, with a certificate when it does.
pub fn module_membership(x: &FieldElem, y: &[FieldElem], ring: &RingSpec) -> Result<Membership, RingError> {
    ring.check_field(x)?;
    for e in y {
        ring.check_field(e)?;
    }
    let field = ring.field();
    let zero_cert = || {
        Membership::Member(ModuleCertificate {
            generators: y.to_vec(),
            target: x.clone(),
            coefficients: alloc::vec![FieldElem::zero(field); y.len()],
        })
    };
    if x.is_zero() {
        return Ok(zero_cert());
    }
    if y.iter().all(FieldElem::is_zero) {
        return Ok(Membership::NonMember(NonMembership::ZeroModule));
    }
    let vals = ring.valuations();
    let (g, s_coeffs) = generator_over(&vals, y)?;
    for v in &vals {
        let (value, bound) = (v.val(x)?, v.val(&g)?);
        if value < bound {
            return Ok(Membership::NonMember(NonMembership::ValuationBelow {
                valuation: v.clone(),
                value,
                bound,
            }));
        }
    }
    let t = x.checked_div(&g).expect("generator is nonzero");
    let coefficients = match &ring.kind {
        RingKind::MultiValuation(_) => s_coeffs.iter().map(|s| &t * s).collect(),
        RingKind::Glued { first, second, .. } => {
            let p = first.prime();
            let pair = |e: &FieldElem| -> Result<(u64, u64), RingError> {
                let q = e.checked_div(&g).expect("generator is nonzero");
                Ok((finite_residue(first, &q)?, finite_residue(second, &q)?))
            };
            let target = pair(x)?;
            let span: Vec<(u64, u64)> = y.iter().map(pair).collect::<Result<_, _>>()?;
            let Some(lambda) = solve_span(&span, target, p) else {
                return Ok(Membership::NonMember(NonMembership::ResidueOutsideSpan {
                    generator: g,
                    target,
                    span,
                }));
            };
            // x - sum lambda_j y_j lies in J*g, and J*g = sum J*s_j*y_j.
            let lifted: Vec<FieldElem> = lambda.iter().map(|&l| FieldElem::from_int(field, l)).collect();
            let mut rest = x.clone();
            for (l, yj) in lifted.iter().zip(y) {
                rest = &rest - &(l * yj);
            }
            let e = rest.checked_div(&g).expect("generator is nonzero");
            lifted.iter().zip(&s_coeffs).map(|(l, s)| l + &(&e * s)).collect()
        }
    };
    let cert = ModuleCertificate {
        generators: y.to_vec(),
        target: x.clone(),
        coefficients,
    };
    if cert.verify(ring)? {
        Ok(Membership::Member(cert))
    } else {
        Err(RingError::ConstructionFailed)
    }
}

/// No entry lies in the module generated by the others.
pub fn independent(y: &[FieldElem], ring: &RingSpec) -> Result<bool, RingError> {
    for i in 0..y.len() {
        let others: Vec<FieldElem> = y
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, e)| e.clone())
            .collect();
        if module_membership(&y[i], &others, ring)?.is_member() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Localizations at the maximal ideals; their intersection is the ring.
pub fn key_localizations(ring: &RingSpec) -> Vec<RingSpec> {
    match &ring.kind {
        RingKind::MultiValuation(vals) => vals.iter().cloned().map(RingSpec::valuation_ring).collect(),
        RingKind::Glued { .. } => alloc::vec![ring.clone()],
    }
}

/// `(s, p)` in the ring with `x^2 - s*x + p = 0`, for `x` in the integral closure.
pub fn integrality_witness(x: &FieldElem, ring: &RingSpec) -> Result<(FieldElem, FieldElem), RingError> {
    if !ring.closure().contains(x)? {
        return Err(RingError::NotInClosure);
    }
    let two = FieldElem::from_int(ring.field(), 2);
    let (s, p) = if ring.contains(x)? {
        (&two * x, x * x)
    } else {
        // The conjugate swaps the two glued primes, so x + conj(x) and
        // x * conj(x) are rationals integral at p, hence in the ring.
        let xc = x.conj();
        (x + &xc, x * &xc)
    };
    let zero = &(&(x * x) - &(&s * x)) + &p;
    if zero.is_zero() && ring.contains(&s)? && ring.contains(&p)? {
        Ok((s, p))
    } else {
        Err(RingError::ConstructionFailed)
    }
}

/// Outcome of comparing `A` and `B` up to scaling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Embedding {
    /// `c * A ⊆ B`.
    Embeds(FieldElem),
    /// `B` is bounded below at a valuation that `A` does not control, so
    /// `A` has elements of arbitrarily negative value there.
    Refuted(EscapeFamily),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeFamily {
    pub source: RingSpec,
    pub valuation: Valuation,
}

impl EscapeFamily {
    /// An element `x` of the source ring with `c * x` of negative value.
    pub fn escape(&self, c: &FieldElem) -> Result<FieldElem, RingError> {
        let field = self.source.field();
        let n = self.valuation.val(c)?.finite().ok_or(RingError::NoInstance)?;
        let mut targets: Vec<ValueTarget> = self
            .source
            .valuations()
            .into_iter()
            .map(|v| ValueTarget::congruence(v, FieldElem::zero(field), 1))
            .collect();
        targets.push(ValueTarget::exact(self.valuation.clone(), -n - 1));
        let x = approximate(&targets)?;
        if self.source.contains(&x)? && self.valuation.val(&(c * &x))? < Value::Finite(0) {
            Ok(x)
        } else {
            Err(RingError::ConstructionFailed)
        }
    }
}

fn same_field(a: &RingSpec, b: &RingSpec) -> Result<(), RingError> {
    if a.field() == b.field() {
        Ok(())
    } else {
        Err(RingError::FieldMismatch {
            expected: a.field(),
            found: b.field(),
        })
    }
}

/// Decides `c * A ⊆ B` exactly.
pub fn scaled_inclusion(a: &RingSpec, c: &FieldElem, b: &RingSpec) -> Result<bool, RingError> {
    same_field(a, b)?;
    b.check_field(c)?;
    if c.is_zero() {
        return Ok(true);
    }
    let va = a.valuations();
    if b.valuations().iter().any(|w| !va.contains(w)) {
        return Ok(false);
    }
    // Every element of A is integral at B's valuations and 1 is in A.
    if !b.closure().contains(c)? {
        return Ok(false);
    }
    match &b.kind {
        RingKind::MultiValuation(_) => Ok(true),
        RingKind::Glued { first, second, .. } => {
            let (r1, r2) = (first.residue(c)?, second.residue(c)?);
            if r1.is_zero() && r2.is_zero() {
                return Ok(true);
            }
            if r1 != r2 {
                return Ok(false);
            }
            // c is a unit of B: need res_1 = res_2 on all of A.
            Ok(match &a.kind {
                RingKind::Glued { first: f, second: s, .. } => {
                    (f == first && s == second) || (f == second && s == first)
                }
                RingKind::MultiValuation(_) => false,
            })
        }
    }
}

/// A scalar `c` with `c * A ⊆ B`, or a family of elements refuting every scalar.
pub fn embeddability_witness(a: &RingSpec, b: &RingSpec) -> Result<Embedding, RingError> {
    same_field(a, b)?;
    let va = a.valuations();
    if let Some(w) = b.valuations().into_iter().find(|w| !va.contains(w)) {
        return Ok(Embedding::Refuted(EscapeFamily {
            source: a.clone(),
            valuation: w,
        }));
    }
    let field = a.field();
    let one = FieldElem::one(field);
    let c = if scaled_inclusion(a, &one, b)? {
        one
    } else {
        let mut primes: Vec<u64> = b.valuations().iter().map(Valuation::prime).collect();
        primes.sort_unstable();
        primes.dedup();
        FieldElem::from_int(field, primes.iter().fold(BigInt::one(), |acc, p| acc * BigInt::from(*p)))
    };
    if scaled_inclusion(a, &c, b)? {
        Ok(Embedding::Embeds(c))
    } else {
        Err(RingError::ConstructionFailed)
    }
}

/// Both rings embed into each other after scaling.
pub fn co_embeddable(a: &RingSpec, b: &RingSpec) -> Result<bool, RingError> {
    Ok(matches!(embeddability_witness(a, b)?, Embedding::Embeds(_))
        && matches!(embeddability_witness(b, a)?, Embedding::Embeds(_)))
}

/// `y` is scrambled for `vals`, and no `a * y_i` lies in the module generated
/// by the other entries.
pub fn re_slide_verify(y: &[FieldElem], a: &FieldElem, ring: &RingSpec, vals: &[Valuation]) -> Result<bool, RingError> {
    if a.is_zero() {
        return Err(RingError::NoInstance);
    }
    if !is_scrambled(y, vals)? {
        return Ok(false);
    }
    for i in 0..y.len() {
        let others: Vec<FieldElem> = y
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, e)| e.clone())
            .collect();
        if module_membership(&(a * &y[i]), &others, ring)?.is_member() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A tuple of length `n` passing [`re_slide_verify`] for the ring's own
/// valuations, where one is known to exist.
pub fn re_slide(a: &FieldElem, ring: &RingSpec, n: usize) -> Result<Vec<FieldElem>, RingError> {
    let field = ring.field();
    let y = match (n, &ring.kind) {
        (1, _) => alloc::vec![FieldElem::one(field)],
        // i reduces to the two distinct square roots of -1 at conjugate primes
        (2, RingKind::Glued { .. }) if ring.is_unit(a) => alloc::vec![FieldElem::one(field), FieldElem::i()],
        _ => return Err(RingError::NoInstance),
    };
    if re_slide_verify(&y, a, ring, &ring.valuations())? {
        Ok(y)
    } else {
        Err(RingError::ConstructionFailed)
    }
}
