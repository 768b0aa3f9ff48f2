//! Field topologies presented by a ring: the neighbourhoods of zero are the
//! balls `c*R` for nonzero `c`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use thiserror::Error;

use crate::approx::{approximate, ApproxError, ValueTarget};
use crate::field::{FieldElem, FieldId};
use crate::rings::{embeddability_witness, Embedding, RingError, RingKind, RingSpec};
use crate::sample;
use crate::valuation::{Valuation, ValuationError, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("parts do not match the topology: {0}")]
    SpecMismatch(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TopologySpec {
    ring: RingSpec,
}

impl TopologySpec {
    pub fn new(ring: RingSpec) -> Self {
        TopologySpec { ring }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn field(&self) -> FieldId {
        self.ring.field()
    }

    pub fn ball(&self, scale: FieldElem) -> Ball {
        Ball {
            scale,
            ring: self.ring.clone(),
        }
    }

    /// Product of the uniformizers of the underlying valuations: value 1 at each.
    pub fn uniformizer(&self) -> FieldElem {
        let field = self.field();
        self.ring
            .valuations()
            .iter()
            .fold(FieldElem::one(field), |acc, v| &acc * &v.uniformizer())
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tau({})", self.ring)
    }
}

/// The neighbourhood `scale * ring`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub scale: FieldElem,
    pub ring: RingSpec,
}

impl Ball {
    pub fn contains(&self, x: &FieldElem) -> Result<bool, RingError> {
        let y = x.checked_div(&self.scale).map_err(|_| RingError::NoInstance)?;
        self.ring.contains(&y)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*{}", self.scale, self.ring)
    }
}

/// `tau1` is coarser than `tau2` exactly when the ring of `tau2` embeds into the ring of `tau1`.
pub fn coarsening_witness(tau1: &TopologySpec, tau2: &TopologySpec) -> Result<Embedding, TopologyError> {
    Ok(embeddability_witness(&tau2.ring, &tau1.ring)?)
}

pub fn is_coarser(tau1: &TopologySpec, tau2: &TopologySpec) -> Result<bool, TopologyError> {
    Ok(matches!(coarsening_witness(tau1, tau2)?, Embedding::Embeds(_)))
}

/// For a single valuation ring `O`, the bound `C = O` works for every bounded set:
/// `val(x) <= 0` gives `1/x` in `O`, otherwise `1 - x` is a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityCertificate {
    pub valuation: Valuation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalBranch {
    Inverse,
    InverseOfComplement,
}

impl LocalityCertificate {
    /// Which of `1/x`, `1/(1-x)` lies in the bound, verified.
    pub fn branch(&self, x: &FieldElem) -> Result<Option<LocalBranch>, TopologyError> {
        let field = self.valuation.field();
        let o = RingSpec::valuation_ring(self.valuation.clone());
        let one = FieldElem::one(field);
        if let Ok(inv) = x.inv() {
            if o.contains(&inv)? {
                return Ok(Some(LocalBranch::Inverse));
            }
        }
        if let Ok(inv) = (&one - x).inv() {
            if o.contains(&inv)? {
                return Ok(Some(LocalBranch::InverseOfComplement));
            }
        }
        Ok(None)
    }
}

/// A bounded set `B` together with a family in `B` defeating every
/// candidate bound `e * closure(R)`.
///
/// `B` is the integral closure, which is bounded because it embeds into
/// `R` with scale `embed_scale`. The family is `x_k` with
/// `val_1(x_k) = k`, `val_2(1 - x_k) >= k` and `x_k` integral elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonLocalityWitness {
    pub ring: RingSpec,
    pub bounded: RingSpec,
    pub embed_scale: FieldElem,
    pub first: Valuation,
    pub second: Valuation,
}

impl NonLocalityWitness {
    pub fn member(&self, k: i64) -> Result<FieldElem, TopologyError> {
        let field = self.ring.field();
        let mut targets = alloc::vec![
            ValueTarget::exact(self.first.clone(), k),
            ValueTarget::congruence(self.second.clone(), FieldElem::one(field), k),
        ];
        for v in self.bounded.valuations() {
            if v != self.first && v != self.second {
                targets.push(ValueTarget::at_least(v, 0));
            }
        }
        Ok(approximate(&targets)?)
    }

    /// The least `k >= 1` whose family member escapes `e * closure(R)`.
    pub fn escape_index(&self, e: &FieldElem) -> Result<i64, TopologyError> {
        let v1 = self.first.val(e)?.finite().unwrap_or(0);
        let v2 = self.second.val(e)?.finite().unwrap_or(0);
        Ok(1.max(1 - v1).max(1 - v2))
    }

    /// An `x` in `B` with neither `1/x` nor `1/(1-x)` in `e * closure(R)`, verified.
    pub fn escape(&self, e: &FieldElem) -> Result<FieldElem, TopologyError> {
        let k = self.escape_index(e)?;
        let x = self.member(k)?;
        if self.escapes(e, &x)? {
            Ok(x)
        } else {
            Err(TopologyError::Ring(RingError::ConstructionFailed))
        }
    }

    pub fn escapes(&self, e: &FieldElem, x: &FieldElem) -> Result<bool, TopologyError> {
        let field = self.ring.field();
        let ball = Ball {
            scale: e.clone(),
            ring: self.bounded.clone(),
        };
        let one = FieldElem::one(field);
        let in_ball = |y: Result<FieldElem, _>| -> Result<bool, TopologyError> {
            match y {
                Ok(y) => Ok(ball.contains(&y)?),
                Err(_) => Ok(false),
            }
        };
        Ok(self.bounded.contains(x)? && !in_ball(x.inv())? && !in_ball((&one - x).inv())?)
    }

    /// `B` is bounded: `embed_scale * B` lies in `R`.
    pub fn bounded_is_bounded(&self) -> Result<bool, TopologyError> {
        Ok(crate::rings::scaled_inclusion(&self.bounded, &self.embed_scale, &self.ring)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopologyLocality {
    Local(LocalityCertificate),
    NonLocal(NonLocalityWitness),
}

impl TopologyLocality {
    pub fn is_local(&self) -> bool {
        matches!(self, TopologyLocality::Local(_))
    }
}

pub fn is_local_topology(tau: &TopologySpec) -> Result<TopologyLocality, TopologyError> {
    let vals = tau.ring.valuations();
    if vals.len() == 1 {
        return Ok(TopologyLocality::Local(LocalityCertificate {
            valuation: vals[0].clone(),
        }));
    }
    let bounded = tau.ring.closure();
    let Embedding::Embeds(embed_scale) = embeddability_witness(&bounded, &tau.ring)? else {
        return Err(TopologyError::Ring(RingError::ConstructionFailed));
    };
    let witness = NonLocalityWitness {
        ring: tau.ring.clone(),
        bounded,
        embed_scale,
        first: vals[0].clone(),
        second: vals[1].clone(),
    };
    if !witness.bounded_is_bounded()? {
        return Err(TopologyError::Ring(RingError::ConstructionFailed));
    }
    Ok(TopologyLocality::NonLocal(witness))
}

/// The valuation topologies coarser than `tau`.
pub fn v_coarsenings(tau: &TopologySpec) -> Vec<Valuation> {
    tau.ring.valuations()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Each local component with the V-coarsenings it refines.
    pub pairs: Vec<(TopologySpec, Vec<Valuation>)>,
    /// Set when the ring is local but its topology is not.
    pub local_ring_nonlocal_topology: bool,
}

impl Components {
    pub fn components(&self) -> Vec<TopologySpec> {
        self.pairs.iter().map(|(t, _)| t.clone()).collect()
    }
}

pub fn local_components(tau: &TopologySpec) -> Components {
    let pairs = crate::rings::key_localizations(&tau.ring)
        .into_iter()
        .map(|r| {
            let vals = r.valuations();
            (TopologySpec::new(r), vals)
        })
        .collect();
    Components {
        pairs,
        local_ring_nonlocal_topology: tau.ring.is_glued(),
    }
}

/// One verified instance of the independent-sum conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SumInstance {
    /// `⋂ c_i R_i ⊆ c R`, with `sample` a point of the left side.
    Refine {
        c: FieldElem,
        part_scales: Vec<FieldElem>,
        sample: FieldElem,
    },
    /// `c R ⊆ ⋂ c_i R_i`, with `sample` a point of the left side.
    Coarsen {
        part_scales: Vec<FieldElem>,
        c: FieldElem,
        sample: FieldElem,
    },
    /// `point` lies in every `a_i + pi_i^{m_i} R_i`.
    Density {
        centers: Vec<FieldElem>,
        radii: Vec<i64>,
        point: FieldElem,
    },
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    let mut s = String::new();
    for (k, x) in xs.iter().enumerate() {
        if k > 0 {
            s.push_str("; ");
        }
        s.push_str(&alloc::format!("{x}"));
    }
    s
}

impl fmt::Display for SumInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SumInstance::Refine { c, part_scales, sample } => {
                write!(f, "refine c={c} parts=[{}] sample={sample}", join(part_scales))
            }
            SumInstance::Coarsen { part_scales, c, sample } => {
                write!(f, "coarsen parts=[{}] c={c} sample={sample}", join(part_scales))
            }
            SumInstance::Density { centers, radii, point } => {
                write!(f, "density centers=[{}] radii=[{}] point={point}", join(centers), join(radii))
            }
        }
    }
}

/// Checks that the parts' valuation sets partition the valuations of `tau`.
fn check_parts(tau: &TopologySpec, parts: &[TopologySpec]) -> Result<(), TopologyError> {
    let mismatch = |m: &str| Err(TopologyError::SpecMismatch(m.into()));
    if !matches!(tau.ring.kind(), RingKind::MultiValuation(_)) {
        return mismatch("the sum must be a multi-valuation topology");
    }
    if parts.is_empty() {
        return mismatch("no parts");
    }
    let mut seen: Vec<Valuation> = Vec::new();
    for p in parts {
        if !matches!(p.ring.kind(), RingKind::MultiValuation(_)) {
            return mismatch("parts must be multi-valuation topologies");
        }
        for v in p.ring.valuations() {
            if seen.contains(&v) {
                return mismatch("parts share a valuation");
            }
            seen.push(v);
        }
    }
    let all = tau.ring.valuations();
    if seen.len() != all.len() || seen.iter().any(|v| !all.contains(v)) {
        return mismatch("parts do not cover the valuations of the sum");
    }
    Ok(())
}

fn part_of(parts: &[TopologySpec], v: &Valuation) -> usize {
    parts
        .iter()
        .position(|p| p.ring.valuations().contains(v))
        .expect("parts cover the valuations")
}

fn val_finite(v: &Valuation, x: &FieldElem) -> Result<i64, TopologyError> {
    Ok(v.val(x)?.finite().expect("nonzero scale"))
}

impl SumInstance {
    /// Re-verifies the instance: inclusions by the valuation criterion on
    /// every valuation plus the sample point, density by ball membership.
    pub fn verify(&self, tau: &TopologySpec, parts: &[TopologySpec]) -> Result<bool, TopologyError> {
        check_parts(tau, parts)?;
        let vals = tau.ring.valuations();
        match self {
            SumInstance::Refine { c, part_scales, sample } | SumInstance::Coarsen { part_scales, c, sample } => {
                let refine = matches!(self, SumInstance::Refine { .. });
                if part_scales.len() != parts.len() {
                    return Ok(false);
                }
                for v in &vals {
                    let ci = val_finite(v, &part_scales[part_of(parts, v)])?;
                    let cv = val_finite(v, c)?;
                    if (refine && ci < cv) || (!refine && cv < ci) {
                        return Ok(false);
                    }
                }
                let in_parts = parts
                    .iter()
                    .zip(part_scales)
                    .map(|(p, s)| p.ball(s.clone()).contains(sample))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .all(|b| b);
                let in_sum = tau.ball(c.clone()).contains(sample)?;
                Ok(in_parts && in_sum)
            }
            SumInstance::Density { centers, radii, point } => {
                if centers.len() != parts.len() || radii.len() != parts.len() {
                    return Ok(false);
                }
                for ((p, a), m) in parts.iter().zip(centers).zip(radii) {
                    let scale = p.uniformizer().pow(*m).map_err(|_| RingError::NoInstance)?;
                    if !p.ball(scale).contains(&(point - a))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// A point of `⋂ (a_i + pi_i^{m_i} R_i)`.
pub fn density_witness(parts: &[TopologySpec], centers: &[FieldElem], radii: &[i64]) -> Result<FieldElem, TopologyError> {
    let mut targets = Vec::new();
    for ((p, a), m) in parts.iter().zip(centers).zip(radii) {
        for v in p.ring.valuations() {
            targets.push(ValueTarget::congruence(v, a.clone(), *m));
        }
    }
    Ok(approximate(&targets)?)
}

/// A random nonzero element integral at every valuation in `vals`.
fn random_integral<R: Rng>(rng: &mut R, vals: &[Valuation]) -> Result<FieldElem, TopologyError> {
    let field = vals[0].field();
    let targets: Vec<ValueTarget> = vals
        .iter()
        .map(|v| {
            let center = sample::integer_element(rng, field, 50);
            ValueTarget::congruence(v.clone(), center, rng.gen_range(0..=3))
        })
        .collect();
    Ok(approximate(&targets)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumReport {
    pub sum: TopologySpec,
    pub parts: Vec<TopologySpec>,
    pub instances: Vec<SumInstance>,
    pub passed: bool,
}

pub const SCALE_HEIGHT: i64 = 10_000;
pub const MAX_RADIUS: i64 = 4;

/// Checks, on `trials` seeded instances each, that `tau` is the independent
/// sum of `parts`: both filter-basis inclusions and density.
pub fn independent_sum_check(tau: &TopologySpec, parts: &[TopologySpec], trials: u64, seed: u64) -> Result<SumReport, TopologyError> {
    check_parts(tau, parts)?;
    let field = tau.field();
    let vals = tau.ring.valuations();
    let mut instances = Vec::new();
    let mut passed = true;
    for t in 0..trials {
        let mut rng = sample::trial_rng(seed, t);

        let c = sample::nonzero_element(&mut rng, field, SCALE_HEIGHT);
        let r = random_integral(&mut rng, &vals)?;
        let refine = SumInstance::Refine {
            part_scales: alloc::vec![c.clone(); parts.len()],
            sample: &c * &r,
            c,
        };

        let part_scales: Vec<FieldElem> = parts
            .iter()
            .map(|_| sample::nonzero_element(&mut rng, field, SCALE_HEIGHT))
            .collect();
        let targets = vals
            .iter()
            .map(|v| Ok(ValueTarget::at_least(v.clone(), val_finite(v, &part_scales[part_of(parts, v)])?)))
            .collect::<Result<Vec<_>, TopologyError>>()?;
        let c = approximate(&targets)?;
        let r = random_integral(&mut rng, &vals)?;
        let coarsen = SumInstance::Coarsen {
            sample: &c * &r,
            part_scales,
            c,
        };

        let centers: Vec<FieldElem> = parts
            .iter()
            .map(|_| sample::element(&mut rng, field, 100))
            .collect();
        let radii: Vec<i64> = parts.iter().map(|_| rng.gen_range(0..=MAX_RADIUS)).collect();
        let point = density_witness(parts, &centers, &radii)?;
        let density = SumInstance::Density { centers, radii, point };

        for inst in [refine, coarsen, density] {
            passed &= inst.verify(tau, parts)?;
            instances.push(inst);
        }
    }
    Ok(SumReport {
        sum: tau.clone(),
        parts: parts.to_vec(),
        instances,
        passed,
    })
}

/// A topology given by a single valuation is not the independent sum of
/// itself with itself: the balls around `0` and `1` of radius 1 are disjoint.
pub fn refute_self_sum(tau: &TopologySpec) -> Result<Option<(FieldElem, FieldElem)>, TopologyError> {
    let vals = tau.ring.valuations();
    if vals.len() != 1 {
        return Ok(None);
    }
    let field = tau.field();
    let (a, b) = (FieldElem::zero(field), FieldElem::one(field));
    // disjoint because val(a - b) = 0 < 1
    if vals[0].val(&(&a - &b))? < Value::Finite(1) {
        Ok(Some((a, b)))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativityTrial {
    pub primes: [u64; 3],
    pub direct: bool,
    pub left: bool,
    pub right: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativityReport {
    pub trials: Vec<AssociativityTrial>,
    pub passed: bool,
}

const PRIME_POOL: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

fn mv(primes: &[u64]) -> Result<TopologySpec, TopologyError> {
    let vals = primes
        .iter()
        .map(|&p| Valuation::rational(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TopologySpec::new(RingSpec::multi_valuation(vals)?))
}

/// Checks that `tau(Z_(p) ∩ Z_(q) ∩ Z_(r))` decomposes directly and through
/// both pairings, on random triples of distinct primes.
pub fn associativity_check(seed: u64, trials: u64) -> Result<AssociativityReport, TopologyError> {
    let mut out = Vec::new();
    let mut passed = true;
    for t in 0..trials {
        let mut rng = sample::trial_rng(seed, t);
        let ps = sample::distinct(&mut rng, &PRIME_POOL, 3);
        let [p, q, r] = [ps[0], ps[1], ps[2]];
        let sub = rng.gen::<u64>();
        let whole = mv(&[p, q, r])?;
        let check = |tau: &TopologySpec, parts: &[TopologySpec], k: u64| -> Result<bool, TopologyError> {
            Ok(independent_sum_check(tau, parts, 1, sub.wrapping_add(k))?.passed)
        };
        let direct = check(&whole, &[mv(&[p])?, mv(&[q])?, mv(&[r])?], 0)?;
        let left = check(&mv(&[p, q])?, &[mv(&[p])?, mv(&[q])?], 1)? && check(&whole, &[mv(&[p, q])?, mv(&[r])?], 2)?;
        let right = check(&mv(&[q, r])?, &[mv(&[q])?, mv(&[r])?], 3)? && check(&whole, &[mv(&[p])?, mv(&[q, r])?], 4)?;
        passed &= direct && left && right;
        out.push(AssociativityTrial {
            primes: [p, q, r],
            direct,
            left,
            right,
        });
    }
    Ok(AssociativityReport { trials: out, passed })
}
