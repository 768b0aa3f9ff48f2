//! Bounded evaluation of local sentences.
//!
//! Neighbourhood variables range over the balls `pi^j * R` with `|j| <= k`,
//! where `R` is the ring of the topology and `pi` the product of its
//! uniformizers. Field variables range over a finite domain built from the
//! model: uniform powers, small constants, elements separating each ordered
//! pair of valuations, seeded samples and caller-supplied seeds. The verdict
//! is exact relative to these domains.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use super::{check_polarity, BinOp, Binder, Formula, Nbhd, Quantifier, Term, Violation};
use crate::approx::{approximate, ApproxError, ValueTarget};
use crate::field::{FieldElem, FieldId};
use crate::rings::RingError;
use crate::sample::{nonzero_element, trial_rng};
use crate::topology::TopologySpec;
use crate::valuation::{Valuation, ValuationError, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("sentence has free variables: {}", .0.join(", "))]
    OpenSentence(Vec<String>),
    #[error("no topology named `{0}` in the model")]
    UnknownTopology(String),
    #[error("the model has no topologies")]
    EmptyModel,
    #[error("topologies of the model live over different fields")]
    FieldMismatch,
    #[error("sentence is not well polarised: {}", .0[0])]
    Polarity(Vec<Violation>),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

/// Named topologies over a common field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub topologies: Vec<(String, TopologySpec)>,
}

impl Model {
    /// A model with one topology under the default name.
    pub fn single(tau: TopologySpec) -> Self {
        Model {
            topologies: alloc::vec![(super::DEFAULT_TOPOLOGY.into(), tau)],
        }
    }

    pub fn with(mut self, name: &str, tau: TopologySpec) -> Self {
        self.topologies.retain(|(n, _)| n != name);
        self.topologies.push((name.into(), tau));
        self
    }

    pub fn get(&self, name: &str) -> Option<&TopologySpec> {
        self.topologies.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn field(&self) -> Result<FieldId, EvalError> {
        let mut it = self.topologies.iter().map(|(_, t)| t.field());
        let first = it.next().ok_or(EvalError::EmptyModel)?;
        if it.any(|f| f != first) {
            return Err(EvalError::FieldMismatch);
        }
        Ok(first)
    }

    /// Every valuation under some topology, without repeats.
    pub fn valuations(&self) -> Vec<Valuation> {
        let mut out: Vec<Valuation> = Vec::new();
        for (_, t) in &self.topologies {
            for v in t.ring().valuations() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Neighbourhoods are `pi^j * R` with `|j| <= scale_bound`.
    pub scale_bound: i64,
    /// Height of sampled field elements.
    pub height: i64,
    pub samples: u64,
    pub seed: u64,
    /// Extra field elements added to the domain.
    pub seeds: Vec<FieldElem>,
    /// Atom evaluations allowed before giving up with `Unknown`.
    pub atom_budget: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            scale_bound: 4,
            height: 1000,
            samples: 12,
            seed: 0,
            seeds: Vec::new(),
            atom_budget: 2_000_000,
        }
    }
}

/// A value a variable is bound to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundValue {
    Field(FieldElem),
    /// The ball `scale * R` of the named topology, `scale = pi^exponent`.
    Ball {
        topology: String,
        exponent: i64,
        scale: FieldElem,
    },
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Field(x) => write!(f, "{x}"),
            BoundValue::Ball { topology, exponent, scale } => {
                write!(f, "pi^{exponent}*R[{topology}] = ({scale})*R")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepChoice {
    /// The decisive value: a witness for a true existential or a
    /// counterexample to a universal.
    Witness(BoundValue),
    /// Every value in the domain behaves alike; the path continues with the first.
    All { count: usize, representative: BoundValue },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub variable: String,
    pub quantifier: Quantifier,
    pub choice: StepChoice,
}

impl Step {
    pub fn value(&self) -> &BoundValue {
        match &self.choice {
            StepChoice::Witness(v) | StepChoice::All { representative: v, .. } => v,
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = match self.quantifier {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        };
        match &self.choice {
            StepChoice::Witness(v) => write!(f, "{q} {}: witness {v}", self.variable),
            StepChoice::All { count, representative } => {
                write!(f, "{q} {}: all {count} values, e.g. {representative}", self.variable)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Holds,
    Fails,
    /// The atom budget ran out.
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// The branch of the evaluation that decides the outcome.
    pub path: Vec<Step>,
    pub atoms: u64,
    pub field_domain: usize,
    pub nbhd_domain: usize,
}

struct Evaluator<'a> {
    model: &'a Model,
    field: FieldId,
    domain: Vec<FieldElem>,
    balls: Vec<(String, Vec<BoundValue>)>,
    atoms: u64,
    budget: u64,
}

type Env = Vec<(String, BoundValue)>;

impl Evaluator<'_> {
    fn lookup<'e>(env: &'e Env, name: &str) -> &'e BoundValue {
        &env.iter().rev().find(|(n, _)| n == name).expect("closed sentence").1
    }

    fn term(&self, t: &Term, env: &Env) -> Option<FieldElem> {
        Some(match t {
            Term::Num(n) => FieldElem::from_int(self.field, n.clone()),
            Term::Imag => FieldElem::i(),
            Term::Var(v) => match Self::lookup(env, v) {
                BoundValue::Field(x) => x.clone(),
                BoundValue::Ball { .. } => return None,
            },
            Term::Neg(a) => -&self.term(a, env)?,
            Term::Bin(op, a, b) => {
                let (a, b) = (self.term(a, env)?, self.term(b, env)?);
                match op {
                    BinOp::Add => &a + &b,
                    BinOp::Sub => &a - &b,
                    BinOp::Mul => &a * &b,
                    BinOp::Div => a.checked_div(&b).ok()?,
                }
            }
        })
    }

    fn member(&self, x: &FieldElem, n: &Nbhd, env: &Env) -> Result<bool, EvalError> {
        let BoundValue::Ball { topology, scale, .. } = Self::lookup(env, &n.var) else {
            return Ok(false);
        };
        let mut scale = scale.clone();
        if let Some(s) = &n.scale {
            let Some(s) = self.term(s, env) else { return Ok(false) };
            scale = &scale * &s;
        }
        if scale.is_zero() {
            return Ok(x.is_zero());
        }
        let tau = self.model.get(topology).expect("balls come from the model");
        let y = x.checked_div(&scale).expect("nonzero scale");
        Ok(tau.ring().contains(&y)?)
    }

    fn tick(&mut self) -> Result<(), Outcome> {
        self.atoms += 1;
        if self.atoms > self.budget {
            Err(Outcome::Unknown)
        } else {
            Ok(())
        }
    }

    /// Truth value of `f` plus the deciding branch.
    fn eval(&mut self, f: &Formula, env: &mut Env) -> Result<Result<(bool, Vec<Step>), EvalError>, Outcome> {
        let atom = |r: bool| Ok(Ok((r, Vec::new())));
        match f {
            Formula::Eq(a, b) | Formula::Ne(a, b) => {
                self.tick()?;
                let eq = match (self.term(a, env), self.term(b, env)) {
                    (Some(x), Some(y)) => Some(x == y),
                    _ => None,
                };
                let r = match f {
                    Formula::Eq(..) => eq == Some(true),
                    _ => eq == Some(false),
                };
                atom(r)
            }
            Formula::In(t, n) => {
                self.tick()?;
                let Some(x) = self.term(t, env) else { return atom(false) };
                match self.member(&x, n, env) {
                    Ok(r) => atom(r),
                    Err(e) => Ok(Err(e)),
                }
            }
            Formula::Not(g) => Ok(self.eval(g, env)?.map(|(r, p)| (!r, p))),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let (ra, pa) = match self.eval(a, env)? {
                    Ok(v) => v,
                    Err(e) => return Ok(Err(e)),
                };
                // value of `a` that settles the connective without `b`
                let short = match f {
                    Formula::And(..) => Some(false),
                    Formula::Or(..) => Some(true),
                    _ => Some(false),
                };
                if short == Some(ra) {
                    let r = !matches!(f, Formula::And(..));
                    return Ok(Ok((r, pa)));
                }
                self.eval(b, env)
            }
            Formula::Quant(q, binder, body) => {
                let values: Vec<BoundValue> = match binder {
                    Binder::Field { nonzero, .. } => self
                        .domain
                        .iter()
                        .filter(|x| !(*nonzero && x.is_zero()))
                        .cloned()
                        .map(BoundValue::Field)
                        .collect(),
                    Binder::Nbhd { .. } => {
                        let name = binder.topology();
                        match self.balls.iter().find(|(n, _)| n == name) {
                            Some((_, b)) => b.clone(),
                            None => return Ok(Err(EvalError::UnknownTopology(name.into()))),
                        }
                    }
                };
                let decisive = matches!(q, Quantifier::Exists);
                let mut first: Option<Vec<Step>> = None;
                for v in &values {
                    env.push((binder.name().into(), v.clone()));
                    let r = self.eval(body, env);
                    env.pop();
                    let (r, path) = match r? {
                        Ok(x) => x,
                        Err(e) => return Ok(Err(e)),
                    };
                    if r == decisive {
                        let mut steps = alloc::vec![Step {
                            variable: binder.name().into(),
                            quantifier: *q,
                            choice: StepChoice::Witness(v.clone()),
                        }];
                        steps.extend(path);
                        return Ok(Ok((decisive, steps)));
                    }
                    if first.is_none() {
                        first = Some(path);
                    }
                }
                let mut steps = Vec::new();
                if let Some(rep) = values.first() {
                    steps.push(Step {
                        variable: binder.name().into(),
                        quantifier: *q,
                        choice: StepChoice::All {
                            count: values.len(),
                            representative: rep.clone(),
                        },
                    });
                    steps.extend(first.unwrap_or_default());
                }
                Ok(Ok((!decisive, steps)))
            }
        }
    }
}

fn max_abs_val(vals: &[Valuation], xs: &[FieldElem]) -> Result<i64, ValuationError> {
    let mut m = 0;
    for x in xs {
        for v in vals {
            if let Value::Finite(n) = v.val(x)? {
                m = m.max(n.abs());
            }
        }
    }
    Ok(m)
}

/// The field domain of a model under the given bounds, in search order.
pub fn field_domain(model: &Model, bounds: &SearchBounds) -> Result<Vec<FieldElem>, EvalError> {
    let field = model.field()?;
    let vals = model.valuations();
    let k = bounds.scale_bound.max(0);
    let pi = vals.iter().fold(FieldElem::one(field), |acc, v| &acc * &v.uniformizer());

    let mut fixed: Vec<FieldElem> = [0, 1, -1, 2, 3]
        .into_iter()
        .map(|n| FieldElem::from_int(field, n))
        .collect();
    fixed.push(FieldElem::from_ratio(field, 1, 2).expect("nonzero denominator"));
    if field == FieldId::GaussianRationals {
        fixed.push(FieldElem::i());
        fixed.push(&FieldElem::one(field) + &FieldElem::i());
    }
    for t in 0..bounds.samples {
        let mut rng = trial_rng(bounds.seed, t);
        fixed.push(nonzero_element(&mut rng, field, bounds.height.max(1)));
    }
    let m = max_abs_val(&vals, &fixed)?;
    let big = k + m.max(k + 1) + 2;

    let mut out: Vec<FieldElem> = Vec::new();
    let mut push = |x: FieldElem| {
        if !out.contains(&x) {
            out.push(x);
        }
    };
    for j in centred(k + 1) {
        push(pi.pow(j).expect("uniformizer is nonzero"));
    }
    for x in fixed.iter().take(if field == FieldId::GaussianRationals { 8 } else { 6 }) {
        push(x.clone());
    }
    for v in &vals {
        for w in &vals {
            if v == w {
                continue;
            }
            let mut targets = alloc::vec![
                ValueTarget::exact(v.clone(), big),
                ValueTarget::congruence(w.clone(), FieldElem::one(field), big),
            ];
            for u in &vals {
                if u != v && u != w {
                    targets.push(ValueTarget::at_least(u.clone(), 0));
                }
            }
            push(approximate(&targets)?);
        }
    }
    for x in fixed.into_iter().skip(if field == FieldId::GaussianRationals { 8 } else { 6 }) {
        push(x);
    }
    for s in &bounds.seeds {
        push(s.in_field(field).map_err(|_| EvalError::FieldMismatch)?);
    }
    Ok(out)
}

/// `0, -1, 1, -2, 2, ..., -k, k`: unit scales are tried first.
fn centred(k: i64) -> impl Iterator<Item = i64> {
    (0..=k).flat_map(|j| if j == 0 { alloc::vec![0] } else { alloc::vec![-j, j] })
}

fn nbhd_domains(model: &Model, bounds: &SearchBounds) -> Vec<(String, Vec<BoundValue>)> {
    let k = bounds.scale_bound.max(0);
    model
        .topologies
        .iter()
        .map(|(name, tau)| {
            let pi = tau.uniformizer();
            let balls = centred(k)
                .map(|j| BoundValue::Ball {
                    topology: name.clone(),
                    exponent: j,
                    scale: pi.pow(j).expect("uniformizer is nonzero"),
                })
                .collect();
            (name.clone(), balls)
        })
        .collect()
}

fn check_sentence(f: &Formula, model: &Model) -> Result<(), EvalError> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(EvalError::OpenSentence(free));
    }
    let violations = check_polarity(f);
    if !violations.is_empty() {
        return Err(EvalError::Polarity(violations));
    }
    fn topologies(f: &Formula, model: &Model) -> Result<(), EvalError> {
        match f {
            Formula::Quant(_, b, body) => {
                if let Binder::Nbhd { .. } = b {
                    if model.get(b.topology()).is_none() {
                        return Err(EvalError::UnknownTopology(b.topology().into()));
                    }
                }
                topologies(body, model)
            }
            Formula::Not(g) => topologies(g, model),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                topologies(a, model)?;
                topologies(b, model)
            }
            _ => Ok(()),
        }
    }
    topologies(f, model)
}

/// Evaluates a closed, well-polarised sentence on the model.
pub fn evaluate(f: &Formula, model: &Model, bounds: &SearchBounds) -> Result<Verdict, EvalError> {
    check_sentence(f, model)?;
    let mut ev = Evaluator {
        model,
        field: model.field()?,
        domain: field_domain(model, bounds)?,
        balls: nbhd_domains(model, bounds),
        atoms: 0,
        budget: bounds.atom_budget,
    };
    let r = ev.eval(f, &mut Vec::new());
    let (outcome, path) = match r {
        Ok(Ok((true, p))) => (Outcome::Holds, p),
        Ok(Ok((false, p))) => (Outcome::Fails, p),
        Ok(Err(e)) => return Err(e),
        Err(o) => (o, Vec::new()),
    };
    Ok(Verdict {
        outcome,
        path,
        atoms: ev.atoms.min(bounds.atom_budget),
        field_domain: ev.domain.len(),
        nbhd_domain: ev.balls.iter().map(|(_, b)| b.len()).sum(),
    })
}

/// Re-checks a verdict. The sentence is evaluated again and must give the
/// same outcome and branch; for a prenex sentence the quantifier-free matrix
/// is also evaluated directly under the bindings of the branch.
pub fn audit(f: &Formula, model: &Model, bounds: &SearchBounds, verdict: &Verdict) -> Result<bool, EvalError> {
    let again = evaluate(f, model, bounds)?;
    if again.outcome != verdict.outcome || again.path != verdict.path {
        return Ok(false);
    }
    if verdict.outcome == Outcome::Unknown {
        return Ok(true);
    }
    let mut matrix = f;
    let mut prefix = Vec::new();
    while let Formula::Quant(q, b, body) = matrix {
        prefix.push((*q, b));
        matrix = body;
    }
    if prefix.len() != verdict.path.len() {
        // not prenex, or a quantifier over an empty domain
        return Ok(true);
    }
    let mut env: Env = Vec::new();
    for ((q, b), step) in prefix.iter().zip(&verdict.path) {
        if *q != step.quantifier || b.name() != step.variable {
            return Ok(false);
        }
        let ok = match (b, step.value()) {
            (Binder::Field { nonzero, .. }, BoundValue::Field(x)) => !(*nonzero && x.is_zero()),
            (Binder::Nbhd { .. }, BoundValue::Ball { topology, .. }) => topology == b.topology(),
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
        env.push((step.variable.clone(), step.value().clone()));
    }
    let mut ev = Evaluator {
        model,
        field: model.field()?,
        domain: Vec::new(),
        balls: Vec::new(),
        atoms: 0,
        budget: u64::MAX,
    };
    match ev.eval(matrix, &mut env) {
        Ok(Ok((r, _))) => Ok(r == (verdict.outcome == Outcome::Holds)),
        Ok(Err(e)) => Err(e),
        Err(_) => Ok(false),
    }
}
