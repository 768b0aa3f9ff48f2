//! Re-verification of `WITNESS:` lines through the library.
//!
//! A witness line is `WITNESS: kind f1 | f2 | ...`. Each kind names a
//! claim that is checked from its fields alone, by exact arithmetic.

use multival_core::field::{FieldElem, FieldId};
use multival_core::locsent::{self, Model, Outcome, SearchBounds};
use multival_core::rings::{
    independent, is_local_ring, module_membership, re_slide_verify, scaled_inclusion,
    LocalityWitness, ModuleCertificate, RingSpec,
};
use multival_core::scramble::{is_scrambled, PrimeFieldMatrix};
use multival_core::topology::{LocalBranch, LocalityCertificate, SumInstance, TopologySpec};
use multival_core::valuation::{Valuation, Value};

use crate::input;
use crate::report::WITNESS_PREFIX;

type Check = Result<bool, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ring(s: &str) -> Result<RingSpec, String> {
    input::ring(s).map_err(|e| e.message)
}

fn topo(s: &str) -> Result<TopologySpec, String> {
    input::topology(s).map_err(|e| e.message)
}

fn elem(field: FieldId, s: &str) -> Result<FieldElem, String> {
    input::element(field, s).map_err(|e| e.message)
}

fn tuple(field: FieldId, s: &str) -> Result<Vec<FieldElem>, String> {
    input::tuple(field, s).map_err(|e| e.message)
}

fn valuation(s: &str) -> Result<Valuation, String> {
    s.parse().map_err(err)
}

fn vals(s: &str) -> Result<Vec<Valuation>, String> {
    input::valuations(s).map_err(|e| e.message)
}

fn matrix(s: &str) -> Result<PrimeFieldMatrix, String> {
    let body = s
        .trim()
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or("matrix must be bracketed")?;
    let rows = body
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|e| elem(FieldId::Rationals, e.trim()).map(|x| x.re().clone()))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    PrimeFieldMatrix::from_rows(rows).ok_or_else(|| "matrix is not square".into())
}

fn bounds(s: &str) -> Result<SearchBounds, String> {
    let mut b = SearchBounds::default();
    for kv in s.split(',') {
        let (k, v) = kv.split_once('=').ok_or("bounds are key=value pairs")?;
        if k.trim() == "seeds" {
            b.seeds = tuple(FieldId::GaussianRationals, v)?;
            continue;
        }
        let n: i64 = v.trim().parse().map_err(err)?;
        match k.trim() {
            "k" => b.scale_bound = n,
            "height" => b.height = n,
            "samples" => b.samples = n as u64,
            "seed" => b.seed = n as u64,
            "budget" => b.atom_budget = n as u64,
            other => return Err(format!("unknown bound `{other}`")),
        }
    }
    Ok(b)
}

pub fn model(s: &str) -> Result<Model, String> {
    let mut m = Model { topologies: Vec::new() };
    for part in s.split(';') {
        let (name, spec) = part.split_once('=').ok_or("model entries are name=spec")?;
        m = m.with(name.trim(), topo(spec.trim())?);
    }
    Ok(m)
}

fn arity(fields: &[&str], n: usize) -> Result<(), String> {
    if fields.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} fields, found {}", fields.len()))
    }
}

/// Checks one witness line. `Err` means the line is malformed.
pub fn check_line(line: &str) -> Check {
    let body = line.strip_prefix(WITNESS_PREFIX).ok_or("not a witness line")?;
    let (kind, rest) = body.split_once(' ').ok_or("witness has no fields")?;
    let f: Vec<&str> = rest.split(" | ").map(str::trim).collect();
    match kind {
        "val" => {
            arity(&f, 3)?;
            let v = valuation(f[0])?;
            let x = elem(v.field(), f[1])?;
            let got = v.val(&x).map_err(err)?;
            Ok(got.to_string() == f[2])
        }
        "residue" => {
            arity(&f, 3)?;
            let v = valuation(f[0])?;
            let x = elem(v.field(), f[1])?;
            Ok(v.residue(&x).map_err(err)?.to_string() == f[2])
        }
        "approx" => {
            arity(&f, 2)?;
            let t = input::target(f[1]).map_err(|e| e.message)?;
            let x = elem(t.valuation.field(), f[0])?;
            t.is_satisfied_by(&x).map_err(err)
        }
        "step" => {
            arity(&f, 4)?;
            let vs = vals(f[0])?;
            let field = vs[0].field();
            let (z, w) = (elem(field, f[1])?, elem(field, f[2])?);
            let c = elem(FieldId::Rationals, f[3])?;
            let y = &z - &(&c * &w);
            for v in &vs {
                let want = v.val(&z).map_err(err)?.min(v.val(&w).map_err(err)?);
                if v.val(&y).map_err(err)? != want {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        "scramble" => {
            arity(&f, 4)?;
            let vs = vals(f[0])?;
            let field = vs[0].field();
            let (input, m, output) = (tuple(field, f[1])?, matrix(f[2])?, tuple(field, f[3])?);
            Ok(m.size() == input.len()
                && m.has_integer_entries()
                && m.is_invertible()
                && m.apply(&input) == output
                && is_scrambled(&output, &vs).map_err(err)?)
        }
        "member" | "nonmember" => {
            arity(&f, 2)?;
            let r = ring(f[0])?;
            let x = elem(r.field(), f[1])?;
            Ok(r.contains(&x).map_err(err)? == (kind == "member"))
        }
        "unit" | "nonunit" => {
            arity(&f, 2)?;
            let r = ring(f[0])?;
            let x = elem(r.field(), f[1])?;
            Ok(r.is_unit(&x) == (kind == "unit"))
        }
        "jacobson" | "nonjacobson" => {
            arity(&f, 2)?;
            let r = ring(f[0])?;
            let x = elem(r.field(), f[1])?;
            Ok(r.in_jacobson(&x).map_err(err)? == (kind == "jacobson"))
        }
        "local" => {
            arity(&f, 2)?;
            let r = ring(f[0])?;
            let verdict = is_local_ring(&r).map_err(err)?;
            let tag = match verdict.witness {
                LocalityWitness::ValuationRing => "valuation-ring",
                LocalityWitness::ResidueCaseAnalysis => "residue-case-analysis",
                LocalityWitness::NonUnitPair(_) => return Ok(false),
            };
            Ok(tag == f[1] && verdict.verify(&r).map_err(err)?)
        }
        "nonlocal-pair" => {
            arity(&f, 2)?;
            let r = ring(f[0])?;
            let x = elem(r.field(), f[1])?;
            let one_minus = &FieldElem::one(r.field()) - &x;
            Ok(r.contains(&x).map_err(err)? && !r.is_unit(&x) && !r.is_unit(&one_minus))
        }
        "module" => {
            arity(&f, 4)?;
            let r = ring(f[0])?;
            let cert = ModuleCertificate {
                target: elem(r.field(), f[1])?,
                generators: tuple(r.field(), f[2])?,
                coefficients: tuple(r.field(), f[3])?,
            };
            cert.verify(&r).map_err(err)
        }
        "nonmodule" => {
            arity(&f, 3)?;
            let r = ring(f[0])?;
            let x = elem(r.field(), f[1])?;
            let gens = tuple(r.field(), f[2])?;
            Ok(!module_membership(&x, &gens, &r).map_err(err)?.is_member())
        }
        "independent" => {
            arity(&f, 2)?;
            let r = ring(f[0])?;
            independent(&tuple(r.field(), f[1])?, &r).map_err(err)
        }
        "integral" => {
            arity(&f, 4)?;
            let r = ring(f[0])?;
            let field = r.field();
            let (x, s, p) = (elem(field, f[1])?, elem(field, f[2])?, elem(field, f[3])?);
            let zero = &(&(&x * &x) - &(&s * &x)) + &p;
            Ok(zero.is_zero() && r.contains(&s).map_err(err)? && r.contains(&p).map_err(err)?)
        }
        "embeds" => {
            arity(&f, 3)?;
            let (a, b) = (ring(f[0])?, ring(f[2])?);
            let c = elem(b.field(), f[1])?;
            Ok(!c.is_zero() && scaled_inclusion(&a, &c, &b).map_err(err)?)
        }
        "escape" => {
            arity(&f, 4)?;
            let (a, b) = (ring(f[0])?, ring(f[2])?);
            let c = elem(a.field(), f[1])?;
            let e = elem(a.field(), f[3])?;
            Ok(a.contains(&e).map_err(err)? && !b.contains(&(&c * &e)).map_err(err)?)
        }
        "fraction" => {
            arity(&f, 4)?;
            let r = ring(f[0])?;
            let field = r.field();
            let (x, a, b) = (elem(field, f[1])?, elem(field, f[2])?, elem(field, f[3])?);
            Ok(!b.is_zero()
                && r.contains(&a).map_err(err)?
                && r.contains(&b).map_err(err)?
                && a.checked_div(&b).map_err(err)? == x)
        }
        "reslide" => {
            arity(&f, 3)?;
            let r = ring(f[0])?;
            let a = elem(r.field(), f[1])?;
            let y = tuple(r.field(), f[2])?;
            re_slide_verify(&y, &a, &r, &r.valuations()).map_err(err)
        }
        "branch" => {
            arity(&f, 3)?;
            let v = valuation(f[0])?;
            let x = elem(v.field(), f[1])?;
            let cert = LocalityCertificate { valuation: v };
            let want = match f[2] {
                "inverse" => LocalBranch::Inverse,
                "complement" => LocalBranch::InverseOfComplement,
                other => return Err(format!("unknown branch `{other}`")),
            };
            Ok(cert.branch(&x).map_err(err)? == Some(want))
        }
        "escapes" => {
            // x in B, neither 1/x nor 1/(1-x) in e*B
            arity(&f, 3)?;
            let b = ring(f[0])?;
            let field = b.field();
            let (e, x) = (elem(field, f[1])?, elem(field, f[2])?);
            if e.is_zero() {
                return Ok(false);
            }
            let outside = |y: Option<FieldElem>| -> Result<bool, String> {
                match y {
                    None => Ok(true),
                    Some(y) => Ok(!b.contains(&y.checked_div(&e).map_err(err)?).map_err(err)?),
                }
            };
            let one_minus = &FieldElem::one(field) - &x;
            Ok(b.contains(&x).map_err(err)? && outside(x.inv().ok())? && outside(one_minus.inv().ok())?)
        }
        "disjoint" => {
            // a + pi*O and b + pi*O do not meet
            arity(&f, 3)?;
            let v = valuation(f[0])?;
            let (a, b) = (elem(v.field(), f[1])?, elem(v.field(), f[2])?);
            Ok(v.val(&(&a - &b)).map_err(err)? < Value::Finite(1))
        }
        "refine" | "coarsen" | "density" => {
            arity(&f, 5)?;
            let tau = topo(f[0])?;
            let parts = input::topologies(f[1]).map_err(|e| e.message)?;
            let field = tau.field();
            let inst = match kind {
                "refine" => SumInstance::Refine {
                    c: elem(field, f[2])?,
                    part_scales: tuple(field, f[3])?,
                    sample: elem(field, f[4])?,
                },
                "coarsen" => SumInstance::Coarsen {
                    part_scales: tuple(field, f[2])?,
                    c: elem(field, f[3])?,
                    sample: elem(field, f[4])?,
                },
                _ => SumInstance::Density {
                    centers: tuple(field, f[2])?,
                    radii: input::integers(f[3]).map_err(|e| e.message)?,
                    point: elem(field, f[4])?,
                },
            };
            inst.verify(&tau, &parts).map_err(err)
        }
        "verdict" => {
            arity(&f, 4)?;
            let m = model(f[0])?;
            let sentence = locsent::parse(f[1]).map_err(err)?;
            let b = bounds(f[2])?;
            let want = match f[3] {
                "holds" => Outcome::Holds,
                "fails" => Outcome::Fails,
                "unknown" => Outcome::Unknown,
                other => return Err(format!("unknown outcome `{other}`")),
            };
            let v = locsent::evaluate(&sentence, &m, &b).map_err(err)?;
            Ok(v.outcome == want && locsent::audit(&sentence, &m, &b, &v).map_err(err)?)
        }
        "closure-member" => {
            arity(&f, 2)?;
            let r = ring(f[0])?;
            let x = elem(r.field(), f[1])?;
            r.closure().contains(&x).map_err(err)
        }
        other => Err(format!("unknown witness kind `{other}`")),
    }
}

/// Audits every witness line of a report. Returns the number checked and
/// the lines that failed, with the reason.
pub fn audit_text(text: &str) -> (usize, Vec<(String, String)>) {
    let mut checked = 0;
    let mut failed = Vec::new();
    for line in text.lines().filter(|l| l.starts_with(WITNESS_PREFIX)) {
        checked += 1;
        match check_line(line) {
            Ok(true) => {}
            Ok(false) => failed.push((line.to_string(), "claim does not hold".into())),
            Err(e) => failed.push((line.to_string(), e)),
        }
    }
    (checked, failed)
}
