use multival_core::approx::{approximate, ValueTarget};
use multival_core::field::{FieldElem, FieldId};
use multival_core::locsent::{self, check_polarity, Model, Outcome, SearchBounds};
use multival_core::rings::{
    co_embeddable, embeddability_witness, independent, integrality_witness, is_local_ring, key_localizations,
    module_generator, module_membership, re_slide, Embedding, LocalityWitness, Membership, RingSpec,
};
use multival_core::scramble::scramble as run_scramble;
use multival_core::topology::{
    independent_sum_check, is_local_topology, local_components, refute_self_sum, associativity_check,
    density_witness, SumInstance, TopologyLocality, TopologySpec,
};

use crate::input::{self, fail, CliError, CliResult};
use crate::report::{self, Report, EXIT_REFUTED, EXIT_UNKNOWN};
use crate::{ElementArgs, EvalArgs, LocsentOp, RingOp, TopoOp};

fn elements(a: &ElementArgs) -> CliResult<(FieldId, Vec<multival_core::valuation::Valuation>, Vec<FieldElem>)> {
    let vals = input::valuations(&a.vals)?;
    let field = input::resolve_field(a.field.as_deref(), &vals)?;
    let xs = a
        .elements
        .iter()
        .map(|s| input::element(field, s))
        .collect::<CliResult<Vec<_>>>()?;
    Ok((field, vals, xs))
}

pub fn val(a: &ElementArgs) -> CliResult<Report> {
    let (field, vals, xs) = elements(a)?;
    let mut r = Report::new();
    r.kv("FIELD", field);
    for x in &xs {
        r.kv("ELEMENT", x);
        for v in &vals {
            let n = v.val(x).map_err(fail("val"))?;
            r.kv(&format!("VAL {v}"), n);
            r.witness("val", &[v.to_string(), x.to_string(), n.to_string()]);
        }
    }
    Ok(r)
}

pub fn residue(a: &ElementArgs) -> CliResult<Report> {
    let (field, vals, xs) = elements(a)?;
    let mut r = Report::new();
    r.kv("FIELD", field);
    for x in &xs {
        r.kv("ELEMENT", x);
        for v in &vals {
            let res = v.residue(x).map_err(fail("residue"))?;
            r.kv(&format!("RESIDUE {v}"), format!("{res} in {}", v.residue_field()));
            r.witness("residue", &[v.to_string(), x.to_string(), res.to_string()]);
        }
    }
    Ok(r)
}

pub fn approx(field: Option<&str>, targets: &[String]) -> CliResult<Report> {
    let targets = targets.iter().map(|t| input::target(t)).collect::<CliResult<Vec<_>>>()?;
    let vals: Vec<_> = targets.iter().map(|t| t.valuation.clone()).collect();
    let field = input::resolve_field(field, &vals)?;
    let x = approximate(&targets).map_err(fail("approx"))?;
    let mut r = Report::new();
    r.kv("FIELD", field);
    for t in &targets {
        r.kv("TARGET", t);
    }
    r.kv("RESULT", &x);
    approx_witnesses(&mut r, &x, &targets);
    Ok(r)
}

fn approx_witnesses(r: &mut Report, x: &FieldElem, targets: &[ValueTarget]) {
    for t in targets {
        r.witness("approx", &[x.to_string(), t.to_string()]);
    }
}

pub fn scramble(field: Option<&str>, vals: &str, tuple: &str) -> CliResult<Report> {
    let vals = input::valuations(vals)?;
    let field = input::resolve_field(field, &vals)?;
    let x = input::tuple(field, tuple)?;
    let trace = run_scramble(&x, &vals).map_err(fail("scramble"))?;
    let mut r = Report::new();
    r.kv("FIELD", field);
    r.kv("VALUATIONS", report::vals(&vals));
    r.kv("INPUT", report::tuple(&x));
    r.kv("DISCREPANCY", trace.initial_discrepancy);
    let mut cur = trace.initial.clone();
    let names = report::vals(&vals);
    for (k, s) in trace.steps.iter().enumerate() {
        let c = FieldElem::from_int(field, s.c.clone());
        let (z, w) = (cur[s.target].clone(), cur[s.source].clone());
        cur[s.target] = &z - &(&c * &w);
        r.kv(
            &format!("STEP {}", k + 1),
            format!(
                "x{} -= ({})*x{}; discrepancy {}",
                s.target + 1,
                s.c,
                s.source + 1,
                s.discrepancy_after
            ),
        );
        r.witness("step", &[names.clone(), z.to_string(), w.to_string(), s.c.to_string()]);
    }
    r.kv("RESULT", report::tuple(&trace.result));
    r.kv("MATRIX", &trace.matrix);
    let ok = trace.verify(&vals).map_err(fail("scramble"))?;
    r.kv("VERIFIED", ok);
    r.witness(
        "scramble",
        &[names, report::tuple(&x), trace.matrix.to_string(), report::tuple(&trace.result)],
    );
    if !ok {
        r.escalate(EXIT_REFUTED);
    }
    Ok(r)
}

fn verdict(r: &mut Report, key: &str, yes: bool) {
    r.kv(key, yes);
    if !yes {
        r.escalate(EXIT_REFUTED);
    }
}

pub fn ring_locality(r: &mut Report, ring: &RingSpec) -> CliResult<()> {
    let v = is_local_ring(ring).map_err(fail("local?"))?;
    r.kv("LOCAL-RING", v.local);
    match &v.witness {
        LocalityWitness::ValuationRing => {
            r.kv("CERTIFICATE", "valuation ring: x or 1/x lies in it");
            r.witness("local", &[ring.to_string(), "valuation-ring".into()]);
        }
        LocalityWitness::ResidueCaseAnalysis => {
            r.kv(
                "CERTIFICATE",
                "common residue nonzero makes x a unit, otherwise 1-x has residue 1",
            );
            r.witness("local", &[ring.to_string(), "residue-case-analysis".into()]);
        }
        LocalityWitness::NonUnitPair(x) => {
            r.kv("NON-UNIT-PAIR", format!("x = {x}, 1 - x = {}", &FieldElem::one(ring.field()) - x));
            r.witness("nonlocal-pair", &[ring.to_string(), x.to_string()]);
            r.escalate(EXIT_REFUTED);
        }
    }
    Ok(())
}

/// `c * a ⊆ b`, or escaping elements for a few candidate scales.
pub fn embedding(r: &mut Report, a: &RingSpec, b: &RingSpec) -> CliResult<bool> {
    match embeddability_witness(a, b).map_err(fail("embeds"))? {
        Embedding::Embeds(c) => {
            r.kv("EMBEDS", format!("({c})*{a} inside {b}"));
            r.witness("embeds", &[a.to_string(), c.to_string(), b.to_string()]);
            Ok(true)
        }
        Embedding::Refuted(family) => {
            r.kv("EMBEDS", format!("no scaling of {a} lies inside {b}; unbounded at {}", family.valuation));
            let u = family.valuation.uniformizer();
            for k in 0..4 {
                let c = u.pow(k).map_err(fail("embeds"))?;
                let e = family.escape(&c).map_err(fail("embeds"))?;
                r.kv("ESCAPE", format!("c = {c}: {e} in {a} but c*x not in {b}"));
                r.witness("escape", &[a.to_string(), c.to_string(), b.to_string(), e.to_string()]);
            }
            Ok(false)
        }
    }
}

pub fn integral(r: &mut Report, ring: &RingSpec, x: &FieldElem) -> CliResult<()> {
    let (s, p) = integrality_witness(x, ring).map_err(fail("integral-witness"))?;
    r.kv("INTEGRAL", format!("{x} is a root of {}", report::quadratic(&s, &p)));
    r.witness("integral", &[ring.to_string(), x.to_string(), s.to_string(), p.to_string()]);
    Ok(())
}

pub fn independence(r: &mut Report, ring: &RingSpec, y: &[FieldElem]) -> CliResult<bool> {
    let yes = independent(y, ring).map_err(fail("independent"))?;
    r.kv("INDEPENDENT", format!("({}) {yes}", report::tuple(y)));
    if yes {
        r.witness("independent", &[ring.to_string(), report::tuple(y)]);
        return Ok(true);
    }
    for i in 0..y.len() {
        let others: Vec<FieldElem> = y.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, e)| e.clone()).collect();
        if let Membership::Member(cert) = module_membership(&y[i], &others, ring).map_err(fail("independent"))? {
            r.kv("DEPENDENT", format!("entry {} lies in the span of the others", i + 1));
            r.witness(
                "module",
                &[
                    ring.to_string(),
                    y[i].to_string(),
                    report::tuple(&others),
                    report::tuple(&cert.coefficients),
                ],
            );
            break;
        }
    }
    Ok(false)
}

pub fn ring(spec: &str, op: &RingOp) -> CliResult<Report> {
    let ring = input::ring(spec)?;
    let field = ring.field();
    let el = |s: &str| input::element(field, s);
    let mut r = Report::new();
    r.kv("RING", &ring);
    match op {
        RingOp::Contains { x } => {
            let x = el(x)?;
            let yes = ring.contains(&x).map_err(fail("contains"))?;
            verdict(&mut r, "MEMBER", yes);
            r.witness(if yes { "member" } else { "nonmember" }, &[ring.to_string(), x.to_string()]);
        }
        RingOp::Unit { x } => {
            let x = el(x)?;
            let yes = ring.is_unit(&x);
            verdict(&mut r, "UNIT", yes);
            r.witness(if yes { "unit" } else { "nonunit" }, &[ring.to_string(), x.to_string()]);
        }
        RingOp::Jacobson { x } => {
            let x = el(x)?;
            let yes = ring.in_jacobson(&x).map_err(fail("jacobson"))?;
            verdict(&mut r, "JACOBSON", yes);
            r.witness(if yes { "jacobson" } else { "nonjacobson" }, &[ring.to_string(), x.to_string()]);
        }
        RingOp::Local => ring_locality(&mut r, &ring)?,
        RingOp::Member { x, gens } => {
            let x = el(x)?;
            let gens = input::tuple(field, gens)?;
            match module_membership(&x, &gens, &ring).map_err(fail("member"))? {
                Membership::Member(cert) => {
                    r.kv("MEMBER", true);
                    r.kv("COEFFICIENTS", report::tuple(&cert.coefficients));
                    r.witness(
                        "module",
                        &[ring.to_string(), x.to_string(), report::tuple(&gens), report::tuple(&cert.coefficients)],
                    );
                }
                Membership::NonMember(why) => {
                    verdict(&mut r, "MEMBER", false);
                    r.kv("REASON", why);
                    r.witness("nonmodule", &[ring.to_string(), x.to_string(), report::tuple(&gens)]);
                }
            }
        }
        RingOp::Generator { gens } => {
            let gens = input::tuple(field, gens)?;
            let (g, cert) = module_generator(&gens, &ring).map_err(fail("generator"))?;
            r.kv("GENERATOR", &g);
            r.witness(
                "module",
                &[ring.to_string(), g.to_string(), report::tuple(&gens), report::tuple(&cert.coefficients)],
            );
            for y in &gens {
                if let Membership::Member(c) = module_membership(y, std::slice::from_ref(&g), &ring).map_err(fail("generator"))? {
                    r.witness(
                        "module",
                        &[ring.to_string(), y.to_string(), g.to_string(), report::tuple(&c.coefficients)],
                    );
                } else {
                    return Err(CliError::usage("generator: construction failed"));
                }
            }
        }
        RingOp::Independent { tuple } => {
            let y = input::tuple(field, tuple)?;
            if !independence(&mut r, &ring, &y)? {
                r.escalate(EXIT_REFUTED);
            }
        }
        RingOp::IntegralWitness { x } => integral(&mut r, &ring, &el(x)?)?,
        RingOp::Localizations => {
            for l in key_localizations(&ring) {
                r.kv("LOCALIZATION", l);
            }
        }
        RingOp::Closure => r.kv("CLOSURE", ring.closure()),
        RingOp::Embeds { into } => {
            let b = input::ring(into)?;
            if !embedding(&mut r, &ring, &b)? {
                r.escalate(EXIT_REFUTED);
            }
        }
        RingOp::CoEmbeddable { other } => {
            let b = input::ring(other)?;
            let there = embedding(&mut r, &ring, &b)?;
            let back = embedding(&mut r, &b, &ring)?;
            debug_assert_eq!(there && back, co_embeddable(&ring, &b).unwrap_or(false));
            verdict(&mut r, "CO-EMBEDDABLE", there && back);
        }
        RingOp::Fraction { x } => {
            let x = el(x)?;
            let (a, b) = ring.fraction_witness(&x).map_err(fail("fraction"))?;
            r.kv("FRACTION", format!("{x} = ({a}) / ({b})"));
            r.witness("fraction", &[ring.to_string(), x.to_string(), a.to_string(), b.to_string()]);
        }
        RingOp::ReSlide { a, n } => {
            let a = el(a)?;
            let y = re_slide(&a, &ring, *n).map_err(fail("re-slide"))?;
            r.kv("TUPLE", report::tuple(&y));
            r.witness("reslide", &[ring.to_string(), a.to_string(), report::tuple(&y)]);
        }
    }
    Ok(r)
}

/// Locality of the topology, with the certificate or an escaping family.
pub fn topology_locality(r: &mut Report, tau: &TopologySpec, samples: &[FieldElem]) -> CliResult<bool> {
    match is_local_topology(tau).map_err(fail("local?"))? {
        TopologyLocality::Local(cert) => {
            r.kv("LOCAL-TOPOLOGY", true);
            r.kv("CERTIFICATE", format!("{}: 1/x or 1/(1-x) lies in the valuation ring", cert.valuation));
            for x in samples {
                let branch = match cert.branch(x).map_err(fail("local?"))? {
                    Some(multival_core::topology::LocalBranch::Inverse) => "inverse",
                    Some(multival_core::topology::LocalBranch::InverseOfComplement) => "complement",
                    None => return Err(CliError::usage("local?: certificate failed")),
                };
                r.witness("branch", &[cert.valuation.to_string(), x.to_string(), branch.into()]);
            }
            Ok(true)
        }
        TopologyLocality::NonLocal(w) => {
            r.kv("LOCAL-TOPOLOGY", false);
            r.kv("BOUNDED-SET", format!("B = {}", w.bounded));
            r.witness("embeds", &[w.bounded.to_string(), w.embed_scale.to_string(), w.ring.to_string()]);
            let u = w.bounded.valuations().iter().fold(FieldElem::one(tau.field()), |acc, v| &acc * &v.uniformizer());
            for k in 1..=4 {
                let e = u.pow(-k).map_err(fail("local?"))?;
                let x = w.escape(&e).map_err(fail("local?"))?;
                r.kv(
                    &format!("ESCAPE k={k}"),
                    format!("bound ({e})*B misses 1/x and 1/(1-x) for x = {x}"),
                );
                r.witness("escapes", &[w.bounded.to_string(), e.to_string(), x.to_string()]);
            }
            r.escalate(EXIT_REFUTED);
            Ok(false)
        }
    }
}

fn instance_witness(r: &mut Report, tau: &TopologySpec, parts: &[TopologySpec], inst: &SumInstance) {
    let t = tau.ring().to_string();
    let ps = report::list(&parts.iter().map(|p| p.ring().to_string()).collect::<Vec<_>>());
    match inst {
        SumInstance::Refine { c, part_scales, sample } => r.witness(
            "refine",
            &[t, ps, c.to_string(), report::tuple(part_scales), sample.to_string()],
        ),
        SumInstance::Coarsen { part_scales, c, sample } => r.witness(
            "coarsen",
            &[t, ps, report::tuple(part_scales), c.to_string(), sample.to_string()],
        ),
        SumInstance::Density { centers, radii, point } => r.witness(
            "density",
            &[t, ps, report::tuple(centers), report::list(radii), point.to_string()],
        ),
    }
}

pub fn indep_sum(r: &mut Report, tau: &TopologySpec, parts: &[TopologySpec], trials: u64, seed: u64) -> CliResult<bool> {
    let rep = independent_sum_check(tau, parts, trials, seed).map_err(fail("indep-sum"))?;
    r.kv("SUM", tau);
    for p in parts {
        r.kv("PART", p);
    }
    r.kv("TRIALS", format!("{trials} (seed {seed})"));
    for inst in &rep.instances {
        instance_witness(r, tau, parts, inst);
    }
    r.kv("INDEPENDENT-SUM", if rep.passed { "all instances verified" } else { "FAILED" });
    if !rep.passed {
        r.escalate(EXIT_REFUTED);
    }
    Ok(rep.passed)
}

/// The density instance with centers `0, 1, ..., n-1` and radius `radius` at every part.
pub fn worked_density(r: &mut Report, tau: &TopologySpec, parts: &[TopologySpec], radius: i64) -> CliResult<FieldElem> {
    let field = tau.field();
    let centers: Vec<FieldElem> = (0..parts.len() as i64).map(|k| FieldElem::from_int(field, k)).collect();
    let radii = vec![radius; parts.len()];
    let point = density_witness(parts, &centers, &radii).map_err(fail("density"))?;
    r.kv(
        "DENSITY",
        format!("centers ({}), radius exponent {radius}: point {point}", report::tuple(&centers)),
    );
    let inst = SumInstance::Density { centers, radii, point: point.clone() };
    instance_witness(r, tau, parts, &inst);
    Ok(point)
}

pub fn components(r: &mut Report, tau: &TopologySpec) {
    let c = local_components(tau);
    for (t, vs) in &c.pairs {
        r.kv("COMPONENT", format!("{t} refines {}", report::vals(vs)));
    }
    if c.local_ring_nonlocal_topology {
        r.kv("NOTE", "the ring is local but its topology is not");
    }
}

/// Parts for an independent-sum check: one valuation ring per valuation.
pub fn default_parts(tau: &TopologySpec) -> Vec<TopologySpec> {
    tau.ring()
        .valuations()
        .into_iter()
        .map(|v| TopologySpec::new(RingSpec::valuation_ring(v)))
        .collect()
}

pub fn topo(spec: &str, op: &TopoOp, trials: u64, seed: u64) -> CliResult<Report> {
    let tau = input::topology(spec)?;
    let mut r = Report::new();
    r.kv("TOPOLOGY", &tau);
    match op {
        TopoOp::Components => components(&mut r, &tau),
        TopoOp::VCoarsenings => {
            for v in tau.ring().valuations() {
                r.kv("V-COARSENING", format!("tau({v})"));
            }
        }
        TopoOp::Local => {
            let field = tau.field();
            let samples: Vec<FieldElem> = [0, 1, -1, 2, 5, 10, 25]
                .into_iter()
                .map(|n| FieldElem::from_int(field, n))
                .chain([FieldElem::from_ratio(field, 1, 5).expect("nonzero")])
                .collect();
            topology_locality(&mut r, &tau, &samples)?;
        }
        TopoOp::IndepSum { parts } => {
            let parts = match parts {
                Some(p) => input::topologies(p)?,
                None => default_parts(&tau),
            };
            if parts.len() == 1 && parts[0].ring().valuations() == tau.ring().valuations() {
                // a single valuation topology does not split further
                match refute_self_sum(&tau).map_err(fail("indep-sum"))? {
                    Some((a, b)) => {
                        let v = &tau.ring().valuations()[0];
                        r.kv("DECOMPOSABLE", false);
                        r.kv("DISJOINT", format!("{a} + pi*O and {b} + pi*O do not meet, so tau is not the independent sum of two copies of itself"));
                        r.witness("disjoint", &[v.to_string(), a.to_string(), b.to_string()]);
                        r.escalate(EXIT_REFUTED);
                    }
                    None => return Err(CliError::usage("indep-sum: one part only")),
                }
            } else {
                indep_sum(&mut r, &tau, &parts, trials, seed)?;
            }
        }
        TopoOp::Coarser { other } => {
            let other = input::topology(other)?;
            let yes = embedding(&mut r, other.ring(), tau.ring())?;
            verdict(&mut r, "COARSER", yes);
        }
        TopoOp::Associativity => {
            let rep = associativity_check(seed, trials).map_err(fail("associativity"))?;
            for t in &rep.trials {
                let [p, q, s] = t.primes;
                r.kv(
                    "TRIAL",
                    format!(
                        "({p}, {q}, {s}): direct {}, (({p}, {q}), {s}) {}, ({p}, ({q}, {s})) {}",
                        t.direct, t.left, t.right
                    ),
                );
            }
            verdict(&mut r, "ASSOCIATIVE", rep.passed);
        }
    }
    Ok(r)
}

fn read_source(file: &str) -> CliResult<String> {
    if file == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| CliError::usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(file).map_err(|e| CliError::usage(format!("{file}: {e}")))
}

fn builtin(name: &str) -> CliResult<&'static str> {
    match name {
        "locality" => Ok(locsent::LOCALITY),
        "generation" => Ok(locsent::GENERATION),
        "generation-converse" => Ok(locsent::GENERATION_CONVERSE),
        other => Err(CliError::usage(format!(
            "unknown built-in sentence `{other}` (locality, generation, generation-converse)"
        ))),
    }
}

fn parse_sentence(origin: &str, text: &str) -> CliResult<locsent::Formula> {
    locsent::parse(text).map_err(|e| CliError::usage(format!("{origin}:{e}")))
}

pub fn model(specs: &[String]) -> CliResult<Model> {
    let mut m = Model { topologies: Vec::new() };
    for s in specs {
        let (name, spec) = match s.split_once('=') {
            Some((n, sp)) => (n.trim(), sp.trim()),
            None => (locsent::DEFAULT_TOPOLOGY, s.as_str()),
        };
        m = m.with(name, input::topology(spec)?);
    }
    Ok(m)
}

pub fn model_text(m: &Model) -> String {
    m.topologies
        .iter()
        .map(|(n, t)| format!("{n}={}", t.ring()))
        .collect::<Vec<_>>()
        .join("; ")
}

pub fn bounds_text(b: &SearchBounds) -> String {
    let mut s = format!(
        "k={},height={},samples={},seed={},budget={}",
        b.scale_bound, b.height, b.samples, b.seed, b.atom_budget
    );
    if !b.seeds.is_empty() {
        s.push_str(&format!(",seeds={}", report::tuple(&b.seeds)));
    }
    s
}

/// Evaluates a sentence and reports the verdict with its deciding branch.
pub fn evaluation(r: &mut Report, f: &locsent::Formula, m: &Model, b: &SearchBounds) -> CliResult<Outcome> {
    let v = locsent::evaluate(f, m, b).map_err(fail("eval"))?;
    r.kv("SENTENCE", f);
    for (n, t) in &m.topologies {
        r.kv("MODEL", format!("{n} = {t}"));
    }
    r.kv("BOUNDS", bounds_text(b));
    r.kv("DOMAIN", format!("{} field values, {} neighbourhoods", v.field_domain, v.nbhd_domain));
    for s in &v.path {
        r.kv("STEP", s);
    }
    r.kv("ATOMS", v.atoms);
    r.kv("VERDICT", v.outcome);
    r.witness(
        "verdict",
        &[model_text(m), f.to_string(), bounds_text(b), v.outcome.to_string()],
    );
    match v.outcome {
        Outcome::Holds => {}
        Outcome::Fails => r.escalate(EXIT_REFUTED),
        Outcome::Unknown => r.escalate(EXIT_UNKNOWN),
    }
    Ok(v.outcome)
}

pub fn locsent(op: &LocsentOp, seed: u64) -> CliResult<Report> {
    let mut r = Report::new();
    match op {
        LocsentOp::Builtin { name } => r.line(builtin(name)?),
        LocsentOp::Check { file } => {
            let f = parse_sentence(file, &read_source(file)?)?;
            r.kv("SENTENCE", &f);
            let free = f.free_vars();
            r.kv("FREE", if free.is_empty() { "none".to_string() } else { free.join(", ") });
            let violations = check_polarity(&f);
            if violations.is_empty() {
                r.kv("POLARITY", "ok");
            } else {
                for v in &violations {
                    r.kv("VIOLATION", v);
                }
                r.escalate(EXIT_REFUTED);
            }
            if !free.is_empty() {
                r.escalate(EXIT_REFUTED);
            }
        }
        LocsentOp::Eval(a) => eval(&mut r, a, seed)?,
    }
    Ok(r)
}

fn eval(r: &mut Report, a: &EvalArgs, seed: u64) -> CliResult<()> {
    let (origin, text) = match (&a.file, &a.builtin) {
        (_, Some(name)) => (format!("builtin {name}"), builtin(name)?.to_string()),
        (Some(file), None) => (file.clone(), read_source(file)?),
        (None, None) => return Err(CliError::usage("a sentence file or --builtin is required")),
    };
    let f = parse_sentence(&origin, &text)?;
    let m = model(&a.specs)?;
    let field = m.field().map_err(fail("--spec"))?;
    let seeds = match &a.seed_elements {
        Some(s) => input::tuple(field, s)?,
        None => Vec::new(),
    };
    let b = SearchBounds {
        scale_bound: a.scale_bound,
        height: a.height,
        samples: a.samples,
        seed,
        seeds,
        atom_budget: a.budget,
    };
    if !b.seeds.is_empty() {
        r.kv("SEED-ELEMENTS", report::tuple(&b.seeds));
    }
    evaluation(r, &f, &m, &b)?;
    Ok(())
}

pub fn audit_file(file: &str) -> CliResult<Report> {
    let text = read_source(file)?;
    let (checked, failed) = crate::witness::audit_text(&text);
    let mut r = Report::new();
    for (line, why) in &failed {
        r.kv("FAILED", format!("{why}: {line}"));
    }
    r.kv("AUDIT", format!("{}/{checked} witnesses re-verified", checked - failed.len()));
    if !failed.is_empty() {
        r.escalate(EXIT_REFUTED);
    }
    Ok(r)
}
