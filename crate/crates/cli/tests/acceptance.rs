//! Acceptance run: one pass/fail line per criterion. Exits nonzero if any fails.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::Rng;

use multival_core::approx::{approximate, ValueTarget};
use multival_core::field::{FieldElem, FieldId};
use multival_core::locsent::{self, audit, evaluate, Model, Outcome, SearchBounds};
use multival_core::rings::{
    co_embeddable, embeddability_witness, independent, integrality_witness, is_local_ring, module_membership, Embedding,
    Membership, RingSpec,
};
use multival_core::sample::{distinct, int_in, nonzero_element, trial_rng};
use multival_core::scramble::{discrepancy, is_scrambled, scramble, scramble_step};
use multival_core::topology::{
    associativity_check, density_witness, independent_sum_check, is_local_topology, TopologyLocality, TopologySpec,
};
use multival_core::valuation::{Valuation, Value};

const QI: FieldId = FieldId::GaussianRationals;
const Q: FieldId = FieldId::Rationals;
const LIMIT: Duration = Duration::from_secs(10);

struct Check {
    ok: bool,
    detail: String,
    transcript: String,
}

impl Check {
    fn new() -> Self {
        Check {
            ok: true,
            detail: String::new(),
            transcript: String::new(),
        }
    }

    fn require(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond && self.ok {
            self.ok = false;
            self.detail = format!("first failure: {}", what());
        }
    }

    fn log(&mut self, line: impl std::fmt::Display) {
        writeln!(self.transcript, "{line}").unwrap();
    }

    fn summary(mut self, s: String) -> Self {
        if self.ok {
            self.detail = s;
        }
        self
    }
}

fn pool(field: FieldId) -> Vec<Valuation> {
    [2, 3, 5, 7, 11, 13]
        .into_iter()
        .flat_map(|p| Valuation::over_prime(field, p).unwrap())
        .collect()
}

fn field_of(t: u64) -> FieldId {
    if t % 2 == 0 {
        Q
    } else {
        QI
    }
}

fn random_vals<R: Rng>(rng: &mut R, field: FieldId) -> Vec<Valuation> {
    let m = rng.gen_range(1..=4);
    distinct(rng, &pool(field), m)
}

fn tuple_text(x: &[FieldElem]) -> String {
    x.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

fn timed(c: &mut Check, start: Instant) -> f64 {
    let e = start.elapsed();
    c.require(e < LIMIT, || format!("took {:.2} s", e.as_secs_f64()));
    e.as_secs_f64()
}

fn scrambling() -> Check {
    let mut c = Check::new();
    let start = Instant::now();
    let mut steps = 0;
    for t in 0..1000 {
        let mut rng = trial_rng(1, t);
        let field = field_of(t);
        let vals = random_vals(&mut rng, field);
        let n = rng.gen_range(1..=4);
        let x: Vec<FieldElem> = (0..n).map(|_| nonzero_element(&mut rng, field, 10_000)).collect();
        let trace = match scramble(&x, &vals) {
            Ok(tr) => tr,
            Err(e) => {
                c.require(false, || format!("tuple {t}: {e}"));
                continue;
            }
        };
        let mut last = discrepancy(&x, &vals).unwrap();
        c.require(trace.initial_discrepancy == last, || format!("tuple {t}: initial discrepancy"));
        for s in &trace.steps {
            c.require(s.discrepancy_after < last, || format!("tuple {t}: discrepancy did not drop"));
            last = s.discrepancy_after;
        }
        c.require(last == 0, || format!("tuple {t}: ended at discrepancy {last}"));
        c.require(trace.steps.len() <= n * vals.len(), || {
            format!("tuple {t}: {} steps for n={n}, m={}", trace.steps.len(), vals.len())
        });
        c.require(is_scrambled(&trace.result, &vals).unwrap(), || format!("tuple {t}: output not scrambled"));
        c.require(trace.matrix.apply(&x) == trace.result, || format!("tuple {t}: matrix * input != output"));
        c.require(trace.matrix.has_integer_entries() && trace.matrix.is_invertible(), || {
            format!("tuple {t}: matrix not in GL_n(Z)")
        });
        c.require(trace.verify(&vals).unwrap(), || format!("tuple {t}: trace does not re-verify"));
        steps += trace.steps.len();
        c.log(format_args!("{t}: {} steps -> {}", trace.steps.len(), tuple_text(&trace.result)));
    }
    let secs = timed(&mut c, start);
    c.summary(format!("1000 tuples over Q and Q(i), {steps} steps in total, {secs:.2} s"))
}

fn step_equality() -> Check {
    let mut c = Check::new();
    for t in 0..1000 {
        let mut rng = trial_rng(2, t);
        let field = field_of(t);
        let vals = random_vals(&mut rng, field);
        let z = nonzero_element(&mut rng, field, 10_000);
        let w = nonzero_element(&mut rng, field, 10_000);
        let k = scramble_step(&z, &w, &vals).unwrap();
        let kw = &FieldElem::from_int(field, k.clone()) * &w;
        let y = &z - &kw;
        for v in &vals {
            let want = v.val(&z).unwrap().min(v.val(&w).unwrap());
            c.require(v.val(&y).unwrap() == want, || format!("pair {t}: ({z}, {w}) at {v} with c = {k}"));
        }
        c.log(format_args!("{t}: {k}"));
    }
    c.summary("1000 pairs, 0 failures".into())
}

fn approximation() -> Check {
    let mut c = Check::new();
    let start = Instant::now();
    for t in 0..1000 {
        let mut rng = trial_rng(3, t);
        let field = field_of(t);
        let vals = random_vals(&mut rng, field);
        let targets: Vec<ValueTarget> = vals
            .into_iter()
            .map(|v| {
                let n = int_in(&mut rng, 3);
                match rng.gen_range(0..4) {
                    0 => ValueTarget::exact(v, n),
                    1 => ValueTarget::at_least(v, n),
                    2 => ValueTarget::greater_than(v, n),
                    _ => ValueTarget::congruence(v, nonzero_element(&mut rng, field, 100), n),
                }
            })
            .collect();
        match approximate(&targets) {
            Ok(x) => {
                for tg in &targets {
                    c.require(tg.is_satisfied_by(&x).unwrap(), || format!("system {t}: {x} misses {tg}"));
                }
                c.log(format_args!("{t}: {x}"));
            }
            Err(e) => c.require(false, || format!("system {t}: {e}")),
        }
    }
    let secs = timed(&mut c, start);
    c.summary(format!("1000 systems, 0 failures, {secs:.2} s"))
}

/// `(a + b i) / d` with `5` not dividing `d`: integral at both primes above 5.
fn closure_element<R: Rng>(rng: &mut R) -> FieldElem {
    let d = loop {
        let d = rng.gen_range(1..=60);
        if d % 5 != 0 {
            break d;
        }
    };
    let a = FieldElem::from_ratio(QI, int_in(rng, 200), d).unwrap();
    let b = FieldElem::from_ratio(QI, int_in(rng, 200), d).unwrap();
    &a + &(&b * &FieldElem::i())
}

fn ww_suite() -> Check {
    let mut c = Check::new();
    let start = Instant::now();
    let ww = RingSpec::ww();
    let closure = ww.closure();
    let (one, five) = (FieldElem::one(QI), FieldElem::from_int(QI, 5));

    let lr = is_local_ring(&ww).unwrap();
    c.require(lr.local && lr.verify(&ww).unwrap(), || "ring locality certificate".into());

    let tau = TopologySpec::new(ww.clone());
    match is_local_topology(&tau).unwrap() {
        TopologyLocality::Local(_) => c.require(false, || "topology reported local".into()),
        TopologyLocality::NonLocal(w) => {
            c.require(w.bounded_is_bounded().unwrap(), || "bounded set is not bounded".into());
            let u = tau.uniformizer();
            for k in 1..=4 {
                for e in [u.pow(-k).unwrap(), u.pow(k).unwrap()] {
                    let x = w.escape(&e).unwrap();
                    c.require(w.escapes(&e, &x).unwrap(), || format!("no escape for e = {e}"));
                    c.log(format_args!("escape {e}: {x}"));
                }
            }
        }
    }

    c.require(embeddability_witness(&ww, &closure).unwrap() == Embedding::Embeds(one.clone()), || {
        "ring into closure scale".into()
    });
    c.require(embeddability_witness(&closure, &ww).unwrap() == Embedding::Embeds(five.clone()), || {
        "closure into ring scale".into()
    });
    c.require(co_embeddable(&ww, &closure).unwrap(), || "co-embeddability".into());
    for t in 0..500 {
        let mut rng = trial_rng(4, t);
        let z = closure_element(&mut rng);
        c.require(ww.contains(&(&five * &z)).unwrap(), || format!("5 * ({z}) not in the ring"));
        let q = FieldElem::from_ratio(QI, int_in(&mut rng, 200), 7).unwrap();
        let x = &q + &(&five * &closure_element(&mut rng));
        c.require(ww.contains(&x).unwrap() && closure.contains(&x).unwrap(), || format!("{x} escapes the closure"));
    }

    c.require(independent(&[one.clone(), FieldElem::i()], &ww).unwrap(), || "(1, i) dependent".into());

    for t in 0..200 {
        let mut rng = trial_rng(5, t);
        let z = closure_element(&mut rng);
        let (s, p) = integrality_witness(&z, &ww).unwrap();
        let root = &(&(&z * &z) - &(&s * &z)) + &p;
        c.require(root.is_zero() && ww.contains(&s).unwrap() && ww.contains(&p).unwrap(), || {
            format!("integrality witness for {z}")
        });
        c.log(format_args!("integral {z}: t^2 - ({s}) t + {p}"));
    }

    let vals = ww.valuations();
    for t in 0..500 {
        let mut rng = trial_rng(6, t);
        let x = &five * &closure_element(&mut rng);
        let in_ideals = vals.iter().all(|v| v.val(&x).unwrap() >= Value::Finite(1));
        c.require(in_ideals && ww.contains(&x).unwrap(), || format!("{x} in m1 and m2 but not in the ring"));
    }
    let secs = timed(&mut c, start);
    c.summary(format!(
        "local ring, non-local topology with escapes for k = 1..4, scales (1, 5) on 500 samples, (1, i) independent, 200 integrality witnesses, 500 ideal samples, {secs:.2} s"
    ))
}

fn dichotomy() -> Check {
    let mut c = Check::new();
    let ww = RingSpec::ww();
    let mut t = 0;
    let mut matrices = 0;
    while matrices < 50 {
        let mut rng = trial_rng(7, t);
        t += 1;
        let [a, b, cc, d] = [0; 4].map(|_| int_in(&mut rng, 5));
        if (a * d - b * cc).abs() != 1 {
            continue;
        }
        matrices += 1;
        let ent = |n: i64| FieldElem::from_int(QI, n);
        let y = [&ent(a) + &(&ent(b) * &FieldElem::i()), &ent(cc) + &(&ent(d) * &FieldElem::i())];
        c.require(independent(&y, &ww).unwrap(), || format!("[{a}, {b}; {cc}, {d}] broke independence"));
        c.log(format_args!("[{a}, {b}; {cc}, {d}]"));
    }

    for t in 0..200 {
        let mut rng = trial_rng(8, t);
        let field = field_of(t);
        let vals = random_vals(&mut rng, field);
        let ring = RingSpec::multi_valuation(vals.clone()).unwrap();
        let x = [nonzero_element(&mut rng, field, 1000), nonzero_element(&mut rng, field, 1000)];
        let y = scramble(&x, &vals).unwrap().result;
        for (i, j) in [(0, 1), (1, 0)] {
            match module_membership(&y[i], &[y[j].clone()], &ring).unwrap() {
                Membership::Member(cert) => {
                    c.require(cert.target == y[i] && cert.verify(&ring).unwrap(), || {
                        format!("pair {t}: certificate does not verify")
                    });
                    c.log(format_args!("{t}: {}", tuple_text(&cert.coefficients)));
                }
                Membership::NonMember(why) => c.require(false, || format!("pair {t}: {} not a multiple ({why})", y[i])),
            }
        }
    }
    c.summary("50 GL_2(Z) matrices keep (1, i) independent; 200 scrambled pairs are mutual multiples".into())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

const SEARCH: i64 = 50;

/// Rationals `a/b` in lowest terms with `|a|, b <= SEARCH` lying in `ring`.
fn coefficient_grid(ring: &RingSpec) -> Vec<FieldElem> {
    let mut out = Vec::new();
    for b in 1..=SEARCH {
        for a in -SEARCH..=SEARCH {
            if gcd(a, b) == 1 {
                let r = FieldElem::from_ratio(Q, a, b).unwrap();
                if ring.contains(&r).unwrap() {
                    out.push(r);
                }
            }
        }
    }
    out
}

fn small(r: &FieldElem) -> bool {
    let (n, d) = (r.re().numer().clone(), r.re().denom().clone());
    n.magnitude() <= &SEARCH.unsigned_abs().into() && d.magnitude() <= &SEARCH.unsigned_abs().into()
}

fn brute_force(x: &FieldElem, y: &[FieldElem], ring: &RingSpec) -> Option<Vec<FieldElem>> {
    let last = y.last()?;
    let solve = |rest: &FieldElem| -> Option<FieldElem> {
        let r = rest.checked_div(last).ok()?;
        (small(&r) && ring.contains(&r).unwrap()).then_some(r)
    };
    match y.len() {
        1 => solve(x).map(|r| vec![r]),
        _ => coefficient_grid(ring)
            .into_iter()
            .find_map(|r1| solve(&(x - &(&r1 * &y[0]))).map(|r2| vec![r1, r2])),
    }
}

fn oracle() -> Check {
    let mut c = Check::new();
    let (mut members, mut refuted) = (0, 0);
    let primes: Vec<Valuation> = [2, 3, 5, 7].map(|p| Valuation::rational(p).unwrap()).to_vec();
    for t in 0..200 {
        let mut rng = trial_rng(9, t);
        let m = rng.gen_range(1..=3);
        let ring = RingSpec::multi_valuation(distinct(&mut rng, &primes, m)).unwrap();
        let k = rng.gen_range(1..=2);
        let y: Vec<FieldElem> = (0..k).map(|_| nonzero_element(&mut rng, Q, 12)).collect();
        let x = if rng.gen_bool(0.5) {
            y.iter().fold(FieldElem::zero(Q), |acc, g| &acc + &(&nonzero_element(&mut rng, Q, 6) * g))
        } else {
            nonzero_element(&mut rng, Q, 12)
        };
        match module_membership(&x, &y, &ring).unwrap() {
            Membership::Member(cert) => {
                members += 1;
                c.require(cert.target == x && cert.generators == y && cert.verify(&ring).unwrap(), || {
                    format!("instance {t}: certificate does not verify")
                });
                c.log(format_args!("{t} {ring}: {x} member"));
            }
            Membership::NonMember(why) => {
                refuted += 1;
                if let Some(r) = brute_force(&x, &y, &ring) {
                    c.require(false, || format!("instance {t}: {x} = {} * ({}) but criterion said {why}", tuple_text(&r), tuple_text(&y)));
                }
                c.log(format_args!("{t} {ring}: {x} not a member, {why}"));
            }
        }
    }
    c.summary(format!(
        "200 instances, {members} members with verified certificates, {refuted} refutations unchallenged by a search over |a|, b <= {SEARCH}"
    ))
}

fn rational_mv(ps: &[u64]) -> TopologySpec {
    let vals = ps.iter().map(|&p| Valuation::rational(p).unwrap()).collect();
    TopologySpec::new(RingSpec::multi_valuation(vals).unwrap())
}

fn subsets() -> Vec<Vec<u64>> {
    let ps = [2, 3, 5, 7];
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            out.push(vec![ps[i], ps[j]]);
            for k in j + 1..4 {
                out.push(vec![ps[i], ps[j], ps[k]]);
            }
        }
    }
    out
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).expect("golden file")
}

fn decomposition() -> Check {
    let mut c = Check::new();
    let mut instances = 0;
    for (s, ps) in subsets().into_iter().enumerate() {
        let tau = rational_mv(&ps);
        let parts: Vec<TopologySpec> = ps.iter().map(|&p| rational_mv(&[p])).collect();
        let rep = independent_sum_check(&tau, &parts, 100, 10 + s as u64).unwrap();
        c.require(rep.passed && rep.instances.len() == 300, || format!("{tau}: sum check failed"));
        for inst in &rep.instances {
            c.require(inst.verify(&tau, &parts).unwrap(), || format!("{tau}: {inst:?} does not re-verify"));
        }
        instances += rep.instances.len();
        c.log(format_args!("{tau}: {:?}", rep.instances));
    }
    let assoc = associativity_check(7, 20).unwrap();
    c.require(assoc.passed && assoc.trials.len() == 20, || "associativity".into());
    c.log(format_args!("{:?}", assoc.trials));

    let parts: Vec<TopologySpec> = [2, 3, 5].iter().map(|&p| rational_mv(&[p])).collect();
    let centers: Vec<FieldElem> = (0..3).map(|n| FieldElem::from_int(Q, n)).collect();
    let point = density_witness(&parts, &centers, &[2, 2, 2]).unwrap();
    c.require(point == FieldElem::from_int(Q, 352), || format!("worked instance gave {point}"));
    c.require(golden("demo_decompose.txt").contains("point 352"), || "352 missing from the golden demo output".into());
    c.summary(format!(
        "10 prime sets x 100 trials ({instances} instances re-verified), 20 associativity triples, worked instance 352 in golden output"
    ))
}

fn sentence_agreement() -> Check {
    let mut c = Check::new();
    let f = locsent::parse(locsent::LOCALITY).unwrap();
    let bounds = SearchBounds::default();
    let mut specs: Vec<TopologySpec> = [2, 3, 5, 7].iter().map(|&p| rational_mv(&[p])).collect();
    specs.extend(subsets().iter().map(|ps| rational_mv(ps)));
    specs.push(TopologySpec::new(RingSpec::ww()));
    for tau in &specs {
        let local = is_local_topology(tau).unwrap().is_local();
        let single = tau.ring().valuations().len() == 1;
        let model = Model::single(tau.clone());
        let verdict = evaluate(&f, &model, &bounds).unwrap();
        let want = if local { Outcome::Holds } else { Outcome::Fails };
        c.require(verdict.outcome == want && local == single, || {
            format!("{tau}: sentence {}, topology local {local}", verdict.outcome)
        });
        c.require(audit(&f, &model, &bounds, &verdict).unwrap(), || format!("{tau}: verdict does not re-audit"));
        let path: Vec<String> = verdict.path.iter().map(ToString::to_string).collect();
        c.log(format_args!("{tau}: {} {} [{}]", verdict.outcome, verdict.atoms, path.join(", ")));
    }
    c.summary(format!("{} specs agree, none unknown", specs.len()))
}

fn demo(args: &[&str]) -> multival::Output {
    multival::run(std::iter::once("multival").chain(args.iter().copied()))
}

const DEMOS: [&[&str]; 2] = [&["--audit", "demo", "ww"], &["--audit", "demo", "decompose", "--primes", "2,3,5"]];

fn determinism(first: &[String], suites: &[fn() -> Check], goldens: &[String]) -> Check {
    let mut c = Check::new();
    for (k, args) in DEMOS.iter().enumerate() {
        let (a, b) = (demo(args), demo(args));
        c.require(a == b, || format!("{args:?} differs between runs"));
        c.require(a.code == 0 && a.stdout == goldens[k], || format!("{args:?} differs from its golden file"));
    }
    for (k, suite) in suites.iter().enumerate() {
        c.require(suite().transcript == first[k], || format!("criterion {} transcript differs", k + 1));
    }
    c.summary("demos match their golden files twice over; criteria 1-8 transcripts identical on rerun".into())
}

fn main() {
    let goldens = [golden("demo_ww.txt"), golden("demo_decompose.txt")];
    let suites: [(&str, fn() -> Check); 8] = [
        ("scrambling soundness", scrambling),
        ("scramble step equality", step_equality),
        ("weak approximation", approximation),
        ("glued ring suite", ww_suite),
        ("local versus multi-valuation", dichotomy),
        ("membership oracle agreement", oracle),
        ("independent-sum decomposition", decomposition),
        ("local-sentence agreement", sentence_agreement),
    ];
    let mut failed = 0;
    let mut transcripts = Vec::new();
    let mut report = |n: usize, name: &str, c: &Check| {
        let mark = if c.ok { "PASS" } else { "FAIL" };
        println!("criterion {n} ({name}): {mark}: {}", c.detail);
        if !c.ok {
            failed += 1;
        }
    };
    for (k, (name, suite)) in suites.iter().enumerate() {
        let c = suite();
        report(k + 1, name, &c);
        transcripts.push(c.transcript);
    }
    let fns: Vec<fn() -> Check> = suites.iter().map(|(_, f)| *f).collect();
    let c = determinism(&transcripts, &fns, &goldens);
    report(9, "determinism", &c);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
