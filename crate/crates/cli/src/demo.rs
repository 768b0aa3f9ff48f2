//! Worked examples. Each demo checks that every step came out as expected
//! and exits 0 only if all did.

use multival_core::field::{FieldElem, FieldId};
use multival_core::locsent::{self, Model, Outcome, SearchBounds};
use multival_core::rings::RingSpec;
use multival_core::topology::TopologySpec;
use multival_core::valuation::Valuation;

use crate::commands;
use crate::input::{fail, CliError, CliResult};
use crate::report::{Report, EXIT_REFUTED};

struct Demo {
    out: Report,
    failures: Vec<String>,
}

impl Demo {
    fn new(name: &str) -> Self {
        let mut out = Report::new();
        out.kv("DEMO", name);
        Demo {
            out,
            failures: Vec::new(),
        }
    }

    fn section(&mut self, title: &str) {
        self.out.line("");
        self.out.kv("SECTION", title);
    }

    /// Records `section` and notes a failure when `ok` is false. The exit
    /// code of the section itself is dropped: refutations are expected here.
    fn expect(&mut self, section: Report, ok: bool, what: &str) {
        self.out.lines.extend(section.lines);
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(mut self) -> Report {
        self.out.line("");
        if self.failures.is_empty() {
            self.out.kv("RESULT", "every step verified");
        } else {
            for f in &self.failures {
                self.out.kv("UNEXPECTED", f);
            }
            self.out.escalate(EXIT_REFUTED);
        }
        self.out
    }
}

fn qi(n: i64) -> FieldElem {
    FieldElem::from_int(FieldId::GaussianRationals, n)
}

pub fn ww() -> CliResult<Report> {
    let ring = RingSpec::ww();
    let closure = ring.closure();
    let mut d = Demo::new("ww");
    d.out.kv("RING", &ring);
    d.out.kv("CLOSURE", &closure);

    d.section("the glued ring is local");
    let mut s = Report::new();
    commands::ring_locality(&mut s, &ring)?;
    let ok = s.code == 0;
    d.expect(s, ok, "ring locality");

    d.section("co-embeddable with its closure");
    let mut s = Report::new();
    let there = commands::embedding(&mut s, &ring, &closure)?;
    let back = commands::embedding(&mut s, &closure, &ring)?;
    d.expect(s, there && back, "co-embeddability");

    d.section("(1, i) is independent");
    let mut s = Report::new();
    let ok = commands::independence(&mut s, &ring, &[qi(1), FieldElem::i()])?;
    d.expect(s, ok, "independence of (1, i)");

    d.section("the closure is integral over the ring");
    let mut s = Report::new();
    commands::integral(&mut s, &ring, &FieldElem::i())?;
    commands::integral(&mut s, &ring, &(&qi(2) + &FieldElem::i()))?;
    d.expect(s, true, "integrality");

    d.section("the topology is not local");
    let tau = TopologySpec::new(ring.clone());
    let mut s = Report::new();
    let local = commands::topology_locality(&mut s, &tau, &[])?;
    d.expect(s, !local, "topology non-locality");

    d.section("the locality sentence fails");
    let f = locsent::parse(locsent::LOCALITY).map_err(fail("locality"))?;
    let mut s = Report::new();
    let outcome = commands::evaluation(&mut s, &f, &Model::single(tau), &SearchBounds::default())?;
    d.expect(s, outcome == Outcome::Fails, "locality sentence");

    Ok(d.finish())
}

pub fn decompose(primes: &str, trials: u64, seed: u64) -> CliResult<Report> {
    let ps = crate::input::integers(primes)?;
    if ps.len() < 2 {
        return Err(CliError::usage("--primes: at least two primes"));
    }
    let vals = ps
        .iter()
        .map(|&p| {
            u64::try_from(p)
                .map_err(|_| CliError::usage(format!("--primes: {p} is negative")))
                .and_then(|p| Valuation::rational(p).map_err(fail("--primes")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mv = |vs: &[Valuation]| -> CliResult<TopologySpec> {
        Ok(TopologySpec::new(RingSpec::multi_valuation(vs.to_vec()).map_err(fail("--primes"))?))
    };
    let tau = mv(&vals)?;
    let parts = commands::default_parts(&tau);

    let mut d = Demo::new("decompose");
    d.out.kv("TOPOLOGY", &tau);

    d.section("local components and V-coarsenings");
    let mut s = Report::new();
    commands::components(&mut s, &tau);
    for v in &vals {
        s.kv("V-COARSENING", format!("tau({v})"));
    }
    d.expect(s, true, "components");

    d.section("the topology is not local");
    let mut s = Report::new();
    let local = commands::topology_locality(&mut s, &tau, &[])?;
    d.expect(s, !local, "topology non-locality");

    d.section("independent sum of the V-coarsenings");
    let mut s = Report::new();
    let ok = commands::indep_sum(&mut s, &tau, &parts, trials, seed)?;
    d.expect(s, ok, "independent sum");

    d.section("worked density instance");
    let mut s = Report::new();
    let point = commands::worked_density(&mut s, &tau, &parts, 2)?;
    d.expect(s, !point.is_zero() || ps.len() == 1, "density");

    if vals.len() >= 3 {
        d.section("both pairings of the first three primes");
        let (a, b, c) = (&vals[0..1], &vals[1..2], &vals[2..3]);
        let whole = mv(&vals[0..3])?;
        let mut s = Report::new();
        let mut ok = true;
        let ab = mv(&[a[0].clone(), b[0].clone()])?;
        let bc = mv(&[b[0].clone(), c[0].clone()])?;
        for (sum, split) in [
            (&ab, vec![mv(a)?, mv(b)?]),
            (&whole, vec![ab.clone(), mv(c)?]),
            (&bc, vec![mv(b)?, mv(c)?]),
            (&whole, vec![mv(a)?, bc.clone()]),
        ] {
            ok &= commands::indep_sum(&mut s, sum, &split, 1, seed)?;
        }
        d.expect(s, ok, "associativity");
    }

    d.section("the locality sentence fails");
    let f = locsent::parse(locsent::LOCALITY).map_err(fail("locality"))?;
    let mut s = Report::new();
    let outcome = commands::evaluation(&mut s, &f, &Model::single(tau), &SearchBounds::default())?;
    d.expect(s, outcome == Outcome::Fails, "locality sentence");

    Ok(d.finish())
}
