use multival_core::approx::{approximate, ValueTarget};
use multival_core::field::{FieldElem, FieldId, GaussianInt};
use multival_core::locsent::{parse, BinOp, Binder, Formula, Nbhd, Quantifier, Term};
use multival_core::rings::{module_membership, Membership, RingSpec};
use multival_core::scramble::{discrepancy, is_scrambled, scramble, scramble_step};
use multival_core::valuation::{Valuation, Value};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn elem(field: FieldId) -> impl Strategy<Value = FieldElem> {
    (-500i64..=500, 1i64..=60, -500i64..=500, 1i64..=60).prop_map(move |(a, b, c, d)| {
        let im = if field == FieldId::Rationals { rat(0, 1) } else { rat(c, d) };
        FieldElem::new(field, rat(a, b), im).unwrap()
    })
}

fn nonzero(field: FieldId) -> impl Strategy<Value = FieldElem> {
    elem(field).prop_filter("nonzero", |x| !x.is_zero())
}

const RATIONAL_PRIMES: [u64; 5] = [2, 3, 5, 7, 13];

fn rational_vals() -> impl Strategy<Value = Vec<Valuation>> {
    proptest::sample::subsequence(RATIONAL_PRIMES.to_vec(), 1..=4)
        .prop_map(|ps| ps.into_iter().map(|p| Valuation::rational(p).unwrap()).collect())
}

fn gaussian_vals() -> impl Strategy<Value = Vec<Valuation>> {
    let pool: Vec<Valuation> = [2u64, 3, 5, 13]
        .into_iter()
        .flat_map(|p| Valuation::over_prime(FieldId::GaussianRationals, p).unwrap())
        .collect();
    proptest::sample::subsequence(pool, 1..=4)
}

fn finite(v: Value) -> i64 {
    v.finite().expect("nonzero element")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn valuation_is_multiplicative_and_ultrametric(
        x in nonzero(FieldId::GaussianRationals),
        y in nonzero(FieldId::GaussianRationals),
        vals in gaussian_vals(),
    ) {
        for v in &vals {
            let (vx, vy) = (finite(v.val(&x).unwrap()), finite(v.val(&y).unwrap()));
            prop_assert_eq!(finite(v.val(&(&x * &y)).unwrap()), vx + vy);
            match v.val(&(&x + &y)).unwrap() {
                Value::Finite(s) => prop_assert!(s >= vx.min(vy)),
                Value::Infinity => prop_assert_eq!(&x, &-&y),
            }
            if vx != vy {
                prop_assert_eq!(finite(v.val(&(&x + &y)).unwrap()), vx.min(vy));
            }
        }
    }

    #[test]
    fn residue_map_is_a_ring_homomorphism_on_the_valuation_ring(
        x in elem(FieldId::GaussianRationals),
        y in elem(FieldId::GaussianRationals),
        vals in gaussian_vals(),
    ) {
        for v in &vals {
            if !v.is_integral_at(&x).unwrap() || !v.is_integral_at(&y).unwrap() {
                continue;
            }
            let (rx, ry) = (v.residue(&x).unwrap(), v.residue(&y).unwrap());
            prop_assert_eq!(v.residue(&(&x + &y)).unwrap(), rx.add(ry));
            prop_assert_eq!(v.residue(&(&x * &y)).unwrap(), rx.mul(ry));
            prop_assert_eq!(rx.is_zero(), finite_or_inf_positive(v.val(&x).unwrap()));
        }
    }

    #[test]
    fn gaussian_division_shrinks_the_norm(
        a in (-10_000i64..=10_000, -10_000i64..=10_000),
        b in (-300i64..=300, -300i64..=300).prop_filter("nonzero", |&(x, y)| x != 0 || y != 0),
    ) {
        let (a, b) = (GaussianInt::new(a.0, a.1), GaussianInt::new(b.0, b.1));
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a.clone());
        prop_assert!(r.norm() < b.norm());
        let (g, s, t) = GaussianInt::ext_gcd(&a, &b);
        prop_assert_eq!(&(&s * &a) + &(&t * &b), g.clone());
        prop_assert!(g.divides(&a) && g.divides(&b));
    }

    #[test]
    fn approximation_meets_every_target(
        vals in rational_vals(),
        exps in proptest::collection::vec(-3i64..=3, 4),
        kinds in proptest::collection::vec(0u8..3, 4),
    ) {
        let targets: Vec<ValueTarget> = vals
            .iter()
            .zip(exps.iter().zip(&kinds))
            .map(|(v, (&n, &k))| match k {
                0 => ValueTarget::exact(v.clone(), n),
                1 => ValueTarget::at_least(v.clone(), n),
                _ => ValueTarget::greater_than(v.clone(), n),
            })
            .collect();
        let x = approximate(&targets).unwrap();
        prop_assert!(!x.is_zero());
        for t in &targets {
            prop_assert!(t.is_satisfied_by(&x).unwrap(), "{} fails {}", x, t);
        }
    }

    #[test]
    fn scramble_step_attains_the_minimum(
        z in nonzero(FieldId::GaussianRationals),
        w in nonzero(FieldId::GaussianRationals),
        vals in gaussian_vals(),
    ) {
        let c = scramble_step(&z, &w, &vals).unwrap();
        let y = &z - &(&FieldElem::from_int(FieldId::GaussianRationals, c) * &w);
        for v in &vals {
            let want = finite(v.val(&z).unwrap()).min(finite(v.val(&w).unwrap()));
            prop_assert_eq!(v.val(&y).unwrap(), Value::Finite(want));
        }
    }

    #[test]
    fn scramble_is_sound(
        x in proptest::collection::vec(nonzero(FieldId::Rationals), 1..=4),
        vals in rational_vals(),
    ) {
        let trace = scramble(&x, &vals).unwrap();
        prop_assert!(trace.steps.len() <= x.len() * vals.len());
        let mut last = discrepancy(&x, &vals).unwrap();
        for s in &trace.steps {
            prop_assert!(s.discrepancy_after < last);
            last = s.discrepancy_after;
        }
        prop_assert!(is_scrambled(&trace.result, &vals).unwrap());
        prop_assert_eq!(trace.matrix.apply(&x), trace.result.clone());
        prop_assert!(trace.matrix.has_integer_entries());
        prop_assert!(trace.matrix.is_invertible());
        prop_assert!(trace.verify(&vals).unwrap());
    }

    #[test]
    fn membership_answers_are_certified(
        x in elem(FieldId::Rationals),
        y in proptest::collection::vec(elem(FieldId::Rationals), 1..=3),
        vals in rational_vals(),
    ) {
        let ring = RingSpec::multi_valuation(vals).unwrap();
        match module_membership(&x, &y, &ring).unwrap() {
            Membership::Member(cert) => prop_assert!(cert.verify(&ring).unwrap()),
            Membership::NonMember(_) => {
                // x itself is never outside the module it generates
                let mut with_x = y.clone();
                with_x.push(x.clone());
                prop_assert!(module_membership(&x, &with_x, &ring).unwrap().is_member());
            }
        }
    }

    #[test]
    fn glued_ring_contains_exactly_the_matching_residues(x in elem(FieldId::GaussianRationals)) {
        let ring = RingSpec::ww();
        let vals = ring.valuations();
        let integral = vals.iter().all(|v| v.is_integral_at(&x).unwrap());
        let same = integral && vals[0].residue(&x).unwrap() == vals[1].residue(&x).unwrap();
        prop_assert_eq!(ring.contains(&x).unwrap(), same);
    }

    #[test]
    fn sentences_survive_printing(f in formula(3)) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f);
    }
}

fn finite_or_inf_positive(v: Value) -> bool {
    match v {
        Value::Finite(n) => n > 0,
        Value::Infinity => true,
    }
}

fn term(vars: Vec<String>) -> impl Strategy<Value = Term> {
    let mut leaves = vec![
        (0i64..50).prop_map(|n| Term::Num(BigInt::from(n))).boxed(),
        Just(Term::Imag).boxed(),
    ];
    if !vars.is_empty() {
        leaves.push(proptest::sample::select(vars).prop_map(Term::Var).boxed());
    }
    proptest::strategy::Union::new(leaves).prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::Neg(Box::new(t))),
            (
                proptest::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div]),
                inner.clone(),
                inner
            )
                .prop_map(|(op, a, b)| Term::Bin(op, Box::new(a), Box::new(b))),
        ]
    })
}

/// Closed formulas with a prefix of quantifiers over `x`, `y`, `U`.
fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let fields = vec!["x".to_string(), "y".to_string()];
    let atom = prop_oneof![
        (term(fields.clone()), term(fields.clone())).prop_map(|(a, b)| Formula::Eq(a, b)),
        (term(fields.clone()), term(fields.clone())).prop_map(|(a, b)| Formula::Ne(a, b)),
        (term(fields.clone()), proptest::option::of(term(fields.clone())))
            .prop_map(|(t, s)| Formula::In(t, Nbhd { var: "U".into(), scale: s })),
    ];
    let body = atom.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
        ]
    });
    let q = || proptest::sample::select(vec![Quantifier::Forall, Quantifier::Exists]);
    (q(), q(), q(), any::<bool>(), body).prop_map(|(qu, qx, qy, nz, body)| {
        let inner = Formula::Quant(
            qy,
            Binder::Field { name: "y".into(), nonzero: nz },
            Box::new(body),
        );
        let mid = Formula::Quant(
            qx,
            Binder::Field { name: "x".into(), nonzero: false },
            Box::new(inner),
        );
        Formula::Quant(
            qu,
            Binder::Nbhd { name: "U".into(), topology: None },
            Box::new(mid),
        )
    })
}
