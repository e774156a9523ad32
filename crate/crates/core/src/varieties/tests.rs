use super::*;
use crate::finite_field::{build_field, is_prime, FieldElement};
use proptest::prelude::*;

/// Independent oracle: slow field elements, term-by-term evaluation, no
/// reduction shortcuts or free-variable factoring.
fn brute_force(s: &Stratum, field: &FieldTable) -> u64 {
    let q = field.order();
    let n = s.vars.len();
    let eval = |poly: &IntPolynomial, pt: &[FieldElement]| -> FieldElement {
        let p = BigInt::from(field.p());
        poly.terms().iter().fold(field.zero(), |acc, (e, c)| {
            let r = ((c % &p) + &p) % &p;
            let mut t = field.from_residue(u64::try_from(r).unwrap());
            for (x, &k) in pt.iter().zip(e) {
                t = t.mul(&x.pow(k as u64)).unwrap();
            }
            acc.add(&t).unwrap()
        })
    };
    let total = q.pow(n as u32);
    let mut hits = 0;
    for mut i in 0..total {
        let pt: Vec<FieldElement> = (0..n)
            .map(|_| {
                let d = i % q;
                i /= q;
                field.from_index(d)
            })
            .collect();
        if s.equations.iter().all(|g| eval(g, &pt).is_zero())
            && s.inequations.iter().all(|g| !eval(g, &pt).is_zero())
        {
            hits += 1;
        }
    }
    hits
}

fn claims(dim: u32) -> Claims {
    Claims {
        dim,
        smooth: true,
        proper: true,
    }
}

fn conifold() -> Stratum {
    Stratum::parse("a4", &["x", "y", "z", "w"], &["x*y - z*w"], &[]).unwrap()
}

fn elliptic() -> StratifiedVariety {
    // y^2 z = x^3 - x z^2 with homogeneous order (z, x, y)
    let v = projective_from_text("elliptic", &["x2^2*x0 - x1^3 + x1*x0^2"], 2, claims(1)).unwrap();
    StratifiedVariety {
        good_primes_hint: Some(vec![3, 5, 7, 11, 13]),
        ..v
    }
}

#[test]
fn conifold_over_f3() {
    let f3 = build_field(3, 1).unwrap();
    assert_eq!(brute_force(&conifold(), &f3), 33);
    assert_eq!(count_stratum(&conifold(), &f3).unwrap(), BigUint::from(33u32));
    let q = 3u64;
    assert_eq!((2 * q - 1).pow(2) + (q - 1).pow(3), 33);
}

#[test]
fn simple_strata() {
    let f5 = build_field(5, 1).unwrap();
    let punctured = Stratum::parse("gm", &["x"], &[], &["x"]).unwrap();
    assert_eq!(count_stratum(&punctured, &f5).unwrap(), BigUint::from(4u32));
    for (p, d) in [(2, 1), (3, 2), (5, 1)] {
        let f = build_field(p, d).unwrap();
        let never = Stratum::parse("never", &["x"], &["1"], &[]).unwrap();
        assert_eq!(count_stratum(&never, &f).unwrap(), BigUint::from(0u32));
    }
}

#[test]
fn projective_counts() {
    let p2 = projective_from_text("P2", &[], 2, claims(2)).unwrap();
    assert_eq!(count_points(&p2, 3, 1, 1).unwrap().count, BigUint::from(13u32));
    let con = StratifiedVariety::new("conifold", vec![conifold()], claims(3), None).unwrap();
    assert_eq!(count_points(&con, 3, 1, 1).unwrap().count, BigUint::from(33u32));
    let empty = StratifiedVariety::new("empty", vec![], claims(0), None).unwrap();
    assert_eq!(count_points(&empty, 3, 1, 1).unwrap().count, BigUint::from(0u32));
}

#[test]
fn count_sequences() {
    let seq = |v: &StratifiedVariety, p, k| -> Vec<u64> {
        count_sequence(v, p, 1, k)
            .unwrap()
            .values()
            .map(|n| u64::try_from(n).unwrap())
            .collect()
    };
    let p1 = projective_from_text("P1", &[], 1, claims(1)).unwrap();
    assert_eq!(seq(&p1, 2, 3), [3, 5, 9]);
    let p2 = projective_from_text("P2", &[], 2, claims(2)).unwrap();
    assert_eq!(seq(&p2, 2, 2), [7, 21]);

    // oracle for the elliptic curve: brute force every stratum
    let e = elliptic();
    let oracle: Vec<u64> = (1..=2)
        .map(|k| {
            let f = build_field(5, k).unwrap();
            e.strata.iter().map(|s| brute_force(s, &f)).sum()
        })
        .collect();
    assert_eq!(oracle, [8, 32]);
    assert_eq!(seq(&e, 5, 2), oracle);
    // a = 5 + 1 - 8 = -2, alpha = -1 + 2i: N_2 = 25 + 1 - (alpha^2 + conj^2) = 26 + 6
    assert_eq!(26 + 6, 32);
}

#[test]
fn projective_presentation_shapes() {
    let p1 = projective_from_text("P1", &[], 1, claims(1)).unwrap();
    assert_eq!(p1.strata.len(), 2);
    assert_eq!(p1.strata[0].vars, ["x1"]);
    assert!(p1.strata[1].vars.is_empty());

    let conic = projective_from_text("conic", &["x0*x2 - x1^2"], 2, claims(1)).unwrap();
    let triple = projective_from_text("triple", &["x0^3"], 2, claims(1)).unwrap();
    let line = projective_from_text("line", &["x0"], 2, claims(1)).unwrap();
    for (p, r) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
        let q = u64::pow(p, r);
        let f = build_field(p, r).unwrap();
        let brute: u64 = conic.strata.iter().map(|s| brute_force(s, &f)).sum();
        assert_eq!(brute, q + 1);
        assert_eq!(count_points(&conic, p, r, 1).unwrap().count, BigUint::from(q + 1));
        assert_eq!(
            count_points(&triple, p, r, 1).unwrap().count,
            count_points(&line, p, r, 1).unwrap().count
        );
    }
    assert!(matches!(
        projective_from_text("bad", &["x0*x1 - x2"], 2, claims(1)),
        Err(VarietyError::NotHomogeneous(_))
    ));
}

#[test]
fn fast_path_examples() {
    let curve = Stratum::parse("c", &["x", "y"], &["y^2 - x^3 + x"], &[]).unwrap();
    let f5 = build_field(5, 1).unwrap();
    let f3 = build_field(3, 1).unwrap();
    assert_eq!(brute_force(&curve, &f5), 7);
    assert_eq!(brute_force(&curve, &f3), 3);
    assert_eq!(quadratic_character_fast_path(&curve, &f5).unwrap(), BigUint::from(7u32));
    assert_eq!(quadratic_character_fast_path(&curve, &f3).unwrap(), BigUint::from(3u32));
    let degenerate = Stratum::parse("d", &["x", "y"], &["y^2"], &[]).unwrap();
    assert_eq!(quadratic_character_fast_path(&degenerate, &f5).unwrap(), BigUint::from(5u32));

    let f4 = build_field(2, 2).unwrap();
    assert!(matches!(
        quadratic_character_fast_path(&curve, &f4),
        Err(VarietyError::NotApplicable(_))
    ));
    let not_curve = Stratum::parse("n", &["x", "y"], &["x*y - 1"], &[]).unwrap();
    assert!(matches!(
        quadratic_character_fast_path(&not_curve, &f5),
        Err(VarietyError::NotApplicable(_))
    ));
}

#[test]
fn fast_path_matches_brute_force_up_to_121() {
    let curves = [
        Stratum::parse("a", &["x", "y"], &["y^2 - x^3 + x"], &[]).unwrap(),
        Stratum::parse("b", &["x", "y"], &["y^2 - x^3 - x - 1"], &[]).unwrap(),
        Stratum::parse("c", &["x", "y"], &["2*y^2 - x^5 + 3*x^2 - 7"], &[]).unwrap(),
        Stratum::parse("d", &["u", "t"], &["t^2 - u"], &[]).unwrap(),
        Stratum::parse("e", &["t", "s"], &["3*s^2 + t^3 + 1"], &[]).unwrap(),
        Stratum::parse("f", &["x", "y"], &["x^4 + 1 - y^2"], &[]).unwrap(),
    ];
    for q in (3u64..=121).step_by(2) {
        let Some((p, r)) = (1..=7u32).find_map(|r| {
            (2..=q).find(|&p| is_prime(p) && p.pow(r) == q).map(|p| (p, r))
        }) else {
            continue;
        };
        let field = build_field(p, r).unwrap();
        let slow = CountOptions {
            fast_path: false,
            ..CountOptions::default()
        };
        for c in &curves {
            let brute = count_stratum_with(c, &field, &slow).unwrap();
            let fast = count_stratum(c, &field).unwrap();
            assert_eq!(fast, brute, "{} over F_{q}", c.id);
            if let Ok(direct) = quadratic_character_fast_path(c, &field) {
                assert_eq!(direct, brute);
            }
        }
        // one oracle cross-check per field
        assert_eq!(brute_force(&curves[0], &field), u64::try_from(count_stratum(&curves[0], &field).unwrap()).unwrap());
    }
}

#[test]
fn worker_count_does_not_change_counts() {
    let strata = [
        conifold(),
        Stratum::parse("s", &["a", "b", "c"], &["a*b - c^2"], &["a + b + 1"]).unwrap(),
        Stratum::parse("t", &["a", "b"], &["a^3 - b^2 + 1"], &[]).unwrap(),
    ];
    for (p, r) in [(2, 3), (3, 2), (7, 1)] {
        let field = build_field(p, r).unwrap();
        for s in &strata {
            let one = count_stratum(s, &field).unwrap();
            for w in [2, 3, 5] {
                let opts = CountOptions {
                    workers: w,
                    ..CountOptions::default()
                };
                assert_eq!(count_stratum_with(s, &field, &opts).unwrap(), one);
            }
        }
    }
}

#[test]
fn disjoint_union_adds() {
    let a = Stratum::parse("a", &["x", "y"], &["x*y - 1"], &[]).unwrap();
    let b = Stratum::parse("b", &["x"], &[], &["x^2 - 2"]).unwrap();
    let v = StratifiedVariety::new("ab", vec![a.clone(), b.clone()], claims(1), None).unwrap();
    let f = build_field(5, 2).unwrap();
    let sum = count_stratum(&a, &f).unwrap() + count_stratum(&b, &f).unwrap();
    assert_eq!(count_points(&v, 5, 2, 1).unwrap().count, sum);
    assert_eq!(count_points(&v, 5, 1, 2).unwrap().count, sum);
}

#[test]
fn timeouts_name_the_k_reached() {
    let big = Stratum::parse("big", &["a", "b", "c", "d"], &["a*b - c*d - 1"], &[]).unwrap();
    let v = StratifiedVariety::new("big", vec![big], claims(3), None).unwrap();
    let opts = SequenceOptions {
        per_k_budget: Some(Duration::from_millis(30)),
        ..SequenceOptions::default()
    };
    match count_sequence_with(&v, 3, 1, 6, &opts) {
        Err(VarietyError::TimedOut { k }) => assert!(k >= 2, "k = {k}"),
        other => panic!("expected a timeout, got {other:?}"),
    }
}

#[test]
fn bad_prime_warning() {
    let e = elliptic();
    assert!(count_points(&e, 2, 1, 1).unwrap().warning.is_some());
    assert!(count_points(&e, 3, 1, 1).unwrap().warning.is_none());
}

#[test]
fn field_cap_is_enforced() {
    let p1 = projective_from_text("P1", &[], 1, claims(1)).unwrap();
    assert!(matches!(
        count_points_with(&p1, 2, 1, 12, 1000, &CountOptions::default()),
        Err(VarietyError::Field(FieldError::FieldTooLarge { .. }))
    ));
}

#[test]
fn json_round_trip() {
    let text = r#"{"name": "conifold", "strata": [{"id": "a4", "vars": ["x","y","z","w"], "equations": ["x*y - z*w"], "inequations": []}], "claims": {"dim": 3, "smooth": false, "proper": false}}"#;
    let v = StratifiedVariety::from_json(text).unwrap();
    assert_eq!(v.strata[0].equations[0], conifold().equations[0]);
    assert_eq!(StratifiedVariety::from_json(&v.to_json()).unwrap(), v);
    let bad = r#"{"name": "x", "strata": [{"id": "a", "vars": ["x"], "equations": ["y"]}], "claims": {"dim": 0, "smooth": true, "proper": true}}"#;
    assert!(matches!(StratifiedVariety::from_json(bad), Err(VarietyError::Parse { .. })));
    let dup = r#"{"name": "x", "strata": [{"id": "a", "vars": []}, {"id": "a", "vars": []}], "claims": {"dim": 0, "smooth": true, "proper": true}}"#;
    assert!(matches!(StratifiedVariety::from_json(dup), Err(VarietyError::DuplicateStratum(_))));
}

fn small_poly(vars: Vec<String>) -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec((prop::collection::vec(0u32..3, vars.len()), -3i64..4), 1..4)
        .prop_map(move |ts| IntPolynomial::from_terms(&vars, ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

fn field_choice() -> impl Strategy<Value = FieldTable> {
    prop::sample::select(vec![(2u64, 1u32), (3, 1), (2, 2), (5, 1), (3, 2), (7, 1)])
        .prop_map(|(p, d)| build_field(p, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inclusion_exclusion(
        f in field_choice(),
        eq in small_poly(vec!["x".into(), "y".into(), "z".into()]),
        g in small_poly(vec!["x".into(), "y".into(), "z".into()]),
    ) {
        let s = Stratum { id: "s".into(), vars: eq.vars().to_vec(), equations: vec![eq], inequations: vec![] };
        let whole = count_stratum(&s, &f).unwrap();
        let on = count_stratum(&s.with_equation(g.clone()), &f).unwrap();
        let off = count_stratum(&s.with_inequation(g), &f).unwrap();
        prop_assert_eq!(whole, on + off);
    }

    #[test]
    fn engine_matches_oracle(
        f in field_choice(),
        eq in small_poly(vec!["x".into(), "y".into(), "z".into()]),
        ne in small_poly(vec!["x".into(), "y".into(), "z".into()]),
    ) {
        let s = Stratum { id: "s".into(), vars: eq.vars().to_vec(), equations: vec![eq], inequations: vec![ne] };
        prop_assert_eq!(count_stratum(&s, &f).unwrap(), BigUint::from(brute_force(&s, &f)));
    }
}
