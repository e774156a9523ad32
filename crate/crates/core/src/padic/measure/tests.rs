use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::padic::ModelDivisor;
use crate::varieties::{Claims, IntPolynomial, Stratum, StratifiedVariety};

fn q(n: i64) -> BigInt {
    BigInt::from(n)
}

fn rat(r: u32, qq: i64, n: i64, d: i64) -> ExtendedRational {
    ExtendedRational::from_rational(r, q(qq), BigRational::new(n.into(), d.into()))
}

fn blowup_json() -> &'static str {
    r#"{
      "name": "blowup_a2",
      "n": 2,
      "r": 1,
      "upstairs": {
        "name": "blowup_a2_upstairs",
        "strata": [
          {"id": "U", "vars": ["u", "v"]},
          {"id": "L", "vars": ["t"]}
        ],
        "claims": {"dim": 2, "smooth": true, "proper": false}
      },
      "divisors": [
        {"name": "E", "e": 1, "membership": {"U": ["u"], "L": ["t"]}}
      ]
    }"#
}

#[test]
fn local_integral_examples() {
    assert_eq!(local_integral(1, 1, &q(3)), MeasureResult::Finite(rat(1, 3, 3, 4)));
    assert_eq!(local_integral(0, 1, &q(5)), MeasureResult::Finite(rat(1, 5, 1, 1)));
    assert_eq!(local_integral(-1, 1, &q(3)), MeasureResult::Infinite);
    assert_eq!(local_integral(-3, 3, &q(2)), MeasureResult::Infinite);
    assert!(local_integral(-1, 3, &q(2)).is_finite());
    assert!(local_integral(-2, 3, &q(2)).is_finite());
}

#[test]
fn fiber_factor_with_root() {
    // q = 2, u = 2^(1/3): (q - 1)/(q u^-1 - 1) = 1/(u^2 - 1)
    let f = fiber_factor(-1, 3, &q(2)).unwrap();
    let u2 = ExtendedRational::u_pow(3, &q(2), 2);
    let expected = ExtendedRational::from_int(3, &q(2), 1)
        .checked_div(&(&u2 - &ExtendedRational::from_int(3, &q(2), 1)))
        .unwrap();
    assert_eq!(f, expected);
    let u = 2f64.powf(1.0 / 3.0);
    assert!((f.to_f64() - 1.0 / (u * u - 1.0)).abs() < 1e-12);
    // (q - 1)/q sum_k (q^(1 + e/r))^-k
    let direct: f64 = (0..400).map(|k| 0.5 * (2f64 / u).powi(-(k as i32))).sum::<f64>();
    assert!((local_integral(-1, 3, &q(2)).finite().unwrap().to_f64() - direct).abs() < 1e-9);
    assert_eq!(fiber_factor(-3, 3, &q(2)), Err(PadicError::NotLogTerminal { e: -3, r: 3 }));
}

#[test]
fn integral_grid() {
    for &qq in &[2i64, 3, 4, 5, 9] {
        for r in 1u32..=4 {
            for e in -(r as i64) - 2..=6 {
                let v = local_integral(e, r, &q(qq));
                assert_eq!(v.is_finite(), e > -(r as i64), "e={e} r={r} q={qq}");
                if let MeasureResult::Finite(v) = v {
                    // I = q^(-e/r) q^-1 I + (q - 1)/q
                    let step = &(&ExtendedRational::u_pow(r, &q(qq), -e) * &rat(r, qq, 1, qq)) * &v;
                    assert_eq!(&step + &rat(r, qq, qq - 1, qq), v);
                    let next = local_integral(e + 1, r, &q(qq));
                    assert_eq!(next.cmp_value(&MeasureResult::Finite(v.clone())).unwrap(), Ordering::Less);
                    let x = (qq as f64).powf(e as f64 / r as f64);
                    let closed = (qq as f64 - 1.0) * x / (qq as f64 * x - 1.0);
                    assert!((v.to_f64() - closed).abs() < 1e-9 * closed.max(1.0));
                }
            }
        }
    }
}

#[test]
fn blowup_has_unit_measure() {
    let m = ResolutionModel::from_json(blowup_json()).unwrap();
    for p in [2u64, 3, 5] {
        let s = snc_measure(&m, p, 1, 1).unwrap();
        assert_eq!(s.result, MeasureResult::Finite(rat(1, p as i64, 1, 1)), "p={p}");
        assert!(s.warning.is_none());
        let on_e: u64 = s
            .pieces
            .iter()
            .filter(|x| !x.divisors.is_empty())
            .map(|x| u64::try_from(&x.count).unwrap())
            .sum();
        assert_eq!(on_e, p + 1);
    }
    // over F_4 and F_9 as well
    assert_eq!(snc_measure(&m, 2, 2, 1).unwrap().result, MeasureResult::Finite(rat(1, 4, 1, 1)));
    assert_eq!(snc_measure(&m, 3, 1, 2).unwrap().result, MeasureResult::Finite(rat(1, 9, 1, 1)));
}

#[test]
fn crepant_and_discrepant_blowups() {
    let m = ResolutionModel::from_json(blowup_json()).unwrap();
    let crepant = m.with_discrepancies(&[0]).unwrap();
    // e = 0: q^-2 (q^2 + q) = 1 + 1/q
    assert_eq!(snc_measure(&crepant, 3, 1, 1).unwrap().result, MeasureResult::Finite(rat(1, 3, 4, 3)));
    let bad = m.with_discrepancies(&[-1]).unwrap();
    assert_eq!(snc_measure(&bad, 3, 1, 1).unwrap().result, MeasureResult::Infinite);
    let c = measure_compare(&m, &crepant, 3, 1, 1, 1 << 20, &CountOptions::default()).unwrap();
    assert_eq!(c.order, KOrder::XLessEq);
    assert_eq!(c.verdict, MeasureVerdict::MeasureLessEq);
    let same = measure_compare(&m, &m, 2, 1, 1, 1 << 20, &CountOptions::default()).unwrap();
    assert_eq!(same.verdict, MeasureVerdict::MeasureEqual);
    let twisted = ResolutionModel::from_json(&blowup_json().replace("\"U\": [\"u\"]", "\"U\": [\"v\"]")).unwrap();
    assert!(matches!(
        measure_compare(&m, &twisted, 2, 1, 1, 1 << 20, &CountOptions::default()),
        Err(PadicError::ModelMismatch(_))
    ));
}

#[test]
fn trivial_model_is_normalized_count() {
    let m = ResolutionModel::from_json(
        r#"{"name": "conic", "n": 1, "r": 2,
            "upstairs": {"name": "conic", "strata": [{"id": "A", "vars": ["x", "y"], "equations": ["x^2 + y^2 - 1"]}],
                         "claims": {"dim": 1, "smooth": true, "proper": false}}}"#,
    )
    .unwrap();
    for p in [3u64, 5, 7] {
        let n = if p % 4 == 1 { p - 1 } else { p + 1 } as i64;
        let s = snc_measure(&m, p, 1, 1).unwrap();
        assert_eq!(s.result, MeasureResult::Finite(rat(2, p as i64, n, p as i64)));
    }
}

#[test]
fn report_json() {
    let m = ResolutionModel::from_json(blowup_json()).unwrap();
    let s = snc_measure(&m, 2, 1, 1).unwrap();
    let json = MeasureReport::new(&m, 2, 1, 1, &s).to_json();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["schema"], "measure-report/1");
    assert_eq!(v["result"], "finite");
    assert_eq!(v["value"]["coeffs"][0], "1/1");
    assert!(v["decimal"].as_str().unwrap().starts_with("1.000000000"));
    assert_eq!(json, MeasureReport::new(&m, 2, 1, 1, &s).to_json());
}

fn linear(vars: &[String], coeffs: &[i64], c: i64) -> IntPolynomial {
    let mut terms: Vec<(Vec<u32>, BigInt)> = vec![(vec![0; vars.len()], c.into())];
    for (i, &a) in coeffs.iter().enumerate() {
        let mut exp = vec![0; vars.len()];
        exp[i] = 1;
        terms.push((exp, a.into()));
    }
    IntPolynomial::from_terms(vars, terms)
}

#[derive(Debug, Clone)]
struct RandomModel {
    p: u64,
    r: u32,
    dim: usize,
    ineq: Vec<i64>,
    divisors: Vec<(i64, Vec<Vec<i64>>)>,
}

fn random_model() -> impl Strategy<Value = RandomModel> {
    (prop::sample::select(vec![2u64, 3, 5]), 1u32..=3, 1usize..=2).prop_flat_map(|(p, r, dim)| {
        let row = prop::collection::vec(0i64..p as i64, dim + 1);
        let divisor = (-(r as i64) + 1..=3, prop::collection::vec(row.clone(), 1..=2));
        (
            Just(p),
            Just(r),
            Just(dim),
            row,
            prop::collection::vec(divisor, 0..=3),
        )
            .prop_map(|(p, r, dim, ineq, divisors)| RandomModel { p, r, dim, ineq, divisors })
    })
}

impl RandomModel {
    fn build(&self) -> ResolutionModel {
        let vars: Vec<String> = (0..self.dim).map(|i| format!("x{i}")).collect();
        let poly = |row: &Vec<i64>| linear(&vars, &row[..self.dim], row[self.dim]);
        let mut inequations = Vec::new();
        if self.ineq.iter().any(|&c| c != 0) {
            inequations.push(poly(&self.ineq));
        }
        let stratum = Stratum {
            id: "S".into(),
            vars: vars.clone(),
            equations: vec![],
            inequations,
        };
        let claims = Claims { dim: self.dim as u32, smooth: true, proper: false };
        let upstairs = StratifiedVariety::new("random", vec![stratum], claims, None).unwrap();
        let divisors = self
            .divisors
            .iter()
            .enumerate()
            .map(|(i, (e, rows))| ModelDivisor {
                name: format!("E{i}"),
                e: *e,
                membership: [("S".to_string(), rows.iter().map(poly).collect())].into_iter().collect(),
            })
            .collect();
        ResolutionModel {
            name: "random".into(),
            n: self.dim as u32,
            r: self.r,
            upstairs,
            divisors,
            notes: None,
        }
    }

    /// Direct sum over the points of `F_p^dim`.
    fn brute_force(&self) -> ExtendedRational {
        let (p, r) = (self.p as i64, self.r);
        let qq = q(p);
        let eval = |row: &Vec<i64>, pt: &[i64]| {
            let v: i64 = row[..self.dim].iter().zip(pt).map(|(a, x)| a * x).sum::<i64>() + row[self.dim];
            v.rem_euclid(p)
        };
        let mut total = ExtendedRational::from_int(r, &qq, 0);
        let n_points = (p as u64).pow(self.dim as u32);
        for idx in 0..n_points {
            let pt: Vec<i64> = (0..self.dim).map(|i| ((idx / (p as u64).pow(i as u32)) % p as u64) as i64).collect();
            if self.ineq.iter().any(|&c| c != 0) && eval(&self.ineq, &pt) == 0 {
                continue;
            }
            let mut w = ExtendedRational::from_int(r, &qq, 1);
            for (e, rows) in &self.divisors {
                if rows.iter().all(|row| eval(row, &pt) == 0) {
                    w = &w * &fiber_factor(*e, r, &qq).unwrap();
                }
            }
            total = &total + &w;
        }
        &total * &rat(r, p, 1, p.pow(self.dim as u32))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_pointwise_sum(m in random_model()) {
        let s = snc_measure(&m.build(), m.p, 1, 1).unwrap();
        prop_assert_eq!(s.result, MeasureResult::Finite(m.brute_force()));
        let total: BigUint = s.pieces.iter().map(|x| x.count.clone()).sum();
        let free = crate::varieties::count_points(&m.build().upstairs, m.p, 1, 1).unwrap().count;
        prop_assert_eq!(total, free);
    }

    #[test]
    fn larger_discrepancy_smaller_measure(m in random_model(), bump in 0usize..3) {
        let model = m.build();
        prop_assume!(!model.divisors.is_empty());
        let mut es: Vec<i64> = model.divisors.iter().map(|d| d.e).collect();
        let i = bump % es.len();
        es[i] += 1;
        let raised = model.with_discrepancies(&es).unwrap();
        let a = snc_measure(&model, m.p, 1, 1).unwrap();
        let b = snc_measure(&raised, m.p, 1, 1).unwrap();
        prop_assert_ne!(b.result.cmp_value(&a.result).unwrap(), Ordering::Greater);
        let c = measure_compare(&raised, &model, m.p, 1, 1, 1 << 20, &CountOptions::default()).unwrap();
        prop_assert_eq!(c.order, KOrder::XLessEq);
    }
}
