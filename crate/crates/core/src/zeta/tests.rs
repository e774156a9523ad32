use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::synthetic::random_weil;
use super::*;
use crate::varieties::CountSequence;

fn powers_seq(p: u64, ms: &[u32], k: u32) -> CountSequence {
    let counts: Vec<u64> = (1..=k).map(|k| ms.iter().map(|m| p.pow(m * k)).sum()).collect();
    CountSequence::from_u64(p, 1, "test", &counts)
}

fn elliptic_3() -> CountSequence {
    CountSequence::from_u64(3, 1, "elliptic_3", &[4, 16, 28, 64, 244, 784, 2188, 6400])
}

fn ints(p: &QPoly) -> Vec<i64> {
    p.coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect()
}

#[test]
fn projective_line_zeta() {
    let seq = powers_seq(2, &[0, 1], 4);
    let (_, z, w) = analyze(&seq, 1, true, None).unwrap();
    assert_eq!(ints(&z.numerator), vec![1]);
    assert_eq!(ints(&z.denominator), vec![1, -3, 2]);
    assert_eq!(w.betti, vec![1, 0, 1]);
    assert_eq!(w.euler, 2);
    assert!(w.purity_ok);
    assert_eq!(report::zeta_display(&z), "1/(2*t^2 - 3*t + 1)");
}

#[test]
fn projective_plane() {
    let seq = powers_seq(3, &[0, 1, 2], 6);
    let (rec, z, w) = analyze(&seq, 2, true, None).unwrap();
    assert_eq!(rec.order(), 3);
    // (1-t)(1-3t)(1-9t)
    assert_eq!(ints(&z.denominator), vec![1, -13, 39, -27]);
    assert_eq!(w.betti, vec![1, 0, 1, 0, 1]);
    assert_eq!(w.euler, 3);
    assert_eq!(w.duality_ok, Some(true));
    assert_eq!(z.euler_characteristic(), 3);
}

#[test]
fn elliptic_curve() {
    let (_, z, w) = analyze(&elliptic_3(), 1, true, None).unwrap();
    assert_eq!(ints(&z.numerator), vec![1, 0, 3]);
    assert_eq!(ints(&z.denominator), vec![1, -4, 3]);
    assert_eq!(w.betti, vec![1, 2, 1]);
    assert_eq!(w.euler, 0);
    assert!(w.purity_ok);
    let weight_one: Vec<_> = w.roots.iter().filter(|r| r.weight == 1).collect();
    assert_eq!(weight_one.len(), 2);
    for r in weight_one {
        assert!((r.root.z.norm() - 3f64.sqrt()).abs() <= 1e-9);
        assert_eq!(r.sign, -1);
    }
    for k in 1..=8 {
        assert_eq!(z.count(k), BigInt::from([4, 16, 28, 64, 244, 784, 2188, 6400][k - 1]));
    }
}

#[test]
fn open_variety_weights() {
    // N_k = q^{3k} + q^{2k}
    let seq = powers_seq(3, &[3, 2], 6);
    let (_, z, w) = analyze(&seq, 3, false, None).unwrap();
    assert_eq!(w.betti, vec![0, 0, 0, 0, 1, 0, 1]);
    assert_eq!(w.euler, 2);
    assert!(w.purity_ok);
    assert_eq!(w.duality_ok, None);
    assert_eq!(z.numerator, QPoly::one());
}

#[test]
fn duality_failure_downgrades_purity() {
    let seq = powers_seq(3, &[3, 2], 6);
    let (_, _, w) = analyze(&seq, 3, true, None).unwrap();
    assert_eq!(w.duality_ok, Some(false));
    assert!(!w.purity_ok);
}

#[test]
fn wrong_sign_is_impure() {
    // N_k = 1 - 3^k + 9^k has a weight-2 root with exponent -1 (q = 3)
    let counts: Vec<u64> = (1..=6u32).map(|k| 9u64.pow(k) + 1 - 3u64.pow(k)).collect();
    let seq = CountSequence::from_u64(3, 1, "t", &counts);
    let (_, _, w) = analyze(&seq, 2, false, None).unwrap();
    assert!(!w.purity_ok);
    assert_eq!(w.betti, vec![1, 0, 1, 0, 1]);
}

#[test]
fn mixed_signs() {
    // 3^k at weight 2 with +1, -3^k at weight 2 with -1
    let counts: Vec<i64> = (1..=8u32).map(|k| 1 + 3i64.pow(k) - (-3i64).pow(k) + 9i64.pow(k)).collect();
    let counts: Vec<u64> = counts.into_iter().map(|c| c as u64).collect();
    let seq = CountSequence::from_u64(3, 1, "t", &counts);
    let got = analyze(&seq, 2, false, None);
    assert!(matches!(got, Err(ZetaError::MixedSigns { weight: 2 })), "{got:?}");
}

#[test]
fn ambiguous_weight() {
    // a root of absolute value 2 over q = 3
    let counts: Vec<u64> = (1..=4u32).map(|k| 1 + 2u64.pow(k)).collect();
    let seq = CountSequence::from_u64(3, 1, "t", &counts);
    assert!(matches!(analyze(&seq, 1, false, None), Err(ZetaError::WeightAmbiguous { .. })));
}

#[test]
fn non_integer_exponents() {
    // (3^k + 5^k) / 2 is an integer sequence with exponents 1/2
    let counts: Vec<u64> = (1..=6u32).map(|k| (3u64.pow(k) + 5u64.pow(k)) / 2).collect();
    let seq = CountSequence::from_u64(3, 1, "t", &counts);
    let rec = fit_recurrence(&seq).unwrap();
    assert!(matches!(zeta_function(&rec, &seq), Err(ZetaError::NonIntegerWeights(_))));
}

#[test]
fn series_identity() {
    let seq = elliptic_3();
    let rec = fit_recurrence(&seq).unwrap();
    let z = zeta_function(&rec, &seq).unwrap();
    let terms: Vec<BigRational> = seq
        .values()
        .map(|n| BigRational::from_integer(BigInt::from(n.clone())))
        .collect();
    let series = QPoly::new(exp_series(&terms));
    assert_eq!((&z.denominator * &series).truncate(9), z.numerator.truncate(9));
    assert_eq!(z.series_checked, 9);
}

#[test]
fn counting_polynomials() {
    let conifold_res = powers_seq(3, &[3, 2], 5);
    let p = counting_polynomial(&conifold_res, 3).unwrap();
    assert_eq!(p.to_string(), "T^3 + T^2");
    assert_eq!(conifold_res.counts[0].1, 36u32.into());
    let a2 = powers_seq(5, &[2], 4);
    assert_eq!(counting_polynomial(&a2, 2).unwrap().to_string(), "T^2");
    assert!(matches!(
        counting_polynomial(&elliptic_3(), 1),
        Err(ZetaError::NotPolynomialCount { .. })
    ));
    assert!(matches!(
        counting_polynomial(&powers_seq(3, &[2], 3), 2),
        Err(ZetaError::InsufficientTerms { .. })
    ));
    let neg: Vec<u64> = (1..=4u32).map(|k| 4u64.pow(k) - 2u64.pow(k) + 1).collect();
    let p = counting_polynomial(&CountSequence::from_u64(2, 1, "t", &neg), 2).unwrap();
    assert_eq!(p.to_string(), "T^2 - T + 1");
}

#[test]
fn compare_verdicts() {
    let p2 = powers_seq(3, &[0, 1, 2], 3);
    let bl = CountSequence::from_u64(3, 1, "bl", &[16, 100, 784]);
    let c = compare(&p2, &bl).unwrap();
    assert_eq!(c.verdict, CountVerdict::ALessEq);
    assert_eq!(
        c.margins.iter().map(|(_, m)| m.clone()).collect::<Vec<_>>(),
        vec![BigInt::from(3), BigInt::from(9), BigInt::from(27)]
    );
    assert_eq!(compare(&bl, &p2).unwrap().verdict, CountVerdict::BLessEq);
    assert_eq!(compare(&p2, &p2).unwrap().verdict, CountVerdict::Equal);
    let other = CountSequence::from_u64(3, 1, "o", &[12, 100, 700]);
    assert_eq!(compare(&p2, &other).unwrap().verdict, CountVerdict::Incomparable);
    assert_eq!(compare(&p2, &powers_seq(2, &[0], 3)), Err(ZetaError::MismatchedFields));
}

#[test]
fn report_json_is_stable() {
    let seq = elliptic_3();
    let (rec, z, w) = analyze(&seq, 1, true, None).unwrap();
    let a = report::ZetaReport::new(&seq).with_recurrence(&rec).with_zeta(&z, Some(&w));
    let b = report::ZetaReport::new(&seq).with_recurrence(&rec).with_zeta(&z, Some(&w));
    assert_eq!(a.to_json(), b.to_json());
    let v: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(v["schema"], "zeta-report/1");
    assert_eq!(v["weil"]["betti"], serde_json::json!([1, 2, 1]));
}

#[test]
fn synthetic_round_trip_fixed_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..40 {
        let q = [2, 3, 4, 5][i % 4];
        let n = 1 + (i as u32 % 3);
        let w = random_weil(&mut rng, q, n, 2, 2);
        let k = 2 * w.order() + 2;
        let seq = w.sequence(k).unwrap();
        let (_, _, d) = analyze(&seq, n, false, None).unwrap_or_else(|e| panic!("{e} for {w:?}"));
        assert_eq!(d.betti, w.betti(), "{w:?}");
        assert!(d.purity_ok);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trip(seed in any::<u64>(), qi in 0usize..4, n in 1u32..=3) {
        let q = [2, 3, 4, 5][qi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_weil(&mut rng, q, n, 2, 2);
        let k = 2 * w.order() + 2;
        let seq = w.sequence(k).unwrap();
        let (_, z, d) = analyze(&seq, n, false, None).unwrap();
        prop_assert_eq!(d.betti, w.betti());
        for kk in 1..=k {
            prop_assert_eq!(z.count(kk), BigInt::from(seq.counts[kk - 1].1.clone()));
        }
    }
}

#[test]
fn truncations_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut total, mut rejected) = (0, 0);
    for i in 0..100 {
        let w = random_weil(&mut rng, [2, 3, 4, 5][i % 4], 1 + i as u32 % 3, 2, 2);
        let l = w.order();
        for k in 2..2 * l {
            total += 1;
            let seq = w.sequence(k).unwrap();
            if matches!(fit_recurrence(&seq), Err(ZetaError::InsufficientTerms { .. })) {
                rejected += 1;
            }
        }
    }
    assert!(rejected * 100 >= total * 95, "{rejected} of {total}");
}
