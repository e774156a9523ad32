//! The acceptance suite as library functions with a deterministic JSON
//! report.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::birational::{compare_k_order, DiscrepancyVector, KOrder};
use crate::finite_field::DEFAULT_ENUMERATION_CAP;
use crate::gallery;
use crate::padic::{
    binomial_is_irreducible, local_integral, measure_compare, snc_measure, ExtendedRational, MeasureResult,
    MeasureVerdict, ResolutionModel,
};
use crate::varieties::{count_points, count_sequence, CountOptions, CountSequence, StratifiedVariety};
use crate::zeta::synthetic::random_weil;
use crate::zeta::{analyze, compare, fit_recurrence, CountVerdict, ZetaError};

pub const SCHEMA: &str = "verify-report/1";

/// Seed of the synthetic and random-comparison criteria.
pub const SEED: u64 = 20_240_501;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    /// Failed sub-checks only.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub criteria: Vec<Criterion>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub const NAMES: [&str; 10] = [
    "flop invariance",
    "count monotonicity",
    "measure of A^2 under two resolutions",
    "log-terminal finiteness",
    "Betti extraction",
    "measure monotonicity",
    "exceptional-locus counts",
    "crepant weighted counting",
    "synthetic round trip",
    "determinism",
];

struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.checks += 1;
        self.failures.push(what);
    }

    fn finish(self, id: u8, summary: String) -> Criterion {
        Criterion {
            id,
            name: NAMES[id as usize - 1],
            passed: self.failures.is_empty(),
            summary: format!("{summary}; {} checks, {} failed", self.checks, self.failures.len()),
            failures: self.failures,
        }
    }
}

fn variety(id: &str) -> StratifiedVariety {
    gallery::load_variety(id).expect("builtin entry")
}

fn model(id: &str) -> ResolutionModel {
    gallery::load_model(id).expect("builtin entry")
}

fn sequence(v: &StratifiedVariety, p: u64, terms: u32) -> Result<CountSequence, String> {
    count_sequence(v, p, 1, terms).map_err(|e| e.to_string())
}

fn ints(seq: &CountSequence) -> Vec<BigInt> {
    seq.values().map(|n| BigInt::from(n.clone())).collect()
}

fn value(r: u32, q: &BigInt, x: BigRational) -> MeasureResult {
    MeasureResult::Finite(ExtendedRational::from_rational(r, q.clone(), x))
}

/// Criterion 1: the two small resolutions of the conifold have equal counts
/// `q^3 + q^2`, equal zeta functions and equal Euler numbers.
pub fn flop_invariance() -> Criterion {
    let mut t = Tally::new();
    let (a, b) = (variety("conifold_res_plus"), variety("conifold_res_minus"));
    for p in [2u64, 3, 5] {
        let (sa, sb) = match (sequence(&a, p, 4), sequence(&b, p, 4)) {
            (Ok(x), Ok(y)) => (x, y),
            (x, y) => {
                t.fail(format!("p={p}: counting failed: {:?} {:?}", x.err(), y.err()));
                continue;
            }
        };
        for (k, (x, y)) in ints(&sa).iter().zip(ints(&sb)).enumerate() {
            let q = BigInt::from(p).pow(k as u32 + 1);
            let expected = Pow::pow(&q, 3u32) + Pow::pow(&q, 2u32);
            t.check(*x == expected && y == expected, || format!("p={p} k={}: {x} vs {y}, expected {expected}", k + 1));
        }
        match (analyze(&sa, 3, false, None), analyze(&sb, 3, false, None)) {
            (Ok((_, za, wa)), Ok((_, zb, wb))) => {
                t.check(za.numerator == zb.numerator && za.denominator == zb.denominator, || {
                    format!("p={p}: zeta functions differ")
                });
                t.check(wa.euler == wb.euler, || format!("p={p}: euler {} vs {}", wa.euler, wb.euler));
            }
            (x, y) => t.fail(format!("p={p}: zeta failed: {:?} {:?}", x.err(), y.err())),
        }
    }
    t.finish(1, "p in {2,3,5}, k = 1..4".into())
}

/// Criterion 2: `N_k(Bl P^2) - N_k(P^2) = q^k` with verdict `ALessEq`,
/// matching `P^2 <=_K Bl(P^2)`.
pub fn count_monotonicity() -> Criterion {
    let mut t = Tally::new();
    let (p2, bl) = (variety("projective_space_2"), variety("blowup_p2"));
    let x = DiscrepancyVector::new(1, &[("E", 1)]).expect("valid");
    let y = DiscrepancyVector::new(1, &[("E", 0)]).expect("valid");
    let order = compare_k_order(&x, &y);
    t.check(order == Ok(KOrder::XLessEq), || format!("K-order of P^2 vs blowup: {order:?}"));
    for p in [2u64, 3, 5] {
        let (a, b) = match (sequence(&p2, p, 3), sequence(&bl, p, 3)) {
            (Ok(x), Ok(y)) => (x, y),
            (x, y) => {
                t.fail(format!("p={p}: counting failed: {:?} {:?}", x.err(), y.err()));
                continue;
            }
        };
        for (k, (na, nb)) in ints(&a).iter().zip(ints(&b)).enumerate() {
            let q = BigInt::from(p).pow(k as u32 + 1);
            t.check(&nb - na == q, || format!("p={p} k={}: difference {}", k + 1, &nb - na));
        }
        match compare(&a, &b) {
            Ok(c) => t.check(c.verdict == CountVerdict::ALessEq, || format!("p={p}: verdict {:?}", c.verdict)),
            Err(e) => t.fail(format!("p={p}: {e}")),
        }
    }
    t.finish(2, "p in {2,3,5}, k = 1..3".into())
}

/// Criterion 3: identity and blowup models of `A^2` both have measure 1.
pub fn two_resolutions() -> Criterion {
    let mut t = Tally::new();
    for id in ["a2_identity", "a2_blowup"] {
        let m = model(id);
        for p in [2u64, 3, 5] {
            let q = BigInt::from(p);
            match snc_measure(&m, p, 1, 1) {
                Ok(s) => t.check(s.result == value(m.r, &q, BigRational::from_integer(1.into())), || {
                    format!("{id} at q={p}: {:?}", s.result)
                }),
                Err(e) => t.fail(format!("{id} at q={p}: {e}")),
            }
        }
    }
    t.finish(3, "q in {2,3,5}, exact".into())
}

/// Criterion 4: `local_integral` is finite iff `e/r > -1` on the grid, and
/// finite values satisfy `I = q^-(e/r+1) I + (q-1)/q`.
pub fn finiteness_grid() -> Criterion {
    let mut t = Tally::new();
    let mut cases = 0;
    for qq in [2i64, 3, 5] {
        let q = BigInt::from(qq);
        for r in 1u32..=4 {
            for e in -5i64..=5 {
                cases += 1;
                let v = local_integral(e, r, &q);
                let finite = e > -(r as i64);
                t.check(v.is_finite() == finite, || format!("e={e} r={r} q={qq}: {v:?}"));
                if let MeasureResult::Finite(i) = v {
                    let scale = ExtendedRational::u_pow(r, &q, -(e + r as i64));
                    let rhs = &(&scale * &i)
                        + &ExtendedRational::from_rational(r, q.clone(), BigRational::new((qq - 1).into(), q.clone()));
                    t.check(rhs == i, || format!("e={e} r={r} q={qq}: fixed point fails"));
                }
            }
        }
    }
    t.finish(4, format!("{cases} grid cases"))
}

/// Criterion 5: Betti numbers of `P^2` and of the elliptic curve over `F_3`.
pub fn betti_extraction() -> Criterion {
    let mut t = Tally::new();
    match sequence(&variety("projective_space_2"), 2, 6).map(|s| analyze(&s, 2, true, None)) {
        Ok(Ok((_, _, w))) => {
            t.check(w.betti == [1, 0, 1, 0, 1], || format!("P^2 betti {:?}", w.betti));
            t.check(w.euler == 3 && w.purity_ok, || format!("P^2 euler {} pure {}", w.euler, w.purity_ok));
        }
        Ok(Err(e)) => t.fail(format!("P^2: {e}")),
        Err(e) => t.fail(format!("P^2: {e}")),
    }
    match sequence(&variety("elliptic_3"), 3, 8).map(|s| analyze(&s, 1, true, None)) {
        Ok(Ok((_, _, w))) => {
            t.check(w.betti == [1, 2, 1], || format!("elliptic betti {:?}", w.betti));
            t.check(w.euler == 0, || format!("elliptic euler {}", w.euler));
            let weight1: Vec<f64> = w
                .roots
                .iter()
                .filter(|r| r.weight == 1)
                .flat_map(|r| std::iter::repeat_n(r.root.z.norm(), r.multiplicity as usize))
                .collect();
            t.check(weight1.len() == 2, || format!("{} weight-1 roots", weight1.len()));
            for m in weight1 {
                t.check((m - 3f64.sqrt()).abs() <= 1e-9, || format!("|alpha| = {m}"));
            }
        }
        Ok(Err(e)) => t.fail(format!("elliptic: {e}")),
        Err(e) => t.fail(format!("elliptic: {e}")),
    }
    t.finish(5, "P^2 at p=2, K=6; elliptic_3 at K=8".into())
}

/// Two coordinate axes in `A^2`, used as a two-divisor SNC configuration for
/// random comparisons.
fn axes_model() -> ResolutionModel {
    ResolutionModel::from_json(
        r#"{"name": "axes", "n": 2, "r": 1,
            "upstairs": {"name": "a2", "strata": [{"id": "A2", "vars": ["x", "y"]}],
                         "claims": {"dim": 2, "smooth": true, "proper": false}},
            "divisors": [{"name": "D1", "e": 0, "membership": {"A2": ["x"]}},
                         {"name": "D2", "e": 0, "membership": {"A2": ["y"]}}]}"#,
    )
    .expect("valid model")
}

/// Criterion 6: on the blowup of `A^2`, `e = 1` and `e = 0` give measures
/// `1 <= (q^2 + q)/q^2`; then random comparable pairs obey monotonicity.
pub fn measure_monotonicity() -> Criterion {
    let mut t = Tally::new();
    let blowup = model("a2_blowup");
    let crepant = blowup.with_discrepancies(&[0]).expect("one divisor");
    let opts = CountOptions::default();
    for p in [2u64, 3, 5] {
        let q = BigInt::from(p);
        match measure_compare(&blowup, &crepant, p, 1, 1, DEFAULT_ENUMERATION_CAP, &opts) {
            Ok(c) => {
                t.check(c.verdict == MeasureVerdict::MeasureLessEq, || format!("q={p}: {:?}", c.verdict));
                t.check(c.a.result == value(1, &q, BigRational::from_integer(1.into())), || {
                    format!("q={p}: m_A = {:?}", c.a.result)
                });
                let b = BigRational::new(&q * &q + &q, &q * &q);
                t.check(c.b.result == value(1, &q, b), || format!("q={p}: m_B = {:?}", c.b.result));
            }
            Err(e) => t.fail(format!("q={p}: {e}")),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let shapes = [blowup, axes_model()];
    let mut pairs = 0;
    while pairs < 100 {
        let shape = &shapes[rng.gen_range(0..shapes.len())];
        let r = rng.gen_range(1u32..=3);
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        if !binomial_is_irreducible(r, &BigInt::from(p)) {
            continue;
        }
        let d = shape.divisors.len();
        let ea: Vec<i64> = (0..d).map(|_| rng.gen_range(0..=4)).collect();
        let eb: Vec<i64> = ea.iter().map(|&x| rng.gen_range(0..=x)).collect();
        pairs += 1;
        let mut a = shape.with_discrepancies(&ea).expect("length matches");
        let mut b = shape.with_discrepancies(&eb).expect("length matches");
        a.r = r;
        b.r = r;
        match measure_compare(&a, &b, p, 1, 1, DEFAULT_ENUMERATION_CAP, &opts) {
            Ok(c) => {
                let ok = match c.a.result.cmp_value(&c.b.result) {
                    Ok(o) => o != std::cmp::Ordering::Greater,
                    Err(_) => false,
                };
                let want = if ea == eb {
                    MeasureVerdict::MeasureEqual
                } else {
                    MeasureVerdict::MeasureLessEq
                };
                t.check(ok && c.verdict == want, || {
                    format!("{} r={r} q={p} {ea:?} vs {eb:?}: {:?}", shape.name, c.verdict)
                });
            }
            Err(e) => t.fail(format!("{} r={r} q={p} {ea:?} vs {eb:?}: {e}", shape.name)),
        }
    }
    t.finish(6, format!("q in {{2,3,5}} plus {pairs} random pairs"))
}

/// Criterion 7: the exceptional curves of the flop have `q + 1` points.
pub fn exceptional_loci() -> Criterion {
    let mut t = Tally::new();
    let (a, b) = (variety("flop_exceptional_plus"), variety("flop_exceptional_minus"));
    for p in [2u64, 3, 5] {
        for k in 1u32..=3 {
            let q = BigUint::from(p).pow(k);
            let na = count_points(&a, p, 1, k).map(|c| c.count);
            let nb = count_points(&b, p, 1, k).map(|c| c.count);
            let want = Ok(&q + 1u32);
            t.check(na == want && nb == want, || format!("p={p} k={k}: {na:?} vs {nb:?}"));
        }
    }
    t.finish(7, "p in {2,3,5}, k = 1..3".into())
}

/// Criterion 8: the crepant model of the A1 cone measures `|Y|/q^2`, which
/// exceeds the naive `|X|/q^2` by exactly `q/q^2`.
pub fn crepant_weighted_count() -> Criterion {
    let mut t = Tally::new();
    let m = model("a1_cone");
    let cone = variety("a1_cone_surface");
    for p in [3u64, 5] {
        let q = BigInt::from(p);
        let q2 = &q * &q;
        let counted = count_points(&m.upstairs, p, 1, 1).and_then(|y| Ok((y, count_points(&cone, p, 1, 1)?)));
        let (y, x) = match counted {
            Ok((y, x)) => (BigInt::from(y.count), BigInt::from(x.count)),
            Err(e) => {
                t.fail(format!("q={p}: {e}"));
                continue;
            }
        };
        match snc_measure(&m, p, 1, 1) {
            Ok(s) => {
                t.check(s.result == value(1, &q, BigRational::new(y.clone(), q2.clone())), || {
                    format!("q={p}: measure {:?} vs |Y| = {y}", s.result)
                });
                let naive = BigRational::new(x.clone(), q2.clone());
                let defect = s.result.finite().map(|v| v - &ExtendedRational::from_rational(1, q.clone(), naive));
                let want = ExtendedRational::from_rational(1, q.clone(), BigRational::new(q.clone(), q2.clone()));
                t.check(defect.as_ref() == Some(&want), || format!("q={p}: defect {defect:?}"));
                t.check(y != x, || format!("q={p}: weighted and naive counts agree"));
            }
            Err(e) => t.fail(format!("q={p}: {e}")),
        }
    }
    t.finish(8, "q in {3,5}".into())
}

/// Criterion 9: 200 synthetic Weil sequences round-trip to their planted
/// Betti numbers, and at least 95% of truncations below `2L` terms are
/// rejected.
pub fn synthetic_round_trip() -> Criterion {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut truncations, mut rejected) = (0usize, 0usize);
    for i in 0..200 {
        let q = [2u64, 3, 4, 5][i % 4];
        let n = 1 + (i as u32 / 4) % 3;
        let w = random_weil(&mut rng, q, n, 2, 2);
        let l = w.order();
        let k = 2 * l + 2;
        match w.sequence(k).map(|s| analyze(&s, n, false, None)) {
            Some(Ok((_, _, d))) => t.check(d.betti == w.betti(), || {
                format!("case {i}: betti {:?} vs planted {:?}", d.betti, w.betti())
            }),
            Some(Err(e)) => t.fail(format!("case {i}: {e}")),
            None => t.fail(format!("case {i}: negative counts")),
        }
        for kt in 1..2 * l {
            let Some(seq) = w.sequence(kt) else { continue };
            truncations += 1;
            if matches!(fit_recurrence(&seq), Err(ZetaError::InsufficientTerms { .. })) {
                rejected += 1;
            }
        }
    }
    t.check(rejected * 100 >= truncations * 95, || {
        format!("only {rejected} of {truncations} truncations rejected")
    });
    t.finish(9, format!("200 sequences; {rejected}/{truncations} truncations rejected"))
}

fn base_criteria() -> Vec<Criterion> {
    vec![
        flop_invariance(),
        count_monotonicity(),
        two_resolutions(),
        finiteness_grid(),
        betti_extraction(),
        measure_monotonicity(),
        exceptional_loci(),
        crepant_weighted_count(),
        synthetic_round_trip(),
    ]
}

fn compare_runs(first: &[Criterion], second: &[Criterion]) -> Criterion {
    let mut t = Tally::new();
    let a = serde_json::to_string(first).expect("serializes");
    let b = serde_json::to_string(second).expect("serializes");
    t.check(a == b, || "two runs differ".into());
    t.finish(10, format!("{} bytes compared", a.len()))
}

/// Criterion 10: two runs of criteria 1-9 serialize identically.
pub fn determinism() -> Criterion {
    compare_runs(&base_criteria(), &base_criteria())
}

/// Runs one criterion by number.
pub fn criterion(id: u8) -> Option<Criterion> {
    Some(match id {
        1 => flop_invariance(),
        2 => count_monotonicity(),
        3 => two_resolutions(),
        4 => finiteness_grid(),
        5 => betti_extraction(),
        6 => measure_monotonicity(),
        7 => exceptional_loci(),
        8 => crepant_weighted_count(),
        9 => synthetic_round_trip(),
        10 => determinism(),
        _ => return None,
    })
}

pub fn run_all() -> VerifyReport {
    let mut criteria = base_criteria();
    let again = base_criteria();
    criteria.push(compare_runs(&criteria, &again));
    let passed = criteria.iter().all(|c| c.passed);
    VerifyReport {
        schema: SCHEMA,
        criteria,
        passed,
    }
}
