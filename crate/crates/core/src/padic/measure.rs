use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ExtendedRational, ExtendedRationalSpec, PadicError, ResolutionModel};
use crate::birational::{compare_k_order, KOrder};
use crate::finite_field::DEFAULT_ENUMERATION_CAP;
use crate::varieties::{count_stratum_with, counting_field, BadPrimeWarning, CountOptions, VarietyError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureResult {
    Finite(ExtendedRational),
    Infinite,
}

impl MeasureResult {
    pub fn finite(&self) -> Option<&ExtendedRational> {
        match self {
            MeasureResult::Finite(v) => Some(v),
            MeasureResult::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, MeasureResult::Finite(_))
    }

    /// Orders with `Infinite` above every finite value.
    pub fn cmp_value(&self, o: &Self) -> Result<Ordering, PadicError> {
        match (self, o) {
            (MeasureResult::Finite(a), MeasureResult::Finite(b)) => a.cmp_value(b),
            (MeasureResult::Finite(_), MeasureResult::Infinite) => Ok(Ordering::Less),
            (MeasureResult::Infinite, MeasureResult::Finite(_)) => Ok(Ordering::Greater),
            (MeasureResult::Infinite, MeasureResult::Infinite) => Ok(Ordering::Equal),
        }
    }
}

fn log_terminal(e: i64, r: u32) -> bool {
    e > -(r as i64)
}

/// `int_{pR} |t|^(e/r) dt` normalized over `R`:
/// `(q-1) q^(e/r) / (q^(e/r+1) - 1)`, infinite iff `e/r <= -1`.
pub fn local_integral(e: i64, r: u32, q: &BigInt) -> MeasureResult {
    if !log_terminal(e, r) {
        return MeasureResult::Infinite;
    }
    let ue = ExtendedRational::u_pow(r, q, e);
    let qm1 = ExtendedRational::from_rational(r, q.clone(), BigRational::from_integer(q - 1));
    let one = ExtendedRational::from_int(r, q, 1);
    let denom = &ExtendedRational::u_pow(r, q, e + r as i64) - &one;
    let value = (&qm1 * &ue).checked_div(&denom).expect("q^(e/r+1) != 1 when e/r > -1");
    MeasureResult::Finite(value)
}

/// Contribution of one normal coordinate along a divisor relative to the
/// off-divisor factor `1/q`: `(q-1) / (q^(e/r+1) - 1)`.
pub fn fiber_factor(e: i64, r: u32, q: &BigInt) -> Result<ExtendedRational, PadicError> {
    if !log_terminal(e, r) {
        return Err(PadicError::NotLogTerminal { e, r });
    }
    let qm1 = ExtendedRational::from_rational(r, q.clone(), BigRational::from_integer(q - 1));
    let denom = &ExtendedRational::u_pow(r, q, e + r as i64) - &ExtendedRational::from_int(r, q, 1);
    qm1.checked_div(&denom)
}

/// Points of one stratum lying on exactly the divisors in `divisors`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasurePiece {
    pub stratum: String,
    pub divisors: Vec<String>,
    #[serde(serialize_with = "as_decimal")]
    pub count: BigUint,
}

fn as_decimal<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SncMeasure {
    pub q: BigInt,
    pub result: MeasureResult,
    pub pieces: Vec<MeasurePiece>,
    pub warning: Option<BadPrimeWarning>,
}

pub fn snc_measure(model: &ResolutionModel, p: u64, r_ext: u32, k: u32) -> Result<SncMeasure, PadicError> {
    snc_measure_with(model, p, r_ext, k, DEFAULT_ENUMERATION_CAP, &CountOptions::default())
}

/// `q^-n sum_J |E_J°(F_q)| prod_{i in J} fiber_factor(e_i)` over
/// `F_q = F_{p^(r_ext k)}`, where `E_J°` is the set of points on exactly the
/// divisors `J`. Within each stratum the open pieces are recovered from the
/// closed intersections by Möbius inversion over subsets.
pub fn snc_measure_with(
    model: &ResolutionModel,
    p: u64,
    r_ext: u32,
    k: u32,
    cap: u64,
    opts: &CountOptions,
) -> Result<SncMeasure, PadicError> {
    let field = counting_field(p, r_ext, k, cap)?;
    let q = BigInt::from(field.order());
    let mut pieces = Vec::new();
    let mut open_counts: Vec<(Vec<usize>, BigUint)> = Vec::new();
    for stratum in &model.upstairs.strata {
        let meeting: Vec<usize> = (0..model.divisors.len())
            .filter(|&i| model.divisors[i].meets(&stratum.id))
            .collect();
        let d = meeting.len();
        let mut closed = Vec::with_capacity(1 << d);
        for mask in 0u32..(1 << d) {
            let mut s = stratum.clone();
            for (bit, &i) in meeting.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    s.equations.extend(model.divisors[i].membership[&stratum.id].iter().cloned());
                }
            }
            let c = count_stratum_with(&s, &field, opts).map_err(|e| match e {
                VarietyError::Expired => VarietyError::TimedOut { k },
                e => e,
            })?;
            closed.push(BigInt::from(c));
        }
        for j in 0u32..(1 << d) {
            let mut open = BigInt::zero();
            for kk in 0u32..(1 << d) {
                if kk & j == j {
                    let sign = (kk ^ j).count_ones() % 2;
                    if sign == 0 {
                        open += &closed[kk as usize];
                    } else {
                        open -= &closed[kk as usize];
                    }
                }
            }
            assert!(!open.is_negative(), "open divisor strata have non-negative counts");
            if open.is_zero() {
                continue;
            }
            let set: Vec<usize> = (0..d).filter(|b| j & (1 << b) != 0).map(|b| meeting[b]).collect();
            let count = open.to_biguint().unwrap();
            pieces.push(MeasurePiece {
                stratum: stratum.id.clone(),
                divisors: set.iter().map(|&i| model.divisors[i].name.clone()).collect(),
                count: count.clone(),
            });
            open_counts.push((set, count));
        }
    }
    let warning = (!model.upstairs.is_good_prime(p)).then(|| BadPrimeWarning {
        p,
        variety: model.upstairs.name.clone(),
    });
    let infinite = open_counts
        .iter()
        .any(|(set, _)| set.iter().any(|&i| !log_terminal(model.divisors[i].e, model.r)));
    if infinite {
        return Ok(SncMeasure {
            q,
            result: MeasureResult::Infinite,
            pieces,
            warning,
        });
    }
    let r = model.r;
    let factors: Vec<Option<ExtendedRational>> = model
        .divisors
        .iter()
        .map(|d| fiber_factor(d.e, r, &q).ok())
        .collect();
    let mut total = ExtendedRational::from_int(r, &q, 0);
    for (set, count) in &open_counts {
        let mut term = ExtendedRational::from_rational(r, q.clone(), BigRational::from_integer(BigInt::from(count.clone())));
        for &i in set {
            term = &term * factors[i].as_ref().expect("log-terminal divisors have fiber factors");
        }
        total = &total + &term;
    }
    let scale = ExtendedRational::from_rational(r, q.clone(), BigRational::new(BigInt::one(), Pow::pow(&q, model.n)));
    Ok(SncMeasure {
        q,
        result: MeasureResult::Finite(&total * &scale),
        pieces,
        warning,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureVerdict {
    MeasureLessEq,
    MeasureEqual,
    MeasureGreaterEq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureComparison {
    pub order: KOrder,
    pub verdict: MeasureVerdict,
    pub a: SncMeasure,
    pub b: SncMeasure,
}

/// Compares two models on the same smooth upstairs data that differ only in
/// their discrepancies. `A <=_K B` must give `m_A <= m_B`, and K-equivalent
/// models equal measures; a violation is reported as an error.
pub fn measure_compare(
    a: &ResolutionModel,
    b: &ResolutionModel,
    p: u64,
    r_ext: u32,
    k: u32,
    cap: u64,
    opts: &CountOptions,
) -> Result<MeasureComparison, PadicError> {
    if !a.same_geometry(b) {
        return Err(PadicError::ModelMismatch(format!("`{}` vs `{}`", a.name, b.name)));
    }
    let order = compare_k_order(&a.discrepancies(), &b.discrepancies())?;
    if order == KOrder::Incomparable {
        return Err(PadicError::Incomparable);
    }
    let ma = snc_measure_with(a, p, r_ext, k, cap, opts)?;
    let mb = snc_measure_with(b, p, r_ext, k, cap, opts)?;
    let cmp = ma.result.cmp_value(&mb.result)?;
    let verdict = match order {
        KOrder::XLessEq => MeasureVerdict::MeasureLessEq,
        KOrder::XGreaterEq => MeasureVerdict::MeasureGreaterEq,
        _ => MeasureVerdict::MeasureEqual,
    };
    let holds = match verdict {
        MeasureVerdict::MeasureLessEq => cmp != Ordering::Greater,
        MeasureVerdict::MeasureGreaterEq => cmp != Ordering::Less,
        MeasureVerdict::MeasureEqual => cmp == Ordering::Equal,
    };
    if !holds {
        return Err(PadicError::BadModel(format!(
            "measures of `{}` and `{}` contradict their K-order {order}",
            a.name, b.name
        )));
    }
    Ok(MeasureComparison { order, verdict, a: ma, b: mb })
}

/// The `measure-report/1` JSON document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasureReport {
    pub schema: &'static str,
    pub model: String,
    pub p: u64,
    pub r_ext: u32,
    pub k: u32,
    pub q: String,
    pub r: u32,
    pub result: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<ExtendedRationalSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
    pub value_field_irreducible: bool,
    pub pieces: Vec<MeasurePiece>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl MeasureReport {
    pub fn new(model: &ResolutionModel, p: u64, r_ext: u32, k: u32, m: &SncMeasure) -> Self {
        let v = m.result.finite();
        MeasureReport {
            schema: "measure-report/1",
            model: model.name.clone(),
            p,
            r_ext,
            k,
            q: m.q.to_string(),
            r: model.r,
            result: if v.is_some() { "finite" } else { "infinite" },
            value: v.map(ExtendedRationalSpec::from),
            symbolic: v.map(|x| x.symbolic()),
            decimal: v.map(|x| x.to_decimal(30)),
            value_field_irreducible: super::binomial_is_irreducible(model.r, &m.q),
            pieces: m.pieces.clone(),
            warning: m.warning.as_ref().map(|w| w.to_string()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests;
