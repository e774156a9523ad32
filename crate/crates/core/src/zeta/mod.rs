//! Rational zeta functions fitted from point counts.
//!
//! From `N_1..N_K` we fit the minimal linear recurrence, recover the
//! exponents `c_i` in `N_k = sum c_i w_i^k` exactly, and assemble
//! `Z(t) = prod (1 - w_i t)^(-c_i)`. Weights `j` with `|w_i| = q^(j/2)` then
//! give the Betti numbers.

mod counting;
mod recurrence;
pub mod report;
pub mod roots;
pub mod synthetic;
mod weil;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use counting::{counting_polynomial, CountingPolynomial};
pub use recurrence::{berlekamp_massey, fit_recurrence, fit_recurrence_with_hint, LinearRecurrence};
pub use roots::{polynomial_roots, ApproxRoot};
pub use weil::{weil_structure, WeightedRoot, WeilDecomposition, WEIGHT_TOLERANCE};

use crate::upoly::QPoly;
use crate::varieties::CountSequence;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZetaError {
    #[error("insufficient terms ({terms}): {reason}; supply more terms")]
    InsufficientTerms { terms: usize, reason: String },
    #[error("inconsistent sequence: {0}")]
    InconsistentSequence(String),
    #[error("exponents are not integers: {0}")]
    NonIntegerWeights(String),
    #[error("root {root} has weight {weight:.9}, not within tolerance of an integer in [0, {max}]")]
    WeightAmbiguous { root: String, weight: f64, max: u32 },
    #[error("roots of weight {weight} carry both signs")]
    MixedSigns { weight: u32 },
    #[error("counts are not given by a polynomial in q^k of degree <= {degree}")]
    NotPolynomialCount { degree: u32 },
    #[error("sequences are over different fields or lengths")]
    MismatchedFields,
}

/// One factor `poly(t)^(-exponent)` of the zeta function; `poly(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaFactor {
    pub poly: QPoly,
    pub exponent: i64,
}

/// A characteristic root `w` with the exponent `c` of `(1 - w t)^(-c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaRoot {
    pub root: ApproxRoot,
    pub exponent: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaFunction {
    pub q: BigInt,
    pub factors: Vec<ZetaFactor>,
    pub roots: Vec<ZetaRoot>,
    /// Integer coefficients, ascending in `t`, constant term 1.
    pub numerator: QPoly,
    pub denominator: QPoly,
    /// Number of power-series coefficients checked against
    /// `exp(sum N_k t^k / k)`.
    pub series_checked: usize,
}

/// Coefficients `z_0..z_K` of `exp(sum_{k<=K} N_k t^k / k)`.
pub fn exp_series(counts: &[BigRational]) -> Vec<BigRational> {
    let mut z = vec![BigRational::one()];
    for n in 1..=counts.len() {
        let s: BigRational = (1..=n).map(|k| &counts[k - 1] * &z[n - k]).sum();
        z.push(s / BigRational::from_integer(BigInt::from(n)));
    }
    z
}

const MAX_EXPONENT_SCAN: i64 = 100_000;

fn round_near_integer(v: Complex64) -> Option<i64> {
    let r = v.re.round();
    ((v.re - r).abs() < 0.25 && v.im.abs() < 0.25 && r.abs() < 9.0e15).then_some(r as i64)
}

/// Assembles the rational zeta function from a recurrence that fits `seq`.
///
/// With `C(t)` the reversed characteristic polynomial and
/// `A(t) = C(t) * sum N_k t^k mod t^(L+1)`, the exponent at a root `w` is
/// `G(1/w)` for `G = -(A/t) / C' mod C`. Candidate integers come from a
/// numeric evaluation; each is certified by the exact gcd `gcd(C, G - v)`,
/// and the degrees of these gcds must add up to `L`.
pub fn zeta_function(rec: &LinearRecurrence, seq: &CountSequence) -> Result<ZetaFunction, ZetaError> {
    let terms = recurrence::rational_terms(seq);
    if let Some(n) = rec.first_mismatch(&terms) {
        return Err(ZetaError::InconsistentSequence(format!(
            "recurrence does not fit the sequence at k = {}",
            n + 1
        )));
    }
    let l = rec.order();
    let q = seq.q();
    let conn = rec.connection();
    if conn.degree() != Some(l) && l > 0 {
        return Err(ZetaError::NonIntegerWeights("characteristic polynomial has a zero root".into()));
    }

    let mut factors = Vec::new();
    let mut roots = Vec::new();
    if l > 0 {
        let mut s = vec![BigRational::zero()];
        s.extend(terms.iter().cloned());
        let a = (&QPoly::new(s) * &conn).truncate(l + 1);
        let a_over_t = QPoly::new(a.coeffs().iter().skip(1).cloned().collect());
        let inv = conn
            .derivative()
            .inverse_mod(&conn)
            .ok_or_else(|| ZetaError::NonIntegerWeights("repeated characteristic root".into()))?;
        let g = (&(-&a_over_t) * &inv).rem(&conn);

        // Numeric exponents are cheap but lose precision when G has large
        // coefficients; if they do not certify every root, scan all integers
        // up to the exact bound |v| <= sqrt(sum_i v_i^2).
        let mut candidates = BTreeSet::new();
        for r in polynomial_roots(&rec.charpoly()) {
            if let Some(v) = round_near_integer(g.eval_complex(r.z.inv())) {
                candidates.insert(v);
            }
        }
        let mut certified = certify(&conn, &g, &candidates);
        if certified.iter().map(|(_, f)| f.degree().unwrap_or(0)).sum::<usize>() != l {
            let p2 = trace_mod(&(&g * &g).rem(&conn), &conn);
            if !p2.is_integer() || p2.is_negative() {
                return Err(ZetaError::NonIntegerWeights(format!(
                    "sum of squared exponents is {p2}"
                )));
            }
            let bound = p2.to_integer().sqrt().to_i64().filter(|&b| b <= MAX_EXPONENT_SCAN).ok_or_else(|| {
                ZetaError::NonIntegerWeights(format!("exponents up to {} are too large to scan", p2.to_integer().sqrt()))
            })?;
            certified = certify(&conn, &g, &(-bound..=bound).collect());
        }
        let total: usize = certified.iter().map(|(_, f)| f.degree().unwrap_or(0)).sum();
        if total != l {
            return Err(ZetaError::NonIntegerWeights(format!(
                "integer exponents certified on {total} of {l} roots"
            )));
        }
        for (v, f) in certified {
            let d = f.degree().unwrap_or(0);
            for root in polynomial_roots(&f.reversed(d)) {
                roots.push(ZetaRoot { root, exponent: v });
            }
            factors.push(ZetaFactor { poly: f, exponent: v });
        }
        roots.sort_by(|a, b| {
            (a.root.z.norm(), a.root.z.arg())
                .partial_cmp(&(b.root.z.norm(), b.root.z.arg()))
                .unwrap()
        });
    }

    let mut numerator = QPoly::one();
    let mut denominator = QPoly::one();
    for f in &factors {
        let e = f.exponent.unsigned_abs() as u32;
        if f.exponent > 0 {
            denominator = &denominator * &f.poly.pow(e);
        } else {
            numerator = &numerator * &f.poly.pow(e);
        }
    }
    if !numerator.is_integral() || !denominator.is_integral() {
        return Err(ZetaError::NonIntegerWeights("numerator or denominator is not integral".into()));
    }

    let z = exp_series(&terms);
    let k = terms.len();
    let lhs = (&denominator * &QPoly::new(z)).truncate(k + 1);
    if lhs != numerator.truncate(k + 1) {
        return Err(ZetaError::NonIntegerWeights("power-series identity fails".into()));
    }

    Ok(ZetaFunction {
        q,
        factors,
        roots,
        numerator,
        denominator,
        series_checked: k + 1,
    })
}

impl ZetaFunction {
    /// `sum_i c_i w_i^k`, recomputed exactly from the factors via Newton's
    /// identities.
    pub fn count(&self, k: usize) -> BigInt {
        let mut total = BigRational::zero();
        for f in &self.factors {
            // power sums of the reciprocal roots of f (f(0) = 1)
            let sums = reciprocal_power_sums(&f.poly, k);
            total += &sums[k] * BigRational::from_integer(BigInt::from(f.exponent));
        }
        assert!(total.is_integer());
        total.to_integer()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.factors
            .iter()
            .map(|f| f.exponent * f.poly.degree().unwrap_or(0) as i64)
            .sum()
    }
}

/// Factors `gcd(C, G - v)` for each candidate `v`, normalized to constant
/// term 1; empty gcds are dropped.
fn certify(conn: &QPoly, g: &QPoly, candidates: &BTreeSet<i64>) -> Vec<(i64, QPoly)> {
    candidates
        .iter()
        .filter(|&&v| v != 0)
        .filter_map(|&v| {
            let shifted = g - &QPoly::constant(BigRational::from_integer(BigInt::from(v)));
            let f = QPoly::gcd(conn, &shifted);
            (f.degree().unwrap_or(0) > 0).then(|| {
                let c0 = f.coeff(0);
                (v, f.scale(&c0.recip()))
            })
        })
        .collect()
}

/// Trace of multiplication by `h` on `Q[t]/(c)`: the sum of `h` over the
/// roots of `c`.
fn trace_mod(h: &QPoly, c: &QPoly) -> BigRational {
    let monic = c.monic();
    let l = monic.degree().unwrap_or(0);
    // power sums s_m of the roots of the monic x^l + a_{l-1} x^{l-1} + ...
    let a = |i: usize| monic.coeff(i);
    let mut s = vec![BigRational::from_integer(BigInt::from(l))];
    for m in 1..l {
        let mut v = -a(l - m) * BigRational::from_integer(BigInt::from(m));
        for i in 1..m {
            v -= a(l - i) * &s[m - i];
        }
        s.push(v);
    }
    (0..l).map(|m| h.coeff(m) * &s[m]).sum()
}

/// Power sums `p_1..p_k` of `w_i` where `f(t) = prod (1 - w_i t)`.
fn reciprocal_power_sums(f: &QPoly, k: usize) -> Vec<BigRational> {
    // Newton: p_m = -m e_m - sum_{i=1}^{m-1} e_i p_{m-i}, with f = 1 + e_1 t + ...
    let mut p = vec![BigRational::zero(); k + 1];
    for m in 1..=k {
        let mut s = -f.coeff(m) * BigRational::from_integer(BigInt::from(m));
        for i in 1..m {
            s -= f.coeff(i) * &p[m - i];
        }
        p[m] = s;
    }
    p
}

/// Termwise verdict between two count sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CountVerdict {
    Equal,
    ALessEq,
    BLessEq,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountComparison {
    pub verdict: CountVerdict,
    /// `(k, N_k(B) - N_k(A))`
    pub margins: Vec<(u32, BigInt)>,
}

pub fn compare(a: &CountSequence, b: &CountSequence) -> Result<CountComparison, ZetaError> {
    if a.p != b.p || a.r != b.r || a.len() != b.len() {
        return Err(ZetaError::MismatchedFields);
    }
    let margins: Vec<(u32, BigInt)> = a
        .counts
        .iter()
        .zip(&b.counts)
        .map(|((k, x), (_, y))| (*k, BigInt::from(y.clone()) - BigInt::from(x.clone())))
        .collect();
    let le = margins.iter().all(|(_, d)| !d.is_negative());
    let ge = margins.iter().all(|(_, d)| !d.is_positive());
    let verdict = match (le, ge) {
        (true, true) => CountVerdict::Equal,
        (true, false) => CountVerdict::ALessEq,
        (false, true) => CountVerdict::BLessEq,
        (false, false) => CountVerdict::Incomparable,
    };
    Ok(CountComparison { verdict, margins })
}

/// Fit, assemble and decompose in one go.
pub fn analyze(
    seq: &CountSequence,
    dim: u32,
    duality: bool,
    order_hint: Option<usize>,
) -> Result<(LinearRecurrence, ZetaFunction, WeilDecomposition), ZetaError> {
    let rec = match order_hint {
        Some(h) => fit_recurrence_with_hint(seq, h)?,
        None => fit_recurrence(seq)?,
    };
    let z = zeta_function(&rec, seq)?;
    let w = weil_structure(&z, dim, duality)?;
    Ok((rec, z, w))
}

pub(crate) fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests;
