use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use super::ZetaError;
use crate::varieties::CountSequence;

/// `N_k = sum_m a_m (q^k)^m`, written as a polynomial in `T = q^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingPolynomial {
    /// Nonzero coefficients by degree.
    pub coeffs: BTreeMap<u32, BigInt>,
}

impl CountingPolynomial {
    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs.iter().map(|(m, a)| a * Pow::pow(t, *m)).sum()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }
}

impl fmt::Display for CountingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, a)) in self.coeffs.iter().rev().enumerate() {
            let mag = a.abs();
            match (i, a.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = match m {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{m}"),
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Solves `A x = b` exactly; `None` if `A` is singular.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
            let d = &f * &b[col];
            b[r] -= d;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for r in (0..n).rev() {
        let mut s = b[r].clone();
        for c in r + 1..n {
            s -= &a[r][c] * &x[c];
        }
        x[r] = s / &a[r][r];
    }
    Some(x)
}

/// Exact fit of `N_k` by a polynomial in `q^k` of degree at most
/// `degree_bound`, from the first `degree_bound + 1` terms, validated on the
/// rest. At least `degree_bound + 2` terms are required.
pub fn counting_polynomial(seq: &CountSequence, degree_bound: u32) -> Result<CountingPolynomial, ZetaError> {
    if !seq.is_consecutive() {
        return Err(ZetaError::InconsistentSequence("k values must run 1..K without gaps".into()));
    }
    let d = degree_bound as usize;
    if seq.len() < d + 2 {
        return Err(ZetaError::InsufficientTerms {
            terms: seq.len(),
            reason: format!("a degree-{degree_bound} fit needs {} terms", d + 2),
        });
    }
    let q = seq.q();
    let values: Vec<BigInt> = seq.values().map(|n| BigInt::from(n.clone())).collect();
    let rows: Vec<Vec<BigRational>> = (1..=d + 1)
        .map(|k| {
            let t: BigInt = Pow::pow(&q, k as u32);
            (0..=d)
                .map(|m| BigRational::from_integer(Pow::pow(&t, m as u32)))
                .collect()
        })
        .collect();
    let rhs = values[..=d].iter().map(|v| BigRational::from_integer(v.clone())).collect();
    let not_poly = ZetaError::NotPolynomialCount { degree: degree_bound };
    let x = solve(rows, rhs).ok_or_else(|| not_poly.clone())?;
    if !x.iter().all(|c| c.is_integer()) {
        return Err(not_poly);
    }
    let poly = CountingPolynomial {
        coeffs: x
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m as u32, c.to_integer()))
            .collect(),
    };
    for (k, v) in values.iter().enumerate() {
        if &poly.eval(&Pow::pow(&q, k as u32 + 1)) != v {
            return Err(not_poly);
        }
    }
    Ok(poly)
}
