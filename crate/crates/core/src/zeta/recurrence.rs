use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ZetaError;
use crate::upoly::QPoly;
use crate::varieties::CountSequence;

/// `N_k = sum_i coeffs[i-1] * N_{k-i}` for `k > L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRecurrence {
    pub coeffs: Vec<BigRational>,
}

impl LinearRecurrence {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `x^L - c_1 x^{L-1} - ... - c_L`
    pub fn charpoly(&self) -> QPoly {
        let l = self.order();
        let mut c = vec![BigRational::zero(); l + 1];
        c[l] = BigRational::one();
        for (i, a) in self.coeffs.iter().enumerate() {
            c[l - 1 - i] = -a;
        }
        QPoly::new(c)
    }

    /// Reversed characteristic polynomial `1 - c_1 t - ... - c_L t^L`.
    pub fn connection(&self) -> QPoly {
        let mut c = vec![BigRational::one()];
        c.extend(self.coeffs.iter().map(|a| -a));
        QPoly::new(c)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Index of the first term (0-based) the recurrence fails to reproduce.
    pub fn first_mismatch(&self, terms: &[BigRational]) -> Option<usize> {
        let l = self.order();
        (l..terms.len()).find(|&n| {
            let pred: BigRational = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * &terms[n - 1 - i])
                .sum();
            pred != terms[n]
        })
    }
}

/// Berlekamp-Massey over the rationals. Returns the length `L` and the
/// connection polynomial coefficients `1, C_1, .., C_L` with
/// `s_n + sum C_i s_{n-i} = 0`.
pub fn berlekamp_massey(s: &[BigRational]) -> (usize, Vec<BigRational>) {
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut last = BigRational::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l {
            if let Some(ci) = c.get(i) {
                d += ci * &s[n - i];
            }
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &last;
        let mut next = c.clone();
        if next.len() < b.len() + m {
            next.resize(b.len() + m, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            b = std::mem::replace(&mut c, next);
            l = n + 1 - l;
            last = d;
            m = 1;
        } else {
            c = next;
            m += 1;
        }
    }
    c.resize(l + 1, BigRational::zero());
    (l, c)
}

pub(crate) fn rational_terms(seq: &CountSequence) -> Vec<BigRational> {
    seq.values()
        .map(|n| BigRational::from_integer(BigInt::from(n.clone())))
        .collect()
}

fn check_input(seq: &CountSequence) -> Result<(), ZetaError> {
    if !seq.is_consecutive() {
        return Err(ZetaError::InconsistentSequence(
            "k values must run 1..K without gaps".into(),
        ));
    }
    if seq.len() < 2 {
        return Err(ZetaError::InsufficientTerms {
            terms: seq.len(),
            reason: "at least two terms are required".into(),
        });
    }
    Ok(())
}

fn to_recurrence(conn: &[BigRational]) -> LinearRecurrence {
    LinearRecurrence {
        coeffs: conn[1..].iter().map(|c| -c).collect(),
    }
}

/// Minimal recurrence of the counts, accepted when `2L <= K`.
///
/// The minimal recurrence of an integer sequence with rational generating
/// function has integer coefficients, so a non-integral fit also proves that
/// the true recurrence is longer than `K/2`; both cases report
/// `InsufficientTerms`.
pub fn fit_recurrence(seq: &CountSequence) -> Result<LinearRecurrence, ZetaError> {
    check_input(seq)?;
    let terms = rational_terms(seq);
    let (l, conn) = berlekamp_massey(&terms);
    if 2 * l > terms.len() {
        return Err(ZetaError::InsufficientTerms {
            terms: terms.len(),
            reason: format!("minimal recurrence length {l} exceeds K/2"),
        });
    }
    let rec = to_recurrence(&conn);
    if !rec.is_integral() {
        return Err(ZetaError::InsufficientTerms {
            terms: terms.len(),
            reason: format!("length-{l} fit has non-integral coefficients"),
        });
    }
    if let Some(n) = rec.first_mismatch(&terms) {
        return Err(ZetaError::InconsistentSequence(format!(
            "recurrence fails at k = {}",
            n + 1
        )));
    }
    Ok(rec)
}

/// Fits a recurrence of order at most `order_hint` from the first
/// `2 * order_hint` terms and validates it on the remaining ones.
pub fn fit_recurrence_with_hint(seq: &CountSequence, order_hint: usize) -> Result<LinearRecurrence, ZetaError> {
    check_input(seq)?;
    let terms = rational_terms(seq);
    let need = 2 * order_hint;
    if terms.len() < need {
        return Err(ZetaError::InsufficientTerms {
            terms: terms.len(),
            reason: format!("order hint {order_hint} needs {need} terms"),
        });
    }
    let (l, conn) = berlekamp_massey(&terms[..need]);
    if l > order_hint {
        return Err(ZetaError::InconsistentSequence(format!(
            "minimal recurrence length {l} exceeds the hint {order_hint}"
        )));
    }
    let rec = to_recurrence(&conn);
    if let Some(n) = rec.first_mismatch(&terms) {
        return Err(ZetaError::InconsistentSequence(format!(
            "recurrence fitted from the hint fails at k = {}",
            n + 1
        )));
    }
    if !rec.is_integral() {
        return Err(ZetaError::InsufficientTerms {
            terms: terms.len(),
            reason: format!("length-{l} fit has non-integral coefficients"),
        });
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(counts: &[u64]) -> CountSequence {
        CountSequence::from_u64(2, 1, "t", counts)
    }

    #[test]
    fn projective_line() {
        let rec = fit_recurrence(&seq(&[3, 5, 9, 17])).unwrap();
        assert_eq!(rec.order(), 2);
        assert_eq!(rec.charpoly(), QPoly::from_ints([2, -3, 1]));
    }

    #[test]
    fn projective_plane_q3() {
        let counts: Vec<u64> = (1..=6).map(|k| 1 + 3u64.pow(k) + 9u64.pow(k)).collect();
        let rec = fit_recurrence(&CountSequence::from_u64(3, 1, "P2", &counts)).unwrap();
        // (x-1)(x-3)(x-9) = x^3 - 13x^2 + 39x - 27
        assert_eq!(rec.charpoly(), QPoly::from_ints([-27, 39, -13, 1]));
    }

    #[test]
    fn elliptic_q3() {
        let counts = [4, 16, 28, 64, 244, 784, 2188, 6400];
        let rec = fit_recurrence(&CountSequence::from_u64(3, 1, "E", &counts)).unwrap();
        // (x-1)(x-3)(x^2+3) = x^4 - 4x^3 + 6x^2 - 12x + 9
        assert_eq!(rec.charpoly(), QPoly::from_ints([9, -12, 6, -4, 1]));
        assert_eq!(rec.order(), 4);
    }

    #[test]
    fn rejects_short_input() {
        assert!(matches!(fit_recurrence(&seq(&[3])), Err(ZetaError::InsufficientTerms { .. })));
        // three geometric modes need six terms
        let counts: Vec<u64> = (1..=5).map(|k| 1 + 3u64.pow(k) + 9u64.pow(k)).collect();
        assert!(matches!(
            fit_recurrence(&CountSequence::from_u64(3, 1, "P2", &counts)),
            Err(ZetaError::InsufficientTerms { .. })
        ));
    }

    #[test]
    fn gaps_are_inconsistent() {
        let mut s = seq(&[3, 5, 9, 17]);
        s.counts[2].0 = 7;
        assert!(matches!(fit_recurrence(&s), Err(ZetaError::InconsistentSequence(_))));
    }

    #[test]
    fn hints() {
        let counts: Vec<u64> = (1..=8).map(|k| 1 + 2u64.pow(k)).collect();
        let rec = fit_recurrence_with_hint(&seq(&counts), 2).unwrap();
        assert_eq!(rec.order(), 2);
        assert!(matches!(
            fit_recurrence_with_hint(&seq(&counts[..3]), 2),
            Err(ZetaError::InsufficientTerms { .. })
        ));
        // hint too small for three modes
        let p2: Vec<u64> = (1..=8).map(|k| 1 + 2u64.pow(k) + 4u64.pow(k)).collect();
        assert!(fit_recurrence_with_hint(&seq(&p2), 2).is_err());
    }

    #[test]
    fn zero_sequence() {
        let rec = fit_recurrence(&seq(&[0, 0, 0])).unwrap();
        assert_eq!(rec.order(), 0);
    }
}
