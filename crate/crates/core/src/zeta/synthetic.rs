//! Synthetic count sequences with a planted Weil structure, for property
//! tests and the acceptance suite.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, ToPrimitive};
use rand::Rng;

use crate::varieties::CountSequence;

/// A planted Frobenius factor: `x - a` when `b` is `None`, otherwise
/// `x^2 - a x + b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlantedFactor {
    pub weight: u32,
    pub a: i64,
    pub b: Option<BigInt>,
}

impl PlantedFactor {
    fn degree(&self) -> usize {
        if self.b.is_some() {
            2
        } else {
            1
        }
    }

    /// Power sums `s_1..s_k` of the roots.
    fn power_sums(&self, k: usize) -> Vec<BigInt> {
        let a = BigInt::from(self.a);
        match &self.b {
            None => (1..=k as u32).map(|i| Pow::pow(&a, i)).collect(),
            Some(b) => {
                // s_i = a s_{i-1} - b s_{i-2}, s_0 = 2
                let mut s = vec![BigInt::from(2), a.clone()];
                for i in 2..=k {
                    let next = &a * &s[i - 1] - b * &s[i - 2];
                    s.push(next);
                }
                s.into_iter().skip(1).take(k).collect()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticWeil {
    pub q: u64,
    pub n: u32,
    /// Factor with its multiplicity; the zeta exponent is
    /// `(-1)^weight * multiplicity`.
    pub factors: BTreeMap<PlantedFactor, u32>,
}

impl SyntheticWeil {
    pub fn betti(&self) -> Vec<u64> {
        let mut b = vec![0u64; 2 * self.n as usize + 1];
        for (f, m) in &self.factors {
            b[f.weight as usize] += f.degree() as u64 * *m as u64;
        }
        b
    }

    /// Length of the minimal recurrence: the number of distinct roots.
    pub fn order(&self) -> usize {
        self.factors.keys().map(PlantedFactor::degree).sum()
    }

    /// `N_1..N_k`, or `None` if some count is negative.
    pub fn counts(&self, k: usize) -> Option<Vec<BigUint>> {
        let mut total = vec![BigInt::from(0); k];
        for (f, m) in &self.factors {
            let c = if f.weight % 2 == 0 { *m as i64 } else { -(*m as i64) };
            for (t, s) in total.iter_mut().zip(f.power_sums(k)) {
                *t += s * c;
            }
        }
        total.into_iter().map(|t| t.to_biguint()).collect()
    }

    pub fn sequence(&self, k: usize) -> Option<CountSequence> {
        let p = smallest_prime_factor(self.q);
        let r = (self.q as f64).log(p as f64).round() as u32;
        Some(CountSequence::new(p, r, "synthetic", self.counts(k)?))
    }
}

fn smallest_prime_factor(q: u64) -> u64 {
    (2..=q).find(|d| q % d == 0).unwrap()
}

fn exact_sqrt(x: &BigInt) -> Option<BigInt> {
    let s = x.sqrt();
    (&s * &s == *x).then_some(s)
}

/// Terms guaranteed non-negative by [`random_weil`], as a multiple of the
/// recurrence order plus a margin.
pub fn safe_terms(order: usize) -> usize {
    2 * order + 4
}

/// Draws a random Weil structure of dimension `n` over `F_q`. Weights below
/// `2n` get up to `max_factors` factors of multiplicity up to `max_mult`; the
/// top weight carries `x - q^n` with the least multiplicity that keeps the
/// first [`safe_terms`] counts non-negative.
pub fn random_weil<R: Rng>(rng: &mut R, q: u64, n: u32, max_factors: u32, max_mult: u32) -> SyntheticWeil {
    let mut factors: BTreeMap<PlantedFactor, u32> = BTreeMap::new();
    for j in 0..2 * n {
        let qj: BigInt = Pow::pow(&BigInt::from(q), j);
        let half = exact_sqrt(&qj);
        for _ in 0..rng.gen_range(0..=max_factors) {
            let m = rng.gen_range(1..=max_mult);
            let linear = half.is_some() && rng.gen_bool(0.5);
            let f = if linear {
                let h = half.as_ref().unwrap().to_i64().unwrap();
                PlantedFactor {
                    weight: j,
                    a: if rng.gen_bool(0.5) { h } else { -h },
                    b: None,
                }
            } else {
                // a^2 < 4 q^j
                let four = &qj * 4u32;
                let mut bound = four.sqrt();
                if &bound * &bound == four {
                    bound -= 1;
                }
                let bound = bound.to_i64().unwrap();
                PlantedFactor {
                    weight: j,
                    a: rng.gen_range(-bound..=bound),
                    b: Some(qj.clone()),
                }
            };
            *factors.entry(f).or_default() += m;
        }
    }
    let top = PlantedFactor {
        weight: 2 * n,
        a: Pow::pow(&BigInt::from(q), n).to_i64().unwrap(),
        b: None,
    };
    factors.insert(top.clone(), 1);
    let mut w = SyntheticWeil { q, n, factors };
    let k = safe_terms(w.order());
    while w.counts(k).is_none() {
        *w.factors.get_mut(&top).unwrap() += 1;
    }
    w
}
