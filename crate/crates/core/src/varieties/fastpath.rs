//! Counting `y^2 = f(x)` strata with the quadratic character.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;

use super::count::{reduce, CountOptions};
use super::{Stratum, VarietyError};
use crate::finite_field::fp::inv_scalar;
use crate::finite_field::kernel::{with_arith, FieldArith};
use crate::finite_field::FieldTable;

/// `y^2 = f(x)` with `f` given by dense residues, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CurveShape {
    pub f: Vec<u64>,
}

/// Recognizes a single equation `c*y^2 + g(x)` in two occurring variables
/// where `y` appears in no other term.
pub(crate) fn recognize(eqs: &[BTreeMap<Vec<u32>, u64>], m: usize, p: u64) -> Option<CurveShape> {
    if eqs.len() != 1 || m != 2 || p == 2 {
        return None;
    }
    let eq = &eqs[0];
    for y in [1usize, 0] {
        let x = 1 - y;
        let mut lead = None;
        let mut g: BTreeMap<u32, u64> = BTreeMap::new();
        let mut ok = true;
        for (e, &c) in eq {
            match (e[y], e[x]) {
                (0, k) => {
                    g.insert(k, c);
                }
                (2, 0) => lead = Some(c),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        let Some(c) = lead.filter(|_| ok) else {
            continue;
        };
        // y^2 = -g(x)/c
        let scale = (p - inv_scalar(c, p)) % p;
        let deg = g.keys().max().copied().unwrap_or(0) as usize;
        let mut f = vec![0u64; deg + 1];
        for (k, v) in g {
            f[k as usize] = (v as u128 * scale as u128 % p as u128) as u64;
        }
        return Some(CurveShape { f });
    }
    None
}

pub(crate) fn count_shape<A: FieldArith>(
    arith: &A,
    shape: &CurveShape,
    opts: &CountOptions,
) -> Result<BigUint, VarietyError> {
    let coeffs: Vec<_> = shape.f.iter().map(|&c| arith.from_residue(c)).collect();
    let mut total: i128 = 0;
    for i in 0..arith.order() {
        if i % (1 << 14) == 0 && opts.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(VarietyError::Expired);
        }
        let x = arith.from_index(i);
        let fx = coeffs
            .iter()
            .rev()
            .fold(arith.zero(), |acc, &c| arith.add(arith.mul(acc, x), c));
        total += 1 + arith.quadratic_character(fx) as i128;
    }
    Ok(BigUint::from(total as u128))
}

/// Direct entry point; errors with `NotApplicable` unless the stratum has the
/// `y^2 = f(x)` shape over a field of odd characteristic.
pub fn quadratic_character_fast_path(stratum: &Stratum, field: &FieldTable) -> Result<BigUint, VarietyError> {
    if field.p() == 2 {
        return Err(VarietyError::NotApplicable("characteristic 2".into()));
    }
    let reduced = reduce(stratum, field.p());
    let eqs = reduced
        .equations
        .as_ref()
        .ok_or_else(|| VarietyError::NotApplicable("stratum is trivially empty".into()))?;
    if !reduced.inequations.is_empty() || reduced.used_vars + reduced.free_vars != 2 {
        return Err(VarietyError::NotApplicable("not of the form y^2 - f(x)".into()));
    }
    // A variable that does not occur plays the role of x with constant f.
    let padded: Vec<BTreeMap<Vec<u32>, u64>> = eqs
        .iter()
        .map(|t| {
            t.iter()
                .map(|(e, &c)| {
                    let mut e = e.clone();
                    e.resize(2, 0);
                    (e, c)
                })
                .collect()
        })
        .collect();
    let shape = recognize(&padded, 2, field.p())
        .ok_or_else(|| VarietyError::NotApplicable("not of the form y^2 - f(x)".into()))?;
    let kernel = field.kernel();
    with_arith!(&kernel, a => count_shape(a, &shape, &CountOptions::default()))
}
