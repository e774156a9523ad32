//! Exhaustive point counting over a stratum.
//!
//! Polynomials are reduced mod `p`, compiled into nested Horner form over the
//! variables that actually occur, and evaluated at every point of
//! `F_Q^m`. Variables that occur in no polynomial contribute a factor `Q`
//! each. The outermost variable's range is split into chunks that are
//! counted independently and summed.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::{Stratum, VarietyError};
use crate::finite_field::kernel::{with_arith, Elem, FieldArith};
use crate::finite_field::{FieldTable, Kernel};

/// Knobs for a single count.
#[derive(Debug, Clone)]
pub struct CountOptions {
    pub workers: usize,
    /// Abort with `TimedOut` once this instant has passed.
    pub deadline: Option<Instant>,
    /// Use the quadratic-character path for `y^2 = f(x)` strata.
    pub fast_path: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            workers: 1,
            deadline: None,
            fast_path: true,
        }
    }
}

#[derive(Debug)]
enum Horner {
    Const(Elem),
    Nested { var: usize, coeffs: Vec<Horner> },
}

impl Horner {
    fn build<A: FieldArith>(arith: &A, terms: &[(Vec<u32>, u64)], var: usize, nvars: usize) -> Horner {
        if var == nvars || terms.iter().all(|(e, _)| e[var..].iter().all(|&k| k == 0)) {
            let c = terms.iter().fold(arith.zero(), |acc, (_, c)| arith.add(acc, arith.from_residue(*c)));
            return Horner::Const(c);
        }
        if terms.iter().all(|(e, _)| e[var] == 0) {
            return Horner::build(arith, terms, var + 1, nvars);
        }
        let max = terms.iter().map(|(e, _)| e[var]).max().unwrap() as usize;
        let mut groups: Vec<Vec<(Vec<u32>, u64)>> = vec![Vec::new(); max + 1];
        for (e, c) in terms {
            groups[e[var] as usize].push((e.clone(), *c));
        }
        let coeffs = groups
            .iter()
            .map(|g| Horner::build(arith, g, var + 1, nvars))
            .collect();
        Horner::Nested { var, coeffs }
    }

    #[inline]
    fn eval<A: FieldArith>(&self, arith: &A, point: &[Elem]) -> Elem {
        match self {
            Horner::Const(c) => *c,
            Horner::Nested { var, coeffs } => {
                let x = point[*var];
                let mut acc = coeffs[coeffs.len() - 1].eval(arith, point);
                for c in coeffs[..coeffs.len() - 1].iter().rev() {
                    acc = arith.add(arith.mul(acc, x), c.eval(arith, point));
                }
                acc
            }
        }
    }
}

/// A stratum after reduction mod `p`, restricted to occurring variables.
pub(crate) struct Reduced {
    /// `None` when a constant equation or inequation already decides the
    /// stratum is empty.
    pub equations: Option<Vec<BTreeMap<Vec<u32>, u64>>>,
    pub inequations: Vec<BTreeMap<Vec<u32>, u64>>,
    pub used_vars: usize,
    pub free_vars: usize,
}

fn restrict(poly: &BTreeMap<Vec<u32>, u64>, used: &[usize]) -> BTreeMap<Vec<u32>, u64> {
    poly.iter()
        .map(|(e, c)| (used.iter().map(|&i| e[i]).collect(), *c))
        .collect()
}

fn is_constant(poly: &BTreeMap<Vec<u32>, u64>) -> bool {
    poly.keys().all(|e| e.iter().all(|&k| k == 0))
}

pub(crate) fn reduce(stratum: &Stratum, p: u64) -> Reduced {
    let nvars = stratum.vars.len();
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    let mut empty = false;
    for poly in &stratum.equations {
        let r = poly.reduce_mod(p);
        if r.is_empty() {
            continue;
        }
        if is_constant(&r) {
            empty = true;
        }
        eqs.push(r);
    }
    for poly in &stratum.inequations {
        let r = poly.reduce_mod(p);
        if r.is_empty() {
            empty = true;
            continue;
        }
        if is_constant(&r) {
            continue;
        }
        ineqs.push(r);
    }
    let used: Vec<usize> = (0..nvars)
        .filter(|&i| eqs.iter().chain(&ineqs).any(|t| t.keys().any(|e| e[i] > 0)))
        .collect();
    Reduced {
        equations: (!empty).then(|| eqs.iter().map(|t| restrict(t, &used)).collect()),
        inequations: ineqs.iter().map(|t| restrict(t, &used)).collect(),
        used_vars: used.len(),
        free_vars: nvars - used.len(),
    }
}

pub(crate) fn count_reduced(
    reduced: &Reduced,
    field: &FieldTable,
    kernel: &Kernel,
    opts: &CountOptions,
) -> Result<BigUint, VarietyError> {
    let Some(eqs) = &reduced.equations else {
        return Ok(BigUint::from(0u32));
    };
    let q = field.order();
    let free = BigUint::from(q).pow(reduced.free_vars as u32);
    if reduced.used_vars == 0 {
        return Ok(free);
    }
    if opts.fast_path && field.p() != 2 && reduced.inequations.is_empty() {
        if let Some(shape) = super::fastpath::recognize(eqs, reduced.used_vars, field.p()) {
            let n = with_arith!(kernel, a => super::fastpath::count_shape(a, &shape, opts))?;
            return Ok(n * free);
        }
    }
    let n = with_arith!(kernel, a => enumerate(a, eqs, &reduced.inequations, reduced.used_vars, opts))?;
    Ok(BigUint::from(n) * free)
}

const DEADLINE_STRIDE: u64 = 1 << 14;

fn enumerate<A: FieldArith>(
    arith: &A,
    eqs: &[BTreeMap<Vec<u32>, u64>],
    ineqs: &[BTreeMap<Vec<u32>, u64>],
    m: usize,
    opts: &CountOptions,
) -> Result<u128, VarietyError> {
    let compile = |t: &BTreeMap<Vec<u32>, u64>| {
        let terms: Vec<(Vec<u32>, u64)> = t.iter().map(|(e, c)| (e.clone(), *c)).collect();
        Horner::build(arith, &terms, 0, m)
    };
    let eqs: Vec<Horner> = eqs.iter().map(compile).collect();
    let ineqs: Vec<Horner> = ineqs.iter().map(compile).collect();
    let q = arith.order();
    let expired = AtomicBool::new(false);

    let chunk_count = (opts.workers.max(1) as u64 * 8).min(q);
    let bounds: Vec<(u64, u64)> = (0..chunk_count)
        .map(|i| (q * i / chunk_count, q * (i + 1) / chunk_count))
        .collect();

    let count_chunk = |&(lo, hi): &(u64, u64)| -> u128 {
        let mut idx = vec![0u64; m];
        let mut point = vec![arith.zero(); m];
        idx[0] = lo;
        point[0] = arith.from_index(lo);
        let mut hits: u128 = 0;
        let mut ticks: u64 = 0;
        loop {
            if eqs.iter().all(|h| arith.is_zero(h.eval(arith, &point)))
                && ineqs.iter().all(|h| !arith.is_zero(h.eval(arith, &point)))
            {
                hits += 1;
            }
            ticks += 1;
            if ticks % DEADLINE_STRIDE == 0 {
                if expired.load(Ordering::Relaxed) {
                    return hits;
                }
                if opts.deadline.is_some_and(|d| Instant::now() > d) {
                    expired.store(true, Ordering::Relaxed);
                    return hits;
                }
            }
            // odometer, last variable fastest
            let mut v = m;
            loop {
                if v == 0 {
                    return hits;
                }
                v -= 1;
                idx[v] += 1;
                let limit = if v == 0 { hi } else { q };
                if idx[v] < limit {
                    point[v] = arith.from_index(idx[v]);
                    break;
                }
                if v == 0 {
                    return hits;
                }
                idx[v] = 0;
                point[v] = arith.zero();
            }
        }
    };

    let total: u128 = if opts.workers <= 1 {
        bounds.iter().map(count_chunk).sum()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .expect("thread pool");
        pool.install(|| bounds.par_iter().map(count_chunk).sum())
    };
    if expired.load(Ordering::Relaxed) {
        return Err(VarietyError::Expired);
    }
    Ok(total)
}
