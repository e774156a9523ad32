use num_bigint::BigInt;

use super::{to_f64, ApproxRoot, ZetaError, ZetaFunction};

/// Allowed distance of `2 log_q |w|` from an integer weight.
pub const WEIGHT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedRoot {
    pub root: ApproxRoot,
    /// `2 log_q |w|` as computed, before rounding.
    pub raw_weight: f64,
    pub weight: u32,
    pub multiplicity: u32,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeilDecomposition {
    pub n: u32,
    pub q: BigInt,
    pub roots: Vec<WeightedRoot>,
    /// `h^0..h^{2n}`
    pub betti: Vec<u64>,
    pub euler: i64,
    /// Every weight-`j` root has sign `(-1)^j`, and Poincaré duality holds
    /// when it was requested.
    pub purity_ok: bool,
    /// `None` when duality was not checked.
    pub duality_ok: Option<bool>,
}

fn weight_of(root: &ApproxRoot, ln_q: f64) -> f64 {
    2.0 * root.z.norm().ln() / ln_q
}

/// Sorts roots into weights `j` with `|w| = q^(j/2)` and reads off Betti
/// numbers. `duality` asks for the check `h^j = h^(2n-j)`, which only makes
/// sense for smooth proper varieties.
pub fn weil_structure(z: &ZetaFunction, n: u32, duality: bool) -> Result<WeilDecomposition, ZetaError> {
    let ln_q = to_f64(&z.q).ln();
    let max = 2 * n;
    let mut roots = Vec::with_capacity(z.roots.len());
    let mut signs: Vec<Option<i8>> = vec![None; max as usize + 1];
    for r in &z.roots {
        let raw = weight_of(&r.root, ln_q);
        let j = raw.round();
        if raw.is_nan() || (raw - j).abs() > WEIGHT_TOLERANCE || j < 0.0 || j > max as f64 {
            return Err(ZetaError::WeightAmbiguous {
                root: format!("{:.12}{:+.12}i", r.root.z.re, r.root.z.im),
                weight: raw,
                max,
            });
        }
        let weight = j as u32;
        let sign: i8 = if r.exponent > 0 { 1 } else { -1 };
        match signs[weight as usize] {
            Some(s) if s != sign => return Err(ZetaError::MixedSigns { weight }),
            _ => signs[weight as usize] = Some(sign),
        }
        roots.push(WeightedRoot {
            root: r.root,
            raw_weight: raw,
            weight,
            multiplicity: r.exponent.unsigned_abs() as u32,
            sign,
        });
    }

    let mut betti = vec![0u64; max as usize + 1];
    for r in &roots {
        betti[r.weight as usize] += r.multiplicity as u64;
    }
    let euler: i64 = betti
        .iter()
        .enumerate()
        .map(|(j, &h)| if j % 2 == 0 { h as i64 } else { -(h as i64) })
        .sum();
    let signed: i64 = roots.iter().map(|r| r.sign as i64 * r.multiplicity as i64).sum();
    let mut purity_ok = signs
        .iter()
        .enumerate()
        .all(|(j, s)| s.is_none_or(|s| s == if j % 2 == 0 { 1 } else { -1 }));
    if purity_ok {
        assert_eq!(euler, signed);
    }
    let duality_ok = duality.then(|| (0..=max as usize).all(|j| betti[j] == betti[max as usize - j]));
    if duality_ok == Some(false) {
        purity_ok = false;
    }
    Ok(WeilDecomposition {
        n,
        q: z.q.clone(),
        roots,
        betti,
        euler,
        purity_ok,
        duality_ok,
    })
}
