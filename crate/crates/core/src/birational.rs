//! Discrepancy vectors: singularity classes and the K-partial order.
//!
//! A divisor `E_i` with `rK_Y = phi^* rK_X + sum e_i E_i` has discrepancy
//! `a_i = e_i / r`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BirationalError {
    #[error("divisor sets differ: {0:?} vs {1:?}")]
    DivisorSetMismatch(Vec<String>, Vec<String>),
    #[error("index {new} is not a multiple of {old}")]
    NotMultiple { old: u32, new: u32 },
    #[error("index r must be positive")]
    ZeroIndex,
    #[error("duplicate divisor name {0}")]
    DuplicateName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyEntry {
    pub name: String,
    pub e: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyVector {
    pub r: u32,
    pub entries: Vec<DiscrepancyEntry>,
}

impl DiscrepancyVector {
    pub fn new(r: u32, entries: &[(&str, i64)]) -> Result<Self, BirationalError> {
        let v = DiscrepancyVector {
            r,
            entries: entries
                .iter()
                .map(|(n, e)| DiscrepancyEntry {
                    name: n.to_string(),
                    e: *e,
                })
                .collect(),
        };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<(), BirationalError> {
        if self.r == 0 {
            return Err(BirationalError::ZeroIndex);
        }
        let mut seen = BTreeSet::new();
        for e in &self.entries {
            if !seen.insert(&e.name) {
                return Err(BirationalError::DuplicateName(e.name.clone()));
            }
        }
        Ok(())
    }

    fn names(&self) -> BTreeSet<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    fn by_name(&self) -> BTreeMap<&str, i64> {
        self.entries.iter().map(|e| (e.name.as_str(), e.e)).collect()
    }
}

/// Strongest applicable label; `Terminal` implies `Canonical` implies
/// `LogTerminal`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Singularity {
    Terminal,
    Canonical,
    LogTerminal,
    NotLogTerminal,
}

impl Singularity {
    pub fn is_terminal(self) -> bool {
        self == Singularity::Terminal
    }

    pub fn is_canonical(self) -> bool {
        self <= Singularity::Canonical
    }

    pub fn is_log_terminal(self) -> bool {
        self <= Singularity::LogTerminal
    }
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Singularity::Terminal => "Terminal",
            Singularity::Canonical => "Canonical",
            Singularity::LogTerminal => "LogTerminal",
            Singularity::NotLogTerminal => "NotLogTerminal",
        };
        f.write_str(s)
    }
}

/// Classifies by the discrepancies `e_i / r`. No divisors means smooth,
/// hence terminal.
pub fn classify(d: &DiscrepancyVector) -> Singularity {
    let r = d.r as i64;
    if d.entries.iter().all(|e| e.e > 0) {
        Singularity::Terminal
    } else if d.entries.iter().all(|e| e.e >= 0) {
        Singularity::Canonical
    } else if d.entries.iter().all(|e| e.e > -r) {
        Singularity::LogTerminal
    } else {
        Singularity::NotLogTerminal
    }
}

/// Rewrites `d` at index `r_new`, scaling each `e` by `r_new / r`.
pub fn rescale_index(d: &DiscrepancyVector, r_new: u32) -> Result<DiscrepancyVector, BirationalError> {
    if r_new == 0 || d.r == 0 {
        return Err(BirationalError::ZeroIndex);
    }
    if r_new % d.r != 0 {
        return Err(BirationalError::NotMultiple { old: d.r, new: r_new });
    }
    let m = (r_new / d.r) as i64;
    Ok(DiscrepancyVector {
        r: r_new,
        entries: d
            .entries
            .iter()
            .map(|e| DiscrepancyEntry {
                name: e.name.clone(),
                e: e.e * m,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KOrder {
    XLessEq,
    Equal,
    XGreaterEq,
    Incomparable,
}

impl fmt::Display for KOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KOrder::XLessEq => "XLessEq",
            KOrder::Equal => "Equal (K-equivalent)",
            KOrder::XGreaterEq => "XGreaterEq",
            KOrder::Incomparable => "Incomparable",
        };
        f.write_str(s)
    }
}

/// Componentwise comparison of `E` (for `X`) and `E'` (for `X'`) on a common
/// resolution. The order reverses: `E >= E'` means `X <=_K X'`.
pub fn compare_k_order(e: &DiscrepancyVector, e_prime: &DiscrepancyVector) -> Result<KOrder, BirationalError> {
    e.validate()?;
    e_prime.validate()?;
    if e.names() != e_prime.names() {
        return Err(BirationalError::DivisorSetMismatch(
            e.names().into_iter().map(String::from).collect(),
            e_prime.names().into_iter().map(String::from).collect(),
        ));
    }
    let r = e.r.lcm(&e_prime.r);
    let (a, b) = (rescale_index(e, r)?, rescale_index(e_prime, r)?);
    let (a, b) = (a.by_name(), b.by_name());
    let (mut ge, mut le) = (true, true);
    for (name, x) in &a {
        match x.cmp(&b[name]) {
            Ordering::Greater => le = false,
            Ordering::Less => ge = false,
            Ordering::Equal => {}
        }
    }
    Ok(match (ge, le) {
        (true, true) => KOrder::Equal,
        (true, false) => KOrder::XLessEq,
        (false, true) => KOrder::XGreaterEq,
        (false, false) => KOrder::Incomparable,
    })
}
