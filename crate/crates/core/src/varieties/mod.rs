//! Varieties presented as disjoint strata of integer polynomial systems,
//! reduced mod `p` and counted by enumeration.

pub mod count;
mod fastpath;
pub mod polynomial;

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use count::CountOptions;
pub use fastpath::quadratic_character_fast_path;
pub use polynomial::{parse_polynomial, IntPolynomial, ParseError};

use crate::finite_field::{build_field_with_cap, extension_field, FieldError, FieldTable, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("stratum `{stratum}`: {source}")]
    Parse {
        stratum: String,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("duplicate stratum id `{0}`")]
    DuplicateStratum(String),
    #[error("equation `{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("expected variables x0..x{n} for projective dimension {n}")]
    BadProjectiveVars { n: usize },
    #[error("fast path not applicable: {0}")]
    NotApplicable(String),
    #[error("time budget exhausted while counting k = {k}")]
    TimedOut { k: u32 },
    #[error("time budget exhausted")]
    Expired,
    #[error("invalid variety file: {0}")]
    Json(String),
}

/// A locally closed piece `{eqs = 0, ineqs != 0}` of affine space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub id: String,
    pub vars: Vec<String>,
    pub equations: Vec<IntPolynomial>,
    pub inequations: Vec<IntPolynomial>,
}

impl Stratum {
    pub fn parse(id: &str, vars: &[&str], equations: &[&str], inequations: &[&str]) -> Result<Self, VarietyError> {
        StratumSpec {
            id: id.to_string(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            equations: equations.iter().map(|s| s.to_string()).collect(),
            inequations: inequations.iter().map(|s| s.to_string()).collect(),
        }
        .build()
    }

    pub fn with_equation(&self, g: IntPolynomial) -> Stratum {
        let mut s = self.clone();
        s.equations.push(g);
        s
    }

    pub fn with_inequation(&self, g: IntPolynomial) -> Stratum {
        let mut s = self.clone();
        s.inequations.push(g);
        s
    }
}

/// User-asserted metadata; never verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claims {
    pub dim: u32,
    pub smooth: bool,
    pub proper: bool,
}

/// A variety as a disjoint union of strata. Disjointness and coverage are the
/// model author's responsibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedVariety {
    pub name: String,
    pub strata: Vec<Stratum>,
    pub claims: Claims,
    pub good_primes_hint: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumSpec {
    pub id: String,
    pub vars: Vec<String>,
    #[serde(default)]
    pub equations: Vec<String>,
    #[serde(default)]
    pub inequations: Vec<String>,
}

impl StratumSpec {
    pub fn build(&self) -> Result<Stratum, VarietyError> {
        let parse = |t: &String| {
            parse_polynomial(t, &self.vars).map_err(|source| VarietyError::Parse {
                stratum: self.id.clone(),
                source,
            })
        };
        Ok(Stratum {
            id: self.id.clone(),
            vars: self.vars.clone(),
            equations: self.equations.iter().map(parse).collect::<Result<_, _>>()?,
            inequations: self.inequations.iter().map(parse).collect::<Result<_, _>>()?,
        })
    }
}

impl From<&Stratum> for StratumSpec {
    fn from(s: &Stratum) -> Self {
        StratumSpec {
            id: s.id.clone(),
            vars: s.vars.clone(),
            equations: s.equations.iter().map(|p| p.to_string()).collect(),
            inequations: s.inequations.iter().map(|p| p.to_string()).collect(),
        }
    }
}

/// On-disk form of a variety.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietySpec {
    pub name: String,
    pub strata: Vec<StratumSpec>,
    pub claims: Claims,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub good_primes_hint: Option<Vec<u64>>,
}

impl VarietySpec {
    pub fn build(&self) -> Result<StratifiedVariety, VarietyError> {
        StratifiedVariety::new(
            &self.name,
            self.strata.iter().map(StratumSpec::build).collect::<Result<_, _>>()?,
            self.claims,
            self.good_primes_hint.clone(),
        )
    }
}

impl StratifiedVariety {
    pub fn new(
        name: &str,
        strata: Vec<Stratum>,
        claims: Claims,
        good_primes_hint: Option<Vec<u64>>,
    ) -> Result<Self, VarietyError> {
        let mut seen = HashSet::new();
        for s in &strata {
            if !seen.insert(s.id.clone()) {
                return Err(VarietyError::DuplicateStratum(s.id.clone()));
            }
        }
        Ok(StratifiedVariety {
            name: name.to_string(),
            strata,
            claims,
            good_primes_hint,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, VarietyError> {
        let spec: VarietySpec = serde_json::from_str(text).map_err(|e| VarietyError::Json(e.to_string()))?;
        spec.build()
    }

    pub fn to_spec(&self) -> VarietySpec {
        VarietySpec {
            name: self.name.clone(),
            strata: self.strata.iter().map(StratumSpec::from).collect(),
            claims: self.claims,
            good_primes_hint: self.good_primes_hint.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("serializable")
    }

    pub fn is_good_prime(&self, p: u64) -> bool {
        self.good_primes_hint.as_ref().is_none_or(|h| h.contains(&p))
    }
}

/// Number of points of `s` over `field`.
pub fn count_stratum(s: &Stratum, field: &FieldTable) -> Result<BigUint, VarietyError> {
    count_stratum_with(s, field, &CountOptions::default())
}

pub fn count_stratum_with(s: &Stratum, field: &FieldTable, opts: &CountOptions) -> Result<BigUint, VarietyError> {
    let reduced = count::reduce(s, field.p());
    count::count_reduced(&reduced, field, &field.kernel(), opts)
}

/// Attached to a count when the prime is not listed in the variety's
/// `good_primes_hint`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadPrimeWarning {
    pub p: u64,
    pub variety: String,
}

impl fmt::Display for BadPrimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p = {} is not among the good primes of `{}`", self.p, self.variety)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCount {
    pub count: BigUint,
    pub warning: Option<BadPrimeWarning>,
}

/// Field `F_{p^{r k}}`, checked against `cap`.
pub fn counting_field(p: u64, r: u32, k: u32, cap: u64) -> Result<FieldTable, VarietyError> {
    let base = build_field_with_cap(p, r, cap)?;
    Ok(extension_field(&base, k, cap)?)
}

/// `|X(F_{p^{r k}})|` as the sum of the stratum counts.
pub fn count_points(v: &StratifiedVariety, p: u64, r: u32, k: u32) -> Result<PointCount, VarietyError> {
    count_points_with(v, p, r, k, DEFAULT_ENUMERATION_CAP, &CountOptions::default())
}

pub fn count_points_with(
    v: &StratifiedVariety,
    p: u64,
    r: u32,
    k: u32,
    cap: u64,
    opts: &CountOptions,
) -> Result<PointCount, VarietyError> {
    let field = counting_field(p, r, k, cap)?;
    let count = count_in_field(v, &field, opts).map_err(|e| match e {
        VarietyError::Expired => VarietyError::TimedOut { k },
        e => e,
    })?;
    let warning = (!v.is_good_prime(p)).then(|| BadPrimeWarning {
        p,
        variety: v.name.clone(),
    });
    Ok(PointCount { count, warning })
}

pub(crate) fn count_in_field(
    v: &StratifiedVariety,
    field: &FieldTable,
    opts: &CountOptions,
) -> Result<BigUint, VarietyError> {
    let kernel = field.kernel();
    let mut total = BigUint::from(0u32);
    for s in &v.strata {
        let reduced = count::reduce(s, field.p());
        total += count::count_reduced(&reduced, field, &kernel, opts)?;
    }
    Ok(total)
}

/// Counts `N_1..N_K` over `F_{q^k}`, `q = p^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSequence {
    pub p: u64,
    pub r: u32,
    pub counts: Vec<(u32, BigUint)>,
    pub variety_name: String,
}

impl CountSequence {
    pub fn new(p: u64, r: u32, variety_name: &str, counts: Vec<BigUint>) -> Self {
        CountSequence {
            p,
            r,
            counts: counts.into_iter().enumerate().map(|(i, n)| (i as u32 + 1, n)).collect(),
            variety_name: variety_name.to_string(),
        }
    }

    pub fn from_u64(p: u64, r: u32, variety_name: &str, counts: &[u64]) -> Self {
        Self::new(p, r, variety_name, counts.iter().map(|&n| BigUint::from(n)).collect())
    }

    /// Field size `q = p^r` of the base.
    pub fn q(&self) -> BigInt {
        BigInt::from(self.p).pow(self.r)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = &BigUint> {
        self.counts.iter().map(|(_, n)| n)
    }

    /// True when the `k` values run `1..=K` without gaps.
    pub fn is_consecutive(&self) -> bool {
        self.counts.iter().enumerate().all(|(i, (k, _))| *k as usize == i + 1)
    }

    pub fn truncated(&self, k: usize) -> Self {
        let mut s = self.clone();
        s.counts.truncate(k);
        s
    }
}

#[derive(Debug, Clone)]
pub struct SequenceOptions {
    pub cap: u64,
    pub count: CountOptions,
    /// Wall-clock budget for each individual `k`.
    pub per_k_budget: Option<Duration>,
}

impl Default for SequenceOptions {
    fn default() -> Self {
        SequenceOptions {
            cap: DEFAULT_ENUMERATION_CAP,
            count: CountOptions::default(),
            per_k_budget: None,
        }
    }
}

pub fn count_sequence(v: &StratifiedVariety, p: u64, r: u32, terms: u32) -> Result<CountSequence, VarietyError> {
    count_sequence_with(v, p, r, terms, &SequenceOptions::default())
}

pub fn count_sequence_with(
    v: &StratifiedVariety,
    p: u64,
    r: u32,
    terms: u32,
    opts: &SequenceOptions,
) -> Result<CountSequence, VarietyError> {
    let mut counts = Vec::with_capacity(terms as usize);
    for k in 1..=terms {
        let mut copts = opts.count.clone();
        if let Some(b) = opts.per_k_budget {
            copts.deadline = Some(Instant::now() + b);
        }
        counts.push(count_points_with(v, p, r, k, opts.cap, &copts)?.count);
    }
    Ok(CountSequence::new(p, r, &v.name, counts))
}

/// Cell decomposition of `P^n` by the first nonzero homogeneous coordinate:
/// stratum `i` sets `x0 = .. = x{i-1} = 0`, `x_i = 1` and keeps
/// `x{i+1}..x{n}` free. Equations must be homogeneous in `x0..x{n}`.
pub fn projective_presentation(
    name: &str,
    equations: &[IntPolynomial],
    n: usize,
    claims: Claims,
) -> Result<StratifiedVariety, VarietyError> {
    let vars: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
    let mut eqs = Vec::with_capacity(equations.len());
    for e in equations {
        let e = e.with_vars(&vars).ok_or(VarietyError::BadProjectiveVars { n })?;
        if !e.is_homogeneous() {
            return Err(VarietyError::NotHomogeneous(e.to_string()));
        }
        eqs.push(e);
    }
    let strata = (0..=n)
        .map(|i| {
            let local: Vec<String> = vars[i + 1..].to_vec();
            let equations = eqs
                .iter()
                .map(|e| {
                    let mut s = e.clone();
                    for j in 0..i {
                        s = s.substitute(j, &BigInt::from(0));
                    }
                    s.substitute(i, &BigInt::from(1))
                        .with_vars(&local)
                        .expect("substituted variables no longer occur")
                })
                .collect();
            Stratum {
                id: format!("x{i}=1"),
                vars: local,
                equations,
                inequations: Vec::new(),
            }
        })
        .collect();
    StratifiedVariety::new(name, strata, claims, None)
}

/// Parses homogeneous equations over `x0..xn` and presents them projectively.
pub fn projective_from_text(
    name: &str,
    equations: &[&str],
    n: usize,
    claims: Claims,
) -> Result<StratifiedVariety, VarietyError> {
    let vars: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
    let eqs = equations
        .iter()
        .map(|t| {
            parse_polynomial(t, &vars).map_err(|source| VarietyError::Parse {
                stratum: "projective".into(),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    projective_presentation(name, &eqs, n, claims)
}

#[cfg(test)]
mod tests;
