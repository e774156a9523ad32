use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::PadicError;
use crate::birational::{DiscrepancyEntry, DiscrepancyVector};
use crate::varieties::{parse_polynomial, IntPolynomial, StratifiedVariety, VarietyError, VarietySpec};

/// An exceptional divisor on the smooth model. Within each listed stratum it
/// is the common zero set of its polynomials; unlisted strata (or an empty
/// list) are missed entirely. Use `["0"]` for a divisor containing a whole
/// stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDivisor {
    pub name: String,
    pub e: i64,
    pub membership: BTreeMap<String, Vec<IntPolynomial>>,
}

impl ModelDivisor {
    pub fn meets(&self, stratum: &str) -> bool {
        self.membership.get(stratum).is_some_and(|p| !p.is_empty())
    }
}

/// An SNC resolution `Y -> X` with `rK_Y = phi^* rK_X + sum e_i E_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionModel {
    pub name: String,
    pub n: u32,
    pub r: u32,
    pub upstairs: StratifiedVariety,
    pub divisors: Vec<ModelDivisor>,
    pub notes: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorSpec {
    pub name: String,
    pub e: i64,
    #[serde(default)]
    pub membership: BTreeMap<String, Vec<String>>,
}

/// On-disk form of a resolution model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    pub n: u32,
    pub r: u32,
    pub upstairs: VarietySpec,
    #[serde(default)]
    pub divisors: Vec<DivisorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl ModelSpec {
    pub fn build(&self) -> Result<ResolutionModel, PadicError> {
        if self.r == 0 {
            return Err(PadicError::BadModel("index r must be positive".into()));
        }
        let upstairs = self.upstairs.build()?;
        let mut names = BTreeSet::new();
        let mut divisors = Vec::with_capacity(self.divisors.len());
        for d in &self.divisors {
            if !names.insert(d.name.clone()) {
                return Err(PadicError::BadModel(format!("duplicate divisor `{}`", d.name)));
            }
            let mut membership = BTreeMap::new();
            for (sid, polys) in &d.membership {
                let stratum = upstairs
                    .strata
                    .iter()
                    .find(|s| &s.id == sid)
                    .ok_or_else(|| PadicError::BadModel(format!("divisor `{}` names unknown stratum `{sid}`", d.name)))?;
                let parsed = polys
                    .iter()
                    .map(|t| {
                        parse_polynomial(t, &stratum.vars).map_err(|source| VarietyError::Parse {
                            stratum: sid.clone(),
                            source,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                membership.insert(sid.clone(), parsed);
            }
            divisors.push(ModelDivisor {
                name: d.name.clone(),
                e: d.e,
                membership,
            });
        }
        Ok(ResolutionModel {
            name: self.name.clone(),
            n: self.n,
            r: self.r,
            upstairs,
            divisors,
            notes: self.notes.clone(),
        })
    }
}

impl ResolutionModel {
    pub fn from_json(text: &str) -> Result<Self, PadicError> {
        let spec: ModelSpec = serde_json::from_str(text).map_err(|e| PadicError::BadModel(e.to_string()))?;
        spec.build()
    }

    pub fn to_spec(&self) -> ModelSpec {
        ModelSpec {
            name: self.name.clone(),
            n: self.n,
            r: self.r,
            upstairs: self.upstairs.to_spec(),
            divisors: self
                .divisors
                .iter()
                .map(|d| DivisorSpec {
                    name: d.name.clone(),
                    e: d.e,
                    membership: d
                        .membership
                        .iter()
                        .map(|(k, v)| (k.clone(), v.iter().map(|p| p.to_string()).collect()))
                        .collect(),
                })
                .collect(),
            notes: self.notes.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("serializable")
    }

    pub fn discrepancies(&self) -> DiscrepancyVector {
        DiscrepancyVector {
            r: self.r,
            entries: self
                .divisors
                .iter()
                .map(|d| DiscrepancyEntry {
                    name: d.name.clone(),
                    e: d.e,
                })
                .collect(),
        }
    }

    /// The same model with the discrepancy numerators replaced, in divisor
    /// order.
    pub fn with_discrepancies(&self, es: &[i64]) -> Result<Self, PadicError> {
        if es.len() != self.divisors.len() {
            return Err(PadicError::BadModel(format!(
                "{} discrepancies for {} divisors",
                es.len(),
                self.divisors.len()
            )));
        }
        let mut m = self.clone();
        for (d, &e) in m.divisors.iter_mut().zip(es) {
            d.e = e;
        }
        Ok(m)
    }

    /// Whether the two models agree except possibly in `r` and the `e_i`.
    pub fn same_geometry(&self, o: &Self) -> bool {
        self.n == o.n
            && self.upstairs.strata == o.upstairs.strata
            && self.divisors.len() == o.divisors.len()
            && self
                .divisors
                .iter()
                .zip(&o.divisors)
                .all(|(a, b)| a.name == b.name && a.membership == b.membership)
    }
}
