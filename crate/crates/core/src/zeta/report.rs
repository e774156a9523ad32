//! The `zeta-report/1` JSON document.

use serde::Serialize;

use super::{CountingPolynomial, LinearRecurrence, WeilDecomposition, ZetaError, ZetaFunction};
use crate::upoly::QPoly;
use crate::varieties::CountSequence;

pub const SCHEMA: &str = "zeta-report/1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceReport {
    pub order: usize,
    pub coeffs: Vec<String>,
    pub charpoly: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootReport {
    pub re: String,
    pub im: String,
    pub radius: String,
    pub abs: String,
    pub exponent: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorReport {
    pub poly: String,
    pub exponent: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaSection {
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
    pub display: String,
    pub factors: Vec<FactorReport>,
    pub roots: Vec<RootReport>,
    pub series_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeilSection {
    pub n: u32,
    pub betti: Vec<u64>,
    pub euler: i64,
    pub purity_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duality_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaReport {
    pub schema: &'static str,
    pub variety: String,
    pub p: u64,
    pub r: u32,
    pub q: String,
    pub counts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recurrence: Option<RecurrenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<ZetaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weil: Option<WeilSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counting_polynomial: Option<String>,
    /// Betti numbers are those of the reduction; they agree with the
    /// topological ones only at a prime of good reduction.
    pub conditional_on_good_reduction: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

pub(crate) fn decimal(x: f64) -> String {
    format!("{x:.15e}")
}

fn coeff_strings(p: &QPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

/// `N(t)/D(t)` with `t` as the variable.
pub fn zeta_display(z: &ZetaFunction) -> String {
    let show = |p: &QPoly| {
        let s = p.to_string().replace('x', "t");
        if p.degree().unwrap_or(0) > 0 {
            format!("({s})")
        } else {
            s
        }
    };
    format!("{}/{}", show(&z.numerator), show(&z.denominator))
}

impl ZetaReport {
    pub fn new(seq: &CountSequence) -> Self {
        ZetaReport {
            schema: SCHEMA,
            variety: seq.variety_name.clone(),
            p: seq.p,
            r: seq.r,
            q: seq.q().to_string(),
            counts: seq.values().map(|n| n.to_string()).collect(),
            recurrence: None,
            zeta: None,
            weil: None,
            counting_polynomial: None,
            conditional_on_good_reduction: true,
            errors: Vec::new(),
        }
    }

    pub fn with_recurrence(mut self, rec: &LinearRecurrence) -> Self {
        self.recurrence = Some(RecurrenceReport {
            order: rec.order(),
            coeffs: rec.coeffs.iter().map(|c| c.to_string()).collect(),
            charpoly: rec.charpoly().to_string(),
        });
        self
    }

    pub fn with_zeta(mut self, z: &ZetaFunction, weil: Option<&WeilDecomposition>) -> Self {
        let roots = z
            .roots
            .iter()
            .enumerate()
            .map(|(i, r)| RootReport {
                re: decimal(r.root.z.re),
                im: decimal(r.root.z.im),
                radius: decimal(r.root.radius),
                abs: decimal(r.root.z.norm()),
                exponent: r.exponent,
                weight: weil.map(|w| w.roots[i].weight),
            })
            .collect();
        self.zeta = Some(ZetaSection {
            numerator: coeff_strings(&z.numerator),
            denominator: coeff_strings(&z.denominator),
            display: zeta_display(z),
            factors: z
                .factors
                .iter()
                .map(|f| FactorReport {
                    poly: f.poly.to_string().replace('x', "t"),
                    exponent: f.exponent,
                })
                .collect(),
            roots,
            series_checked: z.series_checked,
        });
        if let Some(w) = weil {
            self.weil = Some(WeilSection {
                n: w.n,
                betti: w.betti.clone(),
                euler: w.euler,
                purity_ok: w.purity_ok,
                duality_ok: w.duality_ok,
            });
        }
        self
    }

    pub fn with_counting_polynomial(mut self, p: &CountingPolynomial) -> Self {
        self.counting_polynomial = Some(p.to_string());
        self
    }

    pub fn with_error(mut self, e: &ZetaError) -> Self {
        self.errors.push(e.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
