//! Serialized run reports.
//!
//! CSV: header `kind,p,q,value` (plus `,stderr` for Monte Carlo runs), one
//! record per interior site (`kind = field`, ordered by `(q, p)`) and per
//! boundary site (`kind = absorption`, boundary order). JSON: an object with
//! `spec`, `source`, `method`, `field`, `absorption` and `sum_absorption`.
//! Numbers are written in shortest round-trip form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use zigzag_core::{absorption_map, FieldSolution, LatticeSpec, McEstimate, Method, SourceSpec};

use crate::args::What;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecRecord {
    pub m: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceRecord {
    pub a: i64,
    pub b: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub p: i64,
    pub q: i64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsorptionRecord {
    pub p: i64,
    pub q: i64,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub spec: SpecRecord,
    pub source: SourceRecord,
    pub method: Method,
    pub field: Vec<FieldRecord>,
    pub absorption: Vec<AbsorptionRecord>,
    pub sum_absorption: f64,
    /// Walk count of a Monte Carlo run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walks: Option<u64>,
}

fn header(spec: LatticeSpec, source: SourceSpec) -> (SpecRecord, SourceRecord) {
    (
        SpecRecord {
            m: spec.m(),
            n: spec.n(),
        },
        SourceRecord {
            a: source.a,
            b: source.b,
        },
    )
}

impl Report {
    pub fn from_solution(sol: &FieldSolution, what: What) -> Report {
        let (spec, source) = header(sol.spec(), sol.source());
        let abs = absorption_map(sol);
        let field = if what.field() {
            sol.iter()
                .map(|(s, value)| FieldRecord {
                    p: s.p,
                    q: s.q,
                    value,
                })
                .collect()
        } else {
            Vec::new()
        };
        let absorption = if what.absorption() {
            abs.iter()
                .map(|(s, value)| AbsorptionRecord {
                    p: s.p,
                    q: s.q,
                    value,
                    stderr: None,
                })
                .collect()
        } else {
            Vec::new()
        };
        Report {
            spec,
            source,
            method: sol.method(),
            field,
            absorption,
            sum_absorption: abs.total(),
            walks: None,
        }
    }

    pub fn from_estimate(est: &McEstimate, what: What) -> Report {
        let (spec, source) = header(est.spec(), est.source());
        let abs = est.absorption();
        let field = if what.field() {
            est.field()
                .iter()
                .map(|(s, value)| FieldRecord {
                    p: s.p,
                    q: s.q,
                    value,
                })
                .collect()
        } else {
            Vec::new()
        };
        let absorption = if what.absorption() {
            abs.iter()
                .zip(est.stderrs())
                .map(|((s, value), se)| AbsorptionRecord {
                    p: s.p,
                    q: s.q,
                    value,
                    stderr: Some(se),
                })
                .collect()
        } else {
            Vec::new()
        };
        Report {
            spec,
            source,
            method: Method::Mc,
            field,
            absorption,
            sum_absorption: abs.total(),
            walks: Some(est.walks()),
        }
    }

    pub fn to_csv(&self) -> String {
        let mc = self.method == Method::Mc;
        let mut out = String::from(if mc {
            "kind,p,q,value,stderr\n"
        } else {
            "kind,p,q,value\n"
        });
        for r in &self.field {
            let _ = write!(out, "field,{},{},{:?}", r.p, r.q, r.value);
            out.push_str(if mc { ",\n" } else { "\n" });
        }
        for r in &self.absorption {
            let _ = write!(out, "absorption,{},{},{:?}", r.p, r.q, r.value);
            match (mc, r.stderr) {
                (true, Some(se)) => {
                    let _ = writeln!(out, ",{se:?}");
                }
                (true, None) => out.push_str(",\n"),
                (false, _) => out.push('\n'),
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }
}
