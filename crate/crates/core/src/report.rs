//! JSON forms of groups, certificates and search results.
//!
//! Permutations are written as cycle strings. A certificate file looks like
//!
//! ```json
//! {"group": {"degree": 4, "generators": ["(1,2,3)", "(2,3,4)"]},
//!  "pattern": [2, 2, 3],
//!  "factors": [["()", "(1,2)(3,4)"], ["()", "(1,3)(2,4)"], ["()", "(1,2,3)", "(1,3,2)"]],
//!  "normalized": true}
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{Certificate, CertifyError, Verdict};
use crate::factor_set::FactorSet;
use crate::group::{GroupError, GroupTable};
use crate::perm::{Perm, PermError};
use crate::search::{RefuteReport, RefuteVerdict, SearchOutcome, SearchStats};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error("{0} is not in the group")]
    NotInGroup(String),
    #[error("factor {index} lists {element} twice")]
    Repeated { index: usize, element: String },
    #[error("stated pattern {stated:?} but factors have sizes {actual:?}")]
    PatternMismatch { stated: Vec<usize>, actual: Vec<usize> },
    #[error("factor sizes multiply to {product}, group order is {order}")]
    OrderMismatch { product: usize, order: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub degree: usize,
    pub generators: Vec<String>,
}

impl GroupJson {
    pub fn of(g: &GroupTable) -> Self {
        GroupJson {
            degree: g.degree(),
            generators: g.generators().iter().map(Perm::to_string).collect(),
        }
    }

    pub fn build(&self) -> Result<Arc<GroupTable>, ReportError> {
        Ok(Arc::new(GroupTable::from_cycle_strings(self.degree, &self.generators)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub group: GroupJson,
    pub pattern: Vec<usize>,
    pub factors: Vec<Vec<String>>,
    #[serde(default)]
    pub normalized: bool,
}

/// Elements of a set as cycle strings, in index order.
pub fn set_strings(g: &GroupTable, s: &FactorSet) -> Vec<String> {
    s.iter().map(|x| g.element(x).to_string()).collect()
}

impl CertificateJson {
    pub fn of(c: &Certificate) -> Self {
        let g = c.group();
        CertificateJson {
            group: GroupJson::of(g),
            pattern: c.pattern(),
            factors: c.factors().iter().map(|f| set_strings(g, f)).collect(),
            normalized: c.is_normalized(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ReportError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Resolves the file against its group. Shape problems are errors;
    /// whether the factors actually factorize is left to the verifier.
    pub fn to_certificate(&self) -> Result<Certificate, ReportError> {
        let g = self.group.build()?;
        self.to_certificate_in(&g)
    }

    pub fn to_certificate_in(&self, g: &Arc<GroupTable>) -> Result<Certificate, ReportError> {
        let n = g.order();
        let mut factors = Vec::with_capacity(self.factors.len());
        for (index, f) in self.factors.iter().enumerate() {
            let mut idx = Vec::with_capacity(f.len());
            for s in f {
                let p = Perm::parse(s, g.degree())?;
                let x = g.index_of(&p).ok_or_else(|| ReportError::NotInGroup(s.clone()))?;
                if idx.contains(&x) {
                    return Err(ReportError::Repeated { index, element: s.clone() });
                }
                idx.push(x);
            }
            factors.push(FactorSet::new(n, idx));
        }
        let actual: Vec<usize> = factors.iter().map(FactorSet::len).collect();
        if actual != self.pattern {
            return Err(ReportError::PatternMismatch {
                stated: self.pattern.clone(),
                actual,
            });
        }
        let product: usize = actual.iter().product();
        if product != n {
            return Err(ReportError::OrderMismatch { product, order: n });
        }
        Ok(Certificate::new(Arc::clone(g), factors)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub pattern: Vec<usize>,
    pub verdict: &'static str,
    pub valid: bool,
    pub detail: Option<String>,
    pub normalized: bool,
}

impl VerifyReport {
    pub fn of(c: &Certificate) -> Self {
        let v = c.verify();
        let (verdict, detail) = match v {
            Verdict::Valid => ("VALID", None),
            Verdict::Collision { prefix_len } => (
                "INVALID",
                Some(format!("the first {prefix_len} factors already produce a repeated element")),
            ),
            Verdict::Incomplete { covered } => ("INVALID", Some(format!("products cover only {covered} elements"))),
        };
        VerifyReport {
            pattern: c.pattern(),
            verdict,
            valid: v.is_valid(),
            detail,
            normalized: c.is_normalized(),
        }
    }
}

/// The task as it was asked, echoed into the report.
#[derive(Debug, Clone, Serialize)]
pub struct TaskJson {
    pub group: GroupJson,
    pub pattern: Vec<usize>,
    pub strategy: String,
    pub mode: &'static str,
    pub anchors: BTreeMap<String, Vec<String>>,
    pub budget_secs: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub task: TaskJson,
    pub strategy: &'static str,
    pub candidates: u64,
    pub formula_candidates: Option<u64>,
    pub solution_count: usize,
    pub solutions: Vec<CertificateJson>,
    pub exhaustive: bool,
    pub stats: SearchStats,
    pub wall_time_secs: f64,
}

impl SearchReport {
    pub fn new(task: TaskJson, out: &SearchOutcome) -> Self {
        SearchReport {
            task,
            strategy: out.strategy,
            candidates: out.stats.candidates,
            formula_candidates: out.formula_candidates,
            solution_count: out.solutions.len(),
            solutions: out.solutions.iter().map(CertificateJson::of).collect(),
            exhaustive: out.exhaustive,
            stats: out.stats.clone(),
            wall_time_secs: out.elapsed.as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RefuteJson {
    pub group: GroupJson,
    pub pattern: Vec<usize>,
    pub verdict: RefuteVerdict,
    pub method: &'static str,
    pub certificate: Option<CertificateJson>,
    pub stats: SearchStats,
    pub wall_time_secs: f64,
}

impl RefuteJson {
    pub fn of(r: &RefuteReport, g: &GroupTable) -> Self {
        RefuteJson {
            group: GroupJson::of(g),
            pattern: r.pattern.clone(),
            verdict: r.verdict,
            method: r.method,
            certificate: r.certificate.as_ref().map(CertificateJson::of),
            stats: r.stats.clone(),
            wall_time_secs: r.elapsed.as_secs_f64(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    #[test]
    fn certificate_survives_json() {
        let cat = Catalog::builtin();
        let c = cat.load("lemma-3.3").unwrap().certificate().unwrap();
        let text = CertificateJson::of(&c).to_json();
        let back = CertificateJson::parse(&text).unwrap().to_certificate().unwrap();
        assert!(back.verify().is_valid());
        assert_eq!(back.pattern(), vec![6, 7, 2, 2]);
        assert_eq!(back.factors(), c.factors());
    }

    #[test]
    fn shape_errors_are_caught_before_verifying() {
        let text = r#"{"group":{"degree":4,"generators":["(1,2,3)","(2,3,4)"]},
            "pattern":[2,2,3],
            "factors":[["()","(1,2)(3,4)"],["()"],["()","(1,2,3)","(1,3,2)"]]}"#;
        let err = CertificateJson::parse(text).unwrap().to_certificate().unwrap_err();
        assert!(matches!(err, ReportError::PatternMismatch { .. }));

        let text = text.replace(r#"["()"]"#, r#"["()","(1,2)"]"#);
        let err = CertificateJson::parse(&text).unwrap().to_certificate().unwrap_err();
        assert!(matches!(err, ReportError::NotInGroup(_)));

        assert!(matches!(CertificateJson::parse("{\"group\":1}"), Err(ReportError::Json(_))));
    }

    #[test]
    fn invalid_but_well_formed() {
        // {e,(1,2)(3,4)}·{e,(1,3)(2,4)} repeats inside V4.
        let text = r#"{"group":{"degree":4,"generators":["(1,2,3)","(2,3,4)"]},
            "pattern":[2,2,3],
            "factors":[["()","(1,2)(3,4)"],["()","(1,2)(3,4)"],["()","(1,2,3)","(1,3,2)"]]}"#;
        let c = CertificateJson::parse(text).unwrap().to_certificate().unwrap();
        let r = VerifyReport::of(&c);
        assert!(!r.valid);
        assert_eq!(r.verdict, "INVALID");
    }
}
