//! The machine-readable report printed by `--json`.

use dhol::kernel::{CheckReport, Obligation, Verdict};
use dhol::oracle::{OracleVerdict, ProveReport};
use dhol::syntax::CtxEntry;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    /// accepted, rejected, inconclusive, proved, refuted, unknown, error
    pub verdict: String,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    #[serde(default)]
    pub obligations: Vec<ObligationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prover: Option<ProverSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObligationReport {
    pub seq: usize,
    pub provenance: String,
    pub context: Vec<String>,
    pub formula: String,
    /// proved, refuted, or unknown (with reason)
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub by: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProverSummary {
    pub verdict: String,
    pub attempts: Vec<Attempt>,
    pub inconsistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub oracle: String,
    pub verdict: String,
}

pub fn status(v: Option<&OracleVerdict>) -> (String, Option<String>) {
    match v {
        Some(OracleVerdict::Proved { by, .. }) => ("proved".into(), Some(by.clone())),
        Some(OracleVerdict::Refuted { by, .. }) => ("refuted".into(), Some(by.clone())),
        Some(OracleVerdict::Unknown(r)) => (format!("unknown ({r})"), None),
        None => ("unknown".into(), None),
    }
}

pub fn obligation(o: &Obligation, v: Option<&OracleVerdict>) -> ObligationReport {
    let (status, by) = status(v);
    ObligationReport {
        seq: o.seq,
        provenance: o.provenance.to_string(),
        context: o
            .context
            .entries
            .iter()
            .map(|e| match e {
                CtxEntry::Var { name, ty } => format!("{name}:{ty}"),
                CtxEntry::Assume { name, formula } => format!("{name}:{formula}"),
            })
            .collect(),
        formula: o.formula.to_string(),
        status,
        by,
        file: None,
    }
}

pub fn obligations(r: &CheckReport) -> Vec<ObligationReport> {
    r.obligations.iter().map(|o| obligation(o, r.discharged.get(&o.seq))).collect()
}

pub fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Accepted => "accepted",
        Verdict::Rejected { .. } => "rejected",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn prover(r: &ProveReport) -> ProverSummary {
    ProverSummary {
        verdict: status(Some(&r.verdict)).0,
        attempts: r
            .attempts
            .iter()
            .map(|(o, v)| Attempt { oracle: o.clone(), verdict: status(Some(v)).0 })
            .collect(),
        inconsistent: r.inconsistent,
    }
}
