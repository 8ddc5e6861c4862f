//! The JSON report emitted by every subcommand. Field order is fixed by
//! the struct definitions and maps use sorted keys, so reports are
//! byte-identical across runs for identical inputs (timings are opt-in
//! for that reason). The schema ships in `docs/report.schema.json`.

use heiscalc_core::geometry::LeviData;
use heiscalc_core::hypocheck::ConditionReport;
use heiscalc_core::scalar::Scalar;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub manifest_digest: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub levi: Vec<LeviSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<ConditionCell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parametrix: Option<ParametrixSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl Report {
    pub fn new(command: &str, digest: &str, mode: &str) -> Self {
        Report {
            tool: "heiscalc".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            manifest_digest: digest.into(),
            mode: mode.into(),
            warnings: vec![],
            levi: vec![],
            conditions: vec![],
            verification: None,
            parametrix: None,
            timings_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

#[derive(Serialize)]
pub struct LeviSummary {
    pub point: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_exact: Option<Vec<String>>,
    pub matrix: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_exact: Option<Vec<Vec<String>>>,
    pub lambdas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambdas_exact: Option<Vec<String>>,
    pub rank: usize,
    pub trace_abs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_domain: Option<bool>,
}

impl LeviSummary {
    pub fn from_levi(levi: &LeviData, in_domain: Option<bool>) -> Self {
        let exact_matrix = levi
            .matrix
            .iter()
            .all(|row| row.iter().all(Scalar::is_exact));
        let exact_lambdas = levi.lambdas.iter().all(Scalar::is_exact);
        LeviSummary {
            point: levi.point.iter().map(Scalar::to_f64).collect(),
            point_exact: levi
                .point
                .iter()
                .all(Scalar::is_exact)
                .then(|| levi.point.iter().map(|s| s.to_string()).collect()),
            matrix: levi
                .matrix
                .iter()
                .map(|row| row.iter().map(Scalar::to_f64).collect())
                .collect(),
            matrix_exact: exact_matrix.then(|| {
                levi.matrix
                    .iter()
                    .map(|row| row.iter().map(|s| s.to_string()).collect())
                    .collect()
            }),
            lambdas: levi.lambdas_f64(),
            lambdas_exact: exact_lambdas
                .then(|| levi.lambdas.iter().map(|s| s.to_string()).collect()),
            rank: levi.rank,
            trace_abs: levi.trace_abs.to_f64(),
            in_domain,
        }
    }
}

#[derive(Serialize)]
pub struct ConditionCell {
    pub criterion: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    pub report: ConditionReport,
}

#[derive(Serialize)]
pub struct TrialRow {
    pub seed: u64,
    pub error_left: f64,
    pub error_right: f64,
}

#[derive(Serialize)]
pub struct VerificationSummary {
    pub grid_coarse: usize,
    pub grid_fine: usize,
    pub extent: f64,
    pub seeds: Vec<u64>,
    pub coarse: Vec<TrialRow>,
    pub fine: Vec<TrialRow>,
    pub max_error_coarse: f64,
    pub max_error_fine: f64,
    pub refinement_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative_control: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct ParametrixSummary {
    pub mu: [f64; 2],
    pub direction: Vec<f64>,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<String>,
}
