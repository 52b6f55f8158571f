use serde::Serialize;

use cdu_core::{CUniformityReport, FamilyParams, Field, TheoremCase};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct FieldInfo {
    pub m: u32,
    pub modulus_hex: String,
}

impl From<&Field> for FieldInfo {
    fn from(field: &Field) -> Self {
        FieldInfo {
            m: field.degree(),
            modulus_hex: format!("{:#x}", field.modulus()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Metadata {
    pub elapsed_seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct AnnotatedReport {
    #[serde(flatten)]
    pub report: CUniformityReport,
    /// absent when the field is not `F_{q^{2n}}` for the params' `t`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem_case: Option<TheoremCase>,
}

/// The `analyze` output document. Everything but `metadata` is a pure
/// function of the inputs.
#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub tool_version: &'static str,
    pub field: FieldInfo,
    pub params: FamilyParams,
    pub reports: Vec<AnnotatedReport>,
    pub metadata: Metadata,
}

#[derive(Debug, Serialize)]
pub struct GammaRow {
    pub gamma: u32,
    pub permutation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_condition: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_condition_alt_exponent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_uniformity: Option<u32>,
}

#[derive(Debug, Serialize)]
pub struct GammaSummary {
    pub gammas: usize,
    pub permutations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_pass_not_permutation: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation_not_condition_pass: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alt_exponent_pass_not_permutation: Option<usize>,
}

/// The `scan-gamma` output document.
#[derive(Debug, Serialize)]
pub struct GammaScanDocument {
    pub tool_version: &'static str,
    pub field: FieldInfo,
    pub params: String,
    pub gamma_subfield_degree: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    pub rows: Vec<GammaRow>,
    pub summary: GammaSummary,
    pub metadata: Metadata,
}
