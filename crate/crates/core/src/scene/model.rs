//! Serde mirror of the scene file.

use serde::Deserialize;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScene {
    pub name: Option<String>,
    pub description: Option<String>,
    pub space: RawSpace,
    pub divisor: Option<RawDivisor>,
    pub foliation: RawFoliation,
    #[serde(default)]
    pub singularities: Vec<RawPoint>,
    pub phi: Option<RawPhi>,
    pub chern: Option<RawChern>,
    pub presented: Option<RawPresented>,
    #[serde(default)]
    pub saito: Vec<RawSaito>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpace {
    pub kind: String,
    pub dim: usize,
    pub variables: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDivisor {
    #[serde(default)]
    pub components: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFoliation {
    pub degree: Option<u32>,
    pub homogeneous: Option<Vec<String>>,
    pub charts: Option<Vec<RawChart>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawChart {
    pub chart: usize,
    pub variables: Option<Vec<String>>,
    pub field: Vec<String>,
    pub divisor: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPoint {
    pub chart: usize,
    pub point: Vec<String>,
    pub label: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPhi {
    pub expr: String,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawChern {
    pub total_log_tangent: Option<Vec<String>>,
    pub tangent: Option<Vec<String>>,
    pub foliation_tangent: Option<Vec<String>>,
    pub log_components: Option<Vec<String>>,
    pub integral: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPresented {
    pub generators: Vec<String>,
    pub degrees: Vec<u32>,
    pub relations: Vec<String>,
    pub integral_monomial: String,
    pub integral_value: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSaito {
    pub chart: usize,
    /// Rows of `A`; column `j` holds the coefficients of `δ_j`.
    pub matrix: Vec<Vec<String>>,
}
