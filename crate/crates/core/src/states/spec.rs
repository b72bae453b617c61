use serde::{Deserialize, Serialize};

use super::CrescentMethod;
use crate::error::{Error, Result};
use crate::fock::C64;

/// Complex number as `{"re": x, "im": y}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexJson> for C64 {
    fn from(c: ComplexJson) -> Self {
        C64::new(c.re, c.im)
    }
}

impl From<C64> for ComplexJson {
    fn from(c: C64) -> Self {
        ComplexJson { re: c.re, im: c.im }
    }
}

/// Declarative description of a state, as read from JSON.
///
/// Which fields are allowed depends on `kind`; the registry rejects any
/// field the selected family does not use.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ComplexJson>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<ComplexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<CrescentMethod>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_tail: Option<f64>,
}

impl StateSpec {
    pub fn new(kind: &str) -> Self {
        StateSpec {
            kind: kind.to_string(),
            ..Default::default()
        }
    }

    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Schema(format!("state spec: {e}")))
    }

    pub fn alpha(&self) -> C64 {
        self.alpha.map(C64::from).unwrap_or_default()
    }

    pub fn gamma(&self) -> C64 {
        self.gamma.map(C64::from).unwrap_or_default()
    }
}
