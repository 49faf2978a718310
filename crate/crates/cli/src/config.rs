//! Experiment configuration: JSON schema, strict parsing (unknown keys are
//! rejected), and conversion into the core orbit types.

use anyhow::{bail, Context, Result};
use nilsampler_core::hardy::parse_expr;
use nilsampler_core::nilgroup::{positions, upper_len, GroupElement};
use nilsampler_core::normal_form::WScheme;
use nilsampler_core::orbit::OrbitSpec;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Top-level experiment file.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub orbit: OrbitConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitConfig {
    pub group: GroupConfig,
    #[serde(default)]
    pub generators: Vec<GeneratorConfig>,
    #[serde(default)]
    pub poly_parts: Vec<GeneratorConfig>,
    pub range: (u64, u64),
    #[serde(default = "default_progression")]
    pub progression: (u64, u64),
    #[serde(default = "default_scheme")]
    pub scheme: String,
}

fn default_progression() -> (u64, u64) {
    (1, 0)
}

fn default_scheme() -> String {
    "cesaro".to_string()
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub dim: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub element: ElementConfig,
    pub exponent: String,
}

/// A group element: either explicit entries keyed "i,j" (1-based matrix
/// positions) or the Heisenberg shorthand [x, y, z].
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ElementConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heisenberg: Option<[f64; 3]>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default = "default_k_max")]
    pub max_frequency: i32,
    #[serde(default = "default_threshold")]
    pub weyl_threshold: f64,
    #[serde(default = "default_threshold")]
    pub discrepancy_threshold: f64,
    /// Torus frequency used by the correlation diagnostics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vdc_frequency: Option<Vec<i32>>,
    /// When set, the run is split into the q progression classes and one
    /// report is emitted per class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_q: Option<u64>,
}

fn default_k_max() -> i32 {
    5
}

fn default_threshold() -> f64 {
    0.02
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<String>,
}

impl ElementConfig {
    pub fn to_element(&self, group_dim: usize) -> Result<GroupElement> {
        if let Some(h) = self.heisenberg {
            if group_dim != 3 {
                bail!("heisenberg shorthand requires a dimension-3 group");
            }
            return Ok(GroupElement::heisenberg(h[0], h[1], h[2]));
        }
        let dim = self.dim.unwrap_or(group_dim);
        if dim != group_dim {
            bail!("element dimension {dim} does not match group dimension {group_dim}");
        }
        let mut entries = vec![0.0f64; upper_len(dim)];
        let pos = positions(dim);
        if let Some(map) = &self.entries {
            for (key, value) in map {
                let (i, j) = parse_position(key)?;
                if i == 0 || j == 0 || i > dim || j > dim || i >= j {
                    bail!("position {key} is not strictly upper in dimension {dim}");
                }
                let idx = pos
                    .iter()
                    .position(|&(r, c)| r == i - 1 && c == j - 1)
                    .expect("validated above");
                entries[idx] = *value;
            }
        }
        Ok(GroupElement::from_f64_entries(dim, &entries))
    }
}

fn parse_position(key: &str) -> Result<(usize, usize)> {
    let (a, b) = key
        .split_once(',')
        .with_context(|| format!("bad position key {key}; expected \"i,j\""))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

impl OrbitConfig {
    pub fn to_spec(&self) -> Result<OrbitSpec> {
        let dim = self.group.dim;
        if dim < 2 {
            bail!("group dimension must be at least 2");
        }
        let mut generators = Vec::new();
        for g in &self.generators {
            let element = g.element.to_element(dim)?;
            let exponent = parse_expr(&g.exponent)
                .map_err(|e| anyhow::anyhow!("exponent {:?}: {e}", g.exponent))?;
            generators.push((element, exponent));
        }
        let mut poly_parts = Vec::new();
        for g in &self.poly_parts {
            let element = g.element.to_element(dim)?;
            let exponent = parse_expr(&g.exponent)
                .map_err(|e| anyhow::anyhow!("exponent {:?}: {e}", g.exponent))?;
            poly_parts.push((element, exponent));
        }
        if generators.is_empty() && poly_parts.is_empty() {
            bail!("at least one generator is required");
        }
        let scheme = WScheme::parse(&self.scheme).map_err(|e| anyhow::anyhow!(e))?;
        Ok(OrbitSpec {
            dim,
            generators,
            poly_parts,
            range: self.range,
            progression: self.progression,
            scheme,
        })
    }
}

impl ExperimentConfig {
    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {path}"))?;
        let cfg: ExperimentConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing config {path}"))?;
        if cfg.orbit.range.1 < cfg.orbit.range.0 {
            bail!("empty range in config");
        }
        if cfg.orbit.progression.0 == 0 || cfg.orbit.progression.1 >= cfg.orbit.progression.0 {
            bail!("progression must satisfy q >= 1, 0 <= r < q");
        }
        Ok(cfg)
    }

    /// Canonical serialization used for the config hash.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(self.canonical_json().as_bytes());
        let digest = h.finalize();
        let mut out = String::with_capacity(16);
        for b in digest.iter().take(8) {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "orbit": {
            "group": {"dim": 3},
            "generators": [
                {"element": {"heisenberg": [1.0, 1.4142135623730951, 0.0]},
                 "exponent": "t^{3/2}"}
            ],
            "range": [2, 1000],
            "progression": [1, 0],
            "scheme": "cesaro"
        },
        "analysis": {"max_frequency": 3}
    }"#;

    #[test]
    fn parses_example() {
        let cfg: ExperimentConfig = serde_json::from_str(EXAMPLE).unwrap();
        let spec = cfg.orbit.to_spec().unwrap();
        assert_eq!(spec.dim, 3);
        assert_eq!(spec.generators.len(), 1);
        assert_eq!(cfg.analysis.max_frequency, 3);
        assert_eq!(cfg.analysis.weyl_threshold, 0.02);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = EXAMPLE.replace("\"max_frequency\": 3", "\"max_frequency\": 3, \"zzz\": 1");
        assert!(serde_json::from_str::<ExperimentConfig>(&bad).is_err());
    }

    #[test]
    fn entries_form() {
        let txt = r#"{
            "orbit": {
                "group": {"dim": 4},
                "generators": [
                    {"element": {"entries": {"1,2": 0.5, "3,4": -1.25}},
                     "exponent": "t"}
                ],
                "range": [2, 10]
            }
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(txt).unwrap();
        let spec = cfg.orbit.to_spec().unwrap();
        let g = &spec.generators[0].0;
        assert_eq!(g.get(0, 1).to_f64(), 0.5);
        assert_eq!(g.get(2, 3).to_f64(), -1.25);
        assert_eq!(g.get(0, 3).to_f64(), 0.0);
    }

    #[test]
    fn hash_is_stable() {
        let a: ExperimentConfig = serde_json::from_str(EXAMPLE).unwrap();
        let b: ExperimentConfig = serde_json::from_str(EXAMPLE).unwrap();
        assert_eq!(a.hash(), b.hash());
    }
}
