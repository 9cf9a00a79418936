//! Scenario files (JSON, `schema_version` 1).
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "name": "s1-colinear",
//!   "group": { "invariant_factors": [4] },
//!   "space": { "size": 8, "weights": [1, 1, 1, 1, 1, 1, 1, 1] },
//!   "action": { "affine": [2] },
//!   "generators": [[[1, 0], [0, 0], ...], ...],
//!   "probes": [...]
//! }
//! ```
//!
//! `action` holds either `"table"` (one permutation per group element, in
//! lexicographic order) or `"affine"` (steps `m_j` for `x -> x + sum m_j g_j`).
//! A translation scenario replaces `group`, `space` and `action` by
//! `"translation": { "group_factors", "subgroup_generators", "generators", "probes" }`.
//! Complex numbers are `[re, im]` pairs.

use std::path::Path;

use serde::{Deserialize, Serialize};
use zakfiber::{Action64, FiniteAbelianGroup, QuasiInvariantAction, TranslationScenario, WeightedSpace, C64};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub group: Option<GroupBlock>,
    #[serde(default)]
    pub space: Option<SpaceBlock>,
    #[serde(default)]
    pub action: Option<ActionBlock>,
    #[serde(default)]
    pub generators: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub probes: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub translation: Option<TranslationBlock>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupBlock {
    pub invariant_factors: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceBlock {
    pub size: usize,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionBlock {
    #[serde(default)]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub affine: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslationBlock {
    pub group_factors: Vec<usize>,
    pub subgroup_generators: Vec<Vec<usize>>,
    #[serde(default)]
    pub generators: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub probes: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug)]
pub struct ActionModel {
    pub action: Action64,
    pub generators: Vec<Vec<C64>>,
    pub probes: Vec<Vec<C64>>,
}

#[derive(Clone, Debug)]
pub struct TranslationModel {
    pub scenario: TranslationScenario,
    pub generators: Vec<Vec<C64>>,
    pub probes: Vec<Vec<C64>>,
}

#[derive(Clone, Debug)]
pub enum Model {
    Action(ActionModel),
    Translation(TranslationModel),
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub model: Model,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn vectors(field: &str, raw: &[Vec<[f64; 2]>], len: usize) -> Result<Vec<Vec<C64>>, CliError> {
    raw.iter()
        .enumerate()
        .map(|(i, v)| {
            if v.len() != len {
                return Err(invalid(format!("{field}[{i}] has length {}, expected {len}", v.len())));
            }
            if v.iter().flatten().any(|x| !x.is_finite()) {
                return Err(invalid(format!("{field}[{i}] has a non-finite entry")));
            }
            Ok(v.iter().map(|&[re, im]| C64::new(re, im)).collect())
        })
        .collect()
}

fn core_error(e: zakfiber::Error) -> CliError {
    match e {
        zakfiber::Error::Input(msg) => invalid(msg),
        other => invalid(other.to_string()),
    }
}

impl ScenarioFile {
    pub fn into_scenario(self, fallback_name: &str) -> Result<Scenario, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(format!(
                "schema_version {} not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let name = self.name.unwrap_or_else(|| fallback_name.to_string());
        let model = match (self.action, self.translation) {
            (Some(_), Some(_)) => return Err(invalid("scenario has both action and translation blocks")),
            (None, None) => return Err(invalid("scenario needs an action or a translation block")),
            (Some(action), None) => {
                let group = self.group.ok_or_else(|| invalid("group: missing field"))?;
                let space = self.space.ok_or_else(|| invalid("space: missing field"))?;
                if space.weights.len() != space.size {
                    return Err(invalid(format!(
                        "space.weights has length {}, space.size is {}",
                        space.weights.len(),
                        space.size
                    )));
                }
                let group = FiniteAbelianGroup::new(group.invariant_factors)
                    .map_err(|e| invalid(e.to_string().replace("invalid input: ", "group.")))?;
                let weights = WeightedSpace::new(space.weights).map_err(core_error)?;
                let action = match (action.table, action.affine) {
                    (Some(table), None) => QuasiInvariantAction::new(group, weights, table),
                    (None, Some(steps)) => QuasiInvariantAction::affine(group, weights, &steps),
                    _ => return Err(invalid("action: exactly one of table or affine is required")),
                }
                .map_err(core_error)?;
                let n = space.size;
                Model::Action(ActionModel {
                    action,
                    generators: vectors("generators", &self.generators, n)?,
                    probes: vectors("probes", &self.probes, n)?,
                })
            }
            (None, Some(t)) => {
                if self.group.is_some() || self.space.is_some() || !self.generators.is_empty() {
                    return Err(invalid("translation scenarios keep group, space and generators inside the translation block"));
                }
                let group = FiniteAbelianGroup::new(t.group_factors)
                    .map_err(|e| invalid(e.to_string().replace("invalid input: ", "translation.group_factors: ")))?;
                let n = group.order();
                let scenario = TranslationScenario::build(group, &t.subgroup_generators).map_err(core_error)?;
                Model::Translation(TranslationModel {
                    scenario,
                    generators: vectors("translation.generators", &t.generators, n)?,
                    probes: vectors("translation.probes", &t.probes, n)?,
                })
            }
        };
        Ok(Scenario { name, model })
    }
}

pub fn parse_scenario_str(text: &str, fallback_name: &str) -> Result<Scenario, CliError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    file.into_scenario(fallback_name)
}

pub fn parse_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    parse_scenario_str(&text, stem)
}
