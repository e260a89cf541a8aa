use crate::CliError;
use lptwist_core::cohomology::{CocycleJson, GroupCocycle, GroupoidCocycle};
use lptwist_core::structures::{FiniteGroup, FiniteGroupoid, GroupJson, GroupoidJson};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Input file: a group or a groupoid, optionally with a cocycle (trivial if absent).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dataset {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<GroupoidJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleJson>,
}

#[derive(Debug, Clone)]
pub enum Loaded {
    Group(GroupCocycle),
    Groupoid(GroupoidCocycle),
}

/// Which check rejected a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Parse,
    Structure,
    Cocycle,
}

#[derive(Debug, Clone)]
pub struct Rejection {
    pub stage: Stage,
    pub message: String,
}

impl Dataset {
    pub fn load(path: &Path) -> Result<Dataset, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })
    }

    /// Validates the carrier, then the cocycle.
    pub fn build(&self) -> Result<Loaded, Rejection> {
        let reject = |stage, message: String| Rejection { stage, message };
        match (&self.group, &self.groupoid) {
            (Some(gj), None) => {
                let g = FiniteGroup::from_json(gj).map_err(|e| reject(Stage::Structure, e.to_string()))?;
                let sigma = match &self.cocycle {
                    None => GroupCocycle::trivial(g),
                    Some(c) => GroupCocycle::from_json(&g, c).map_err(|e| reject(Stage::Cocycle, e.to_string()))?,
                };
                Ok(Loaded::Group(sigma))
            }
            (None, Some(gj)) => {
                let g = FiniteGroupoid::from_json(gj).map_err(|e| reject(Stage::Structure, e.to_string()))?;
                let sigma = match &self.cocycle {
                    None => GroupoidCocycle::trivial(g),
                    Some(c) => GroupoidCocycle::from_json(&g, c).map_err(|e| reject(Stage::Cocycle, e.to_string()))?,
                };
                Ok(Loaded::Groupoid(sigma))
            }
            _ => Err(reject(Stage::Parse, "expected exactly one of \"group\" and \"groupoid\"".into())),
        }
    }

    pub fn open(path: &Path) -> Result<Loaded, CliError> {
        Self::load(path)?.build().map_err(|r| CliError::Validation(format!("{}: {}", path.display(), r.message)))
    }
}

impl Loaded {
    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Group(_) => "group",
            Loaded::Groupoid(_) => "groupoid",
        }
    }

    pub fn into_group(self, path: &Path) -> Result<GroupCocycle, CliError> {
        match self {
            Loaded::Group(s) => Ok(s),
            Loaded::Groupoid(_) => Err(CliError::Validation(format!("{}: expected a group", path.display()))),
        }
    }

    /// Groups are read as one-unit groupoids.
    pub fn into_groupoid(self) -> GroupoidCocycle {
        match self {
            Loaded::Groupoid(s) => s,
            Loaded::Group(s) => {
                let g = FiniteGroupoid::from_group(s.group());
                let table = s.table().to_vec();
                GroupoidCocycle::validate(g, table).expect("a group cocycle is a groupoid cocycle")
            }
        }
    }
}
