//! Weight tables as TOML.
//!
//! ```toml
//! normalized = true
//! unmapped_policy = "ignore"   # or "error", "zero"
//!
//! [[super_class]]
//! name = "Car"
//! weight = 0.5004
//! classes = ["car", "caravan"]
//! ```
//!
//! Super-class order in the file is kept. A dataset class may be listed under
//! one super-class only.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use cadepth_core::{SuperClass, UnmappedPolicy, WeightTable};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightFile {
    #[serde(default)]
    normalized: bool,
    #[serde(default = "default_policy")]
    unmapped_policy: String,
    #[serde(default)]
    super_class: Vec<SuperClassEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuperClassEntry {
    name: String,
    weight: f64,
    #[serde(default)]
    classes: Vec<String>,
}

fn default_policy() -> String {
    UnmappedPolicy::Ignore.as_str().to_string()
}

pub fn parse_weights(text: &str, origin: &Path) -> Result<WeightTable> {
    let file: WeightFile = toml::from_str(text).map_err(|e| Error::format(origin, e.to_string()))?;
    let policy = UnmappedPolicy::parse(&file.unmapped_policy)
        .ok_or_else(|| Error::format(origin, format!("unknown unmapped_policy `{}`", file.unmapped_policy)))?;
    let mut mapping = BTreeMap::new();
    let mut super_classes = Vec::with_capacity(file.super_class.len());
    for entry in file.super_class {
        for class in entry.classes {
            if let Some(previous) = mapping.insert(class.clone(), entry.name.clone()) {
                return Err(Error::format(
                    origin,
                    format!("class `{class}` listed under both `{previous}` and `{}`", entry.name),
                ));
            }
        }
        super_classes.push(SuperClass {
            name: entry.name,
            weight: entry.weight,
        });
    }
    Ok(WeightTable::new(super_classes, mapping, policy, file.normalized)?)
}

pub fn read_weights(path: &Path) -> Result<WeightTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_weights(&text, path)
}

pub fn weights_to_toml(table: &WeightTable) -> String {
    let mut members: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for (class, target) in table.mapping() {
        members.entry(target).or_default().push(class.clone());
    }
    let file = WeightFile {
        normalized: table.is_normalized(),
        unmapped_policy: table.unmapped_policy().as_str().to_string(),
        super_class: table
            .super_classes()
            .iter()
            .map(|s| SuperClassEntry {
                name: s.name.clone(),
                weight: s.weight,
                classes: members.remove(s.name.as_str()).unwrap_or_default(),
            })
            .collect(),
    };
    toml::to_string(&file).expect("weight tables serialize")
}
