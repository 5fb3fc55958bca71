//! Training-dataset catalogs and their class composition.
//!
//! One dataset per line, `|`-separated:
//!
//! ```text
//! # name      | frames | classes         | models (optional)
//! KITTI       | 93000  | Urban           | ZoeDepth, AdaBins
//! NYU Depth V2| 407024 | Indoor          | ZoeDepth, AdaBins
//! ```
//!
//! Classes come from a fixed two-level hierarchy and are matched ignoring
//! case.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use cadepth_core::{frames_per_class, DatasetCatalogEntry};
use serde::Serialize;

use crate::error::{Error, Result};

/// `(class, parent)`; top-level classes have no parent.
pub const HIERARCHY: [(&str, Option<&str>); 7] = [
    ("Indoor", None),
    ("Outdoor", None),
    ("Closeup", None),
    ("Urban", Some("Outdoor")),
    ("Nature", Some("Outdoor")),
    ("Human", Some("Closeup")),
    ("Object", Some("Closeup")),
];

/// Parent of a class, or the class itself when it is top-level. Names
/// outside the hierarchy are their own top.
pub fn top_level(class: &str) -> &str {
    HIERARCHY
        .iter()
        .find(|(c, _)| *c == class)
        .and_then(|(_, p)| *p)
        .unwrap_or(class)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Catalog {
    pub entries: Vec<DatasetCatalogEntry>,
    /// Model name to the datasets it was trained on, in catalog order.
    pub models: BTreeMap<String, Vec<String>>,
}

impl Catalog {
    pub fn entries_for(&self, model: &str) -> Vec<DatasetCatalogEntry> {
        let names = self.models.get(model).cloned().unwrap_or_default();
        self.entries
            .iter()
            .filter(|e| names.contains(&e.name))
            .cloned()
            .collect()
    }
}

fn canonical<'a>(name: &str, extra: &'a [String]) -> Option<&'a str> {
    HIERARCHY
        .iter()
        .map(|(c, _)| *c)
        .chain(extra.iter().map(String::as_str))
        .find(|c| c.eq_ignore_ascii_case(name))
}

/// Parses a catalog; `extra_classes` extends the built-in hierarchy with
/// additional top-level names.
pub fn parse_catalog(text: &str, origin: &Path, extra_classes: &[String]) -> Result<Catalog> {
    let mut catalog = Catalog::default();
    let mut names = BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| Error::Parse {
            path: origin.to_path_buf(),
            line: n + 1,
            reason,
        };
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(err("expected `name | frames | classes [| models]`".into()));
        }
        let name = fields[0];
        if name.is_empty() || !names.insert(name.to_string()) {
            return Err(err(format!("empty or duplicate dataset name `{name}`")));
        }
        let frames: u64 = fields[1]
            .replace('_', "")
            .parse()
            .map_err(|_| err(format!("bad frame count `{}`", fields[1])))?;
        let mut classes = BTreeSet::new();
        for c in fields[2].split(',').map(str::trim).filter(|c| !c.is_empty()) {
            let c = canonical(c, extra_classes).ok_or_else(|| err(format!("class `{c}` is not in the hierarchy")))?;
            classes.insert(c.to_string());
        }
        if classes.is_empty() {
            return Err(err(format!("dataset `{name}` has no classes")));
        }
        if let Some(models) = fields.get(3) {
            for m in models.split(',').map(str::trim).filter(|m| !m.is_empty()) {
                catalog.models.entry(m.to_string()).or_default().push(name.to_string());
            }
        }
        catalog.entries.push(DatasetCatalogEntry {
            name: name.to_string(),
            frame_count: frames,
            classes,
        });
    }
    Ok(catalog)
}

pub fn read_catalog(path: &Path, extra_classes: &[String]) -> Result<Catalog> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_catalog(&text, path, extra_classes)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassRow {
    pub class: String,
    pub frames: f64,
    pub share: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Composition {
    pub datasets: Vec<String>,
    pub total_frames: u64,
    /// Classes as listed in the catalog.
    pub classes: Vec<ClassRow>,
    /// The same frames rolled up to top-level classes.
    pub top_level: Vec<ClassRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompositionReport {
    pub overall: Composition,
    pub models: BTreeMap<String, Composition>,
}

fn rows(scaled: &BTreeMap<String, u128>, denominator: u128, total: u128) -> Vec<ClassRow> {
    scaled
        .iter()
        .map(|(c, &s)| ClassRow {
            class: c.clone(),
            frames: s as f64 / denominator as f64,
            share: if total == 0 { 0.0 } else { s as f64 / total as f64 },
        })
        .collect()
}

pub fn composition(entries: &[DatasetCatalogEntry]) -> Result<Composition> {
    let frames = frames_per_class(entries)?;
    let total = frames.scaled_total();
    let mut top: BTreeMap<String, u128> = BTreeMap::new();
    for (c, &s) in frames.scaled() {
        *top.entry(top_level(c).to_string()).or_default() += s;
    }
    Ok(Composition {
        datasets: entries.iter().map(|e| e.name.clone()).collect(),
        total_frames: entries.iter().map(|e| e.frame_count).sum(),
        classes: rows(frames.scaled(), frames.denominator(), total),
        top_level: rows(&top, frames.denominator(), total),
    })
}

pub fn analyze(catalog: &Catalog) -> Result<CompositionReport> {
    let overall = composition(&catalog.entries)?;
    let mut models = BTreeMap::new();
    for model in catalog.models.keys() {
        models.insert(model.clone(), composition(&catalog.entries_for(model))?);
    }
    Ok(CompositionReport { overall, models })
}
