//! Class composition of a collection of training datasets.
//!
//! A dataset with `k` classes contributes `frames / k` to each of them. The
//! split is tracked exactly: counts are kept as integers scaled by the least
//! common multiple of all class-set sizes, so the per-class totals always add
//! up to the catalog's frame total.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DatasetCatalogEntry {
    pub name: String,
    pub frame_count: u64,
    pub classes: BTreeSet<String>,
}

impl DatasetCatalogEntry {
    pub fn new<I, S>(name: &str, frame_count: u64, classes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            name: name.into(),
            frame_count,
            classes: classes.into_iter().map(Into::into).collect(),
        }
    }
}

/// Frames per class, stored as exact multiples of `1 / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFrames {
    scaled: BTreeMap<String, u128>,
    denominator: u128,
}

impl ClassFrames {
    pub fn frames(&self, class: &str) -> Option<f64> {
        self.scaled.get(class).map(|&s| s as f64 / self.denominator as f64)
    }

    pub fn as_map(&self) -> BTreeMap<String, f64> {
        self.scaled
            .iter()
            .map(|(c, &s)| (c.clone(), s as f64 / self.denominator as f64))
            .collect()
    }

    /// Exact numerator of each class count over [`Self::denominator`].
    pub fn scaled(&self) -> &BTreeMap<String, u128> {
        &self.scaled
    }

    pub fn denominator(&self) -> u128 {
        self.denominator
    }

    /// Sum of all class counts, exact as a fraction of the denominator.
    pub fn scaled_total(&self) -> u128 {
        self.scaled.values().sum()
    }

    pub fn classes(&self) -> impl Iterator<Item = &str> {
        self.scaled.keys().map(String::as_str)
    }

    /// Class shares computed from the exact counts.
    pub fn shares(&self) -> Result<BTreeMap<String, f64>> {
        let total = self.scaled_total();
        if total == 0 {
            return Err(Error::ZeroTotal);
        }
        Ok(self
            .scaled
            .iter()
            .map(|(c, &s)| (c.clone(), s as f64 / total as f64))
            .collect())
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn frames_per_class(catalog: &[DatasetCatalogEntry]) -> Result<ClassFrames> {
    if catalog.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    let mut denominator = 1u128;
    for entry in catalog {
        let k = entry.classes.len() as u128;
        if k == 0 {
            return Err(Error::EmptyClassSet(entry.name.clone()));
        }
        denominator = denominator / gcd(denominator, k) * k;
    }
    let mut scaled: BTreeMap<String, u128> = BTreeMap::new();
    for entry in catalog {
        let share = entry.frame_count as u128 * (denominator / entry.classes.len() as u128);
        for class in &entry.classes {
            *scaled.entry(class.clone()).or_default() += share;
        }
    }
    Ok(ClassFrames { scaled, denominator })
}

/// `N_c / sum N` for every class.
pub fn class_share(frames: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    let total: f64 = frames.values().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::ZeroTotal);
    }
    Ok(frames.iter().map(|(c, n)| (c.clone(), n / total)).collect())
}

/// Entries whose name is in `names`, in catalog order.
pub fn select<'a>(catalog: &'a [DatasetCatalogEntry], names: &[&str]) -> Vec<DatasetCatalogEntry> {
    catalog
        .iter()
        .filter(|e: &&'a DatasetCatalogEntry| names.contains(&e.name.as_str()))
        .cloned()
        .collect()
}
