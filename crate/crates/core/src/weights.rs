//! Inter-class safety weights and the dataset-class to super-class mapping.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Name of the zero-weight bucket that collects unmapped classes under
/// [`UnmappedPolicy::ZeroWeight`].
pub const UNMAPPED_SUPER_CLASS: &str = "(unmapped)";

/// What to do with a dataset class that the mapping does not cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum UnmappedPolicy {
    /// Leave the class out of the class and feature components.
    #[default]
    Ignore,
    /// Fail the evaluation.
    Error,
    /// Score the class but multiply its error by zero.
    #[cfg_attr(feature = "serde", serde(rename = "zero"))]
    ZeroWeight,
}

impl UnmappedPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            UnmappedPolicy::Ignore => "ignore",
            UnmappedPolicy::Error => "error",
            UnmappedPolicy::ZeroWeight => "zero",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ignore" => Some(UnmappedPolicy::Ignore),
            "error" => Some(UnmappedPolicy::Error),
            "zero" | "zero-weight" => Some(UnmappedPolicy::ZeroWeight),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuperClass {
    pub name: String,
    pub weight: f64,
}

/// How a dataset class resolves against a [`WeightTable`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Resolution<'a> {
    Mapped(&'a SuperClass),
    Ignored,
    ZeroWeight,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightTable {
    super_classes: Vec<SuperClass>,
    mapping: BTreeMap<String, String>,
    unmapped_policy: UnmappedPolicy,
    normalized: bool,
}

impl WeightTable {
    /// Validates weights, names and mapping targets.
    ///
    /// A table declared `normalized` must have weights summing to 1 within
    /// 0.001.
    pub fn new(
        super_classes: Vec<SuperClass>,
        mapping: BTreeMap<String, String>,
        unmapped_policy: UnmappedPolicy,
        normalized: bool,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for sc in &super_classes {
            if sc.name.is_empty() || sc.name == UNMAPPED_SUPER_CLASS {
                return Err(Error::InvalidWeights(format!(
                    "reserved or empty super-class name `{}`",
                    sc.name
                )));
            }
            if !seen.insert(sc.name.as_str()) {
                return Err(Error::InvalidWeights(format!("duplicate super-class `{}`", sc.name)));
            }
            if !(0.0..=1.0).contains(&sc.weight) {
                return Err(Error::InvalidWeights(format!(
                    "weight of `{}` is {} (must lie in [0, 1])",
                    sc.name, sc.weight
                )));
            }
        }
        for (class, target) in &mapping {
            if !seen.contains(target.as_str()) {
                return Err(Error::InvalidWeights(format!(
                    "class `{class}` maps to unknown super-class `{target}`"
                )));
            }
        }
        let table = Self {
            super_classes,
            mapping,
            unmapped_policy,
            normalized,
        };
        if normalized {
            let total = table.total_weight();
            if !(0.999..=1.001).contains(&total) {
                return Err(Error::InvalidWeights(format!(
                    "table is declared normalized but weights sum to {total}"
                )));
            }
        }
        Ok(table)
    }

    pub fn super_classes(&self) -> &[SuperClass] {
        &self.super_classes
    }

    pub fn mapping(&self) -> &BTreeMap<String, String> {
        &self.mapping
    }

    pub fn unmapped_policy(&self) -> UnmappedPolicy {
        self.unmapped_policy
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn weight(&self, super_class: &str) -> Option<f64> {
        self.super_class(super_class).map(|s| s.weight)
    }

    pub fn super_class(&self, name: &str) -> Option<&SuperClass> {
        self.super_classes.iter().find(|s| s.name == name)
    }

    pub fn total_weight(&self) -> f64 {
        self.super_classes.iter().map(|s| s.weight).sum()
    }

    /// Resolves a dataset class name according to the mapping and the
    /// unmapped policy.
    pub fn resolve(&self, class_name: &str) -> Result<Resolution<'_>> {
        match self.mapping.get(class_name) {
            Some(target) => Ok(Resolution::Mapped(
                self.super_class(target)
                    .expect("mapping targets are validated at construction"),
            )),
            None => match self.unmapped_policy {
                UnmappedPolicy::Ignore => Ok(Resolution::Ignored),
                UnmappedPolicy::ZeroWeight => Ok(Resolution::ZeroWeight),
                UnmappedPolicy::Error => Err(Error::UnmappedClass(class_name.to_string())),
            },
        }
    }

    /// Copy of the table with a different mapping policy.
    pub fn with_policy(mut self, policy: UnmappedPolicy) -> Self {
        self.unmapped_policy = policy;
        self
    }
}

/// Accident-opponent shares used as default safety weights.
pub const GIDAS_WEIGHTS: [(&str, f64); 14] = [
    ("Car", 0.5004),
    ("Motorcycle", 0.0738),
    ("Truck & Van & Bus", 0.0373),
    ("Trains", 0.0063),
    ("Other Motorized Vehicle", 0.0027),
    ("Bicycles", 0.2195),
    ("Pedestrian", 0.0805),
    ("Pole/tree", 0.0324),
    ("Guardrail", 0.0117),
    ("Ditch/Embankment", 0.0107),
    ("Road/Terrain", 0.0104),
    ("Other Object", 0.0075),
    ("Wall/bridge", 0.0056),
    ("Bush/Fence", 0.0011),
];

/// Main collision groups with their published subtotal.
pub const GIDAS_MAIN_CLASSES: [(&str, f64, &[&str]); 3] = [
    (
        "Car-to-Vehicle",
        0.6206,
        &[
            "Car",
            "Motorcycle",
            "Truck & Van & Bus",
            "Trains",
            "Other Motorized Vehicle",
        ],
    ),
    ("Car-to-VRU", 0.30, &["Bicycles", "Pedestrian"]),
    (
        "Car-to-Object",
        0.0794,
        &[
            "Pole/tree",
            "Guardrail",
            "Ditch/Embankment",
            "Road/Terrain",
            "Other Object",
            "Wall/bridge",
            "Bush/Fence",
        ],
    ),
];

/// Default assignment of the 64 GOOSE classes to the GIDAS sub-classes.
///
/// `sky`, `undefined`, `outlier` and `ego_vehicle` are deliberately absent:
/// sky is masked out and the others are not accident opponents.
pub const GOOSE_MAPPING: [(&str, &str); 60] = [
    ("car", "Car"),
    ("caravan", "Car"),
    ("motorcycle", "Motorcycle"),
    ("bus", "Truck & Van & Bus"),
    ("truck", "Truck & Van & Bus"),
    ("trailer", "Truck & Van & Bus"),
    ("on_rails", "Trains"),
    ("heavy_machinery", "Other Motorized Vehicle"),
    ("kick_scooter", "Other Motorized Vehicle"),
    ("military_vehicle", "Other Motorized Vehicle"),
    ("bicycle", "Bicycles"),
    ("rider", "Bicycles"),
    ("person", "Pedestrian"),
    ("pole", "Pole/tree"),
    ("street_light", "Pole/tree"),
    ("traffic_sign", "Pole/tree"),
    ("traffic_light", "Pole/tree"),
    ("misc_sign", "Pole/tree"),
    ("tree_trunk", "Pole/tree"),
    ("tree_crown", "Pole/tree"),
    ("forest", "Pole/tree"),
    ("guard_rail", "Guardrail"),
    ("boom_barrier", "Guardrail"),
    ("barrier_tape", "Guardrail"),
    ("soil", "Ditch/Embankment"),
    ("water", "Ditch/Embankment"),
    ("asphalt", "Road/Terrain"),
    ("cobble", "Road/Terrain"),
    ("gravel", "Road/Terrain"),
    ("bikeway", "Road/Terrain"),
    ("sidewalk", "Road/Terrain"),
    ("curb", "Road/Terrain"),
    ("road_marking", "Road/Terrain"),
    ("pedestrian_crossing", "Road/Terrain"),
    ("rail_track", "Road/Terrain"),
    ("snow", "Road/Terrain"),
    ("low_grass", "Road/Terrain"),
    ("high_grass", "Road/Terrain"),
    ("moss", "Road/Terrain"),
    ("leaves", "Road/Terrain"),
    ("crops", "Road/Terrain"),
    ("tree_root", "Road/Terrain"),
    ("traffic_cone", "Other Object"),
    ("obstacle", "Other Object"),
    ("road_block", "Other Object"),
    ("debris", "Other Object"),
    ("rock", "Other Object"),
    ("animal", "Other Object"),
    ("container", "Other Object"),
    ("barrel", "Other Object"),
    ("pipe", "Other Object"),
    ("wire", "Other Object"),
    ("building", "Wall/bridge"),
    ("wall", "Wall/bridge"),
    ("bridge", "Wall/bridge"),
    ("tunnel", "Wall/bridge"),
    ("bush", "Bush/Fence"),
    ("hedge", "Bush/Fence"),
    ("fence", "Bush/Fence"),
    ("scenery_vegetation", "Bush/Fence"),
];

/// The built-in GIDAS weight table with the default GOOSE mapping.
pub fn builtin_gidas_table() -> WeightTable {
    let super_classes = GIDAS_WEIGHTS
        .iter()
        .map(|(name, weight)| SuperClass {
            name: (*name).to_string(),
            weight: *weight,
        })
        .collect();
    let mapping = GOOSE_MAPPING
        .iter()
        .map(|(c, s)| ((*c).to_string(), (*s).to_string()))
        .collect();
    WeightTable::new(super_classes, mapping, UnmappedPolicy::Ignore, true).expect("built-in table is consistent")
}

/// Sum of the table weights of each GIDAS main class.
pub fn main_class_subtotals(table: &WeightTable) -> Vec<(&'static str, f64)> {
    GIDAS_MAIN_CLASSES
        .iter()
        .map(|(main, _, members)| {
            let total = members.iter().filter_map(|m| table.weight(m)).sum();
            (*main, total)
        })
        .collect()
}
