//! Evaluation reports: aggregation, JSON/CSV output and scene ranking.
//!
//! The JSON body has no timestamps or thread-dependent content, so identical
//! inputs and configuration give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use cadepth_core::{
    AffineFit, ClassStatus, ComponentScores, ExclusionCounters, FeatureKind, FeatureParams, SuperClass, WeightTable,
};
use serde::{Deserialize, Serialize};

use crate::config::{AffineConfig, Aggregation, GroundTruthFill, RunConfig};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const DIVERGENCE_RULE: &str = "divergence = combined - gamma * 3 * e_global";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub schema_version: u32,
    pub divergence_rule: String,
    pub config: ConfigEcho,
    pub weights: WeightEcho,
    pub sample_count: usize,
    pub models: Vec<ModelReport>,
}

/// Every setting that influences the numbers. Worker count is left out on
/// purpose: it cannot change the result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub root: String,
    pub models: Vec<String>,
    pub gamma: f64,
    pub aggregation: Aggregation,
    pub densify: GroundTruthFill,
    pub feature_kind: FeatureKind,
    pub features: FeatureParams,
    pub focus: Option<Vec<String>>,
    pub renormalize_per_image: bool,
    pub sky_classes: Vec<String>,
    pub affine: AffineConfig,
}

impl ConfigEcho {
    pub fn new(cfg: &RunConfig) -> Self {
        Self {
            root: cfg.root.display().to_string(),
            models: cfg.models.clone(),
            gamma: cfg.gamma,
            aggregation: cfg.aggregation,
            densify: cfg.densify,
            feature_kind: cfg.feature_kind,
            features: cfg.features.clone(),
            focus: cfg.focus.clone(),
            renormalize_per_image: cfg.renormalize_per_image,
            sky_classes: cfg.sky_classes.clone(),
            affine: cfg.affine.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEcho {
    pub source: String,
    pub normalized: bool,
    pub unmapped_policy: String,
    pub super_classes: Vec<SuperClass>,
}

impl WeightEcho {
    pub fn new(table: &WeightTable, source: &str) -> Self {
        Self {
            source: source.to_string(),
            normalized: table.is_normalized(),
            unmapped_policy: table.unmapped_policy().as_str().to_string(),
            super_classes: table.super_classes().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineEcho {
    pub fit: AffineFit,
    pub frames: Vec<String>,
    /// Aligned pixels that came out negative and were set to zero.
    pub clamped_pixels: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub name: String,
    pub affine: Option<AffineEcho>,
    pub aggregate: Aggregate,
    pub super_classes: Vec<SuperClassRow>,
    pub classes: Vec<ClassRow>,
    pub scenes: Vec<SceneRow>,
    pub counters: ExclusionCounters,
    pub samples_without_labels: usize,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub samples_scored: usize,
    pub samples_failed: usize,
    pub compared_pixels: u64,
    /// `None` when no sample could be scored.
    pub e_class: Option<f64>,
    pub e_feature: Option<f64>,
    pub e_global: Option<f64>,
    pub combined: Option<f64>,
    /// Classical metrics averaged the same way as the components.
    pub classical: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperClassRow {
    pub name: String,
    /// Table weight before any focus or per-image rescaling.
    pub table_weight: f64,
    pub samples: usize,
    pub pixels: u64,
    pub mean_w_class: f64,
    pub mean_intra_weighted_error: f64,
    pub mean_contribution: f64,
    pub mean_raw_mae: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub name: String,
    pub super_class: Option<String>,
    /// Samples whose mask contains the class.
    pub samples_present: usize,
    pub samples_scored: usize,
    pub pixels: u64,
    pub feature_pixels: u64,
    pub mean_w_dist: Option<f64>,
    pub mean_mae: Option<f64>,
    pub mean_weighted_error: Option<f64>,
    pub mean_feature_mae: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneRow {
    pub scene: String,
    pub e_class: f64,
    pub e_feature: f64,
    pub e_global: f64,
    pub combined: f64,
    pub divergence: f64,
    pub compared_pixels: u64,
    pub rmse: f64,
    pub abs_rel: Option<f64>,
    pub delta1: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub scene: String,
    pub reason: String,
}

pub fn divergence(combined: f64, e_global: f64, gamma: f64) -> f64 {
    combined - gamma * 3.0 * e_global
}

/// Weighted mean accumulator with a fixed summation order.
#[derive(Default)]
struct Mean {
    sum: f64,
    weight: f64,
}

impl Mean {
    fn add(&mut self, value: f64, weight: f64) {
        self.sum += value * weight;
        self.weight += weight;
    }

    fn get(&self) -> Option<f64> {
        (self.weight > 0.0).then(|| self.sum / self.weight)
    }
}

#[derive(Default)]
struct SuperAcc {
    samples: usize,
    pixels: u64,
    w_class: Mean,
    intra: Mean,
    contribution: Mean,
    raw_mae: Mean,
}

#[derive(Default)]
struct ClassAcc {
    super_class: Option<String>,
    present: usize,
    scored: usize,
    pixels: u64,
    feature_pixels: u64,
    w_dist: Mean,
    mae: Mean,
    weighted: Mean,
    feature_mae: Mean,
}

/// Reduces the per-sample results of one model, in the given order.
pub fn aggregate_model(
    name: &str,
    results: &[(String, std::result::Result<ComponentScores, String>)],
    aggregation: Aggregation,
    gamma: f64,
    table: &WeightTable,
    affine: Option<AffineEcho>,
) -> ModelReport {
    let weight_of = |s: &ComponentScores| match aggregation {
        Aggregation::PerImageMean => 1.0,
        Aggregation::PixelPooled => s.compared_pixels as f64,
    };
    let (mut e_class, mut e_feature, mut e_global) = (Mean::default(), Mean::default(), Mean::default());
    let mut classical: BTreeMap<&'static str, Mean> = BTreeMap::new();
    let mut supers: BTreeMap<String, (f64, SuperAcc)> = BTreeMap::new();
    let mut super_order: Vec<String> = Vec::new();
    let mut classes: BTreeMap<String, ClassAcc> = BTreeMap::new();
    let mut scenes = Vec::new();
    let mut failures = Vec::new();
    let mut counters = ExclusionCounters::default();
    let mut without_labels = 0;
    let mut compared = 0u64;

    for (scene, result) in results {
        let s = match result {
            Ok(s) => s,
            Err(reason) => {
                failures.push(Failure {
                    scene: scene.clone(),
                    reason: reason.clone(),
                });
                continue;
            }
        };
        let w = weight_of(s);
        e_class.add(s.e_class, w);
        e_feature.add(s.e_feature, w);
        e_global.add(s.e_global, w);
        for (metric, value) in s.classical.named() {
            classical.entry(metric).or_default().add(value, w);
        }
        compared += s.compared_pixels as u64;
        without_labels += counters.accumulate(&s.counters);

        if let Some(detail) = &s.class_detail {
            for sc in &detail.super_classes {
                let entry = supers.entry(sc.name.clone()).or_insert_with(|| {
                    super_order.push(sc.name.clone());
                    (table.weight(&sc.name).unwrap_or(0.0), SuperAcc::default())
                });
                let acc = &mut entry.1;
                let sw = match aggregation {
                    Aggregation::PerImageMean => 1.0,
                    Aggregation::PixelPooled => sc.pixel_count as f64,
                };
                acc.samples += 1;
                acc.pixels += sc.pixel_count as u64;
                acc.w_class.add(sc.w_class, sw);
                acc.intra.add(sc.intra_weighted_error, sw);
                acc.contribution.add(sc.contribution, sw);
                if let Some(m) = sc.raw_mae {
                    acc.raw_mae.add(m, sw);
                }
            }
            for c in &detail.classes {
                let acc = classes.entry(c.class_name.clone()).or_default();
                acc.super_class = c.super_class.clone();
                acc.present += 1;
                if c.status == ClassStatus::Scored {
                    let cw = match aggregation {
                        Aggregation::PerImageMean => 1.0,
                        Aggregation::PixelPooled => c.pixel_count as f64,
                    };
                    acc.scored += 1;
                    acc.pixels += c.pixel_count as u64;
                    acc.w_dist.add(c.w_dist, 1.0);
                    acc.mae.add(c.mae.unwrap_or(0.0), cw);
                    acc.weighted.add(c.weighted_error, cw);
                }
            }
        }
        if let Some(detail) = &s.feature_detail {
            for c in &detail.classes {
                if let (Some(acc), Some(mae)) = (classes.get_mut(&c.class_name), c.mae) {
                    let cw = match aggregation {
                        Aggregation::PerImageMean => 1.0,
                        Aggregation::PixelPooled => c.pixel_count as f64,
                    };
                    acc.feature_pixels += c.pixel_count as u64;
                    acc.feature_mae.add(mae, cw);
                }
            }
        }
        scenes.push(SceneRow {
            scene: scene.clone(),
            e_class: s.e_class,
            e_feature: s.e_feature,
            e_global: s.e_global,
            combined: s.combined,
            divergence: divergence(s.combined, s.e_global, gamma),
            compared_pixels: s.compared_pixels as u64,
            rmse: s.classical.rmse,
            abs_rel: s.classical.abs_rel,
            delta1: s.classical.delta1,
        });
    }

    let combined = match (e_class.get(), e_feature.get(), e_global.get()) {
        (Some(a), Some(b), Some(c)) => Some(gamma * (a + b + c)),
        _ => None,
    };
    ModelReport {
        name: name.to_string(),
        affine,
        aggregate: Aggregate {
            samples_scored: scenes.len(),
            samples_failed: failures.len(),
            compared_pixels: compared,
            e_class: e_class.get(),
            e_feature: e_feature.get(),
            e_global: e_global.get(),
            combined,
            classical: classical
                .into_iter()
                .filter_map(|(k, m)| m.get().map(|v| (k.to_string(), v)))
                .collect(),
        },
        super_classes: table
            .super_classes()
            .iter()
            .map(|sc| &sc.name)
            .filter(|n| supers.contains_key(*n))
            .chain(super_order.iter().filter(|n| table.super_class(n).is_none()))
            .map(|n| {
                let (weight, acc) = &supers[n];
                SuperClassRow {
                    name: n.clone(),
                    table_weight: *weight,
                    samples: acc.samples,
                    pixels: acc.pixels,
                    mean_w_class: acc.w_class.get().unwrap_or(0.0),
                    mean_intra_weighted_error: acc.intra.get().unwrap_or(0.0),
                    mean_contribution: acc.contribution.get().unwrap_or(0.0),
                    mean_raw_mae: acc.raw_mae.get(),
                }
            })
            .collect(),
        classes: classes
            .into_iter()
            .map(|(n, acc)| ClassRow {
                name: n,
                super_class: acc.super_class,
                samples_present: acc.present,
                samples_scored: acc.scored,
                pixels: acc.pixels,
                feature_pixels: acc.feature_pixels,
                mean_w_dist: acc.w_dist.get(),
                mean_mae: acc.mae.get(),
                mean_weighted_error: acc.weighted.get(),
                mean_feature_mae: acc.feature_mae.get(),
            })
            .collect(),
        scenes,
        counters,
        samples_without_labels: without_labels,
        failures,
    }
}

impl EvaluationReport {
    pub fn model(&self, name: &str) -> Result<&ModelReport> {
        self.models
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::UnknownModel(name.to_string()))
    }

    pub fn failure_count(&self) -> usize {
        self.models.iter().map(|m| m.failures.len()).sum()
    }

    /// Re-checks `combined == gamma * (e_class + e_feature + e_global)` on
    /// every row and every aggregate.
    pub fn check(&self) -> Result<()> {
        let gamma = self.config.gamma;
        let ok = |combined: f64, sum: f64| {
            let expected = gamma * sum;
            (combined - expected).abs() <= 1e-9 * expected.abs().max(1.0)
        };
        for m in &self.models {
            for r in &m.scenes {
                if !ok(r.combined, r.e_class + r.e_feature + r.e_global) {
                    return Err(Error::Report(format!(
                        "{}: scene {} combined mismatch",
                        m.name, r.scene
                    )));
                }
                if r.e_class < 0.0 || r.e_feature < 0.0 || r.e_global < 0.0 {
                    return Err(Error::Report(format!(
                        "{}: scene {} has a negative error",
                        m.name, r.scene
                    )));
                }
            }
            let a = &m.aggregate;
            if let (Some(c), Some(x), Some(y), Some(z)) = (a.combined, a.e_class, a.e_feature, a.e_global) {
                if !ok(c, x + y + z) {
                    return Err(Error::Report(format!("{}: aggregate combined mismatch", m.name)));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        self.check()?;
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: EvaluationReport = serde_json::from_str(text)?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(Error::Report(format!(
                "unsupported schema version {}",
                report.schema_version
            )));
        }
        Ok(report)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = self.to_json()?;
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    /// One row per scored (model, scene).
    pub fn write_scenes_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record([
            "model",
            "scene",
            "e_class",
            "e_feature",
            "e_global",
            "combined",
            "divergence",
            "compared_pixels",
            "rmse",
            "abs_rel",
            "delta1",
        ])?;
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        for m in &self.models {
            for r in &m.scenes {
                w.write_record([
                    m.name.clone(),
                    r.scene.clone(),
                    r.e_class.to_string(),
                    r.e_feature.to_string(),
                    r.e_global.to_string(),
                    r.combined.to_string(),
                    r.divergence.to_string(),
                    r.compared_pixels.to_string(),
                    r.rmse.to_string(),
                    opt(r.abs_rel),
                    opt(r.delta1),
                ])?;
            }
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Plain-text summary for the terminal.
    pub fn render_table(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<20} {:>8} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
            "model", "samples", "e_class", "e_feature", "e_global", "combined", "rmse", "delta1"
        );
        for m in &self.models {
            let a = &m.aggregate;
            let _ = writeln!(
                out,
                "{:<20} {:>8} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
                m.name,
                format!("{}/{}", a.samples_scored, a.samples_scored + a.samples_failed),
                fmt(a.e_class),
                fmt(a.e_feature),
                fmt(a.e_global),
                fmt(a.combined),
                fmt(a.classical.get("rmse").copied()),
                fmt(a.classical.get("delta1").copied()),
            );
        }
        for m in &self.models {
            if m.super_classes.is_empty() {
                continue;
            }
            let _ = writeln!(out, "\n{}: super-classes", m.name);
            let _ = writeln!(
                out,
                "  {:<26} {:>8} {:>8} {:>12} {:>10}",
                "super-class", "weight", "samples", "contribution", "raw_mae"
            );
            for r in &m.super_classes {
                let _ = writeln!(
                    out,
                    "  {:<26} {:>8.4} {:>8} {:>12.4} {:>10}",
                    r.name,
                    r.table_weight,
                    r.samples,
                    r.mean_contribution,
                    fmt(r.mean_raw_mae)
                );
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankedScene {
    pub scene: String,
    pub divergence: f64,
    pub combined: f64,
    pub e_global: f64,
}

/// Scenes of `model` by descending divergence, ties broken by scene id.
pub fn rank_scenes(report: &EvaluationReport, model: &str) -> Result<Vec<RankedScene>> {
    let gamma = report.config.gamma;
    let mut ranked: Vec<RankedScene> = report
        .model(model)?
        .scenes
        .iter()
        .map(|r| RankedScene {
            scene: r.scene.clone(),
            divergence: divergence(r.combined, r.e_global, gamma),
            combined: r.combined,
            e_global: r.e_global,
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.divergence
            .total_cmp(&a.divergence)
            .then_with(|| a.scene.cmp(&b.scene))
    });
    Ok(ranked)
}
