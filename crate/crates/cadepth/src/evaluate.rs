//! Dataset evaluation.
//!
//! Samples are scored in parallel and reduced in discovery order, so the
//! report does not depend on the number of workers.

use std::collections::BTreeMap;

use cadepth_core::{
    apply_affine, densify, fit_scale_shift_many, AffineFit, ComponentScores, DepthMap, MetricConfig, PreparedScene,
    RgbImage, SegmentationMask, WeightTable,
};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::dataset::{self, SampleRef, SceneSample};
use crate::error::{Error, Result};
use crate::report::{
    aggregate_model, AffineEcho, ConfigEcho, EvaluationReport, WeightEcho, DIVERGENCE_RULE, SCHEMA_VERSION,
};

type SampleResult = std::result::Result<ComponentScores, String>;

struct Loaded {
    gt: DepthMap,
    seg: Option<SegmentationMask>,
    rgb: Option<RgbImage>,
    preds: BTreeMap<String, Result<DepthMap>>,
}

fn prepare_gt(gt: DepthMap, cfg: &RunConfig) -> Result<DepthMap> {
    match cfg.densify.method() {
        Some(m) => Ok(densify(&gt, m)?),
        None => Ok(gt),
    }
}

/// Scores of every model on one sample, with the number of pixels clamped by
/// the affine alignment.
fn score_one(
    loaded: Loaded,
    cfg: &RunConfig,
    metric: &MetricConfig,
    table: &WeightTable,
    fits: &BTreeMap<String, AffineFit>,
) -> Vec<(SampleResult, usize)> {
    let fail = |e: String| vec![(Err(e), 0); cfg.models.len()];
    let gt = match prepare_gt(loaded.gt, cfg) {
        Ok(gt) => gt,
        Err(e) => return fail(e.to_string()),
    };
    let scene = match PreparedScene::new(&gt, loaded.seg.as_ref(), loaded.rgb.as_ref(), metric) {
        Ok(s) => s,
        Err(e) => return fail(e.to_string()),
    };
    let mut preds = loaded.preds;
    cfg.models
        .iter()
        .map(|model| {
            let pred = match preds.remove(model) {
                Some(Ok(p)) => p,
                Some(Err(e)) => return (Err(e.to_string()), 0),
                None => return (Err(format!("no prediction for model `{model}`")), 0),
            };
            let (pred, clamped) = match fits.get(model) {
                Some(fit) => {
                    let applied = apply_affine(&pred, fit);
                    (applied.depth, applied.clamped)
                }
                None => (pred, 0),
            };
            (scene.score(&pred, table).map_err(|e| e.to_string()), clamped)
        })
        .collect()
}

fn fit_models<F>(cfg: &RunConfig, ids: &[String], load: &F) -> Result<BTreeMap<String, AffineEcho>>
where
    F: Fn(usize) -> Result<Loaded>,
{
    let mut fits = BTreeMap::new();
    if cfg.affine.models.is_empty() {
        return Ok(fits);
    }
    let frames: Vec<String> = if cfg.affine.frames.is_empty() {
        ids.iter().take(1).cloned().collect()
    } else {
        cfg.affine.frames.clone()
    };
    let mut loaded = Vec::new();
    for f in &frames {
        let i = ids
            .iter()
            .position(|id| id == f)
            .ok_or_else(|| Error::Config(format!("affine fit frame `{f}` is not in the dataset")))?;
        let l = load(i)?;
        let gt = prepare_gt(l.gt, cfg)?;
        loaded.push((gt, l.preds));
    }
    for model in &cfg.affine.models {
        let mut preds = Vec::with_capacity(loaded.len());
        for (_, p) in &loaded {
            match p.get(model) {
                Some(Ok(d)) => preds.push(d),
                Some(Err(e)) => return Err(Error::Config(format!("affine fit for `{model}`: {e}"))),
                None => return Err(Error::Config(format!("affine fit for `{model}`: prediction missing"))),
            }
        }
        let pairs: Vec<(&DepthMap, &DepthMap)> = preds.iter().copied().zip(loaded.iter().map(|(gt, _)| gt)).collect();
        let fit = fit_scale_shift_many(&pairs)?;
        fits.insert(
            model.clone(),
            AffineEcho {
                fit,
                frames: frames.clone(),
                clamped_pixels: 0,
            },
        );
    }
    Ok(fits)
}

fn run<F>(
    cfg: &RunConfig,
    table: &WeightTable,
    weights_source: &str,
    ids: &[String],
    load: F,
) -> Result<EvaluationReport>
where
    F: Fn(usize) -> Result<Loaded> + Sync,
{
    cfg.metric_config().validate()?;
    let metric = cfg.metric_config();
    let echoes = fit_models(cfg, ids, &load)?;
    let fits: BTreeMap<String, AffineFit> = echoes.iter().map(|(m, e)| (m.clone(), e.fit)).collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let per_sample: Vec<Vec<(SampleResult, usize)>> = pool.install(|| {
        (0..ids.len())
            .into_par_iter()
            .map(|i| match load(i) {
                Ok(loaded) => score_one(loaded, cfg, &metric, table, &fits),
                Err(e) => vec![(Err(e.to_string()), 0); cfg.models.len()],
            })
            .collect()
    });

    let models = cfg
        .models
        .iter()
        .enumerate()
        .map(|(k, model)| {
            let results: Vec<(String, SampleResult)> = ids
                .iter()
                .zip(&per_sample)
                .map(|(id, r)| (id.clone(), r[k].0.clone()))
                .collect();
            let affine = echoes.get(model).map(|e| AffineEcho {
                clamped_pixels: per_sample.iter().map(|r| r[k].1 as u64).sum(),
                ..e.clone()
            });
            aggregate_model(model, &results, cfg.aggregation, cfg.gamma, table, affine)
        })
        .collect();

    let report = EvaluationReport {
        schema_version: SCHEMA_VERSION,
        divergence_rule: DIVERGENCE_RULE.to_string(),
        config: ConfigEcho::new(cfg),
        weights: WeightEcho::new(table, weights_source),
        sample_count: ids.len(),
        models,
    };
    report.check()?;
    Ok(report)
}

fn weights_source(cfg: &RunConfig) -> String {
    cfg.weights
        .as_ref()
        .map_or_else(|| "builtin:gidas".to_string(), |p| p.display().to_string())
}

/// Evaluates every model of `cfg` on the dataset under `cfg.root`.
///
/// Failures of single samples are recorded in the report; configuration
/// problems, an empty dataset or a failed affine fit abort the run.
pub fn evaluate_dataset(cfg: &RunConfig) -> Result<EvaluationReport> {
    cfg.validate()?;
    let table = cfg.weight_table()?;
    let refs: Vec<SampleRef> = dataset::discover(&cfg.root)?;
    if refs.is_empty() {
        return Err(Error::EmptyDataset(cfg.root.clone()));
    }
    let names = dataset::root_names(&cfg.root)?;
    let ids: Vec<String> = refs.iter().map(|r| r.id.clone()).collect();
    run(cfg, &table, &weights_source(cfg), &ids, |i| {
        let sample = &refs[i];
        let (gt, seg, rgb) = dataset::load_scene(sample, names.as_ref())?;
        let preds = cfg
            .models
            .iter()
            .map(|m| (m.clone(), dataset::load_prediction(sample, m)))
            .collect();
        Ok(Loaded { gt, seg, rgb, preds })
    })
}

/// Same as [`evaluate_dataset`] for samples already in memory. `cfg.root`
/// is only echoed.
pub fn evaluate_samples(samples: &[SceneSample], cfg: &RunConfig, table: &WeightTable) -> Result<EvaluationReport> {
    if samples.is_empty() {
        return Err(Error::EmptyDataset(cfg.root.clone()));
    }
    let ids: Vec<String> = samples.iter().map(|s| s.id.clone()).collect();
    run(cfg, table, &weights_source(cfg), &ids, |i| {
        let s = &samples[i];
        Ok(Loaded {
            gt: s.gt.clone(),
            seg: s.seg.clone(),
            rgb: s.rgb.clone(),
            preds: s.preds.iter().map(|(m, p)| (m.clone(), Ok(p.clone()))).collect(),
        })
    })
}
