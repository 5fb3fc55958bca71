//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cadepth::catalog::{composition, parse_catalog};
use cadepth::config::{GroundTruthFill, RunConfig};
use cadepth::dataset::SceneSample;
use cadepth::{evaluate_dataset, evaluate_samples};
use cadepth_core::features::edge_contours;
use cadepth_core::features::morphology::dilate_disk;
use cadepth_core::weights::main_class_subtotals;
use cadepth_core::{
    builtin_gidas_table, class_share, densify, evaluate_sample, fit_scale_shift, frames_per_class, intra_class_weights,
    ClassicalMetrics, DatasetCatalogEntry, DensifyMethod, DepthMap, FeatureKind, FeatureMap, FeatureParams,
    MetricConfig, PreparedScene, RgbImage, SegmentationMask, SuperClass, UnmappedPolicy, WeightTable, UNLABELED,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

// ---------------------------------------------------------------- 1

const N: usize = 16;

/// Double-loop reference for every classical metric:
/// mae, rmse, abs_rel, rel_sq, log_rmse, log10, silog, delta1..3.
fn classical_reference(p: &[[f64; N]; N], g: &[[f64; N]; N], valid: &[[bool; N]; N]) -> [f64; 10] {
    let mut n = 0.0;
    let mut acc = [0.0; 6];
    let mut hits = [0.0; 3];
    let mut logs = Vec::new();
    for y in 0..N {
        for x in 0..N {
            if !valid[y][x] {
                continue;
            }
            let (a, b) = (p[y][x], g[y][x]);
            n += 1.0;
            acc[0] += (a - b).abs();
            acc[1] += (a - b) * (a - b);
            acc[2] += (a - b).abs() / b;
            acc[3] += (a - b) * (a - b) / b;
            acc[4] += (a.ln() - b.ln()).powi(2);
            acc[5] += (a.log10() - b.log10()).abs();
            logs.push(a.ln() - b.ln());
            let r = (a / b).max(b / a);
            for (k, h) in hits.iter_mut().enumerate() {
                if r < 1.25f64.powi(k as i32 + 1) {
                    *h += 1.0;
                }
            }
        }
    }
    let mean = logs.iter().sum::<f64>() / n;
    let var = logs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
    [
        acc[0] / n,
        (acc[1] / n).sqrt(),
        acc[2] / n,
        acc[3] / n,
        (acc[4] / n).sqrt(),
        acc[5] / n,
        var.sqrt(),
        hits[0] / n,
        hits[1] / n,
        hits[2] / n,
    ]
}

fn ac1() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut pairs = Vec::new();
    for _ in 0..100 {
        let mut p = [[0.0; N]; N];
        let mut g = [[0.0; N]; N];
        let mut v = [[false; N]; N];
        for y in 0..N {
            for x in 0..N {
                g[y][x] = rng.random_range(0.5..80.0);
                p[y][x] = g[y][x] * rng.random_range(0.6..1.6);
                v[y][x] = rng.random_bool(0.85) || (x, y) == (0, 0);
            }
        }
        pairs.push((p, g, v));
    }
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (p, g, v) in &pairs {
        let pred = DepthMap::dense(N, N, p.iter().flatten().copied().collect()).unwrap();
        let gt = DepthMap::new(
            N,
            N,
            g.iter().flatten().copied().collect(),
            v.iter().flatten().copied().collect(),
        )
        .unwrap();
        let m = ClassicalMetrics::compute(&pred, &gt, None).map_err(|e| e.to_string())?;
        let got = [
            m.mae,
            m.rmse,
            m.abs_rel.unwrap(),
            m.rel_sq.unwrap(),
            m.log_rmse.unwrap(),
            m.log10.unwrap(),
            m.silog.unwrap(),
            m.delta1.unwrap(),
            m.delta2.unwrap(),
            m.delta3.unwrap(),
        ];
        let want = classical_reference(p, g, v);
        for (a, b) in got.iter().zip(&want) {
            let rel = (a - b).abs() / a.abs().max(b.abs()).max(1e-300);
            worst = worst.max(rel);
            ensure!(rel_close(*a, *b, 1e-10), "metric {a} vs reference {b}");
        }
    }
    let took = within(Duration::from_secs(1), start)?;
    Ok(format!("100 pairs, worst relative error {worst:.1e}, {took:.1?}"))
}

// ---------------------------------------------------------------- 2, 3

/// Classes a/b/c with minimum depths 2/10/40 m; the unlabeled last pixel
/// carries the 50 m scene maximum. Predictions give class MAEs of 1/2/4 m.
fn three_class_fixture() -> (DepthMap, DepthMap, SegmentationMask, WeightTable) {
    let gt = DepthMap::dense(7, 1, vec![2.0, 5.0, 10.0, 12.0, 40.0, 45.0, 50.0]).unwrap();
    let pred = DepthMap::dense(7, 1, vec![3.0, 4.0, 12.0, 10.0, 44.0, 41.0, 50.0]).unwrap();
    let names = [(0u16, "a"), (1, "b"), (2, "c")]
        .map(|(i, n)| (i, n.to_string()))
        .into();
    let seg = SegmentationMask::new(7, 1, vec![0, 0, 1, 1, 2, 2, UNLABELED], names).unwrap();
    let table = WeightTable::new(
        vec![
            SuperClass {
                name: "A".into(),
                weight: 0.5,
            },
            SuperClass {
                name: "B".into(),
                weight: 0.3,
            },
            SuperClass {
                name: "C".into(),
                weight: 0.2,
            },
        ],
        [("a", "A"), ("b", "B"), ("c", "C")]
            .map(|(c, s)| (c.to_string(), s.to_string()))
            .into(),
        UnmappedPolicy::Ignore,
        true,
    )
    .unwrap();
    (gt, pred, seg, table)
}

fn ac2() -> Outcome {
    let (gt, _, seg, _) = three_class_fixture();
    let stats = intra_class_weights(&gt, &seg).map_err(|e| e.to_string())?;
    // d_class = 48/40/10, normalized over [10, 48]
    let want = [("a", 1.0), ("b", 30.0 / 38.0), ("c", 0.0)];
    for (c, w) in want {
        let got = stats[c].w_dist;
        ensure!((got - w).abs() <= 1e-9, "w_dist({c}) = {got}, expected {w}");
    }
    Ok(format!(
        "w_dist = {:.6} / {:.6} / {:.6}",
        stats["a"].w_dist, stats["b"].w_dist, stats["c"].w_dist
    ))
}

fn ac3() -> Outcome {
    let (gt, pred, seg, table) = three_class_fixture();
    let config = MetricConfig::default();
    let s = evaluate_sample(&pred, &gt, Some(&seg), None, &table, &config).map_err(|e| e.to_string())?;
    let want = 0.5 * 1.0 * 1.0 + 0.3 * (30.0 / 38.0) * 2.0 + 0.2 * 0.0 * 4.0;
    ensure!((s.e_class - 0.973684).abs() <= 1e-6, "e_class = {}", s.e_class);
    ensure!(
        (s.e_class - want).abs() <= 1e-12,
        "e_class = {}, hand value {want}",
        s.e_class
    );
    Ok(format!("e_class = {:.6} m", s.e_class))
}

// ---------------------------------------------------------------- 4

fn ac4() -> Outcome {
    let table = builtin_gidas_table();
    // sub-class distribution as printed in the accident statistics table
    let printed = [
        ("Car", 50.04),
        ("Motorcycle", 7.38),
        ("Truck & Van & Bus", 3.73),
        ("Trains", 0.63),
        ("Other Motorized Vehicle", 0.27),
        ("Bicycles", 21.95),
        ("Pedestrian", 8.05),
        ("Pole/tree", 3.24),
        ("Guardrail", 1.17),
        ("Ditch/Embankment", 1.07),
        ("Road/Terrain", 1.04),
        ("Other Object", 0.75),
        ("Wall/bridge", 0.56),
        ("Bush/Fence", 0.11),
    ];
    for (name, pct) in printed {
        let w = table.weight(name).ok_or(format!("missing super-class {name}"))?;
        ensure!((w - pct / 100.0).abs() < 1e-12, "{name}: {w} vs {pct}%");
    }
    let total = table.total_weight();
    ensure!((total - 1.0).abs() <= 0.001, "weights sum to {total}");
    let printed_main = [
        ("Car-to-Vehicle", 0.6206),
        ("Car-to-VRU", 0.30),
        ("Car-to-Object", 0.0794),
    ];
    let subtotals = main_class_subtotals(&table);
    let mut detail = Vec::new();
    for ((name, got), (want_name, want)) in subtotals.iter().zip(printed_main) {
        ensure!(name.eq_ignore_ascii_case(want_name), "main class {name} vs {want_name}");
        ensure!((got - want).abs() <= 0.0002, "{name}: {got} vs {want}");
        detail.push(format!("{got:.4}"));
    }
    Ok(format!("sum {total:.4}, main classes {}", detail.join(" / ")))
}

// ---------------------------------------------------------------- 5, 6

const NAMES: [&str; 8] = ["car", "person", "bicycle", "pole", "asphalt", "building", "bush", "sky"];

fn random_scene(rng: &mut StdRng) -> (DepthMap, SegmentationMask, RgbImage) {
    let (w, h) = (rng.random_range(12..40), rng.random_range(12..40));
    let bw = rng.random_range(2..6);
    let mut blocks = BTreeMap::new();
    let labels: Vec<u16> = (0..w * h)
        .map(|i| {
            *blocks.entry(((i % w) / bw, (i / w) / bw)).or_insert_with(|| {
                if rng.random_bool(0.1) {
                    UNLABELED
                } else {
                    rng.random_range(0..NAMES.len() as u16)
                }
            })
        })
        .collect();
    let names = NAMES
        .iter()
        .enumerate()
        .map(|(i, n)| (i as u16, n.to_string()))
        .collect();
    let seg = SegmentationMask::new(w, h, labels.clone(), names).unwrap();
    let values = (0..w * h).map(|_| rng.random_range(1.0..80.0)).collect();
    let valid = (0..w * h).map(|_| rng.random_bool(0.8)).collect();
    let gt = DepthMap::new(w, h, values, valid).unwrap();
    let gray: Vec<u8> = labels
        .iter()
        .map(|&l| if l == UNLABELED { 0 } else { 30 + 25 * l as u8 })
        .collect();
    (gt, seg, RgbImage::from_gray(w, h, &gray).unwrap())
}

fn ac5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(55);
    let table = builtin_gidas_table();
    let config = MetricConfig::default();
    let mut scored = 0;
    for _ in 0..20 {
        let (gt, seg, _) = random_scene(&mut rng);
        let pred = DepthMap::dense(
            gt.width(),
            gt.height(),
            gt.values()
                .iter()
                .map(|v| v * rng.random_range(0.7..1.3) + 0.1)
                .collect(),
        )
        .unwrap();
        let full = FeatureMap::full(gt.width(), gt.height(), FeatureKind::Edge);
        let scene = PreparedScene::with_features(&gt, Some(&seg), full, &config).map_err(|e| e.to_string())?;
        let s = scene.score(&pred, &table).map_err(|e| e.to_string())?;
        ensure!(
            s.e_feature == s.e_class,
            "e_feature {} != e_class {}",
            s.e_feature,
            s.e_class
        );
        scored += usize::from(s.e_class > 0.0);
    }
    ensure!(scored >= 18, "only {scored} fixtures had a non-zero class term");
    Ok(format!("20 fixtures, {scored} with non-zero class error"))
}

fn ac6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(66);
    let table = builtin_gidas_table();
    let config = MetricConfig {
        feature_kind: FeatureKind::Union,
        ..MetricConfig::default()
    };
    for _ in 0..20 {
        let (gt, seg, rgb) = random_scene(&mut rng);
        let pred = DepthMap::dense(gt.width(), gt.height(), gt.values().to_vec()).unwrap();
        let s = evaluate_sample(&pred, &gt, Some(&seg), Some(&rgb), &table, &config).map_err(|e| e.to_string())?;
        ensure!(
            s.e_class == 0.0 && s.e_feature == 0.0 && s.e_global == 0.0 && s.combined == 0.0,
            "non-zero components {} {} {} {}",
            s.e_class,
            s.e_feature,
            s.e_global,
            s.combined
        );
        ensure!(s.classical.delta1 == Some(1.0), "delta1 = {:?}", s.classical.delta1);
    }
    Ok("20 scenes, all components exactly 0, delta1 = 1".into())
}

// ---------------------------------------------------------------- 7

fn ac7() -> Outcome {
    let (w, h) = (40, 25);
    let x: Vec<f64> = (0..w * h).map(|i| 0.5 + 0.013 * i as f64).collect();
    let fit = fit_scale_shift(
        &DepthMap::dense(w, h, x.clone()).unwrap(),
        &DepthMap::dense(w, h, x.iter().map(|v| 2.0 * v + 3.0).collect()).unwrap(),
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        (fit.scale - 2.0).abs() <= 1e-9 && (fit.shift - 3.0).abs() <= 1e-9,
        "noiseless fit {fit:?}"
    );

    let mut rng = StdRng::seed_from_u64(77);
    let noise = Normal::new(0.0, 0.1).unwrap();
    let n = 10_000;
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
    let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 3.0 + noise.sample(&mut rng)).collect();
    let nf = n as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    let s_ref = (nf * sxy - sx * sy) / (nf * sxx - sx * sx);
    let t_ref = (sy - s_ref * sx) / nf;
    let noisy = fit_scale_shift(
        &DepthMap::dense(100, 100, x).unwrap(),
        &DepthMap::dense(100, 100, y).unwrap(),
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        (noisy.scale - s_ref).abs() <= 0.02 && (noisy.shift - t_ref).abs() <= 0.1,
        "noisy fit ({}, {}) vs OLS ({s_ref}, {t_ref})",
        noisy.scale,
        noisy.shift
    );
    ensure!(
        (noisy.scale - 2.0).abs() <= 0.02 && (noisy.shift - 3.0).abs() <= 0.1,
        "noisy fit ({}, {}) vs truth (2, 3)",
        noisy.scale,
        noisy.shift
    );
    Ok(format!(
        "noiseless ({:.9}, {:.9}); noisy ({:.4}, {:.4}), OLS ({:.4}, {:.4})",
        fit.scale, fit.shift, noisy.scale, noisy.shift, s_ref, t_ref
    ))
}

// ---------------------------------------------------------------- 8

/// 400x250 px of road at 35 m with a 200 px pole at 5 m.
fn missed_pole_fixture() -> SceneSample {
    let (w, h) = (400, 250);
    let pole = |x: usize, y: usize| (200..202).contains(&x) && (100..200).contains(&y);
    let names = [(0u16, "asphalt".to_string()), (1, "pole".to_string())].into();
    let labels: Vec<u16> = (0..w * h).map(|i| u16::from(pole(i % w, i / w))).collect();
    let gt: Vec<f64> = labels.iter().map(|&l| if l == 1 { 5.0 } else { 35.0 }).collect();
    let missed: Vec<f64> = vec![35.0; w * h];
    let offset: Vec<f64> = gt.iter().map(|v| v + 0.1).collect();
    let gray: Vec<u8> = labels.iter().map(|&l| if l == 1 { 220 } else { 60 }).collect();
    SceneSample {
        id: "street/pole".into(),
        gt: DepthMap::dense(w, h, gt).unwrap(),
        seg: Some(SegmentationMask::new(w, h, labels, names).unwrap()),
        rgb: Some(RgbImage::from_gray(w, h, &gray).unwrap()),
        preds: [
            ("A".to_string(), DepthMap::dense(w, h, missed).unwrap()),
            ("B".to_string(), DepthMap::dense(w, h, offset).unwrap()),
        ]
        .into(),
    }
}

fn ac8() -> Outcome {
    let sample = missed_pole_fixture();
    let cfg = RunConfig {
        models: vec!["A".into(), "B".into()],
        densify: GroundTruthFill::None,
        workers: 1,
        ..RunConfig::default()
    };
    let start = Instant::now();
    let report =
        evaluate_samples(std::slice::from_ref(&sample), &cfg, &builtin_gidas_table()).map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(1), start)?;
    let a = &report.model("A").unwrap().aggregate;
    let b = &report.model("B").unwrap().aggregate;
    let (mae_a, mae_b) = (a.e_global.unwrap(), b.e_global.unwrap());
    let (c_a, c_b) = (a.combined.unwrap(), b.combined.unwrap());
    ensure!(mae_a < mae_b, "MAE A {mae_a} is not below MAE B {mae_b}");
    ensure!(c_a > c_b, "combined A {c_a} is not above combined B {c_b}");
    Ok(format!(
        "MAE A {mae_a:.3} < B {mae_b:.3}; combined A {c_a:.3} > B {c_b:.3}; {took:.1?}"
    ))
}

// ---------------------------------------------------------------- 9

fn ac9() -> Outcome {
    let entries = [
        DatasetCatalogEntry::new("D1", 100, ["A"]),
        DatasetCatalogEntry::new("D2", 60, ["A", "B"]),
        DatasetCatalogEntry::new("D3", 30, ["B", "C"]),
    ];
    let frames = frames_per_class(&entries).map_err(|e| e.to_string())?;
    for (c, n) in [("A", 130.0), ("B", 45.0), ("C", 15.0)] {
        ensure!(
            frames.frames(c) == Some(n),
            "N({c}) = {:?}, expected {n}",
            frames.frames(c)
        );
    }
    let shares = class_share(&frames.as_map()).map_err(|e| e.to_string())?;
    let sum: f64 = shares.values().sum();
    ensure!((sum - 1.0).abs() <= 1e-12, "shares sum to {sum}");
    ensure!(shares["A"] == 130.0 / 190.0, "share A {}", shares["A"]);

    // the same catalog through the text format
    let cat = parse_catalog(
        "D1 | 100 | Urban\nD2 | 60 | Urban, Nature\nD3 | 30 | Nature, Human\n",
        Path::new("c"),
        &[],
    )
    .map_err(|e| e.to_string())?;
    let comp = composition(&cat.entries).map_err(|e| e.to_string())?;
    let got: Vec<f64> = comp.classes.iter().map(|r| r.frames).collect();
    ensure!(got == [15.0, 45.0, 130.0], "catalog file gives {got:?}");
    Ok(format!("N = {{A:130, B:45, C:15}}, share sum {sum}"))
}

// ---------------------------------------------------------------- 10

fn ac10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    common::write_dataset(dir.path(), 10, &["m1", "m2"]);
    let start = Instant::now();
    let mut cfg = RunConfig {
        root: dir.path().to_path_buf(),
        models: vec!["m1".into(), "m2".into()],
        feature_kind: FeatureKind::Union,
        workers: 4,
        ..RunConfig::default()
    };
    let mut outputs = Vec::new();
    for (run, workers) in [(0, 4), (1, 4), (2, 1)] {
        cfg.workers = workers;
        let out = dir.path().join(format!("report{run}.json"));
        evaluate_dataset(&cfg)
            .map_err(|e| e.to_string())?
            .write_json(&out)
            .map_err(|e| e.to_string())?;
        outputs.push(fs::read(&out).map_err(|e| e.to_string())?);
    }
    let took = within(Duration::from_secs(30), start)?;
    ensure!(outputs[0] == outputs[1], "two parallel runs differ");
    ensure!(outputs[0] == outputs[2], "parallel and single-worker runs differ");
    Ok(format!(
        "3 runs of 10 scenes x 2 models, {} bytes each, {took:.1?}",
        outputs[0].len()
    ))
}

// ---------------------------------------------------------------- 11

fn ac11() -> Outcome {
    let (w, h) = (31, 19);
    let plane = |x: usize, y: usize| 4.0 + 0.3 * x as f64 - 0.07 * y as f64;
    let corner = |x: usize, y: usize| (x == 0 || x == w - 1) && (y == 0 || y == h - 1);
    let values = (0..w * h)
        .map(|i| if corner(i % w, i / w) { plane(i % w, i / w) } else { 0.0 })
        .collect();
    let sparse = DepthMap::from_sparse(w, h, values).unwrap();
    let dense = densify(&sparse, DensifyMethod::Linear).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for i in 0..w * h {
        let (x, y) = (i % w, i / w);
        worst = worst.max((dense.value(i) - plane(x, y)).abs());
        if sparse.is_valid(i) {
            ensure!(
                dense.value(i).to_bits() == sparse.value(i).to_bits(),
                "input pixel ({x},{y}) changed"
            );
        }
    }
    ensure!(worst <= 1e-6, "max interpolation error {worst}");
    Ok(format!("max interior error {worst:.1e} m, corners bit-exact"))
}

// ---------------------------------------------------------------- 12

/// Foreground pixels with a 4-neighbor outside the foreground.
fn boundary_oracle(fg: &[bool], w: usize, h: usize) -> usize {
    let at = |x: isize, y: isize| {
        x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h && fg[y as usize * w + x as usize]
    };
    (0..w * h)
        .filter(|&i| {
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            at(x, y) && !(at(x - 1, y) && at(x + 1, y) && at(x, y - 1) && at(x, y + 1))
        })
        .count()
}

fn ac12() -> Outcome {
    let mut rng = StdRng::seed_from_u64(12);
    let params = FeatureParams::default();
    for _ in 0..25 {
        let (w, h) = (rng.random_range(30..64), rng.random_range(30..64));
        let (rw, rh) = (rng.random_range(4..w - 12), rng.random_range(4..h - 12));
        let (x0, y0) = (rng.random_range(4..w - rw - 4), rng.random_range(4..h - rh - 4));
        let inside = |x: usize, y: usize| (x0..x0 + rw).contains(&x) && (y0..y0 + rh).contains(&y);
        let gray: Vec<u8> = (0..w * h)
            .map(|i| if inside(i % w, i / w) { 200 } else { 40 })
            .collect();
        let img = RgbImage::from_gray(w, h, &gray).unwrap();
        let contour = edge_contours(&img, &params).map_err(|e| e.to_string())?;
        let rect: Vec<bool> = (0..w * h).map(|i| inside(i % w, i / w)).collect();
        let got = contour.iter().filter(|b| **b).count();
        let want = boundary_oracle(&rect, w, h);
        ensure!(got == want, "{rw}x{rh} rectangle: {got} contour pixels, oracle {want}");

        let mut previous = contour.clone();
        for t in [0, 1, 2, 4] {
            let dilated = dilate_disk(&contour, w, h, t);
            ensure!(
                previous.iter().zip(&dilated).all(|(p, d)| !p || *d),
                "thickness {t} does not contain the previous level"
            );
            previous = dilated;
        }
    }
    Ok("25 rectangles match the boundary oracle; 0 -> 1 -> 2 -> 4 nested".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 12] = [
        ("AC1  classical metrics vs double-loop reference", ac1),
        ("AC2  distance weights, 3-class scene", ac2),
        ("AC3  class error, 3-class scene", ac3),
        ("AC4  accident weight table", ac4),
        ("AC5  all-true feature map equals class term", ac5),
        ("AC6  identity prediction", ac6),
        ("AC7  scale/shift recovery", ac7),
        ("AC8  missed pole flips the ranking", ac8),
        ("AC9  catalog frames per class", ac9),
        ("AC10 deterministic reports", ac10),
        ("AC11 densified plane", ac11),
        ("AC12 contour count and dilation nesting", ac12),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why}");
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
