#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::Path;

use cadepth::dataset::{write_sample, SceneSample};
use cadepth_core::{DepthMap, RgbImage, SegmentationMask};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const CLASSES: [&str; 7] = ["car", "person", "pole", "asphalt", "building", "bush", "sky"];

/// A street-like synthetic frame: sky on top, a building band, road at the
/// bottom and a few objects. Ground truth is 70% sparse; predictions are
/// ground truth plus model-specific noise, stored at f32 precision.
pub fn synthetic_sample(id: &str, seed: u64, models: &[&str]) -> SceneSample {
    let mut rng = StdRng::seed_from_u64(seed);
    let (w, h) = (48usize, 32usize);
    let mut labels = vec![0u16; w * h];
    let mut depth = vec![0.0f64; w * h];
    let car_x = rng.random_range(4..24);
    let person_x = rng.random_range(28..40);
    let pole_x = rng.random_range(2..46);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let (class, d) = if y < 6 {
                (6, 500.0)
            } else if y < 14 {
                (4, 60.0 + x as f64 * 0.25)
            } else if (car_x..car_x + 12).contains(&x) && (16..26).contains(&y) {
                (0, 12.0 + (x - car_x) as f64 * 0.1)
            } else if (person_x..person_x + 4).contains(&x) && (12..28).contains(&y) {
                (1, 8.0)
            } else if x == pole_x && y >= 8 {
                (2, 6.0)
            } else if y < 18 {
                (5, 30.0)
            } else {
                (3, 40.0 - (y - 18) as f64 * 2.0)
            };
            labels[i] = class;
            depth[i] = d;
        }
    }
    let gt_valid: Vec<bool> = (0..w * h).map(|_| rng.random_bool(0.3)).collect();
    let gt = DepthMap::new(w, h, depth.iter().map(|&d| f32_round(d)).collect(), gt_valid).unwrap();
    let names: BTreeMap<u16, String> = CLASSES
        .iter()
        .enumerate()
        .map(|(i, n)| (i as u16, n.to_string()))
        .collect();
    let seg = SegmentationMask::new(w, h, labels.clone(), names).unwrap();
    let gray: Vec<u8> = labels.iter().map(|&l| 20 + 35 * l as u8).collect();
    let rgb = RgbImage::from_gray(w, h, &gray).unwrap();
    let mut preds = BTreeMap::new();
    for (k, m) in models.iter().enumerate() {
        let bias = 0.5 * k as f64;
        let values = depth
            .iter()
            .map(|&d| f32_round((d + bias + rng.random_range(-1.0..1.0)).max(0.1)))
            .collect();
        preds.insert(m.to_string(), DepthMap::dense(w, h, values).unwrap());
    }
    SceneSample {
        id: id.to_string(),
        gt,
        seg: Some(seg),
        rgb: Some(rgb),
        preds,
    }
}

pub fn f32_round(v: f64) -> f64 {
    v as f32 as f64
}

/// Writes `n` synthetic samples as `scene{i/2}/frame{i%2}`.
pub fn write_dataset(root: &Path, n: usize, models: &[&str]) -> Vec<SceneSample> {
    (0..n)
        .map(|i| {
            let s = synthetic_sample(&format!("scene{}/frame{}", i / 2, i % 2), 1000 + i as u64, models);
            write_sample(root, &s).unwrap();
            s
        })
        .collect()
}
