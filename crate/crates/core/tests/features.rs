use cadepth_core::features::contour::{contour_mask, find_contours};
use cadepth_core::features::morphology::dilate_disk;
use cadepth_core::features::{corner_points, edge_contours, FeatureParams};
use cadepth_core::{extract_corners, extract_edges, extract_features, FeatureKind, RgbImage};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn gray_image(w: usize, h: usize, f: impl Fn(usize, usize) -> u8) -> RgbImage {
    let g: Vec<u8> = (0..w * h).map(|i| f(i % w, i / w)).collect();
    RgbImage::from_gray(w, h, &g).unwrap()
}

/// Foreground pixels with a 4-neighbor outside the foreground or the frame.
fn boundary_scan(fg: &[bool], w: usize, h: usize) -> Vec<bool> {
    let at = |x: isize, y: isize| {
        x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h && fg[y as usize * w + x as usize]
    };
    (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            at(x, y) && (!at(x - 1, y) || !at(x + 1, y) || !at(x, y - 1) || !at(x, y + 1))
        })
        .collect()
}

/// Dilation by definition: any active pixel within Euclidean distance `r`.
fn brute_dilate(active: &[bool], w: usize, h: usize, r: u32) -> Vec<bool> {
    let r2 = (r * r) as isize;
    (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            (0..w * h).any(|j| {
                let (u, v) = ((j % w) as isize, (j / w) as isize);
                active[j] && (u - x).pow(2) + (v - y).pow(2) <= r2
            })
        })
        .collect()
}

fn count(v: &[bool]) -> usize {
    v.iter().filter(|b| **b).count()
}

#[test]
fn rectangle_contour_count_matches_boundary_scan() {
    let mut rng = StdRng::seed_from_u64(3);
    let params = FeatureParams::default();
    for _ in 0..40 {
        let (w, h) = (rng.random_range(30..60), rng.random_range(30..60));
        let (rw, rh) = (rng.random_range(4..w - 12), rng.random_range(4..h - 12));
        let (x0, y0) = (rng.random_range(4..w - rw - 4), rng.random_range(4..h - rh - 4));
        let inside = |x: usize, y: usize| (x0..x0 + rw).contains(&x) && (y0..y0 + rh).contains(&y);
        let img = gray_image(w, h, |x, y| if inside(x, y) { 210 } else { 30 });
        let contour = edge_contours(&img, &params).unwrap();
        let rect: Vec<bool> = (0..w * h).map(|i| inside(i % w, i / w)).collect();
        assert_eq!(count(&contour), count(&boundary_scan(&rect, w, h)));
        assert_eq!(count(&contour), 2 * (rw + rh) - 4);
    }
}

#[test]
fn border_following_visits_exactly_the_boundary() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..200 {
        let (w, h) = (rng.random_range(1..20), rng.random_range(1..20));
        let p = rng.random_range(0.2..0.9);
        let fg: Vec<bool> = (0..w * h).map(|_| rng.random_bool(p)).collect();
        assert_eq!(contour_mask(&fg, w, h), boundary_scan(&fg, w, h));
    }
}

#[test]
fn every_component_has_one_outer_border() {
    // three separated squares and one with a hole
    let (w, h) = (30, 10);
    let fg: Vec<bool> = (0..w * h)
        .map(|i| {
            let (x, y) = (i % w, i / w);
            let sq = |x0: usize| (x0..x0 + 5).contains(&x) && (2..7).contains(&y);
            (sq(1) || sq(8) || sq(15) || sq(22)) && !(x == 24 && y == 4)
        })
        .collect();
    let contours = find_contours(&fg, w, h);
    assert_eq!(contours.iter().filter(|c| !c.is_hole).count(), 4);
    assert_eq!(contours.iter().filter(|c| c.is_hole).count(), 1);
}

#[test]
fn dilation_is_disk_and_monotone() {
    let (w, h) = (48, 40);
    let img = gray_image(w, h, |x, y| {
        let circle = (x as f64 - 30.0).powi(2) + (y as f64 - 22.0).powi(2) < 64.0;
        if (6..20).contains(&x) && (8..30).contains(&y) || circle {
            220
        } else {
            20
        }
    });
    let base = FeatureParams::default();
    let contour = edge_contours(&img, &base).unwrap();
    let mut previous: Option<Vec<bool>> = None;
    for t in [0, 1, 2, 4] {
        let p = FeatureParams {
            edge_thickness: t,
            ..base.clone()
        };
        let map = extract_edges(&img, &p).unwrap();
        assert_eq!(map.active(), brute_dilate(&contour, w, h, t).as_slice());
        if let Some(prev) = &previous {
            assert!(prev.iter().zip(map.active()).all(|(a, b)| !a || *b));
            assert!(count(map.active()) > count(prev));
        }
        previous = Some(map.active().to_vec());
    }
    assert_eq!(dilate_disk(&contour, w, h, 0), contour);
}

/// Harris response written out directly: 3x3 Sobel with replicated border,
/// 2-D Gaussian window, no separability.
fn brute_harris(luma: &[f64], w: usize, h: usize, window: usize, k: f64) -> Vec<f64> {
    let px = |x: isize, y: isize| {
        let cx = x.clamp(0, w as isize - 1) as usize;
        let cy = y.clamp(0, h as isize - 1) as usize;
        luma[cy * w + cx]
    };
    let n = w * h;
    let (mut ixx, mut iyy, mut ixy) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1))
                - (px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1));
            let gy = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1))
                - (px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1));
            let i = y as usize * w + x as usize;
            ixx[i] = gx * gx;
            iyy[i] = gy * gy;
            ixy[i] = gx * gy;
        }
    }
    let r = (window / 2) as isize;
    let sigma = 0.3 * ((window as f64 - 1.0) * 0.5 - 1.0) + 0.8;
    let g1: Vec<f64> = (-r..=r)
        .map(|d| (-(d * d) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let norm: f64 = g1.iter().sum::<f64>().powi(2);
    let mut out = vec![0.0; n];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
            for dy in -r..=r {
                for dx in -r..=r {
                    let cx = (x + dx).clamp(0, w as isize - 1) as usize;
                    let cy = (y + dy).clamp(0, h as isize - 1) as usize;
                    let wgt = g1[(dx + r) as usize] * g1[(dy + r) as usize] / norm;
                    let j = cy * w + cx;
                    a += wgt * ixx[j];
                    b += wgt * iyy[j];
                    c += wgt * ixy[j];
                }
            }
            out[y as usize * w + x as usize] = a * b - c * c - k * (a + b) * (a + b);
        }
    }
    out
}

#[test]
fn l_corner_has_a_single_seed_at_the_response_peak() {
    let (w, h) = (40, 36);
    let img = gray_image(w, h, |x, y| if x >= 18 && y >= 15 { 220 } else { 30 });
    let params = FeatureParams::default();
    let seeds = corner_points(&img, &params).unwrap();
    assert_eq!(seeds.len(), 1);
    let (sx, sy) = seeds[0];

    let response = brute_harris(&img.luma(), w, h, params.window, params.corner_k);
    let peak = (0..w * h)
        .max_by(|&a, &b| response[a].partial_cmp(&response[b]).unwrap())
        .unwrap();
    let (px, py) = (peak % w, peak / w);
    assert!(sx.abs_diff(px) <= 2 && sy.abs_diff(py) <= 2);
    // the vertex sits between pixels 17 and 18 on each axis
    assert!((sx as f64 - 17.5).abs() <= 2.0 && (sy as f64 - 14.5).abs() <= 2.0);
}

#[test]
fn checkerboard_seed_count() {
    for sq in [6, 8, 10] {
        let n = 8 * sq;
        let img = gray_image(n, n, |x, y| if (x / sq + y / sq) % 2 == 0 { 230 } else { 25 });
        let seeds = corner_points(&img, &FeatureParams::default()).unwrap();
        assert!(
            (40..=49).contains(&seeds.len()),
            "{} seeds at square size {sq}",
            seeds.len()
        );
    }
}

#[test]
fn features_follow_translation() {
    let (w, h) = (64, 56);
    let scene = |x: isize, y: isize| -> u8 {
        let tri = x > 10 && y > 12 && x < 30 && (x - 10) > (y - 12) / 2;
        let disc = (x - 45).pow(2) + (y - 30).pow(2) < 81;
        if tri || disc {
            200
        } else {
            40
        }
    };
    let (dx, dy) = (5isize, 3isize);
    let a = gray_image(w, h, |x, y| scene(x as isize, y as isize));
    let b = gray_image(w, h, |x, y| scene(x as isize - dx, y as isize - dy));
    let p = FeatureParams::default();
    for kind in [FeatureKind::Edge, FeatureKind::Corner] {
        let fa = extract_features(&a, &p, kind).unwrap();
        let fb = extract_features(&b, &p, kind).unwrap();
        let margin = 8isize;
        for y in margin..h as isize - margin {
            for x in margin..w as isize - margin {
                let (ux, uy) = (x - dx, y - dy);
                if ux < margin || uy < margin {
                    continue;
                }
                assert_eq!(
                    fb.is_active(y as usize * w + x as usize),
                    fa.is_active(uy as usize * w + ux as usize),
                    "{kind:?} at ({x}, {y})"
                );
            }
        }
    }
}

#[test]
fn extraction_is_deterministic() {
    let mut rng = StdRng::seed_from_u64(1);
    let (w, h) = (32, 24);
    let data: Vec<u8> = (0..w * h * 3).map(|_| rng.random()).collect();
    let img = RgbImage::new(w, h, data).unwrap();
    let p = FeatureParams::default();
    assert_eq!(extract_edges(&img, &p).unwrap(), extract_edges(&img, &p).unwrap());
    assert_eq!(extract_corners(&img, &p).unwrap(), extract_corners(&img, &p).unwrap());
    let union = extract_features(&img, &p, FeatureKind::Union).unwrap();
    assert!(extract_edges(&img, &p).unwrap().is_subset_of(&union));
    assert!(extract_corners(&img, &p).unwrap().is_subset_of(&union));
}
