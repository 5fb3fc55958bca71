//! Harris corner response and peak selection.

use alloc::vec::Vec;

use super::gradient::{clamped, sobel};
use crate::math;

/// Normalized 1-D Gaussian of odd `size`, with the sigma OpenCV derives from
/// the kernel size.
pub(crate) fn gaussian_kernel(size: usize) -> Vec<f64> {
    let sigma = 0.3 * ((size as f64 - 1.0) * 0.5 - 1.0) + 0.8;
    let half = (size / 2) as isize;
    let raw: Vec<f64> = (-half..=half)
        .map(|i| math::exp(-((i * i) as f64) / (2.0 * sigma * sigma)))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

fn blur(data: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let half = (kernel.len() / 2) as isize;
    let mut tmp = Vec::with_capacity(data.len());
    for y in 0..height as isize {
        for x in 0..width as isize {
            let s = kernel
                .iter()
                .enumerate()
                .map(|(k, w)| w * clamped(data, width, height, x + k as isize - half, y))
                .sum::<f64>();
            tmp.push(s);
        }
    }
    let mut out = Vec::with_capacity(data.len());
    for y in 0..height as isize {
        for x in 0..width as isize {
            let s = kernel
                .iter()
                .enumerate()
                .map(|(k, w)| w * clamped(&tmp, width, height, x, y + k as isize - half))
                .sum::<f64>();
            out.push(s);
        }
    }
    out
}

/// `det(M) - k trace(M)^2` of the Gaussian-windowed structure tensor.
pub fn harris_response(luma: &[f64], width: usize, height: usize, window: usize, k: f64) -> Vec<f64> {
    let (gx, gy) = sobel(luma, width, height);
    let xx: Vec<f64> = gx.iter().map(|a| a * a).collect();
    let yy: Vec<f64> = gy.iter().map(|b| b * b).collect();
    let xy: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| a * b).collect();
    let kernel = gaussian_kernel(window);
    let (sxx, syy, sxy) = (
        blur(&xx, width, height, &kernel),
        blur(&yy, width, height, &kernel),
        blur(&xy, width, height, &kernel),
    );
    (0..luma.len())
        .map(|i| {
            let det = sxx[i] * syy[i] - sxy[i] * sxy[i];
            let trace = sxx[i] + syy[i];
            det - k * trace * trace
        })
        .collect()
}

/// Local maxima of `response` over a 3x3 neighborhood that reach
/// `rel_threshold * max(response)`. Plateaus keep their first pixel in
/// raster order. Non-positive responses never qualify.
pub fn corner_seeds(response: &[f64], width: usize, height: usize, rel_threshold: f64) -> Vec<(usize, usize)> {
    let max = response.iter().copied().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return Vec::new();
    }
    let threshold = rel_threshold * max;
    let mut seeds = Vec::new();
    for y in 0..height {
        for x in 0..width {
            let i = y * width + x;
            let r = response[i];
            if r <= 0.0 || r < threshold {
                continue;
            }
            let mut is_peak = true;
            'scan: for dy in -1isize..=1 {
                for dx in -1isize..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    if nx < 0 || ny < 0 || nx >= width as isize || ny >= height as isize {
                        continue;
                    }
                    let n = response[ny as usize * width + nx as usize];
                    let earlier = dy < 0 || (dy == 0 && dx < 0);
                    if n > r || (earlier && n == r) {
                        is_peak = false;
                        break 'scan;
                    }
                }
            }
            if is_peak {
                seeds.push((x, y));
            }
        }
    }
    seeds
}
