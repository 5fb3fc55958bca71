//! Gradient-magnitude edges: Sobel, non-maximum thinning along the gradient
//! direction, then hysteresis between a low and a high threshold.

use alloc::vec;
use alloc::vec::Vec;

use super::gradient::sobel;
use crate::math;

const TAN_22_5: f64 = 0.414_213_562_373_095_1;
const TAN_67_5: f64 = 2.414_213_562_373_095;

/// Binary edge raster of a luma image.
pub(crate) fn edge_pixels(luma: &[f64], width: usize, height: usize, low: f64, high: f64) -> Vec<bool> {
    let (gx, gy) = sobel(luma, width, height);
    let magnitude: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| math::sqrt(a * a + b * b)).collect();
    let mag_at = |x: isize, y: isize| -> f64 {
        if x < 0 || y < 0 || x >= width as isize || y >= height as isize {
            0.0
        } else {
            magnitude[y as usize * width + x as usize]
        }
    };

    // 0 = suppressed, 1 = weak, 2 = strong
    let mut class = vec![0u8; luma.len()];
    for y in 0..height {
        for x in 0..width {
            let i = y * width + x;
            let m = magnitude[i];
            if m <= low {
                continue;
            }
            let (ax, ay) = (gx[i].abs(), gy[i].abs());
            let (xi, yi) = (x as isize, y as isize);
            let (before, after) = if ay <= ax * TAN_22_5 {
                (mag_at(xi - 1, yi), mag_at(xi + 1, yi))
            } else if ay >= ax * TAN_67_5 {
                (mag_at(xi, yi - 1), mag_at(xi, yi + 1))
            } else if gx[i] * gy[i] > 0.0 {
                (mag_at(xi - 1, yi - 1), mag_at(xi + 1, yi + 1))
            } else {
                (mag_at(xi + 1, yi - 1), mag_at(xi - 1, yi + 1))
            };
            if m > before && m >= after {
                class[i] = if m > high { 2 } else { 1 };
            }
        }
    }

    let mut edges = vec![false; luma.len()];
    let mut stack: Vec<usize> = (0..luma.len()).filter(|&i| class[i] == 2).collect();
    for &i in &stack {
        edges[i] = true;
    }
    while let Some(i) = stack.pop() {
        let (x, y) = ((i % width) as isize, (i / width) as isize);
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= width as isize || ny >= height as isize {
                    continue;
                }
                let j = ny as usize * width + nx as usize;
                if class[j] == 1 && !edges[j] {
                    edges[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    edges
}
