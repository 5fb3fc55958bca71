//! Least-squares alignment of affine-invariant depth to metric ground truth,
//! `gt ≈ scale * pred + shift`.

use crate::error::{Error, Result};
use crate::math;
use crate::raster::{check_dims, DepthMap};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AffineFit {
    pub scale: f64,
    /// Meters.
    pub shift: f64,
    pub residual_rmse: f64,
    pub sample_count: usize,
}

impl AffineFit {
    pub const IDENTITY: AffineFit = AffineFit {
        scale: 1.0,
        shift: 0.0,
        residual_rmse: 0.0,
        sample_count: 0,
    };
}

/// Ordinary least squares over the pixels valid in both maps.
pub fn fit_scale_shift(affine_pred: &DepthMap, metric_gt: &DepthMap) -> Result<AffineFit> {
    fit_scale_shift_many(&[(affine_pred, metric_gt)])
}

/// One fit pooled over several frames.
pub fn fit_scale_shift_many(pairs: &[(&DepthMap, &DepthMap)]) -> Result<AffineFit> {
    for (p, g) in pairs {
        check_dims(g.dims(), p.dims())?;
    }
    let samples = || {
        pairs.iter().flat_map(|(p, g)| {
            (0..g.len())
                .filter(move |&i| p.is_valid(i) && g.is_valid(i))
                .map(move |i| (p.value(i), g.value(i)))
        })
    };

    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
    for (x, y) in samples() {
        sx += x;
        sy += y;
        n += 1;
    }
    if n < 2 {
        return Err(Error::DegenerateFit);
    }
    let (mx, my) = (sx / n as f64, sy / n as f64);

    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in samples() {
        let dx = x - mx;
        sxx += dx * dx;
        sxy += dx * (y - my);
    }
    if sxx.is_nan() || sxx <= 0.0 {
        return Err(Error::DegenerateFit);
    }
    let scale = sxy / sxx;
    let shift = my - scale * mx;

    let mut sse = 0.0;
    for (x, y) in samples() {
        let r = y - (scale * x + shift);
        sse += r * r;
    }
    Ok(AffineFit {
        scale,
        shift,
        residual_rmse: math::sqrt(sse / n as f64),
        sample_count: n,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineApplied {
    pub depth: DepthMap,
    /// Valid pixels whose mapped value was negative and clamped to zero.
    pub clamped: usize,
}

/// `scale * value + shift` on every valid pixel, negatives clamped to 0.
pub fn apply_affine(depth: &DepthMap, fit: &AffineFit) -> AffineApplied {
    let (w, h, mut values, valid) = depth.clone().into_parts();
    let mut clamped = 0;
    for (v, ok) in values.iter_mut().zip(&valid) {
        if *ok {
            let mapped = fit.scale * *v + fit.shift;
            if mapped < 0.0 {
                clamped += 1;
                *v = 0.0;
            } else {
                *v = mapped;
            }
        }
    }
    AffineApplied {
        depth: DepthMap::new(w, h, values, valid).expect("mapped values are finite and non-negative"),
        clamped,
    }
}
