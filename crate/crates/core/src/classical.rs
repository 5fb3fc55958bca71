//! Standard depth metrics, computed over a comparison domain.
//!
//! Every function takes an optional pixel mask; the effective domain is the
//! mask AND the validity of both maps. Ratio metrics additionally drop pixels
//! with non-positive ground truth, and log metrics drop pixels where either
//! value is non-positive.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::raster::{check_dims, DepthMap};

fn pairs<'a>(
    pred: &'a DepthMap,
    gt: &'a DepthMap,
    domain: Option<&'a [bool]>,
) -> Result<impl Iterator<Item = (f64, f64)> + 'a> {
    check_dims(gt.dims(), pred.dims())?;
    if let Some(d) = domain {
        if d.len() != gt.len() {
            return Err(Error::BufferLength {
                expected: gt.len(),
                found: d.len(),
            });
        }
    }
    Ok((0..gt.len())
        .filter(move |&i| pred.is_valid(i) && gt.is_valid(i) && domain.is_none_or(|d| d[i]))
        .map(move |i| (pred.value(i), gt.value(i))))
}

/// Mean of `f` over the pairs accepted by `keep`.
fn mean_of(
    pred: &DepthMap,
    gt: &DepthMap,
    domain: Option<&[bool]>,
    keep: impl Fn(f64, f64) -> bool,
    f: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (x, y) in pairs(pred, gt, domain)? {
        if keep(x, y) {
            sum += f(x, y);
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    Ok(sum / n as f64)
}

fn any(_: f64, _: f64) -> bool {
    true
}

fn gt_positive(_: f64, y: f64) -> bool {
    y > 0.0
}

fn both_positive(x: f64, y: f64) -> bool {
    x > 0.0 && y > 0.0
}

/// Mean absolute error in meters.
pub fn mae(pred: &DepthMap, gt: &DepthMap, domain: Option<&[bool]>) -> Result<f64> {
    mean_of(pred, gt, domain, any, |x, y| (x - y).abs())
}

pub fn rmse(pred: &DepthMap, gt: &DepthMap, domain: Option<&[bool]>) -> Result<f64> {
    mean_of(pred, gt, domain, any, |x, y| (x - y) * (x - y)).map(math::sqrt)
}

pub fn abs_rel(pred: &DepthMap, gt: &DepthMap, domain: Option<&[bool]>) -> Result<f64> {
    mean_of(pred, gt, domain, gt_positive, |x, y| (x - y).abs() / y)
}

pub fn rel_sq(pred: &DepthMap, gt: &DepthMap, domain: Option<&[bool]>) -> Result<f64> {
    mean_of(pred, gt, domain, gt_positive, |x, y| (x - y) * (x - y) / y)
}

pub fn log_rmse(pred: &DepthMap, gt: &DepthMap, domain: Option<&[bool]>) -> Result<f64> {
    mean_of(pred, gt, domain, both_positive, |x, y| {
        let d = math::ln(x) - math::ln(y);
        d * d
    })
    .map(math::sqrt)
}

pub fn log10_err(pred: &DepthMap, gt: &DepthMap, domain: Option<&[bool]>) -> Result<f64> {
    mean_of(pred, gt, domain, both_positive, |x, y| {
        (math::log10(x) - math::log10(y)).abs()
    })
}

/// Scale-invariant log error `sqrt(mean(d^2) - mean(d)^2)` with
/// `d = ln x - ln y`.
pub fn silog(pred: &DepthMap, gt: &DepthMap, domain: Option<&[bool]>) -> Result<f64> {
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut n = 0usize;
    for (x, y) in pairs(pred, gt, domain)? {
        if both_positive(x, y) {
            let d = math::ln(x) - math::ln(y);
            sum += d;
            sum_sq += d * d;
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    let mean = sum / n as f64;
    let var = sum_sq / n as f64 - mean * mean;
    Ok(math::sqrt(var.max(0.0)))
}

/// Fraction of pixels with `max(x/y, y/x) < 1.25^k`, `k` in `1..=3`.
pub fn delta_k(pred: &DepthMap, gt: &DepthMap, domain: Option<&[bool]>, k: u32) -> Result<f64> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidParams("delta threshold exponent must be 1, 2 or 3"));
    }
    let threshold = math::powi(1.25, k as i32);
    mean_of(pred, gt, domain, both_positive, |x, y| {
        if (x / y).max(y / x) < threshold {
            1.0
        } else {
            0.0
        }
    })
}

/// The full classical suite for one image.
///
/// Ratio and log metrics are `None` when every pixel of the domain was
/// excluded by their positivity rule.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassicalMetrics {
    pub mae: f64,
    pub rmse: f64,
    pub abs_rel: Option<f64>,
    pub rel_sq: Option<f64>,
    pub log_rmse: Option<f64>,
    pub log10: Option<f64>,
    pub silog: Option<f64>,
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    pub delta3: Option<f64>,
    /// Pixels in the domain.
    pub compared: usize,
    /// Domain pixels dropped from AbsRel/RelSq (ground truth `<= 0`).
    pub excluded_ratio: usize,
    /// Domain pixels dropped from log and delta metrics.
    pub excluded_log: usize,
}

fn optional(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::EmptyDomain) => Ok(None),
        Err(e) => Err(e),
    }
}

impl ClassicalMetrics {
    pub fn compute(pred: &DepthMap, gt: &DepthMap, domain: Option<&[bool]>) -> Result<Self> {
        let mut compared = 0;
        let mut excluded_ratio = 0;
        let mut excluded_log = 0;
        for (x, y) in pairs(pred, gt, domain)? {
            compared += 1;
            excluded_ratio += usize::from(!gt_positive(x, y));
            excluded_log += usize::from(!both_positive(x, y));
        }
        Ok(Self {
            mae: mae(pred, gt, domain)?,
            rmse: rmse(pred, gt, domain)?,
            abs_rel: optional(abs_rel(pred, gt, domain))?,
            rel_sq: optional(rel_sq(pred, gt, domain))?,
            log_rmse: optional(log_rmse(pred, gt, domain))?,
            log10: optional(log10_err(pred, gt, domain))?,
            silog: optional(silog(pred, gt, domain))?,
            delta1: optional(delta_k(pred, gt, domain, 1))?,
            delta2: optional(delta_k(pred, gt, domain, 2))?,
            delta3: optional(delta_k(pred, gt, domain, 3))?,
            compared,
            excluded_ratio,
            excluded_log,
        })
    }

    /// `(name, value)` rows for every defined metric, in a fixed order.
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        let rows = [
            ("mae", Some(self.mae)),
            ("rmse", Some(self.rmse)),
            ("abs_rel", self.abs_rel),
            ("rel_sq", self.rel_sq),
            ("log_rmse", self.log_rmse),
            ("log10", self.log10),
            ("silog", self.silog),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("delta3", self.delta3),
        ];
        rows.into_iter().filter_map(|(n, v)| v.map(|v| (n, v))).collect()
    }
}
