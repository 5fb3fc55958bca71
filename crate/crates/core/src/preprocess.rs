//! Ground-truth preparation: densifying sparse depth and masking sky.

use alloc::collections::BTreeSet;
#[cfg(feature = "densify")]
use alloc::vec::Vec;

#[cfg(feature = "densify")]
use spade::{DelaunayTriangulation, FloatTriangulation, HasPosition, Point2};

#[cfg(feature = "densify")]
use crate::error::Error;
use crate::error::Result;
use crate::raster::{check_dims, ClassId, DepthMap, SegmentationMask};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum DensifyMethod {
    /// Value of the Euclidean-nearest valid pixel.
    Nearest,
    /// Barycentric interpolation on the Delaunay triangulation of valid
    /// pixels, nearest outside the convex hull.
    #[default]
    Linear,
}

impl DensifyMethod {
    pub fn min_samples(self) -> usize {
        match self {
            DensifyMethod::Nearest => 1,
            DensifyMethod::Linear => 3,
        }
    }
}

#[cfg(feature = "densify")]
struct Sample {
    position: Point2<f64>,
    depth: f64,
}

#[cfg(feature = "densify")]
impl HasPosition for Sample {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        self.position
    }
}

/// Fills every invalid pixel; valid pixels pass through bit-for-bit.
#[cfg(feature = "densify")]
pub fn densify(sparse: &DepthMap, method: DensifyMethod) -> Result<DepthMap> {
    let (w, h) = sparse.dims();
    let valid = sparse.valid_count();
    if valid < method.min_samples() {
        return Err(Error::TooSparse {
            valid,
            required: method.min_samples(),
        });
    }
    if valid == sparse.len() {
        return Ok(sparse.clone());
    }

    let samples: Vec<Sample> = (0..sparse.len())
        .filter(|&i| sparse.is_valid(i))
        .map(|i| Sample {
            position: Point2::new((i % w) as f64, (i / w) as f64),
            depth: sparse.value(i),
        })
        .collect();
    let tri = DelaunayTriangulation::<Sample>::bulk_load_stable(samples).expect("pixel centers are finite");
    let barycentric = tri.barycentric();

    let mut values = Vec::with_capacity(sparse.len());
    for i in 0..sparse.len() {
        if sparse.is_valid(i) {
            values.push(sparse.value(i));
            continue;
        }
        let p = Point2::new((i % w) as f64, (i / w) as f64);
        let linear = match method {
            DensifyMethod::Linear => barycentric.interpolate(|v| v.data().depth, p),
            DensifyMethod::Nearest => None,
        };
        let v = match linear {
            Some(v) => v.max(0.0),
            None => {
                tri.nearest_neighbor(p)
                    .expect("triangulation is not empty")
                    .data()
                    .depth
            }
        };
        values.push(v);
    }
    DepthMap::dense(w, h, values)
}

/// Marks pixels labeled with any of `sky_ids` invalid.
pub fn mask_sky(depth: &DepthMap, seg: &SegmentationMask, sky_ids: &BTreeSet<ClassId>) -> Result<DepthMap> {
    check_dims(depth.dims(), seg.dims())?;
    depth.without(&seg.mask_of(sky_ids))
}
