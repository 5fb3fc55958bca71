//! Raster containers.
//!
//! * 16-bit PNG depth: `meters = raw / divisor`, raw 0 marks a missing pixel.
//! * `.f32` depth: the 8 magic bytes `DEPTHF32`, width and height as `u32`
//!   little-endian, then `width * height` little-endian `f32` values in row
//!   order. NaN, infinite and negative values mark missing pixels.
//! * Label PNG: 8- or 16-bit single channel. The all-ones value (255 or
//!   65535) means unlabeled. Class names come from a tab-separated sidecar
//!   with one `id<TAB>name` per line.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use cadepth_core::{ClassId, DepthMap, RgbImage, SegmentationMask, UNLABELED};
use image::{DynamicImage, ImageBuffer, Luma};

use crate::error::{Error, Result};

pub const DEFAULT_PNG_DIVISOR: f64 = 256.0;
pub const F32_MAGIC: &[u8; 8] = b"DEPTHF32";

fn open_image(path: &Path) -> Result<DynamicImage> {
    let reader = image::ImageReader::open(path).map_err(|e| Error::io(path, e))?;
    let reader = reader.with_guessed_format().map_err(|e| Error::io(path, e))?;
    reader.decode().map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::format(path, other.to_string()),
    })
}

fn save_error(path: &Path, e: image::ImageError) -> Error {
    match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::format(path, other.to_string()),
    }
}

pub fn read_depth_png16(path: &Path, divisor: f64) -> Result<DepthMap> {
    if divisor.is_nan() || divisor <= 0.0 {
        return Err(Error::Config("PNG depth divisor must be positive".into()));
    }
    let DynamicImage::ImageLuma16(img) = open_image(path)? else {
        return Err(Error::format(path, "expected a 16-bit single-channel PNG"));
    };
    let (w, h) = (img.width() as usize, img.height() as usize);
    let raw = img.into_raw();
    let values = raw.iter().map(|&r| f64::from(r) / divisor).collect();
    let valid = raw.iter().map(|&r| r != 0).collect();
    Ok(DepthMap::new(w, h, values, valid)?)
}

/// Values are rounded to the nearest step; valid pixels never round to the
/// missing marker and large values saturate at 65535.
pub fn write_depth_png16(path: &Path, depth: &DepthMap, divisor: f64) -> Result<()> {
    if divisor.is_nan() || divisor <= 0.0 {
        return Err(Error::Config("PNG depth divisor must be positive".into()));
    }
    let raw: Vec<u16> = (0..depth.len())
        .map(|i| {
            if depth.is_valid(i) {
                (depth.value(i) * divisor).round().clamp(1.0, 65535.0) as u16
            } else {
                0
            }
        })
        .collect();
    let img: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_raw(depth.width() as u32, depth.height() as u32, raw).expect("buffer matches dimensions");
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| save_error(path, e))
}

pub fn read_depth_f32(path: &Path) -> Result<DepthMap> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() < 16 || &bytes[..8] != F32_MAGIC {
        return Err(Error::format(path, "missing DEPTHF32 header"));
    }
    let w = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let h = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    let body = &bytes[16..];
    if Some(body.len()) != w.checked_mul(h).and_then(|n| n.checked_mul(4)) {
        return Err(Error::format(
            path,
            format!("{w}x{h} raster needs {} data bytes, found {}", w * h * 4, body.len()),
        ));
    }
    let mut values = Vec::with_capacity(w * h);
    let mut valid = Vec::with_capacity(w * h);
    for chunk in body.chunks_exact(4) {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        let ok = v.is_finite() && v >= 0.0;
        values.push(if ok { f64::from(v) } else { 0.0 });
        valid.push(ok);
    }
    Ok(DepthMap::new(w, h, values, valid)?)
}

/// Missing pixels are written as NaN.
pub fn write_depth_f32(path: &Path, depth: &DepthMap) -> Result<()> {
    let mut bytes = Vec::with_capacity(16 + depth.len() * 4);
    bytes.extend_from_slice(F32_MAGIC);
    bytes.extend_from_slice(&(depth.width() as u32).to_le_bytes());
    bytes.extend_from_slice(&(depth.height() as u32).to_le_bytes());
    for i in 0..depth.len() {
        let v = if depth.is_valid(i) {
            depth.value(i) as f32
        } else {
            f32::NAN
        };
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Dispatches on the extension: `.f32` or 16-bit `.png`.
pub fn read_depth(path: &Path) -> Result<DepthMap> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("f32") => read_depth_f32(path),
        Some("png") => read_depth_png16(path, DEFAULT_PNG_DIVISOR),
        _ => Err(Error::format(path, "depth files must end in .png or .f32")),
    }
}

pub fn write_depth(path: &Path, depth: &DepthMap) -> Result<()> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("f32") => write_depth_f32(path, depth),
        Some("png") => write_depth_png16(path, depth, DEFAULT_PNG_DIVISOR),
        _ => Err(Error::format(path, "depth files must end in .png or .f32")),
    }
}

/// `id<TAB>name` per line; blank lines and `#` comments are skipped.
pub fn read_name_table(path: &Path) -> Result<BTreeMap<ClassId, String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_name_table(&text, path)
}

pub fn parse_name_table(text: &str, path: &Path) -> Result<BTreeMap<ClassId, String>> {
    let mut table = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let parse_err = |reason: String| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            reason,
        };
        let (id, name) = line
            .split_once('\t')
            .ok_or_else(|| parse_err("expected `id<TAB>name`".into()))?;
        let id: ClassId = id
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("bad class id `{id}`")))?;
        if id == UNLABELED {
            return Err(parse_err(format!("id {id} is reserved for unlabeled pixels")));
        }
        let name = name.trim();
        if name.is_empty() {
            return Err(parse_err("empty class name".into()));
        }
        if table.insert(id, name.to_string()).is_some() {
            return Err(parse_err(format!("duplicate id {id}")));
        }
    }
    Ok(table)
}

pub fn read_labels_png(path: &Path, names: &BTreeMap<ClassId, String>) -> Result<SegmentationMask> {
    let (w, h, labels) = match open_image(path)? {
        DynamicImage::ImageLuma8(img) => {
            let (w, h) = img.dimensions();
            let labels = img
                .into_raw()
                .into_iter()
                .map(|v| if v == u8::MAX { UNLABELED } else { ClassId::from(v) })
                .collect();
            (w, h, labels)
        }
        DynamicImage::ImageLuma16(img) => {
            let (w, h) = img.dimensions();
            (w, h, img.into_raw())
        }
        _ => return Err(Error::format(path, "label PNG must have a single 8- or 16-bit channel")),
    };
    Ok(SegmentationMask::new(w as usize, h as usize, labels, names.clone())?)
}

/// Written as 8-bit when every id fits below 255, otherwise 16-bit.
pub fn write_labels_png(path: &Path, seg: &SegmentationMask) -> Result<()> {
    let (w, h) = (seg.width() as u32, seg.height() as u32);
    let small = seg.labels().iter().all(|&l| l == UNLABELED || l < u16::from(u8::MAX));
    let result = if small {
        let raw = seg
            .labels()
            .iter()
            .map(|&l| if l == UNLABELED { u8::MAX } else { l as u8 })
            .collect();
        ImageBuffer::<Luma<u8>, Vec<u8>>::from_raw(w, h, raw)
            .expect("buffer matches dimensions")
            .save_with_format(path, image::ImageFormat::Png)
    } else {
        ImageBuffer::<Luma<u16>, Vec<u16>>::from_raw(w, h, seg.labels().to_vec())
            .expect("buffer matches dimensions")
            .save_with_format(path, image::ImageFormat::Png)
    };
    result.map_err(|e| save_error(path, e))
}

pub fn write_name_table(path: &Path, names: &BTreeMap<ClassId, String>) -> Result<()> {
    let text: String = names.iter().map(|(id, n)| format!("{id}\t{n}\n")).collect();
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Any PNG or JPEG; grayscale is replicated and alpha dropped.
pub fn read_rgb(path: &Path) -> Result<RgbImage> {
    let img = open_image(path)?.into_rgb8();
    let (w, h) = img.dimensions();
    Ok(RgbImage::new(w as usize, h as usize, img.into_raw())?)
}

pub fn write_rgb(path: &Path, img: &RgbImage) -> Result<()> {
    ImageBuffer::<image::Rgb<u8>, Vec<u8>>::from_raw(img.width() as u32, img.height() as u32, img.data().to_vec())
        .expect("buffer matches dimensions")
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| save_error(path, e))
}
