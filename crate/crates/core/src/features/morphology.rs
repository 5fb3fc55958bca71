//! Binary dilation by a Euclidean disk.

use alloc::vec::Vec;

/// Offsets `(dx, dy)` with `dx^2 + dy^2 <= radius^2`.
pub fn disk_offsets(radius: u32) -> Vec<(isize, isize)> {
    let r = radius as isize;
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy <= r * r {
                out.push((dx, dy));
            }
        }
    }
    out
}

/// Stamps a disk of `radius` around every active pixel.
pub fn dilate_disk(active: &[bool], width: usize, height: usize, radius: u32) -> Vec<bool> {
    if radius == 0 {
        return active.to_vec();
    }
    let offsets = disk_offsets(radius);
    let mut out = active.to_vec();
    for (i, _) in active.iter().enumerate().filter(|(_, a)| **a) {
        let (x, y) = ((i % width) as isize, (i / width) as isize);
        for &(dx, dy) in &offsets {
            let (nx, ny) = (x + dx, y + dy);
            if nx >= 0 && ny >= 0 && (nx as usize) < width && (ny as usize) < height {
                out[ny as usize * width + nx as usize] = true;
            }
        }
    }
    out
}
