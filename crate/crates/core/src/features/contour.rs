//! Topological border following (Suzuki & Abe, 1985) on a binary raster.
//!
//! Foreground is 8-connected, background 4-connected, and the image is
//! surrounded by a virtual background frame. Every traced point is a
//! foreground pixel with a background pixel among its 4-neighbors.

use alloc::vec;
use alloc::vec::Vec;

/// Clockwise neighbor offsets `(row, col)`, starting east.
const DIRS: [(isize, isize); 8] = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)];

fn dir_of(di: isize, dj: isize) -> usize {
    DIRS.iter()
        .position(|&d| d == (di, dj))
        .expect("points are 8-neighbors")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contour {
    /// Traced pixels `(x, y)` in visiting order; pixels on one-pixel-wide
    /// parts appear twice.
    pub points: Vec<(usize, usize)>,
    pub is_hole: bool,
}

/// Traces every outer and hole border of `binary`.
pub fn find_contours(binary: &[bool], width: usize, height: usize) -> Vec<Contour> {
    let pw = width + 2;
    let mut f = vec![0i32; pw * (height + 2)];
    for y in 0..height {
        for x in 0..width {
            if binary[y * width + x] {
                f[(y + 1) * pw + x + 1] = 1;
            }
        }
    }

    let mut contours = Vec::new();
    let mut nbd = 1i32;
    for i in 1..=height {
        for j in 1..=width {
            let here = f[i * pw + j];
            if here == 0 {
                continue;
            }
            let start = if here == 1 && f[i * pw + j - 1] == 0 {
                Some(((i, j - 1), false))
            } else if here >= 1 && f[i * pw + j + 1] == 0 {
                Some(((i, j + 1), true))
            } else {
                None
            };
            if let Some((from, is_hole)) = start {
                nbd += 1;
                let points = follow(&mut f, pw, (i, j), from, nbd)
                    .into_iter()
                    .map(|(r, c)| (c - 1, r - 1))
                    .collect();
                contours.push(Contour { points, is_hole });
            }
        }
    }
    contours
}

fn follow(f: &mut [i32], pw: usize, start: (usize, usize), from: (usize, usize), nbd: i32) -> Vec<(usize, usize)> {
    let at = |p: (usize, usize)| p.0 * pw + p.1;
    let step = |p: (usize, usize), d: usize| ((p.0 as isize + DIRS[d].0) as usize, (p.1 as isize + DIRS[d].1) as usize);
    let rel = |a: (usize, usize), b: (usize, usize)| dir_of(a.0 as isize - b.0 as isize, a.1 as isize - b.1 as isize);

    let d0 = rel(from, start);
    let first = (0..8).map(|k| step(start, (d0 + k) % 8)).find(|&q| f[at(q)] != 0);
    let Some(first) = first else {
        f[at(start)] = -nbd;
        return vec![start];
    };

    let mut points = Vec::new();
    let mut prev = first;
    let mut cur = start;
    loop {
        let d2 = rel(prev, cur);
        let mut east_is_background = false;
        let mut next = prev;
        for k in 1..=8 {
            let d = (d2 + 8 - k) % 8;
            let q = step(cur, d);
            if f[at(q)] != 0 {
                next = q;
                break;
            }
            if d == 0 {
                east_is_background = true;
            }
        }
        if east_is_background {
            f[at(cur)] = -nbd;
        } else if f[at(cur)] == 1 {
            f[at(cur)] = nbd;
        }
        points.push(cur);
        if next == start && cur == first {
            break;
        }
        prev = cur;
        cur = next;
    }
    points
}

/// Binary raster of every pixel visited by border following.
pub fn contour_mask(binary: &[bool], width: usize, height: usize) -> Vec<bool> {
    let mut mask = vec![false; width * height];
    for c in find_contours(binary, width, height) {
        for (x, y) in c.points {
            mask[y * width + x] = true;
        }
    }
    mask
}
