use alloc::vec::Vec;

#[inline]
pub(crate) fn clamped(data: &[f64], width: usize, height: usize, x: isize, y: isize) -> f64 {
    let x = x.clamp(0, width as isize - 1) as usize;
    let y = y.clamp(0, height as isize - 1) as usize;
    data[y * width + x]
}

/// 3x3 Sobel derivatives with replicated borders.
pub(crate) fn sobel(luma: &[f64], width: usize, height: usize) -> (Vec<f64>, Vec<f64>) {
    let mut gx = Vec::with_capacity(luma.len());
    let mut gy = Vec::with_capacity(luma.len());
    for y in 0..height as isize {
        for x in 0..width as isize {
            let p = |dx: isize, dy: isize| clamped(luma, width, height, x + dx, y + dy);
            let dx = (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
            let dy = (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
            gx.push(dx);
            gy.push(dy);
        }
    }
    (gx, gy)
}
