use crate::error::{Error, Result};

/// Block-mean downsampling of an `h×w` image to `out_h×out_w`, flattened
/// row-major.
///
/// Blocks are `⌊h/out_h⌋ × ⌊w/out_w⌋`; when the sizes do not divide, the last
/// row and column of blocks absorb the remainder.
pub fn avg_pool(image: &[Vec<f64>], out_h: usize, out_w: usize) -> Result<Vec<f64>> {
    let h = image.len();
    let w = image.first().map_or(0, Vec::len);
    if let Some(r) = image.iter().find(|r| r.len() != w) {
        return Err(Error::Dimension {
            expected: w,
            got: r.len(),
        });
    }
    if out_h == 0 || out_w == 0 || out_h > h || out_w > w {
        return Err(Error::Config(format!(
            "cannot pool {h}x{w} down to {out_h}x{out_w}"
        )));
    }
    let (bh, bw) = (h / out_h, w / out_w);
    let span = |i: usize, b: usize, n: usize, out: usize| {
        let lo = i * b;
        let hi = if i + 1 == out { n } else { lo + b };
        lo..hi
    };
    let mut out = Vec::with_capacity(out_h * out_w);
    for bi in 0..out_h {
        let rows = span(bi, bh, h, out_h);
        for bj in 0..out_w {
            let cols = span(bj, bw, w, out_w);
            let mut sum = 0.0;
            for row in &image[rows.clone()] {
                sum += row[cols.clone()].iter().sum::<f64>();
            }
            out.push(sum / (rows.len() * cols.len()) as f64);
        }
    }
    Ok(out)
}
