//! Block DCT, quantization and zigzag ordering.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::jpeg::GrayImage;

pub const BLOCK: usize = 8;

/// Annex K luminance quantization table, row-major.
pub const LUMA_QUANT: [u16; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// Row-major index of the k-th coefficient in zigzag order.
pub const ZIGZAG: [usize; 64] = [
    0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5, 12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6, 7, 14, 21,
    28, 35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51, 58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61,
    54, 47, 55, 62, 63,
];

/// Quantized coefficients of one 8x8 block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSpectrum {
    pub dc: i32,
    /// AC coefficients in zigzag order.
    pub ac: [i32; 63],
}

impl Default for BlockSpectrum {
    fn default() -> Self {
        BlockSpectrum { dc: 0, ac: [0; 63] }
    }
}

pub fn validate_quality(quality: u8) -> Result<()> {
    if !(1..=100).contains(&quality) {
        return Err(Error::config(format!("quality must be in 1..=100, got {quality}")));
    }
    Ok(())
}

/// Luminance table scaled by the usual quality formula; quality 50 is the
/// table itself, quality 100 is all ones.
pub fn quant_table(quality: u8) -> Result<[u16; 64]> {
    validate_quality(quality)?;
    let q = quality as u32;
    let scale = if q < 50 { 5000 / q } else { 200 - 2 * q };
    let mut out = [0u16; 64];
    for (o, &b) in out.iter_mut().zip(&LUMA_QUANT) {
        *o = ((b as u32 * scale + 50) / 100).clamp(1, 255) as u16;
    }
    Ok(out)
}

fn basis() -> &'static [[f64; BLOCK]; BLOCK] {
    static BASIS: OnceLock<[[f64; BLOCK]; BLOCK]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut b = [[0.0; BLOCK]; BLOCK];
        for (u, row) in b.iter_mut().enumerate() {
            let alpha = if u == 0 { (1.0 / BLOCK as f64).sqrt() } else { (2.0 / BLOCK as f64).sqrt() };
            for (x, v) in row.iter_mut().enumerate() {
                *v = alpha * (((2 * x + 1) * u) as f64 * std::f64::consts::PI / (2 * BLOCK) as f64).cos();
            }
        }
        b
    })
}

/// Orthonormal 2-D DCT-II of a row-major 8x8 block.
pub fn dct2(block: &[f64; 64]) -> [f64; 64] {
    let b = basis();
    let mut tmp = [0.0; 64];
    for y in 0..BLOCK {
        for u in 0..BLOCK {
            tmp[y * BLOCK + u] = (0..BLOCK).map(|x| b[u][x] * block[y * BLOCK + x]).sum();
        }
    }
    let mut out = [0.0; 64];
    for v in 0..BLOCK {
        for u in 0..BLOCK {
            out[v * BLOCK + u] = (0..BLOCK).map(|y| b[v][y] * tmp[y * BLOCK + u]).sum();
        }
    }
    out
}

/// Inverse of [`dct2`].
pub fn idct2(coef: &[f64; 64]) -> [f64; 64] {
    let b = basis();
    let mut tmp = [0.0; 64];
    for v in 0..BLOCK {
        for x in 0..BLOCK {
            tmp[v * BLOCK + x] = (0..BLOCK).map(|u| b[u][x] * coef[v * BLOCK + u]).sum();
        }
    }
    let mut out = [0.0; 64];
    for y in 0..BLOCK {
        for x in 0..BLOCK {
            out[y * BLOCK + x] = (0..BLOCK).map(|v| b[v][y] * tmp[v * BLOCK + x]).sum();
        }
    }
    out
}

/// Rounds to nearest, halves away from zero, after removing float noise
/// below 1e-6 so that exact halves stay exact.
fn quantize(value: f64) -> i32 {
    ((value * 1e6).round() / 1e6).round() as i32
}

/// Number of blocks across and down after padding to multiples of 8.
pub fn block_grid(width: usize, height: usize) -> (usize, usize) {
    (width.div_ceil(BLOCK), height.div_ceil(BLOCK))
}

/// Quantized spectra of all blocks in row-major block order. Edges are
/// padded by replication.
pub fn forward_transform(image: &GrayImage, quality: u8) -> Result<Vec<BlockSpectrum>> {
    let q = quant_table(quality)?;
    if image.width() == 0 || image.height() == 0 {
        return Err(Error::input("image has no pixels"));
    }
    let (bw, bh) = block_grid(image.width(), image.height());
    let mut out = Vec::with_capacity(bw * bh);
    for by in 0..bh {
        for bx in 0..bw {
            let mut block = [0.0; 64];
            for y in 0..BLOCK {
                for x in 0..BLOCK {
                    block[y * BLOCK + x] = image.clamped(bx * BLOCK + x, by * BLOCK + y) as f64 - 128.0;
                }
            }
            let coef = dct2(&block);
            let mut spec = BlockSpectrum {
                dc: quantize(coef[0] / q[0] as f64),
                ..Default::default()
            };
            for k in 1..64 {
                let i = ZIGZAG[k];
                spec.ac[k - 1] = quantize(coef[i] / q[i] as f64);
            }
            out.push(spec);
        }
    }
    Ok(out)
}

/// Dequantizes, inverts the DCT, undoes the level shift and crops the padding.
pub fn inverse_transform(blocks: &[BlockSpectrum], width: usize, height: usize, quality: u8) -> Result<GrayImage> {
    let q = quant_table(quality)?;
    let (bw, bh) = block_grid(width, height);
    if blocks.len() != bw * bh {
        return Err(Error::input(format!(
            "{} blocks for a {width}x{height} image, expected {}",
            blocks.len(),
            bw * bh
        )));
    }
    let mut pixels = vec![0u8; width * height];
    for (n, spec) in blocks.iter().enumerate() {
        let (bx, by) = (n % bw, n / bw);
        let mut coef = [0.0; 64];
        coef[0] = spec.dc as f64 * q[0] as f64;
        for k in 1..64 {
            let i = ZIGZAG[k];
            coef[i] = spec.ac[k - 1] as f64 * q[i] as f64;
        }
        let block = idct2(&coef);
        for y in 0..BLOCK {
            let py = by * BLOCK + y;
            if py >= height {
                break;
            }
            for x in 0..BLOCK {
                let px = bx * BLOCK + x;
                if px >= width {
                    break;
                }
                pixels[py * width + px] = (block[y * BLOCK + x] + 128.0).round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    GrayImage::new(width, height, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::psnr;

    fn flat(v: u8) -> GrayImage {
        GrayImage::new(8, 8, vec![v; 64]).unwrap()
    }

    #[test]
    fn zigzag_is_a_permutation_walking_antidiagonals() {
        let mut seen = [false; 64];
        for (k, &i) in ZIGZAG.iter().enumerate() {
            assert!(!seen[i]);
            seen[i] = true;
            if k > 0 {
                let (r0, c0) = (ZIGZAG[k - 1] / 8, ZIGZAG[k - 1] % 8);
                let (r1, c1) = (i / 8, i % 8);
                assert!((r0 + c0).abs_diff(r1 + c1) <= 1);
            }
        }
    }

    #[test]
    fn quality_scaling() {
        assert_eq!(quant_table(50).unwrap(), LUMA_QUANT);
        assert!(quant_table(100).unwrap().iter().all(|&q| q == 1));
        assert_eq!(quant_table(10).unwrap()[0], 80);
        assert!(quant_table(0).is_err());
        assert!(quant_table(101).is_err());
    }

    #[test]
    fn mid_grey_block_is_all_zero() {
        let b = forward_transform(&flat(128), 50).unwrap();
        assert_eq!(b, vec![BlockSpectrum::default()]);
    }

    #[test]
    fn white_block_dc() {
        // DC of a constant block under orthonormal scaling is 8 * 127; 1016 / 16 = 63.5
        let b = forward_transform(&flat(255), 50).unwrap();
        assert_eq!(b[0].dc, 64);
        assert!(b[0].ac.iter().all(|&a| a == 0));
    }

    #[test]
    fn dct_inverts() {
        let mut block = [0.0; 64];
        for (i, v) in block.iter_mut().enumerate() {
            *v = ((i * 37) % 255) as f64 - 128.0;
        }
        let back = idct2(&dct2(&block));
        for (a, b) in block.iter().zip(back.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn quality_100_roundtrip_is_close() {
        let (w, h) = (21, 13);
        let pixels: Vec<u8> = (0..w * h)
            .map(|i| {
                let (x, y) = ((i % w) as f64, (i / w) as f64);
                (128.0 + 60.0 * (x / 3.0).sin() + 40.0 * (y / 5.0).cos()) as u8
            })
            .collect();
        let img = GrayImage::new(w, h, pixels).unwrap();
        let blocks = forward_transform(&img, 100).unwrap();
        assert_eq!(blocks.len(), 3 * 2);
        let rec = inverse_transform(&blocks, w, h, 100).unwrap();
        assert!(psnr(&img, &rec).unwrap() > 40.0);
    }
}
