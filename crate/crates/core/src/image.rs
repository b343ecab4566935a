//! Edge detection on grayscale images from the spread of normalized patch
//! correlations.
//!
//! For pixel `i` with intensity `p_i` and patch neighbor intensity `p_ij`,
//! the correlation logit is `(p_i + 1)·(p_ij − p_i)`; the `+1` offset keeps
//! black center pixels sensitive to their neighbors. Logits are softmax
//! normalized per patch (scale `√1`), and the population standard
//! deviation of each row is the pixel's edge score. Out-of-image neighbors
//! are clamped to the nearest border pixel, so every patch has exactly
//! `patch²` entries.

use rayon::prelude::*;

use crate::attention::{row_std, softmax_in_place};
use crate::error::{Error, Result};
use crate::samplers::{select_top, Direction};
use crate::types::{CorrelationMap, MapKind, ScoreKind, ScoreVector};

#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl GrayImage {
    /// Row-major intensities in `[0, 1]`.
    pub fn new(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::EmptyImage);
        }
        if data.len() != height * width {
            return Err(Error::SizeMismatch {
                what: "image pixel count",
                expected: height * width,
                got: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidParameter(format!(
                "intensity {} at pixel {pos} is outside [0, 1]",
                data[pos]
            )));
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn from_fn(height: usize, width: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let data = (0..height * width)
            .map(|i| f(i / width, i % width))
            .collect();
        Self::new(height, width, data)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn mirrored(&self) -> Self {
        let w = self.width;
        let data = (0..self.data.len())
            .map(|i| self.data[(i / w) * w + (w - 1 - i % w)])
            .collect();
        Self { data, ..*self }
    }
}

/// Per-pixel edge scores arranged `height x width`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaMap {
    pub height: usize,
    pub width: usize,
    pub values: Vec<f64>,
}

impl SigmaMap {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }
}

/// Binary edge map arranged `height x width`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    pub height: usize,
    pub width: usize,
    pub mask: Vec<bool>,
}

impl EdgeMap {
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.mask[row * self.width + col]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&e| e).count()
    }
}

fn check_patch(patch: usize) -> Result<()> {
    if patch == 0 || patch.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "patch size must be odd and positive, got {patch}"
        )));
    }
    Ok(())
}

/// Normalized correlation rows, one per pixel in row-major order. Columns
/// run over the patch in row-major offset order, so the center pixel is
/// entry `patch² / 2`.
pub fn pixel_patch_map(img: &GrayImage, patch: usize) -> Result<CorrelationMap> {
    check_patch(patch)?;
    let (h, w) = (img.height, img.width);
    let r = (patch / 2) as isize;
    let k = patch * patch;
    let mut data = vec![0.0; h * w * k];
    data.par_chunks_mut(k).enumerate().for_each(|(i, row)| {
        let (y, x) = ((i / w) as isize, (i % w) as isize);
        let center = img.data[i];
        let q = center + 1.0;
        let mut slot = 0;
        for dy in -r..=r {
            let yy = (y + dy).clamp(0, h as isize - 1) as usize;
            for dx in -r..=r {
                let xx = (x + dx).clamp(0, w as isize - 1) as usize;
                row[slot] = q * (img.data[yy * w + xx] - center);
                slot += 1;
            }
        }
        softmax_in_place(row);
    });
    Ok(CorrelationMap::from_raw(data, h * w, k, MapKind::Local))
}

/// Population standard deviation of each pixel's correlation row.
pub fn pixel_std_scores(rows: &CorrelationMap, height: usize, width: usize) -> Result<SigmaMap> {
    if rows.rows() != height * width {
        return Err(Error::SizeMismatch {
            what: "correlation rows vs pixel count",
            expected: height * width,
            got: rows.rows(),
        });
    }
    Ok(SigmaMap {
        height,
        width,
        values: row_std(rows).into_vec(),
    })
}

/// Convenience: [`pixel_patch_map`] followed by [`pixel_std_scores`].
pub fn sigma_map(img: &GrayImage, patch: usize) -> Result<SigmaMap> {
    pixel_std_scores(&pixel_patch_map(img, patch)?, img.height, img.width)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeRule {
    /// Keep the `ceil(f · H · W)` highest-σ pixels, ties by row-major index.
    TopFraction(f64),
    /// Keep pixels with `σ ≥ t`.
    Threshold(f64),
}

/// Binary edge map from a σ map.
pub fn edges_from_sigma(sigma: &SigmaMap, rule: EdgeRule) -> Result<EdgeMap> {
    let total = sigma.values.len();
    let mask = match rule {
        EdgeRule::TopFraction(f) => {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "top fraction must be in (0, 1], got {f}"
                )));
            }
            let count = ((f * total as f64).ceil() as usize).clamp(1, total);
            let scores = ScoreVector::new(sigma.values.clone(), ScoreKind::Sigma)?;
            let picked = select_top(&scores, count, Direction::Highest)?;
            picked.mask(total)
        }
        EdgeRule::Threshold(t) => {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "threshold must be finite and >= 0, got {t}"
                )));
            }
            sigma.values.iter().map(|&s| s >= t).collect()
        }
    };
    Ok(EdgeMap {
        height: sigma.height,
        width: sigma.width,
        mask,
    })
}

pub fn detect_edges(img: &GrayImage, patch: usize, rule: EdgeRule) -> Result<EdgeMap> {
    edges_from_sigma(&sigma_map(img, patch)?, rule)
}

/// Vertical step image: `left` in columns `< width / 2`, `right` elsewhere.
pub fn step_image(height: usize, width: usize, left: f64, right: f64) -> Result<GrayImage> {
    GrayImage::from_fn(
        height,
        width,
        |_, c| if c < width / 2 { left } else { right },
    )
}
