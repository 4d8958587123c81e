//! Escape-time grids and binary PGM output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{iterate_p, ComplexPoint, Degree, IterationBudget, OrbitVerdict};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_RENDER_ITERS: u64 = 500;
pub const DEFAULT_RESOLUTION: u32 = 600;

/// Rectangular region of the parameter plane sampled at pixel centers.
///
/// Column `i` (left to right) and row `j` (top to bottom) map to
///
/// ```text
/// re = center.re + (2i + 1 - px_w) / (2 px_w) * width
/// im = center.im - (2j + 1 - px_h) / (2 px_h) * height
/// ```
///
/// so the imaginary axis points up in the image. The numerators are exact
/// integers, which makes the lattice of a window centered at 0 exactly
/// symmetric under `c -> -c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window<F> {
    center: ComplexPoint<F>,
    width: F,
    height: F,
    px_w: u32,
    px_h: u32,
}

impl<F: Scalar> Window<F> {
    pub fn new(center: ComplexPoint<F>, width: F, height: F, px_w: u32, px_h: u32) -> Result<Self> {
        if !(width.is_finite() && width > F::zero() && height.is_finite() && height > F::zero()) {
            return Err(Error::InvalidWindow(format!(
                "width and height must be finite and positive, got {width} x {height}"
            )));
        }
        if px_w == 0 || px_h == 0 {
            return Err(Error::InvalidWindow(format!(
                "resolution must be positive, got {px_w} x {px_h}"
            )));
        }
        Ok(Window {
            center,
            width,
            height,
            px_w,
            px_h,
        })
    }

    /// 3 x 3 window centered at 0, the framing used for `M_3` and `M_4`.
    pub fn default_for(px_w: u32, px_h: u32) -> Result<Self> {
        Self::new(ComplexPoint::zero(), F::lit(3.0), F::lit(3.0), px_w, px_h)
    }

    pub fn center(&self) -> ComplexPoint<F> {
        self.center
    }

    pub fn width(&self) -> F {
        self.width
    }

    pub fn height(&self) -> F {
        self.height
    }

    pub fn px_w(&self) -> u32 {
        self.px_w
    }

    pub fn px_h(&self) -> u32 {
        self.px_h
    }

    fn offset(index: u32, pixels: u32, extent: F) -> F {
        let numerator = 2 * i64::from(index) + 1 - i64::from(pixels);
        let numerator = F::from(numerator).expect("pixel index representable");
        let denominator = F::from(2 * u64::from(pixels)).expect("resolution representable");
        numerator / denominator * extent
    }

    pub fn pixel_to_point(&self, i: u32, j: u32) -> Result<ComplexPoint<F>> {
        ComplexPoint::new(
            self.center.re() + Self::offset(i, self.px_w, self.width),
            self.center.im() - Self::offset(j, self.px_h, self.height),
        )
    }
}

/// Escape counts in row-major order, top row first. `0` marks a pixel that
/// did not escape within the budget.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeGrid<F> {
    window: Window<F>,
    counts: Vec<u64>,
    budget: IterationBudget,
}

impl<F: Scalar> EscapeGrid<F> {
    pub fn from_counts(
        window: Window<F>,
        counts: Vec<u64>,
        budget: IterationBudget,
    ) -> Result<Self> {
        let expected = window.px_w as usize * window.px_h as usize;
        if counts.len() != expected {
            return Err(Error::InvalidWindow(format!(
                "expected {expected} counts, got {}",
                counts.len()
            )));
        }
        if let Some(&c) = counts.iter().find(|&&c| c > budget.max_iters()) {
            return Err(Error::InvalidWindow(format!(
                "count {c} exceeds max_iters {}",
                budget.max_iters()
            )));
        }
        Ok(EscapeGrid {
            window,
            counts,
            budget,
        })
    }

    pub fn window(&self) -> &Window<F> {
        &self.window
    }

    pub fn budget(&self) -> &IterationBudget {
        &self.budget
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    #[inline]
    pub fn count(&self, i: u32, j: u32) -> u64 {
        self.counts[j as usize * self.window.px_w as usize + i as usize]
    }
}

/// Escape count of every pixel of `window` under `p_c`.
pub fn compute_grid<F: Scalar>(
    d: Degree,
    window: Window<F>,
    budget: &IterationBudget,
) -> Result<EscapeGrid<F>> {
    let w = window.px_w as usize;
    let mut counts = vec![0u64; w * window.px_h as usize];
    counts
        .par_chunks_mut(w)
        .enumerate()
        .try_for_each(|(j, row)| -> Result<()> {
            for (i, slot) in row.iter_mut().enumerate() {
                let c = window.pixel_to_point(i as u32, j as u32)?;
                *slot = match iterate_p(d, c, budget) {
                    OrbitVerdict::Escaped { steps, .. } => steps,
                    _ => 0,
                };
            }
            Ok(())
        })?;
    Ok(EscapeGrid {
        window,
        counts,
        budget: *budget,
    })
}

/// Grey level of an escape count: 0 for non-escaping pixels, otherwise
/// `1 + floor(254 min(count, max) / max)`.
pub fn shade(count: u64, max_iters: u64) -> u8 {
    if count == 0 {
        return 0;
    }
    let clamped = u128::from(count.min(max_iters));
    (1 + 254 * clamped / u128::from(max_iters)) as u8
}

/// Binary PGM (`P5`, maxval 255) bytes.
pub fn encode_pgm<F: Scalar>(grid: &EscapeGrid<F>) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", grid.window.px_w, grid.window.px_h);
    let max = grid.budget.max_iters();
    let mut bytes = Vec::with_capacity(header.len() + grid.counts.len());
    bytes.extend_from_slice(header.as_bytes());
    bytes.extend(grid.counts.iter().map(|&c| shade(c, max)));
    bytes
}

pub fn write_pgm<F: Scalar>(grid: &EscapeGrid<F>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    out.write_all(&encode_pgm(grid)).map_err(io_err)?;
    out.flush().map_err(io_err)
}

/// Agreement of a grid with its own 180 degree rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PointSymmetry {
    pub pixels: usize,
    pub agreeing: usize,
    /// Disagreeing pixels where one of the two counts is within 1 of
    /// `max_iters` or is 0 (did not escape).
    pub near_budget: usize,
    pub other: usize,
}

impl PointSymmetry {
    pub fn agreement(&self) -> f64 {
        self.agreeing as f64 / self.pixels as f64
    }
}

pub fn point_symmetry<F: Scalar>(grid: &EscapeGrid<F>) -> PointSymmetry {
    let (w, h) = (grid.window.px_w, grid.window.px_h);
    let max = grid.budget.max_iters();
    let near = |c: u64| c == 0 || c + 1 >= max;
    let mut stats = PointSymmetry {
        pixels: grid.counts.len(),
        agreeing: 0,
        near_budget: 0,
        other: 0,
    };
    for j in 0..h {
        for i in 0..w {
            let a = grid.count(i, j);
            let b = grid.count(w - 1 - i, h - 1 - j);
            if a == b {
                stats.agreeing += 1;
            } else if near(a) || near(b) {
                stats.near_budget += 1;
            } else {
                stats.other += 1;
            }
        }
    }
    stats
}
