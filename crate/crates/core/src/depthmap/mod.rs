//! Bathymetric raster maps.
//!
//! A [`DepthGrid`] stores water depth in metres on a regular lattice and
//! answers continuous queries by bilinear interpolation. Depth values at or
//! below zero are land. The rectangle probe [`min_depth_in_rect`] is the
//! primitive the safety checks are built on.

use crate::geometry::{rect_corners, OrientedRect, Point};
use thiserror::Error;

mod gen;
mod io;

pub use gen::{
    gen_islands_map, gen_labyrinth_map, gen_wall_map, islands_endpoints, labyrinth_endpoints,
    wall_endpoints,
};
pub use io::{read_dmap, write_dmap};

#[derive(Debug, Error)]
pub enum DepthMapError {
    #[error("point ({x}, {y}) lies outside the covered area")]
    OutOfBounds { x: f64, y: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Regular depth lattice. `width_cells` x `height_cells` nodes sit
/// `cell_size` metres apart, row-major with row 0 at y = 0, so the covered
/// area spans `[0, (width_cells - 1) * cell_size]` east-west and
/// `[0, (height_cells - 1) * cell_size]` south-north.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthGrid {
    width_cells: usize,
    height_cells: usize,
    cell_size: f64,
    inv_cell: f64,
    depths: Vec<f64>,
}

impl DepthGrid {
    pub fn new(
        width_cells: usize,
        height_cells: usize,
        cell_size: f64,
        depths: Vec<f64>,
    ) -> Result<Self, DepthMapError> {
        if width_cells < 2 || height_cells < 2 {
            return Err(DepthMapError::InvalidGrid(format!(
                "need at least 2x2 lattice nodes, got {width_cells}x{height_cells}"
            )));
        }
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(DepthMapError::InvalidGrid(format!(
                "cell size must be positive and finite, got {cell_size}"
            )));
        }
        if depths.len() != width_cells * height_cells {
            return Err(DepthMapError::InvalidGrid(format!(
                "expected {} depth values, got {}",
                width_cells * height_cells,
                depths.len()
            )));
        }
        if let Some(bad) = depths.iter().find(|d| !d.is_finite()) {
            return Err(DepthMapError::InvalidGrid(format!(
                "depth values must be finite, found {bad}"
            )));
        }
        Ok(DepthGrid {
            width_cells,
            height_cells,
            cell_size,
            inv_cell: 1.0 / cell_size,
            depths,
        })
    }

    /// Uniform-depth grid, the building block for synthetic maps.
    pub fn filled(
        width_cells: usize,
        height_cells: usize,
        cell_size: f64,
        depth: f64,
    ) -> Result<Self, DepthMapError> {
        DepthGrid::new(
            width_cells,
            height_cells,
            cell_size,
            vec![depth; width_cells * height_cells],
        )
    }

    pub fn width_cells(&self) -> usize {
        self.width_cells
    }

    pub fn height_cells(&self) -> usize {
        self.height_cells
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    /// East-west extent of the covered area in metres.
    pub fn width_m(&self) -> f64 {
        (self.width_cells - 1) as f64 * self.cell_size
    }

    /// South-north extent of the covered area in metres.
    pub fn height_m(&self) -> f64 {
        (self.height_cells - 1) as f64 * self.cell_size
    }

    /// Depth stored at lattice node (ix, iy). Panics on an out-of-range index.
    pub fn node(&self, ix: usize, iy: usize) -> f64 {
        assert!(ix < self.width_cells && iy < self.height_cells);
        self.depths[iy * self.width_cells + ix]
    }

    pub fn set_node(&mut self, ix: usize, iy: usize, depth: f64) {
        assert!(ix < self.width_cells && iy < self.height_cells);
        self.depths[iy * self.width_cells + ix] = depth;
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= 0.0 && p.y >= 0.0 && p.x <= self.width_m() && p.y <= self.height_m()
    }

    /// Bilinear depth at an arbitrary point of the covered area.
    pub fn depth_at(&self, p: Point) -> Result<f64, DepthMapError> {
        self.sample(p.x, p.y)
            .ok_or(DepthMapError::OutOfBounds { x: p.x, y: p.y })
    }

    /// Hot-path variant of [`DepthGrid::depth_at`]: `None` outside the area.
    #[inline]
    pub fn sample(&self, x: f64, y: f64) -> Option<f64> {
        let gx = x * self.inv_cell;
        let gy = y * self.inv_cell;
        let max_x = (self.width_cells - 1) as f64;
        let max_y = (self.height_cells - 1) as f64;
        if !(0.0..=max_x).contains(&gx) || !(0.0..=max_y).contains(&gy) {
            return None;
        }
        // Clamp so queries exactly on the far boundary stay in the last cell.
        let ix = (gx as usize).min(self.width_cells - 2);
        let iy = (gy as usize).min(self.height_cells - 2);
        let fx = gx - ix as f64;
        let fy = gy - iy as f64;
        let row = iy * self.width_cells + ix;
        let v00 = self.depths[row];
        let v10 = self.depths[row + 1];
        let v01 = self.depths[row + self.width_cells];
        let v11 = self.depths[row + self.width_cells + 1];
        let south = v00 + (v10 - v00) * fx;
        let north = v01 + (v11 - v01) * fx;
        Some(south + (north - south) * fy)
    }
}

/// Number of lattice intervals used across a span of `extent` metres so that
/// the spacing is at most `step`. Counts are rounded up to a power of two:
/// halving the step then yields a strict superset of the coarser lattice,
/// which keeps the reported minimum monotone under refinement.
fn dyadic_intervals(extent: f64, step: f64) -> usize {
    let needed = (extent / step).ceil().max(1.0) as usize;
    needed.next_power_of_two()
}

/// Minimum interpolated depth over a sample lattice covering `rect`, with
/// spacing at most `sample_step` along both rectangle axes. The four corners
/// and the centre are always sampled. Any sample outside the covered area
/// yields 0 (treated as land by every caller).
pub fn min_depth_in_rect(grid: &DepthGrid, rect: &OrientedRect, sample_step: f64) -> f64 {
    min_depth_in_rect_capped(grid, rect, sample_step, f64::NEG_INFINITY)
}

/// Same lattice as [`min_depth_in_rect`], but gives up early once the running
/// minimum is at or below `stop_below`. Callers that only compare the result
/// against a threshold can pass the threshold to skip the remaining samples;
/// the verdict `result > stop_below` is unchanged by the shortcut.
pub(crate) fn min_depth_in_rect_capped(
    grid: &DepthGrid,
    rect: &OrientedRect,
    sample_step: f64,
    stop_below: f64,
) -> f64 {
    assert!(
        sample_step > 0.0,
        "sample step must be positive, got {sample_step}"
    );
    // The covered area is convex, so the rectangle lies inside it exactly
    // when its corners do; a corner outside means part of the footprint
    // leaves the mapped water.
    let corners = rect_corners(rect);
    for c in &corners {
        if !grid.contains(*c) {
            return 0.0;
        }
    }
    let center = grid.sample(rect.center.x, rect.center.y).unwrap_or(0.0);
    let mut min = center;
    if min <= stop_below {
        return min;
    }
    let (lx, ly, wx, wy) = rect.axes();
    let n_len = dyadic_intervals(rect.length, sample_step);
    let n_wid = dyadic_intervals(rect.width, sample_step);
    let step_l = rect.length / n_len as f64;
    let step_w = rect.width / n_wid as f64;
    let origin = corners[2]; // (-length/2, -width/2) corner
    for j in 0..=n_wid {
        let off_w = j as f64 * step_w;
        let row_x = origin.x + off_w * wx;
        let row_y = origin.y + off_w * wy;
        for i in 0..=n_len {
            let off_l = i as f64 * step_l;
            let d = grid
                .sample(row_x + off_l * lx, row_y + off_l * ly)
                .unwrap_or(0.0);
            if d < min {
                min = d;
                if min <= stop_below {
                    return min;
                }
            }
        }
    }
    min
}
