//! Synthetic benchmark maps: a dead-end pocket wall, a serpentine labyrinth
//! and a large archipelago. All three are deterministic functions of their
//! parameters.

use super::{DepthGrid, DepthMapError};
use crate::geometry::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Lattice resolution of the small test maps (wall, labyrinth).
const SMALL_MAP_NODES: usize = 51;
/// Lattice resolution of the archipelago map.
const ISLANDS_MAP_NODES: usize = 401;
/// Land nodes carry a quarter of the water depth below zero so the
/// interpolated surface crosses zero well clear of the land node itself.
fn land_depth(deep: f64) -> f64 {
    -deep / 4.0
}

fn check_size_deep(size: f64, deep: f64) -> Result<(), DepthMapError> {
    if !(size > 0.0 && size.is_finite()) {
        return Err(DepthMapError::InvalidGrid(format!(
            "map size must be positive, got {size}"
        )));
    }
    if !(deep > 0.0 && deep.is_finite()) {
        return Err(DepthMapError::InvalidGrid(format!(
            "water depth must be positive, got {deep}"
        )));
    }
    Ok(())
}

/// Start/destination convention for the wall map: start in the pocket
/// centre, destination in the far open corner.
pub fn wall_endpoints(size: f64) -> (Point, Point) {
    (
        Point::new(0.28 * size, 0.28 * size),
        Point::new(0.84 * size, 0.84 * size),
    )
}

/// A square ring of land around the start with a single opening that faces
/// away from the destination. Leaving the pocket requires moving backward
/// (increasing the distance to the destination) and then doubling back
/// around the ring, which forces at least one sharp turn.
pub fn gen_wall_map(size: f64, deep: f64) -> Result<DepthGrid, DepthMapError> {
    check_size_deep(size, deep)?;
    let n = SMALL_MAP_NODES;
    let cell = size / (n - 1) as f64;
    let mut grid = DepthGrid::filled(n, n, cell, deep)?;
    let (start, _) = wall_endpoints(size);
    let outer = 0.16 * size; // ring outer half-extent (Chebyshev)
    let inner = 0.10 * size; // pocket cavity half-extent
    // The opening faces the map corner, directly away from the destination.
    let (gap_lo, gap_hi) = (198.0, 252.0);
    for iy in 0..n {
        for ix in 0..n {
            let dx = ix as f64 * cell - start.x;
            let dy = iy as f64 * cell - start.y;
            let cheb = dx.abs().max(dy.abs());
            if cheb <= inner || cheb > outer {
                continue;
            }
            let mut deg = dy.atan2(dx).to_degrees();
            if deg < 0.0 {
                deg += 360.0;
            }
            if !(gap_lo..=gap_hi).contains(&deg) {
                grid.set_node(ix, iy, land_depth(deep));
            }
        }
    }
    Ok(grid)
}

/// Start/destination convention for the labyrinth: opposite open corners.
pub fn labyrinth_endpoints(size: f64) -> (Point, Point) {
    (
        Point::new(0.10 * size, 0.10 * size),
        Point::new(0.90 * size, 0.90 * size),
    )
}

/// Horizontal land slats attached to alternating side walls, leaving a
/// serpentine channel between start and destination corners.
pub fn gen_labyrinth_map(size: f64, deep: f64, slats: usize) -> Result<DepthGrid, DepthMapError> {
    check_size_deep(size, deep)?;
    if slats < 2 {
        return Err(DepthMapError::InvalidGrid(format!(
            "labyrinth needs at least 2 slats, got {slats}"
        )));
    }
    let spacing = size / (slats + 1) as f64;
    let half_thickness = 0.02 * size;
    // Keep the channel between neighbouring slats comfortably wider than
    // three beams of a typical coastal vessel.
    if spacing - 2.0 * half_thickness <= 24.0 {
        return Err(DepthMapError::InvalidGrid(format!(
            "{slats} slats leave a channel of {:.1} m, too narrow to navigate",
            spacing - 2.0 * half_thickness
        )));
    }
    let n = SMALL_MAP_NODES;
    let cell = size / (n - 1) as f64;
    let mut grid = DepthGrid::filled(n, n, cell, deep)?;
    for slat in 1..=slats {
        let y_mid = slat as f64 * spacing;
        // Odd slats leave the passage on the right, even slats on the left.
        let from_left = slat % 2 == 1;
        for iy in 0..n {
            let y = iy as f64 * cell;
            if (y - y_mid).abs() > half_thickness {
                continue;
            }
            for ix in 0..n {
                let x = ix as f64 * cell;
                let in_span = if from_left {
                    x <= 0.70 * size
                } else {
                    x >= 0.30 * size
                };
                if in_span {
                    grid.set_node(ix, iy, land_depth(deep));
                }
            }
        }
    }
    Ok(grid)
}

/// Start/destination convention for the archipelago: near-opposite corners.
pub fn islands_endpoints(size: f64) -> (Point, Point) {
    (
        Point::new(0.05 * size, 0.05 * size),
        Point::new(0.95 * size, 0.95 * size),
    )
}

/// Scattered elliptical islands with shoaling rims. Water around the start
/// and destination corners is kept clear (500 m at the reference 20 km
/// size). Identical parameters always produce the identical map.
pub fn gen_islands_map(
    size: f64,
    deep: f64,
    island_count: usize,
    seed: u64,
) -> Result<DepthGrid, DepthMapError> {
    check_size_deep(size, deep)?;
    if island_count == 0 {
        return Err(DepthMapError::InvalidGrid(
            "archipelago needs at least one island".into(),
        ));
    }
    let n = ISLANDS_MAP_NODES;
    let cell = size / (n - 1) as f64;
    let mut grid = DepthGrid::filled(n, n, cell, deep)?;
    let (start, dest) = islands_endpoints(size);
    let clear_radius = 0.025 * size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Rim of a normalised ellipse: land inside rho = 1, full depth from
    // rho = 1.6 outwards, linear shoaling in between.
    const RIM: f64 = 1.6;
    for _ in 0..island_count {
        let a = rng.gen_range(0.015 * size..0.05 * size);
        let b = a * rng.gen_range(0.4..1.0);
        let phi = rng.gen_range(0.0..std::f64::consts::PI);
        let (sin_p, cos_p) = phi.sin_cos();
        let mut placed = None;
        for _ in 0..1000 {
            let c = Point::new(
                rng.gen_range(0.04 * size..0.96 * size),
                rng.gen_range(0.04 * size..0.96 * size),
            );
            let margin = clear_radius + RIM * a;
            if crate::geometry::distance(c, start) > margin
                && crate::geometry::distance(c, dest) > margin
            {
                placed = Some(c);
                break;
            }
        }
        let Some(center) = placed else { continue };
        let reach = RIM * a;
        let ix0 = ((center.x - reach) / cell).floor().max(0.0) as usize;
        let ix1 = (((center.x + reach) / cell).ceil() as usize).min(n - 1);
        let iy0 = ((center.y - reach) / cell).floor().max(0.0) as usize;
        let iy1 = (((center.y + reach) / cell).ceil() as usize).min(n - 1);
        for iy in iy0..=iy1 {
            let dy = iy as f64 * cell - center.y;
            for ix in ix0..=ix1 {
                let dx = ix as f64 * cell - center.x;
                let u = (dx * cos_p + dy * sin_p) / a;
                let v = (-dx * sin_p + dy * cos_p) / b;
                let rho = u.hypot(v);
                if rho >= RIM {
                    continue;
                }
                let local = (deep * (rho - 1.0) / (RIM - 1.0)).max(land_depth(deep));
                if local < grid.node(ix, iy) {
                    grid.set_node(ix, iy, local);
                }
            }
        }
    }
    Ok(grid)
}
