//! SVG rendering of a depth map with a route overlaid.
//!
//! The output is a plain `String` assembled deterministically: same map and
//! route, same bytes. World coordinates are metres with y pointing north, so
//! every y is flipped into SVG's downward axis.

use searoute_core::depthmap::DepthGrid;
use searoute_core::route::Route;
use std::fmt::Write as _;

const LAND_FILL: &str = "#c2b280";
const ROUTE_STROKE: &str = "#d62d20";
const START_FILL: &str = "#1e9e3a";
const DEST_FILL: &str = "#7a1fa2";
/// Water shades from shallow to deep; quantising keeps adjacent cells
/// mergeable into wide rects.
const WATER_SHADES: [&str; 6] =
    ["#cfe8f5", "#a6d3ec", "#7dbde2", "#539ed3", "#2f7bbf", "#144f86"];

fn shade_index(depth: f64, max_depth: f64) -> usize {
    if depth <= 0.0 {
        return usize::MAX; // land, handled separately
    }
    let t = (depth / max_depth).clamp(0.0, 1.0);
    ((t * WATER_SHADES.len() as f64) as usize).min(WATER_SHADES.len() - 1)
}

/// Largest "nice" length (1, 2 or 5 times a power of ten) not exceeding a
/// fifth of the map extent; used for the scale bar.
fn scale_bar_length(extent_m: f64) -> f64 {
    let target = extent_m / 5.0;
    let k = target.log10().floor();
    let magnitude = 10f64.powf(k);
    [5.0, 2.0, 1.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|candidate| *candidate <= target)
        .unwrap_or(magnitude)
}

fn format_length(len_m: f64) -> String {
    if len_m >= 1000.0 {
        format!("{} km", len_m / 1000.0)
    } else {
        format!("{} m", len_m)
    }
}

/// Renders the map and route into an SVG document.
pub fn render_svg(grid: &DepthGrid, route: &Route) -> String {
    let w = grid.width_m();
    let h = grid.height_m();
    let cell = grid.cell_size();
    let strip = 0.08 * h.max(w); // bottom strip for the scale annotation
    let mut max_depth = 0.0f64;
    for iy in 0..grid.height_cells() {
        for ix in 0..grid.width_cells() {
            max_depth = max_depth.max(grid.node(ix, iy));
        }
    }
    if max_depth <= 0.0 {
        max_depth = 1.0;
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {y0} {vw} {vh}">"#,
        x0 = -cell / 2.0,
        y0 = -cell / 2.0,
        vw = w + cell,
        vh = h + cell + strip,
    );

    // Depth shading: one rect per run of equally shaded nodes in a row.
    for iy in 0..grid.height_cells() {
        let row_y = h - iy as f64 * cell - cell / 2.0;
        let mut run_start = 0usize;
        let mut run_shade = shade_index(grid.node(0, iy), max_depth);
        for ix in 1..=grid.width_cells() {
            let shade = if ix < grid.width_cells() {
                shade_index(grid.node(ix, iy), max_depth)
            } else {
                usize::MAX - 1 // forces the final flush
            };
            if shade != run_shade {
                let fill =
                    if run_shade == usize::MAX { LAND_FILL } else { WATER_SHADES[run_shade] };
                let _ = writeln!(
                    svg,
                    r#"<rect x="{x}" y="{row_y}" width="{rw}" height="{cell}" fill="{fill}"/>"#,
                    x = run_start as f64 * cell - cell / 2.0,
                    rw = (ix - run_start) as f64 * cell,
                );
                run_start = ix;
                run_shade = shade;
            }
        }
    }

    // The route: exactly one polyline, one vertex per waypoint.
    let stroke_width = (w.max(h) / 250.0).max(cell / 4.0);
    let points: Vec<String> =
        route.waypoints.iter().map(|wp| format!("{},{}", wp.position.x, h - wp.position.y)).collect();
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="{ROUTE_STROKE}" stroke-width="{stroke_width}" stroke-linejoin="round"/>"#,
        points.join(" "),
    );

    let marker_r = (w.max(h) / 90.0).max(cell / 2.0);
    let start = route.waypoints.first().expect("routes have waypoints").position;
    let dest = route.waypoints.last().expect("routes have waypoints").position;
    let _ = writeln!(
        svg,
        r#"<circle class="start" cx="{}" cy="{}" r="{marker_r}" fill="{START_FILL}"/>"#,
        start.x,
        h - start.y,
    );
    let _ = writeln!(
        svg,
        r#"<circle class="dest" cx="{}" cy="{}" r="{marker_r}" fill="{DEST_FILL}"/>"#,
        dest.x,
        h - dest.y,
    );

    // Scale bar in the bottom strip.
    let bar = scale_bar_length(w);
    let bar_y = h + strip * 0.5;
    let _ = writeln!(
        svg,
        r#"<line x1="0" y1="{bar_y}" x2="{bar}" y2="{bar_y}" stroke="black" stroke-width="{sw}"/>"#,
        sw = strip * 0.06,
    );
    let _ = writeln!(
        svg,
        r#"<text x="{tx}" y="{ty}" font-family="sans-serif" font-size="{fs}" text-anchor="middle">{label}</text>"#,
        tx = bar / 2.0,
        ty = bar_y - strip * 0.12,
        fs = strip * 0.35,
        label = format_length(bar),
    );
    svg.push_str("</svg>\n");
    svg
}
