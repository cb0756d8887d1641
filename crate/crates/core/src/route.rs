//! Ships, timed waypoint routes, and the depth-based safety checks that
//! decide whether a vessel can follow an edge.
//!
//! Safety is evaluated by sweeping an oriented rectangle slightly larger
//! than the ship along each edge and requiring the minimum interpolated
//! depth under the rectangle to exceed draught plus an under-keel clearance.

use crate::depthmap::{min_depth_in_rect_capped, DepthGrid};
use crate::geometry::{bearing, distance, OrientedRect, Point};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use thiserror::Error;

/// Cost assigned to unsafe or structurally broken routes. Compares greater
/// than every finite cost, so ordering by cost is total.
pub const COST_SENTINEL: f64 = f64::INFINITY;

#[derive(Debug, Error)]
pub enum RouteError {
    #[error("invalid ship spec: {0}")]
    InvalidShip(String),
    #[error("a route needs at least two waypoints, got {0}")]
    TooFewWaypoints(usize),
    #[error("zero-length edge between waypoints {0} and {1}")]
    ZeroLengthEdge(usize, usize),
    #[error("non-finite coordinate at waypoint {0}")]
    BadCoordinate(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Static vessel parameters driving safety margins and sampling scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShipSpec {
    /// Overall length, metres.
    pub length: f64,
    /// Beam (width), metres.
    pub beam: f64,
    /// Draught, metres.
    pub draught: f64,
    /// Service speed used for freshly built routes, metres per second.
    pub service_speed: f64,
    /// The safety footprint is the ship's rectangle scaled by this factor.
    pub footprint_factor: f64,
    /// Minimum water under the keel on top of the draught, metres.
    pub depth_clearance: f64,
    /// Sampling domain radius around a route's last point, in ship lengths.
    pub domain_radius_factor: f64,
}

impl ShipSpec {
    /// Default under-keel clearance: half a metre, or a tenth of the
    /// draught for deep-draught vessels.
    pub fn default_clearance(draught: f64) -> f64 {
        (0.1 * draught).max(0.5)
    }

    /// Radius of the candidate sampling domain, metres.
    pub fn domain_radius(&self) -> f64 {
        self.length * self.domain_radius_factor
    }

    /// Depth that must strictly be exceeded under the footprint.
    pub fn required_depth(&self) -> f64 {
        self.draught + self.depth_clearance
    }

    pub fn validate(&self) -> Result<(), RouteError> {
        let fields = [
            ("length", self.length),
            ("beam", self.beam),
            ("draught", self.draught),
            ("service_speed", self.service_speed),
            ("footprint_factor", self.footprint_factor),
            ("domain_radius_factor", self.domain_radius_factor),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(RouteError::InvalidShip(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if !(self.depth_clearance >= 0.0 && self.depth_clearance.is_finite()) {
            return Err(RouteError::InvalidShip(format!(
                "depth_clearance must be non-negative, got {}",
                self.depth_clearance
            )));
        }
        if self.beam >= self.length {
            return Err(RouteError::InvalidShip(format!(
                "beam {} not smaller than length {}",
                self.beam, self.length
            )));
        }
        Ok(())
    }
}

impl Default for ShipSpec {
    /// A small coastal vessel: 30 m long, 8 m beam, 4 m draught, 10 m/s.
    fn default() -> Self {
        ShipSpec {
            length: 30.0,
            beam: 8.0,
            draught: 4.0,
            service_speed: 10.0,
            footprint_factor: 1.25,
            depth_clearance: ShipSpec::default_clearance(4.0),
            domain_radius_factor: 5.0,
        }
    }
}

/// A route point with its timing and motion attributes. `speed` applies to
/// the outgoing edge; a non-positive speed means "use the ship's service
/// speed" and is normalised away by [`Route::recompute_timing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub position: Point,
    pub arrival_time: f64,
    pub departure_time: f64,
    pub speed: f64,
    pub turn_radius: f64,
}

impl Waypoint {
    pub fn at(position: Point, speed: f64) -> Self {
        Waypoint {
            position,
            arrival_time: 0.0,
            departure_time: 0.0,
            speed,
            turn_radius: 0.0,
        }
    }
}

/// An ordered sequence of waypoints from start to destination.
///
/// The container itself accepts any sequence so genetic operators can build
/// candidates freely; [`Route::validate`] tells a well-formed route apart,
/// and costing treats invalid routes as unsafe.
#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub waypoints: Vec<Waypoint>,
}

impl Route {
    /// Builds an untimed route travelling at the ship's service speed, then
    /// computes the timetable from `start_time` 0.
    pub fn from_points(points: &[Point], ship: &ShipSpec) -> Result<Route, RouteError> {
        let mut route = Route {
            waypoints: points
                .iter()
                .map(|p| Waypoint::at(*p, ship.service_speed))
                .collect(),
        };
        route.validate()?;
        route.recompute_timing(ship, 0.0)?;
        Ok(route)
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn start(&self) -> Point {
        self.waypoints.first().expect("empty route").position
    }

    pub fn dest(&self) -> Point {
        self.waypoints.last().expect("empty route").position
    }

    pub fn positions(&self) -> impl Iterator<Item = Point> + '_ {
        self.waypoints.iter().map(|w| w.position)
    }

    /// Structural well-formedness: at least two waypoints, finite
    /// coordinates, consecutive waypoints at distinct positions.
    pub fn validate(&self) -> Result<(), RouteError> {
        if self.waypoints.len() < 2 {
            return Err(RouteError::TooFewWaypoints(self.waypoints.len()));
        }
        for (i, w) in self.waypoints.iter().enumerate() {
            if !(w.position.x.is_finite() && w.position.y.is_finite()) {
                return Err(RouteError::BadCoordinate(i));
            }
        }
        for i in 1..self.waypoints.len() {
            if self.waypoints[i].position == self.waypoints[i - 1].position {
                return Err(RouteError::ZeroLengthEdge(i - 1, i));
            }
        }
        Ok(())
    }

    /// Total length over all edges, metres.
    pub fn length_m(&self) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| distance(w[0].position, w[1].position))
            .sum()
    }

    /// Arrival time at the destination according to the stored timetable.
    pub fn arrival_time(&self) -> f64 {
        self.waypoints.last().map_or(0.0, |w| w.arrival_time)
    }

    /// Rebuilds every arrival/departure time by chaining edge travel times
    /// from `start_time`. Non-positive or non-finite speeds are replaced by
    /// the ship's service speed. Any change to the waypoints invalidates the
    /// timetable, so callers mutate points first and re-time once after.
    pub fn recompute_timing(&mut self, ship: &ShipSpec, start_time: f64) -> Result<(), RouteError> {
        self.validate()?;
        for w in &mut self.waypoints {
            if !(w.speed > 0.0 && w.speed.is_finite()) {
                w.speed = ship.service_speed;
            }
        }
        self.waypoints[0].arrival_time = start_time;
        self.waypoints[0].departure_time = start_time;
        for i in 1..self.waypoints.len() {
            let leg = distance(self.waypoints[i - 1].position, self.waypoints[i].position);
            let t = self.waypoints[i - 1].departure_time + leg / self.waypoints[i - 1].speed;
            self.waypoints[i].arrival_time = t;
            self.waypoints[i].departure_time = t;
        }
        Ok(())
    }
}

/// Spacing of footprint probes along an edge: half a ship length, but never
/// coarser than the depth lattice.
fn probe_spacing(ship: &ShipSpec, grid: &DepthGrid) -> f64 {
    (ship.length / 2.0).min(grid.cell_size())
}

/// Lattice spacing used inside each footprint rectangle.
fn footprint_sample_step(ship: &ShipSpec, grid: &DepthGrid) -> f64 {
    grid.cell_size().min(ship.beam) / 2.0
}

/// Safety of a stationary footprint at `p` with the given heading.
pub fn point_is_safe(p: Point, heading: f64, ship: &ShipSpec, grid: &DepthGrid) -> bool {
    let rect = OrientedRect::new(
        p,
        ship.length * ship.footprint_factor,
        ship.beam * ship.footprint_factor,
        heading,
    );
    let threshold = ship.required_depth();
    min_depth_in_rect_capped(grid, &rect, footprint_sample_step(ship, grid), threshold) > threshold
}

/// True when the ship can travel the straight edge from `a` to `b`: the
/// footprint rectangle, swept along the edge in steps no coarser than the
/// probe spacing, everywhere clears draught plus clearance. Probe positions
/// are symmetric in the travel direction, so the check is direction-free.
pub fn edge_is_safe(a: Point, b: Point, ship: &ShipSpec, grid: &DepthGrid) -> bool {
    let len = distance(a, b);
    if len == 0.0 {
        return point_is_safe(a, 0.0, ship, grid);
    }
    let heading = bearing(a, b);
    let threshold = ship.required_depth();
    let rect_l = ship.length * ship.footprint_factor;
    let rect_w = ship.beam * ship.footprint_factor;
    let step = footprint_sample_step(ship, grid);
    let n = (len / probe_spacing(ship, grid)).ceil().max(1.0) as usize;
    for i in 0..=n {
        let t = i as f64 / n as f64;
        let center = Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        let rect = OrientedRect::new(center, rect_l, rect_w, heading);
        if min_depth_in_rect_capped(grid, &rect, step, threshold) <= threshold {
            return false;
        }
    }
    true
}

/// True when every edge of a structurally valid route is safe.
pub fn route_is_safe(route: &Route, ship: &ShipSpec, grid: &DepthGrid) -> bool {
    if route.validate().is_err() {
        return false;
    }
    route
        .waypoints
        .windows(2)
        .all(|w| edge_is_safe(w[0].position, w[1].position, ship, grid))
}

/// Scalar objective: time of arrival at the destination when departing at
/// time 0, or [`COST_SENTINEL`] for unsafe or malformed routes. Lower is
/// better.
pub fn route_cost(route: &Route, ship: &ShipSpec, grid: &DepthGrid) -> f64 {
    if !route_is_safe(route, ship, grid) {
        return COST_SENTINEL;
    }
    let mut t = 0.0;
    for w in route.waypoints.windows(2) {
        let speed = if w[0].speed > 0.0 && w[0].speed.is_finite() {
            w[0].speed
        } else {
            ship.service_speed
        };
        t += distance(w[0].position, w[1].position) / speed;
    }
    t
}

const ROUTE_MAGIC: &str = "ROUTE1";

/// Serialises a route as text: a `ROUTE1 <count>` header, then one line per
/// waypoint with `x y arrival_s departure_s speed_mps turn_radius_m`.
/// Shortest round-trip float formatting makes save/load byte-stable.
pub fn format_route(route: &Route) -> String {
    let mut out = String::with_capacity(route.len() * 48 + 16);
    let _ = writeln!(out, "{ROUTE_MAGIC} {}", route.len());
    for w in &route.waypoints {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {}",
            w.position.x, w.position.y, w.arrival_time, w.departure_time, w.speed, w.turn_radius
        );
    }
    out
}

pub fn write_route(path: &Path, route: &Route) -> Result<(), RouteError> {
    fs::write(path, format_route(route))?;
    Ok(())
}

pub fn parse_route(text: &str) -> Result<Route, RouteError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(RouteError::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let mut fields = header.split_ascii_whitespace();
    if fields.next() != Some(ROUTE_MAGIC) {
        return Err(RouteError::Parse {
            line: 1,
            message: format!("expected `{ROUTE_MAGIC}` header"),
        });
    }
    let count: usize = fields
        .next()
        .ok_or_else(|| RouteError::Parse {
            line: 1,
            message: "missing waypoint count".into(),
        })?
        .parse()
        .map_err(|e| RouteError::Parse {
            line: 1,
            message: format!("bad waypoint count: {e}"),
        })?;
    let mut waypoints = Vec::with_capacity(count);
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut values = [0.0f64; 6];
        let mut tokens = line.split_ascii_whitespace();
        for (slot, value) in values.iter_mut().enumerate() {
            let tok = tokens.next().ok_or_else(|| RouteError::Parse {
                line: line_no,
                message: format!("expected 6 fields, got {slot}"),
            })?;
            *value = tok.parse().map_err(|e| RouteError::Parse {
                line: line_no,
                message: format!("bad value `{tok}`: {e}"),
            })?;
        }
        if tokens.next().is_some() {
            return Err(RouteError::Parse {
                line: line_no,
                message: "trailing fields".into(),
            });
        }
        waypoints.push(Waypoint {
            position: Point::new(values[0], values[1]),
            arrival_time: values[2],
            departure_time: values[3],
            speed: values[4],
            turn_radius: values[5],
        });
    }
    if waypoints.len() != count {
        return Err(RouteError::Parse {
            line: text.lines().count(),
            message: format!("header promised {count} waypoints, found {}", waypoints.len()),
        });
    }
    let route = Route { waypoints };
    route.validate()?;
    Ok(route)
}

pub fn read_route(path: &Path) -> Result<Route, RouteError> {
    let text = fs::read_to_string(path)?;
    parse_route(&text)
}
