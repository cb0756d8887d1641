//! Iterative single-route construction.
//!
//! Starting from the departure point, the planner repeatedly samples
//! candidate waypoints inside a disc (the sampling domain) around the
//! route's last point, discards candidates the ship cannot safely reach,
//! scores the rest, and appends the best one — until the destination falls
//! inside the domain and can be reached directly. The score rewards
//! progress toward the destination and straight continuation of the
//! current heading, which lets routes back out of dead ends instead of
//! hugging obstacle walls.

use crate::depthmap::DepthGrid;
use crate::geometry::{bearing, distance, sample_in_annular_sector, vertex_angle, Point};
use crate::route::{edge_is_safe, point_is_safe, Route, RouteError, ShipSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("invalid planning request: {0}")]
    BadRequest(String),
    #[error("start or destination footprint does not clear the required depth")]
    IsolatedEndpoint,
    #[error("no safe candidate found at step {step} after a retry")]
    NoSafeCandidates { step: usize },
    #[error("waypoint budget exhausted before reaching the destination")]
    BudgetExhausted,
    #[error(transparent)]
    Route(#[from] RouteError),
}

/// How the sampling-domain radius evolves as the route grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainPolicy {
    /// Fixed radius at every step.
    Constant { base_radius: f64 },
    /// Radius grows linearly with the step index, capped at three times the
    /// base, so long constructions widen their search.
    Growing { base_radius: f64, growth_rate: f64 },
    /// Radius drawn uniformly from `radius_bounds` at every step.
    Random { radius_bounds: (f64, f64) },
    /// Fixed radius, but candidates keep at least `min_radius` away from
    /// the last point, forcing real progress per step.
    MinRadius { base_radius: f64, min_radius: f64 },
}

impl DomainPolicy {
    pub fn validate(&self) -> Result<(), PlanError> {
        let bad = |msg: String| Err(PlanError::BadRequest(msg));
        match *self {
            DomainPolicy::Constant { base_radius } => {
                if !(base_radius > 0.0 && base_radius.is_finite()) {
                    return bad(format!("base_radius must be positive, got {base_radius}"));
                }
            }
            DomainPolicy::Growing {
                base_radius,
                growth_rate,
            } => {
                if !(base_radius > 0.0 && base_radius.is_finite()) {
                    return bad(format!("base_radius must be positive, got {base_radius}"));
                }
                if !(growth_rate >= 0.0 && growth_rate.is_finite()) {
                    return bad(format!("growth_rate must be non-negative, got {growth_rate}"));
                }
            }
            DomainPolicy::Random { radius_bounds: (lo, hi) } => {
                if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                    return bad(format!("radius bounds must satisfy 0 < {lo} < {hi}"));
                }
            }
            DomainPolicy::MinRadius {
                base_radius,
                min_radius,
            } => {
                if !(base_radius > 0.0 && base_radius.is_finite()) {
                    return bad(format!("base_radius must be positive, got {base_radius}"));
                }
                if !(min_radius > 0.0 && min_radius < base_radius) {
                    return bad(format!(
                        "min_radius must satisfy 0 < {min_radius} < base_radius {base_radius}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Domain radius for the step with the given index (0 = first step).
    pub fn radius<R: Rng>(&self, step_index: usize, rng: &mut R) -> f64 {
        match *self {
            DomainPolicy::Constant { base_radius } => base_radius,
            DomainPolicy::Growing {
                base_radius,
                growth_rate,
            } => (base_radius * (1.0 + growth_rate * step_index as f64)).min(3.0 * base_radius),
            DomainPolicy::Random { radius_bounds: (lo, hi) } => rng.gen_range(lo..=hi),
            DomainPolicy::MinRadius { base_radius, .. } => base_radius,
        }
    }

    /// Inner exclusion radius around the last point; zero except for
    /// [`DomainPolicy::MinRadius`].
    pub fn inner_radius(&self) -> f64 {
        match *self {
            DomainPolicy::MinRadius { min_radius, .. } => min_radius,
            _ => 0.0,
        }
    }
}

/// Parameters of the iterative constructor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerConfig {
    pub policy: DomainPolicy,
    /// Number of equal angular sectors the domain is split into.
    pub sectors: usize,
    /// Candidates drawn in each sector per step.
    pub points_per_sector: usize,
    /// Hard cap on the number of waypoints (including both endpoints).
    pub max_points: usize,
    /// Weight of the progress term (distance ratio).
    pub xi: f64,
    /// Weight of the straightness term (vertex angle).
    pub psi: f64,
    pub seed: u64,
}

impl PlannerConfig {
    /// Defaults sized for a ship on a given map: a constant domain of
    /// `ship.domain_radius()` metres, 8 sectors of 4 candidates, and a
    /// waypoint budget of four map diagonals' worth of domain hops.
    pub fn for_map(ship: &ShipSpec, grid: &DepthGrid, seed: u64) -> PlannerConfig {
        let base = ship.domain_radius();
        let diagonal = (grid.width_m().powi(2) + grid.height_m().powi(2)).sqrt();
        PlannerConfig {
            policy: DomainPolicy::Constant { base_radius: base },
            sectors: 8,
            points_per_sector: 4,
            max_points: (4.0 * diagonal / base).ceil() as usize,
            xi: 1.0,
            psi: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        self.policy.validate()?;
        if self.sectors < 1 {
            return Err(PlanError::BadRequest("sectors must be >= 1".into()));
        }
        if self.points_per_sector < 1 {
            return Err(PlanError::BadRequest(
                "points_per_sector must be >= 1".into(),
            ));
        }
        if self.max_points < 2 {
            return Err(PlanError::BadRequest("max_points must be >= 2".into()));
        }
        if !(self.xi >= 0.0 && self.xi.is_finite() && self.psi >= 0.0 && self.psi.is_finite()) {
            return Err(PlanError::BadRequest(format!(
                "weights must be non-negative, got xi {} psi {}",
                self.xi, self.psi
            )));
        }
        Ok(())
    }
}

/// Draws `sectors * points_per_sector` candidates around `last`, the same
/// number in every equal angular sector, each uniform by area within its
/// annular sector. Sector order (and thus RNG consumption) is fixed, so a
/// seeded stream reproduces the same candidates.
pub fn generate_candidates<R: Rng>(
    last: Point,
    radius: f64,
    cfg: &PlannerConfig,
    rng: &mut R,
) -> Vec<Point> {
    let inner = cfg.policy.inner_radius();
    assert!(
        radius > 0.0 && inner < radius,
        "domain radius {radius} must exceed inner radius {inner}"
    );
    let mut points = Vec::with_capacity(cfg.sectors * cfg.points_per_sector);
    let width = std::f64::consts::TAU / cfg.sectors as f64;
    for s in 0..cfg.sectors {
        let lo = s as f64 * width;
        for _ in 0..cfg.points_per_sector {
            let p = sample_in_annular_sector(last, inner, radius, lo, lo + width, rng)
                .expect("sector bounds are valid by construction");
            points.push(p);
        }
    }
    points
}

/// Two-part score of a candidate waypoint; higher is better. The first
/// term rewards shrinking the candidate-to-destination distance relative
/// to the current one; the second rewards a straight continuation, scaled
/// so a dead-ahead candidate scores `psi` and a full reversal 0. On the
/// first step there is no incoming heading and the straightness term is
/// maximal. Returns `None` for candidates coincident with `last`, which
/// can not be scored (or steered to).
pub fn point_fitness(
    candidate: Point,
    last: Point,
    before_last: Option<Point>,
    dest: Point,
    cfg: &PlannerConfig,
) -> Option<f64> {
    let d_cd = distance(last, dest);
    debug_assert!(d_cd > 0.0, "planning already finished");
    let theta = match before_last {
        None => 180.0,
        Some(prev) => vertex_angle(prev, last, candidate).ok()?,
    };
    if candidate == last {
        return None;
    }
    let d_td = distance(candidate, dest);
    Some(-cfg.xi * (d_td / d_cd) + cfg.psi * (theta / 180.0))
}

/// Runs the iterative constructor with a stream seeded from `cfg.seed`.
pub fn plan_route(
    start: Point,
    dest: Point,
    ship: &ShipSpec,
    grid: &DepthGrid,
    cfg: &PlannerConfig,
) -> Result<Route, PlanError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    plan_route_with(start, dest, ship, grid, cfg, &mut rng)
}

/// Runs the iterative constructor on an externally owned random stream,
/// letting callers (e.g. population replenishment) draw many distinct
/// routes from one stream.
pub fn plan_route_with<R: Rng>(
    start: Point,
    dest: Point,
    ship: &ShipSpec,
    grid: &DepthGrid,
    cfg: &PlannerConfig,
    rng: &mut R,
) -> Result<Route, PlanError> {
    cfg.validate()?;
    ship.validate()?;
    if start == dest {
        return Err(PlanError::BadRequest(
            "start and destination coincide".into(),
        ));
    }
    let heading = bearing(start, dest);
    if !point_is_safe(start, heading, ship, grid) || !point_is_safe(dest, heading, ship, grid) {
        return Err(PlanError::IsolatedEndpoint);
    }

    let mut points = vec![start];
    loop {
        let step = points.len() - 1;
        let last = points[step];
        let before_last = step.checked_sub(1).map(|i| points[i]);
        let radius = cfg.policy.radius(step, rng);

        if points.len() < cfg.max_points
            && distance(last, dest) <= radius
            && edge_is_safe(last, dest, ship, grid)
        {
            points.push(dest);
            return Ok(Route::from_points(&points, ship)?);
        }
        if points.len() >= cfg.max_points {
            return Err(PlanError::BudgetExhausted);
        }

        let mut chosen = None;
        for attempt in 0..2 {
            // (fitness, distance-to-dest) lexicographic; earlier generation
            // order wins remaining ties via strict comparison.
            let mut best: Option<(f64, f64, Point)> = None;
            for candidate in generate_candidates(last, radius, cfg, rng) {
                if !edge_is_safe(last, candidate, ship, grid) {
                    continue;
                }
                let Some(ff) = point_fitness(candidate, last, before_last, dest, cfg) else {
                    continue;
                };
                let d_td = distance(candidate, dest);
                let better = match best {
                    None => true,
                    Some((bf, bd, _)) => ff > bf || (ff == bf && d_td < bd),
                };
                if better {
                    best = Some((ff, d_td, candidate));
                }
            }
            if let Some((_, _, p)) = best {
                chosen = Some(p);
                break;
            }
            if attempt == 1 {
                return Err(PlanError::NoSafeCandidates { step });
            }
        }
        points.push(chosen.expect("loop either chose or returned"));
    }
}
