//! Implementations behind the command-line subcommands.

use crate::config::{load_config, ConfigError, RunConfig};
use crate::render::render_svg;
use crate::report::{bench_csv, BenchRun, BenchSummary, RunReport};
use searoute_core::depthmap::{
    gen_islands_map, gen_labyrinth_map, gen_wall_map, islands_endpoints, read_dmap, write_dmap,
    DepthGrid, DepthMapError,
};
use searoute_core::ga::GaError;
use searoute_core::geometry::Point;
use searoute_core::islands::{run_islands, IslandsOutcome};
use searoute_core::planner::PlanError;
use searoute_core::route::{edge_is_safe, read_route, write_route, RouteError, ShipSpec};
use std::fmt;
use std::path::Path;
use std::time::Instant;

/// How many consecutive seeds the archipelago generator tries before giving
/// up on producing a map whose direct start-destination corridor is blocked.
const GENMAP_SEED_ATTEMPTS: u64 = 64;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input: bad arguments, config, map or route files.
    Input(String),
    /// The search ran but produced no safe route.
    NoRoute(String),
    Io(std::io::Error),
}

impl CliError {
    /// Process exit code: 2 when no route exists, 3 for any input problem.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoRoute(_) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::NoRoute(m) => write!(f, "no route: {m}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<DepthMapError> for CliError {
    fn from(e: DepthMapError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<RouteError> for CliError {
    fn from(e: RouteError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn from_ga(e: GaError) -> CliError {
    match e {
        GaError::InvalidConfig(m) => CliError::Input(m),
        GaError::NoInitialRoutes(PlanError::BadRequest(m)) => CliError::Input(m),
        other => CliError::NoRoute(other.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Archetype {
    Wall,
    Labyrinth,
    Islands,
}

impl Archetype {
    fn name(self) -> &'static str {
        match self {
            Archetype::Wall => "wall",
            Archetype::Labyrinth => "labyrinth",
            Archetype::Islands => "islands",
        }
    }
}

/// Generates a synthetic map. The archipelago variant advances the seed
/// until the straight start-destination corridor is actually blocked, so a
/// planner run on the map cannot trivially go straight.
pub fn cmd_genmap(
    archetype: Archetype,
    size: f64,
    deep: f64,
    islands: usize,
    slats: usize,
    seed: u64,
    out: &Path,
) -> Result<(), CliError> {
    let grid = match archetype {
        Archetype::Wall => gen_wall_map(size, deep)?,
        Archetype::Labyrinth => gen_labyrinth_map(size, deep, slats)?,
        Archetype::Islands => {
            let (start, dest) = islands_endpoints(size);
            let probe = ShipSpec::default();
            let mut blocked = None;
            for attempt in 0..GENMAP_SEED_ATTEMPTS {
                let candidate =
                    gen_islands_map(size, deep, islands, seed.wrapping_add(attempt))?;
                if !edge_is_safe(start, dest, &probe, &candidate) {
                    blocked = Some(candidate);
                    break;
                }
            }
            blocked.ok_or_else(|| {
                CliError::Input(format!(
                    "no archipelago with a blocked direct corridor found in \
                     {GENMAP_SEED_ATTEMPTS} seeds from {seed}; try more islands"
                ))
            })?
        }
    };
    write_dmap(out, &grid)?;
    println!(
        "wrote {} map, {}x{} nodes, to {}",
        archetype.name(),
        grid.width_cells(),
        grid.height_cells(),
        out.display()
    );
    Ok(())
}

/// One full planning run; shared by `plan` and `bench`.
pub fn run_once(
    cfg: &RunConfig,
    grid: &DepthGrid,
    start: Point,
    dest: Point,
) -> Result<(IslandsOutcome, f64), CliError> {
    let ship = cfg.ship();
    ship.validate().map_err(|e| CliError::Input(e.to_string()))?;
    let set = cfg.island_set(grid);
    let started = Instant::now();
    let outcome = run_islands(&set, &ship, grid, start, dest).map_err(from_ga)?;
    Ok((outcome, started.elapsed().as_secs_f64()))
}

pub fn cmd_plan(
    map: &Path,
    config: &Path,
    start: Point,
    dest: Point,
    route_out: &Path,
    report_out: &Path,
) -> Result<(), CliError> {
    let grid = read_dmap(map)?;
    let cfg = load_config(config)?;
    let (outcome, wall_time) = run_once(&cfg, &grid, start, dest)?;
    write_route(route_out, &outcome.best)?;
    let report = RunReport::new(&outcome, &outcome.best, wall_time);
    std::fs::write(report_out, report.format())?;
    println!(
        "wrote route: {} waypoints, length {:.1} m, arrival {:.1} s; report in {}",
        report.waypoint_count,
        report.route_length_m,
        report.arrival_time_s,
        report_out.display()
    );
    Ok(())
}

/// Benchmarks `runs` seeded repetitions (seeds `base..base+runs-1`) of one
/// configuration on one map and writes a single aggregate CSV row. Endpoints
/// default to the near-opposite-corner convention of the archipelago maps.
pub fn cmd_bench(
    map: &Path,
    config: &Path,
    runs: usize,
    start: Option<Point>,
    dest: Option<Point>,
    out: &Path,
) -> Result<(), CliError> {
    if runs == 0 {
        return Err(CliError::Input("bench needs at least one run".into()));
    }
    let grid = read_dmap(map)?;
    let base = load_config(config)?;
    let start = start
        .unwrap_or_else(|| Point::new(0.05 * grid.width_m(), 0.05 * grid.height_m()));
    let dest = dest.unwrap_or_else(|| Point::new(0.95 * grid.width_m(), 0.95 * grid.height_m()));
    let mut measured = Vec::with_capacity(runs);
    for run in 0..runs {
        let mut cfg = base.clone();
        cfg.seed = base.seed.wrapping_add(run as u64);
        let (outcome, wall_time) = run_once(&cfg, &grid, start, dest)?;
        measured.push(BenchRun {
            seed: cfg.seed,
            route_length_m: outcome.best.length_m(),
            arrival_time_s: outcome.best.arrival_time(),
            wall_time_s: wall_time,
        });
    }
    let summary = BenchSummary::from_runs(&measured).expect("runs >= 1");
    let label = config
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "config".into());
    std::fs::write(out, bench_csv(&label, &summary))?;
    println!(
        "benchmarked {} runs: length {:.1}..{:.1} m (mean {:.1}), wrote {}",
        summary.runs,
        summary.min_length_m,
        summary.max_length_m,
        summary.mean_length_m,
        out.display()
    );
    Ok(())
}

pub fn cmd_render(map: &Path, route: &Path, out: &Path) -> Result<(), CliError> {
    let grid = read_dmap(map)?;
    let route = read_route(route)?;
    std::fs::write(out, render_svg(&grid, &route))?;
    println!("wrote {}", out.display());
    Ok(())
}
