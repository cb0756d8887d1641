//! Flat `key = value` run configuration.
//!
//! One option per line, `#` starts a comment line, unknown or duplicate
//! keys are errors. Every key has a default, so an empty file is a valid
//! configuration; a few numeric keys treat 0 as "derive from the ship and
//! map" (noted below).

use searoute_core::depthmap::DepthGrid;
use searoute_core::ga::{CrossoverOp, GaConfig};
use searoute_core::islands::{derive_island_seed, IslandSetConfig};
use searoute_core::planner::{DomainPolicy, PlannerConfig};
use searoute_core::route::ShipSpec;
use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::Path;

#[derive(Debug)]
pub enum ConfigError {
    Parse { line: usize, message: String },
    Io(std::io::Error),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { line, message } => write!(f, "line {line}: {message}"),
            ConfigError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<std::io::Error> for ConfigError {
    fn from(e: std::io::Error) -> Self {
        ConfigError::Io(e)
    }
}

/// Which sampling-domain policy the islands use; `Cycle` assigns the four
/// kinds round-robin so the islands search differently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyChoice {
    Cycle,
    Constant,
    Growing,
    Random,
    MinRadius,
}

/// Parsed configuration with defaults filled in. Zeros in `base_radius`,
/// `max_points`, `radius_lo`/`radius_hi` and `min_radius` mean "derive".
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub ship_length: f64,
    pub ship_beam: f64,
    pub ship_draught: f64,
    pub ship_speed: f64,
    pub ship_footprint_factor: f64,
    pub ship_depth_clearance: Option<f64>,
    pub ship_domain_factor: f64,

    pub domain_policy: PolicyChoice,
    pub base_radius: f64,
    pub growth_rate: f64,
    pub radius_lo: f64,
    pub radius_hi: f64,
    pub min_radius: f64,
    pub sectors: usize,
    pub points_per_sector: usize,
    pub max_points: usize,
    pub xi: f64,
    pub psi: f64,

    pub population: usize,
    pub elites: usize,
    pub mutation_prob: f64,
    pub crossover_prob: f64,
    pub crossover: CrossoverOp,
    pub replenish_threshold: Option<usize>,

    pub generations: usize,
    pub islands: usize,
    pub migration_epoch: usize,
    pub migration_pairs: Option<usize>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let ship = ShipSpec::default();
        RunConfig {
            ship_length: ship.length,
            ship_beam: ship.beam,
            ship_draught: ship.draught,
            ship_speed: ship.service_speed,
            ship_footprint_factor: ship.footprint_factor,
            ship_depth_clearance: None,
            ship_domain_factor: ship.domain_radius_factor,
            domain_policy: PolicyChoice::Cycle,
            base_radius: 0.0,
            growth_rate: 0.1,
            radius_lo: 0.0,
            radius_hi: 0.0,
            min_radius: 0.0,
            sectors: 8,
            points_per_sector: 4,
            max_points: 0,
            xi: 1.0,
            psi: 1.0,
            population: 20,
            elites: 10,
            mutation_prob: 0.1,
            crossover_prob: 0.5,
            crossover: CrossoverOp::Short,
            replenish_threshold: None,
            generations: 300,
            islands: 4,
            migration_epoch: 100,
            migration_pairs: None,
            seed: 42,
        }
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| ConfigError::Parse {
        line,
        message: format!("bad value for {key}: {e}"),
    })
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(ConfigError::Parse {
                line,
                message: format!("expected `key = value`, got `{trimmed}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if !seen.insert(key.to_string()) {
            return Err(ConfigError::Parse {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        match key {
            "ship_length" => cfg.ship_length = parse_num(line, key, value)?,
            "ship_beam" => cfg.ship_beam = parse_num(line, key, value)?,
            "ship_draught" => cfg.ship_draught = parse_num(line, key, value)?,
            "ship_speed" => cfg.ship_speed = parse_num(line, key, value)?,
            "ship_footprint_factor" => cfg.ship_footprint_factor = parse_num(line, key, value)?,
            "ship_depth_clearance" => {
                cfg.ship_depth_clearance = Some(parse_num(line, key, value)?)
            }
            "ship_domain_factor" => cfg.ship_domain_factor = parse_num(line, key, value)?,
            "domain_policy" => {
                cfg.domain_policy = match value {
                    "cycle" => PolicyChoice::Cycle,
                    "constant" => PolicyChoice::Constant,
                    "growing" => PolicyChoice::Growing,
                    "random" => PolicyChoice::Random,
                    "min-radius" => PolicyChoice::MinRadius,
                    other => {
                        return Err(ConfigError::Parse {
                            line,
                            message: format!(
                                "unknown domain_policy `{other}` (expected cycle, constant, \
                                 growing, random or min-radius)"
                            ),
                        })
                    }
                }
            }
            "base_radius" => cfg.base_radius = parse_num(line, key, value)?,
            "growth_rate" => cfg.growth_rate = parse_num(line, key, value)?,
            "radius_lo" => cfg.radius_lo = parse_num(line, key, value)?,
            "radius_hi" => cfg.radius_hi = parse_num(line, key, value)?,
            "min_radius" => cfg.min_radius = parse_num(line, key, value)?,
            "sectors" => cfg.sectors = parse_num(line, key, value)?,
            "points_per_sector" => cfg.points_per_sector = parse_num(line, key, value)?,
            "max_points" => cfg.max_points = parse_num(line, key, value)?,
            "xi" => cfg.xi = parse_num(line, key, value)?,
            "psi" => cfg.psi = parse_num(line, key, value)?,
            "population" => cfg.population = parse_num(line, key, value)?,
            "elites" => cfg.elites = parse_num(line, key, value)?,
            "mutation_prob" => cfg.mutation_prob = parse_num(line, key, value)?,
            "crossover_prob" => cfg.crossover_prob = parse_num(line, key, value)?,
            "crossover" => {
                cfg.crossover = match value {
                    "short" => CrossoverOp::Short,
                    "long" => CrossoverOp::Long,
                    other => {
                        return Err(ConfigError::Parse {
                            line,
                            message: format!("unknown crossover `{other}` (expected short or long)"),
                        })
                    }
                }
            }
            "replenish_threshold" => {
                cfg.replenish_threshold = Some(parse_num(line, key, value)?)
            }
            "generations" => cfg.generations = parse_num(line, key, value)?,
            "islands" => cfg.islands = parse_num(line, key, value)?,
            "migration_epoch" => cfg.migration_epoch = parse_num(line, key, value)?,
            "migration_pairs" => cfg.migration_pairs = Some(parse_num(line, key, value)?),
            "seed" => cfg.seed = parse_num(line, key, value)?,
            other => {
                return Err(ConfigError::Parse {
                    line,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    parse_config(&fs::read_to_string(path)?)
}

impl RunConfig {
    pub fn ship(&self) -> ShipSpec {
        ShipSpec {
            length: self.ship_length,
            beam: self.ship_beam,
            draught: self.ship_draught,
            service_speed: self.ship_speed,
            footprint_factor: self.ship_footprint_factor,
            depth_clearance: self
                .ship_depth_clearance
                .unwrap_or_else(|| ShipSpec::default_clearance(self.ship_draught)),
            domain_radius_factor: self.ship_domain_factor,
        }
    }

    fn policy_for(&self, island: usize, base: f64) -> DomainPolicy {
        let choice = match self.domain_policy {
            PolicyChoice::Cycle => match island % 4 {
                0 => PolicyChoice::Constant,
                1 => PolicyChoice::Growing,
                2 => PolicyChoice::Random,
                _ => PolicyChoice::MinRadius,
            },
            fixed => fixed,
        };
        match choice {
            PolicyChoice::Constant => DomainPolicy::Constant { base_radius: base },
            PolicyChoice::Growing => DomainPolicy::Growing {
                base_radius: base,
                growth_rate: self.growth_rate,
            },
            PolicyChoice::Random => {
                let lo = if self.radius_lo > 0.0 { self.radius_lo } else { 0.5 * base };
                let hi = if self.radius_hi > 0.0 { self.radius_hi } else { 1.5 * base };
                DomainPolicy::Random { radius_bounds: (lo, hi) }
            }
            PolicyChoice::MinRadius => DomainPolicy::MinRadius {
                base_radius: base,
                min_radius: if self.min_radius > 0.0 { self.min_radius } else { base / 3.0 },
            },
            PolicyChoice::Cycle => unreachable!("cycle resolved above"),
        }
    }

    /// Assembles the full island-set configuration for a given map. Island
    /// seeds are derived from `seed`; derived values fill every zero knob.
    pub fn island_set(&self, grid: &DepthGrid) -> IslandSetConfig {
        let ship = self.ship();
        let base = if self.base_radius > 0.0 { self.base_radius } else { ship.domain_radius() };
        let max_points = if self.max_points > 0 {
            self.max_points
        } else {
            let diagonal = (grid.width_m().powi(2) + grid.height_m().powi(2)).sqrt();
            (4.0 * diagonal / base).ceil() as usize
        };
        let islands = (0..self.islands)
            .map(|i| {
                let island_seed = derive_island_seed(self.seed, i as u64);
                GaConfig {
                    population_size: self.population,
                    elite_count: self.elites,
                    mutation_prob: self.mutation_prob,
                    crossover_prob: self.crossover_prob,
                    crossover_op: self.crossover,
                    replenish_threshold: self.replenish_threshold.unwrap_or(self.population),
                    generations: self.generations,
                    planner: PlannerConfig {
                        policy: self.policy_for(i, base),
                        sectors: self.sectors,
                        points_per_sector: self.points_per_sector,
                        max_points,
                        xi: self.xi,
                        psi: self.psi,
                        seed: island_seed,
                    },
                    seed: island_seed,
                }
            })
            .collect();
        IslandSetConfig {
            islands,
            migration_epoch: self.migration_epoch,
            migration_pairs_per_island: self.migration_pairs.unwrap_or(self.elites / 2),
            shared_generations: self.generations,
            master_seed: self.seed,
        }
    }
}
