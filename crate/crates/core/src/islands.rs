//! Parallel evolution with several independently configured populations.
//!
//! Each island runs its own evolution on its own thread and random stream.
//! At fixed generation boundaries all islands synchronise and exchange
//! genetic material: island by island, a random donor is picked and a few
//! cross-island offspring are appended to the receiving population, where
//! they compete in the next selection. With per-island seeds fixed in the
//! configuration and migration driven by a dedicated stream, results are
//! bitwise reproducible regardless of how the threads are scheduled.

use crate::depthmap::DepthGrid;
use crate::ga::{
    crossover_long, crossover_short, finish, CrossoverOp, GaConfig, GaError, GaOutcome, GaState,
    GenStats, Individual, Population,
};
use crate::geometry::Point;
use crate::planner::DomainPolicy;
use crate::route::{Route, ShipSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mixes a master seed with a stream index into an independent seed
/// (splitmix64 finaliser). Stream 0, 1, 2… are the islands; the migration
/// stream uses a reserved index.
pub fn derive_island_seed(master_seed: u64, stream_index: u64) -> u64 {
    let mut z = master_seed
        .wrapping_add(stream_index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const MIGRATION_STREAM: u64 = u64::MAX;

/// Configuration of a whole island set. Islands may differ in any setting
/// except the number of generations and the cost function, which must be
/// shared for the boundaries to line up.
#[derive(Debug, Clone, PartialEq)]
pub struct IslandSetConfig {
    pub islands: Vec<GaConfig>,
    /// Generations between inter-island exchanges.
    pub migration_epoch: usize,
    /// Cross-island offspring pairs appended per receiving island and epoch.
    pub migration_pairs_per_island: usize,
    /// Generations every island runs in total.
    pub shared_generations: usize,
    /// Seed of the migration stream; island seeds are derived from it when
    /// the set is built with [`IslandSetConfig::for_map`].
    pub master_seed: u64,
}

impl IslandSetConfig {
    /// Builds `island_count` islands with the reference parameters, seeds
    /// derived from `master_seed`, and sampling-domain policies cycling
    /// through the four kinds so the islands search differently.
    pub fn for_map(
        ship: &ShipSpec,
        grid: &DepthGrid,
        island_count: usize,
        master_seed: u64,
    ) -> IslandSetConfig {
        let base = ship.domain_radius();
        let islands = (0..island_count)
            .map(|i| {
                let seed = derive_island_seed(master_seed, i as u64);
                let mut cfg = GaConfig::for_map(ship, grid, seed);
                cfg.planner.policy = match i % 4 {
                    0 => DomainPolicy::Constant { base_radius: base },
                    1 => DomainPolicy::Growing {
                        base_radius: base,
                        growth_rate: 0.1,
                    },
                    2 => DomainPolicy::Random {
                        radius_bounds: (0.5 * base, 1.5 * base),
                    },
                    _ => DomainPolicy::MinRadius {
                        base_radius: base,
                        min_radius: base / 3.0,
                    },
                };
                cfg
            })
            .collect::<Vec<_>>();
        let pairs = islands.first().map_or(0, |c| c.elite_count / 2);
        IslandSetConfig {
            islands,
            migration_epoch: 100,
            migration_pairs_per_island: pairs,
            shared_generations: 300,
            master_seed,
        }
    }

    pub fn validate(&self) -> Result<(), GaError> {
        if self.islands.is_empty() {
            return Err(GaError::InvalidConfig("at least one island required".into()));
        }
        if self.migration_epoch == 0 {
            return Err(GaError::InvalidConfig("migration_epoch must be >= 1".into()));
        }
        for cfg in &self.islands {
            cfg.validate()?;
        }
        Ok(())
    }
}

/// One cross-island exchange: `pairs` random (receiver, donor) individual
/// pairs are crossed with the receiver's operator and the offspring are
/// appended — fully priced — to a copy of the receiving population. The
/// donor only provides individuals and is never modified. Pairs without
/// interior waypoints are skipped.
pub fn inter_island_crossover<R: Rng>(
    first: &Population,
    donor: &Population,
    pairs: usize,
    op: CrossoverOp,
    ship: &ShipSpec,
    grid: &DepthGrid,
    rng: &mut R,
) -> Population {
    assert!(
        !first.individuals.is_empty() && !donor.individuals.is_empty(),
        "populations must be non-empty"
    );
    let mut next = first.clone();
    for _ in 0..pairs {
        let a = &first.individuals[rng.gen_range(0..first.individuals.len())].route;
        let b = &donor.individuals[rng.gen_range(0..donor.individuals.len())].route;
        let crossed = match op {
            CrossoverOp::Short => crossover_short(a, b, ship),
            CrossoverOp::Long => crossover_long(a, b, ship, rng),
        };
        if let Ok((o1, o2)) = crossed {
            next.individuals.push(Individual::evaluate(o1, ship, grid));
            next.individuals.push(Individual::evaluate(o2, ship, grid));
        }
    }
    next
}

/// History and outcome of a single island within a set run.
#[derive(Debug, Clone)]
pub struct IslandReport {
    /// Index of the island in the configuration.
    pub index: usize,
    pub history: Vec<GenStats>,
    pub best_cost: f64,
}

#[derive(Debug, Clone)]
pub struct IslandsOutcome {
    pub best: Route,
    pub best_cost: f64,
    /// Index (per the configuration) of the island holding the best route.
    pub best_island: usize,
    pub islands: Vec<IslandReport>,
}

/// Runs every island for `shared_generations` generations, one thread per
/// island, synchronising at every `migration_epoch` boundary to exchange
/// offspring (each island receives once per boundary, from a random other
/// island). Islands whose initial population cannot be seeded are dropped;
/// the run fails only if that happens to all of them.
pub fn run_islands(
    cfg: &IslandSetConfig,
    ship: &ShipSpec,
    grid: &DepthGrid,
    start: Point,
    dest: Point,
) -> Result<IslandsOutcome, GaError> {
    cfg.validate()?;
    let mut states: Vec<(usize, GaState<'_>)> = Vec::with_capacity(cfg.islands.len());
    let mut first_err = None;
    for (index, island_cfg) in cfg.islands.iter().enumerate() {
        match GaState::new(island_cfg, ship, grid, start, dest) {
            Ok(state) => states.push((index, state)),
            Err(e) => first_err = first_err.or(Some(e)),
        }
    }
    if states.is_empty() {
        return Err(first_err.expect("at least one island was configured"));
    }

    let mut migration_rng =
        ChaCha8Rng::seed_from_u64(derive_island_seed(cfg.master_seed, MIGRATION_STREAM));
    let mut done = 0;
    while done < cfg.shared_generations {
        let block = cfg.migration_epoch.min(cfg.shared_generations - done);
        std::thread::scope(|scope| {
            for (_, state) in states.iter_mut() {
                scope.spawn(move || {
                    for _ in 0..block {
                        state.step();
                    }
                });
            }
        });
        done += block;

        if done < cfg.shared_generations && states.len() > 1 {
            for i in 0..states.len() {
                let j = loop {
                    let j = migration_rng.gen_range(0..states.len());
                    if j != i {
                        break j;
                    }
                };
                let merged = inter_island_crossover(
                    &states[i].1.population,
                    &states[j].1.population,
                    cfg.migration_pairs_per_island,
                    states[i].1.cfg.crossover_op,
                    ship,
                    grid,
                    &mut migration_rng,
                );
                states[i].1.population = merged;
            }
        }
    }

    let mut outcome: Option<(usize, GaOutcome)> = None;
    let mut reports = Vec::with_capacity(states.len());
    for (index, state) in states {
        let best_cost = state.best().cost;
        reports.push(IslandReport {
            index,
            history: state.history.clone(),
            best_cost,
        });
        if let Ok(out) = finish(state) {
            let better = match &outcome {
                None => true,
                Some((_, incumbent)) => out.best_cost < incumbent.best_cost,
            };
            if better {
                outcome = Some((index, out));
            }
        }
    }
    let (best_island, out) = outcome.ok_or(GaError::NoSafeRoute)?;
    Ok(IslandsOutcome {
        best: out.best,
        best_cost: out.best_cost,
        best_island,
        islands: reports,
    })
}
