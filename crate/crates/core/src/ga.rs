//! Evolutionary refinement of routes.
//!
//! A population of complete routes is evolved under three structural
//! mutations (insert / move / delete a waypoint), tail-swapping crossover,
//! and truncation elitism. Selection ranks the previous population together
//! with all newly created candidates, so the best route can never be lost;
//! the population is then topped back up with freshly constructed routes.

use crate::depthmap::DepthGrid;
use crate::geometry::{distance, sample_in_annular_sector, Point};
use crate::planner::{plan_route_with, PlanError, PlannerConfig};
use crate::route::{route_cost, Route, ShipSpec, Waypoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no parent without interior waypoints can be crossed")]
    NoInteriorPoints,
    #[error("could not construct any initial route: {0}")]
    NoInitialRoutes(PlanError),
    #[error("evolution finished without a single safe route")]
    NoSafeRoute,
}

/// Which tail-swapping operator a configuration uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossoverOp {
    /// Splice at the closest pair of interior waypoints.
    Short,
    /// Splice at independently chosen random interior waypoints.
    Long,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    /// Number of lowest-cost individuals kept by selection.
    pub elite_count: usize,
    pub mutation_prob: f64,
    pub crossover_prob: f64,
    pub crossover_op: CrossoverOp,
    /// When fewer than this many survivors have finite cost, the top-up
    /// slots are filled by the route constructor instead of clones.
    pub replenish_threshold: usize,
    pub generations: usize,
    pub planner: PlannerConfig,
    pub seed: u64,
}

impl GaConfig {
    /// The reference configuration: 20 individuals, 10 elites, mutation
    /// 0.1, crossover 0.5, 300 generations, constructor-based top-up.
    pub fn for_map(ship: &ShipSpec, grid: &DepthGrid, seed: u64) -> GaConfig {
        GaConfig {
            population_size: 20,
            elite_count: 10,
            mutation_prob: 0.1,
            crossover_prob: 0.5,
            crossover_op: CrossoverOp::Short,
            replenish_threshold: 20,
            generations: 300,
            planner: PlannerConfig::for_map(ship, grid, seed),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GaError> {
        if self.population_size == 0 {
            return Err(GaError::InvalidConfig("population_size must be >= 1".into()));
        }
        if self.elite_count == 0 || self.elite_count > self.population_size {
            return Err(GaError::InvalidConfig(format!(
                "elite_count must be in 1..={}, got {}",
                self.population_size, self.elite_count
            )));
        }
        for (name, p) in [
            ("mutation_prob", self.mutation_prob),
            ("crossover_prob", self.crossover_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(GaError::InvalidConfig(format!(
                    "{name} must be a probability, got {p}"
                )));
            }
        }
        if self.replenish_threshold > self.population_size {
            return Err(GaError::InvalidConfig(format!(
                "replenish_threshold must be <= population_size, got {}",
                self.replenish_threshold
            )));
        }
        self.planner
            .validate()
            .map_err(|e| GaError::InvalidConfig(e.to_string()))?;
        Ok(())
    }
}

/// A route with its cached cost; the cost always reflects the current
/// waypoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub route: Route,
    pub cost: f64,
}

impl Individual {
    /// Prices a route and pairs it with the result.
    pub fn evaluate(route: Route, ship: &ShipSpec, grid: &DepthGrid) -> Individual {
        let cost = route_cost(&route, ship, grid);
        Individual { route, cost }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub individuals: Vec<Individual>,
    pub generation_index: usize,
}

/// Best and mean finite cost of one generation. The mean skips unsafe
/// (infinite-cost) individuals so a single stray candidate cannot blank
/// the series; it is infinite only when nothing in the population is safe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenStats {
    pub best: f64,
    pub mean: f64,
}

impl Population {
    pub fn stats(&self) -> GenStats {
        let best = self
            .individuals
            .iter()
            .map(|i| i.cost)
            .fold(f64::INFINITY, f64::min);
        let finite: Vec<f64> = self
            .individuals
            .iter()
            .map(|i| i.cost)
            .filter(|c| c.is_finite())
            .collect();
        let mean = if finite.is_empty() {
            f64::INFINITY
        } else {
            finite.iter().sum::<f64>() / finite.len() as f64
        };
        GenStats { best, mean }
    }

    pub fn best(&self) -> Option<&Individual> {
        self.individuals
            .iter()
            .min_by(|a, b| a.cost.total_cmp(&b.cost))
    }
}

/// Adds one waypoint, placed uniformly inside the ship's domain disc
/// around a uniformly chosen existing waypoint and spliced into a
/// uniformly chosen edge. Endpoints stay fixed; timing is recomputed.
pub fn mutate_insert<R: Rng>(route: &Route, ship: &ShipSpec, rng: &mut R) -> Route {
    let n = route.len();
    debug_assert!(n >= 2);
    let anchor = route.waypoints[rng.gen_range(0..n)].position;
    let position = sample_in_annular_sector(
        anchor,
        0.0,
        ship.domain_radius(),
        0.0,
        std::f64::consts::TAU,
        rng,
    )
    .expect("disc bounds are valid");
    let slot = rng.gen_range(1..n);
    let mut next = route.clone();
    next.waypoints
        .insert(slot, Waypoint::at(position, ship.service_speed));
    match next.recompute_timing(ship, 0.0) {
        Ok(()) => next,
        Err(_) => route.clone(),
    }
}

/// Displaces one interior waypoint uniformly within the ship's domain disc
/// around its current location. Routes without interior waypoints are
/// returned unchanged.
pub fn mutate_move<R: Rng>(route: &Route, ship: &ShipSpec, rng: &mut R) -> Route {
    let n = route.len();
    if n < 3 {
        return route.clone();
    }
    let idx = rng.gen_range(1..n - 1);
    let position = sample_in_annular_sector(
        route.waypoints[idx].position,
        0.0,
        ship.domain_radius(),
        0.0,
        std::f64::consts::TAU,
        rng,
    )
    .expect("disc bounds are valid");
    let mut next = route.clone();
    next.waypoints[idx].position = position;
    match next.recompute_timing(ship, 0.0) {
        Ok(()) => next,
        Err(_) => route.clone(),
    }
}

/// Removes one interior waypoint, directly connecting its neighbours.
/// Routes without interior waypoints are returned unchanged.
pub fn mutate_delete<R: Rng>(route: &Route, ship: &ShipSpec, rng: &mut R) -> Route {
    let n = route.len();
    if n < 3 {
        return route.clone();
    }
    let idx = rng.gen_range(1..n - 1);
    let mut next = route.clone();
    next.waypoints.remove(idx);
    match next.recompute_timing(ship, 0.0) {
        Ok(()) => next,
        Err(_) => route.clone(),
    }
}

/// Applies one of the three mutations, chosen uniformly. Variants whose
/// preconditions do not hold degrade to the identity.
pub fn mutate<R: Rng>(route: &Route, ship: &ShipSpec, rng: &mut R) -> Route {
    match rng.gen_range(0..3u8) {
        0 => mutate_insert(route, ship, rng),
        1 => mutate_move(route, ship, rng),
        _ => mutate_delete(route, ship, rng),
    }
}

fn interior_range(route: &Route) -> Result<std::ops::Range<usize>, GaError> {
    if route.len() < 3 {
        return Err(GaError::NoInteriorPoints);
    }
    Ok(1..route.len() - 1)
}

fn splice(a: &Route, i: usize, b: &Route, j: usize, ship: &ShipSpec) -> (Route, Route) {
    let mut w1 = a.waypoints[..=i].to_vec();
    w1.extend_from_slice(&b.waypoints[j + 1..]);
    let mut w2 = b.waypoints[..=j].to_vec();
    w2.extend_from_slice(&a.waypoints[i + 1..]);
    let mut o1 = Route { waypoints: w1 };
    let mut o2 = Route { waypoints: w2 };
    // A splice can in principle double up a waypoint; such offspring stay
    // untimed and are priced as unsafe at evaluation.
    let _ = o1.recompute_timing(ship, 0.0);
    let _ = o2.recompute_timing(ship, 0.0);
    (o1, o2)
}

/// Tail swap at the closest pair of interior waypoints (ties: lowest index
/// in `a`, then in `b`). Parents are unchanged; offspring keep the shared
/// start and destination.
pub fn crossover_short(a: &Route, b: &Route, ship: &ShipSpec) -> Result<(Route, Route), GaError> {
    let ra = interior_range(a)?;
    let rb = interior_range(b)?;
    let mut best = (f64::INFINITY, 0usize, 0usize);
    for i in ra {
        for j in rb.clone() {
            let d = distance(a.waypoints[i].position, b.waypoints[j].position);
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    Ok(splice(a, best.1, b, best.2, ship))
}

/// Tail swap at independently random interior waypoints of each parent.
pub fn crossover_long<R: Rng>(
    a: &Route,
    b: &Route,
    ship: &ShipSpec,
    rng: &mut R,
) -> Result<(Route, Route), GaError> {
    let ra = interior_range(a)?;
    let rb = interior_range(b)?;
    let i = rng.gen_range(ra);
    let j = rng.gen_range(rb);
    Ok(splice(a, i, b, j, ship))
}

/// One generation: crossover marks and pairs individuals and appends their
/// offspring; mutation adds a mutant for each marked population member
/// (keeping the original, so elites are never destroyed) and rewrites
/// marked offspring in place; selection keeps the `elite_count` cheapest
/// of population-plus-candidates; the constructor (or cloning, when enough
/// finite-cost survivors remain) tops the population back up.
pub fn evolve_generation<R: Rng>(
    pop: Population,
    cfg: &GaConfig,
    ship: &ShipSpec,
    grid: &DepthGrid,
    rng: &mut R,
) -> Population {
    let start = pop.individuals.first().map(|i| i.route.start());
    let dest = pop.individuals.first().map(|i| i.route.dest());

    // Crossover phase: mark, pair randomly (odd one out unpaired), splice.
    let mut marked: Vec<usize> = (0..pop.individuals.len())
        .filter(|_| rng.gen_bool(cfg.crossover_prob))
        .collect();
    let mut offspring: Vec<Route> = Vec::new();
    while marked.len() >= 2 {
        let a = marked.swap_remove(rng.gen_range(0..marked.len()));
        let b = marked.swap_remove(rng.gen_range(0..marked.len()));
        let pa = &pop.individuals[a].route;
        let pb = &pop.individuals[b].route;
        let crossed = match cfg.crossover_op {
            CrossoverOp::Short => crossover_short(pa, pb, ship),
            CrossoverOp::Long => crossover_long(pa, pb, ship, rng),
        };
        if let Ok((o1, o2)) = crossed {
            offspring.push(o1);
            offspring.push(o2);
        }
    }

    // Mutation phase: population members spawn an added mutant; offspring
    // are replaced by theirs.
    let mut candidates: Vec<Route> = Vec::new();
    for ind in &pop.individuals {
        if rng.gen_bool(cfg.mutation_prob) {
            candidates.push(mutate(&ind.route, ship, rng));
        }
    }
    for mut child in offspring {
        if rng.gen_bool(cfg.mutation_prob) {
            child = mutate(&child, ship, rng);
        }
        candidates.push(child);
    }

    // Evaluation and selection over previous population plus candidates.
    let mut pool = pop.individuals;
    pool.extend(candidates.into_iter().map(|r| Individual::evaluate(r, ship, grid)));
    pool.sort_by(|x, y| x.cost.total_cmp(&y.cost));
    pool.truncate(cfg.elite_count);
    let survivors = pool;

    // Replenishment back to full size.
    let finite_survivors = survivors.iter().filter(|i| i.cost.is_finite()).count();
    let use_planner = finite_survivors < cfg.replenish_threshold;
    let mut individuals = survivors;
    while individuals.len() < cfg.population_size {
        let mut filled = false;
        if use_planner {
            if let (Some(s), Some(d)) = (start, dest) {
                for _ in 0..3 {
                    if let Ok(route) = plan_route_with(s, d, ship, grid, &cfg.planner, rng) {
                        individuals.push(Individual::evaluate(route, ship, grid));
                        filled = true;
                        break;
                    }
                }
            }
        }
        if !filled {
            let pick = rng.gen_range(0..individuals.len());
            individuals.push(individuals[pick].clone());
        }
    }

    Population {
        individuals,
        generation_index: pop.generation_index + 1,
    }
}

/// A running evolution: population, private random stream, and the
/// per-generation (best, mean) cost history.
pub struct GaState<'a> {
    pub cfg: &'a GaConfig,
    ship: &'a ShipSpec,
    grid: &'a DepthGrid,
    pub population: Population,
    pub rng: ChaCha8Rng,
    pub history: Vec<GenStats>,
}

impl<'a> GaState<'a> {
    /// Seeds the initial population with constructor routes (a shared
    /// budget of five attempts per slot, cloning earlier successes once
    /// it runs out). Fails only when every attempt fails.
    pub fn new(
        cfg: &'a GaConfig,
        ship: &'a ShipSpec,
        grid: &'a DepthGrid,
        start: Point,
        dest: Point,
    ) -> Result<Self, GaError> {
        Self::with_rng(cfg, ship, grid, start, dest, ChaCha8Rng::seed_from_u64(cfg.seed))
    }

    /// Like [`GaState::new`] but with an externally prepared stream, so a
    /// coordinator can hand each instance a decorrelated seed.
    pub fn with_rng(
        cfg: &'a GaConfig,
        ship: &'a ShipSpec,
        grid: &'a DepthGrid,
        start: Point,
        dest: Point,
        mut rng: ChaCha8Rng,
    ) -> Result<Self, GaError> {
        cfg.validate()?;
        ship.validate()
            .map_err(|e| GaError::InvalidConfig(e.to_string()))?;
        let mut individuals: Vec<Individual> = Vec::with_capacity(cfg.population_size);
        let mut last_err = None;
        // Shared construction budget: five planner calls per slot. A slot
        // keeps drawing from the budget until one route succeeds; once the
        // budget is gone (or a slot gives up), earlier successes are cloned.
        let mut attempts_left = 5 * cfg.population_size;
        while individuals.len() < cfg.population_size {
            let mut filled = false;
            while !filled && attempts_left > 0 {
                attempts_left -= 1;
                match plan_route_with(start, dest, ship, grid, &cfg.planner, &mut rng) {
                    Ok(route) => {
                        individuals.push(Individual::evaluate(route, ship, grid));
                        filled = true;
                    }
                    Err(e) => last_err = Some(e),
                }
            }
            if !filled {
                if let Some(seed) = (!individuals.is_empty())
                    .then(|| rng.gen_range(0..individuals.len()))
                {
                    individuals.push(individuals[seed].clone());
                } else {
                    return Err(GaError::NoInitialRoutes(
                        last_err.unwrap_or(PlanError::BudgetExhausted),
                    ));
                }
            }
        }
        let population = Population {
            individuals,
            generation_index: 0,
        };
        let history = vec![population.stats()];
        Ok(GaState {
            cfg,
            ship,
            grid,
            population,
            rng,
            history,
        })
    }

    /// Advances one generation and records its stats.
    pub fn step(&mut self) {
        let pop = std::mem::replace(
            &mut self.population,
            Population {
                individuals: Vec::new(),
                generation_index: 0,
            },
        );
        self.population = evolve_generation(pop, self.cfg, self.ship, self.grid, &mut self.rng);
        self.history.push(self.population.stats());
    }

    pub fn best(&self) -> &Individual {
        self.population.best().expect("population is never empty")
    }
}

/// Result of a full evolution run.
#[derive(Debug, Clone)]
pub struct GaOutcome {
    pub best: Route,
    pub best_cost: f64,
    pub history: Vec<GenStats>,
}

/// Seeds a population and evolves it for `cfg.generations` generations.
/// The history has one entry per generation plus one for the initial
/// population.
pub fn run(
    cfg: &GaConfig,
    ship: &ShipSpec,
    grid: &DepthGrid,
    start: Point,
    dest: Point,
) -> Result<GaOutcome, GaError> {
    let mut state = GaState::new(cfg, ship, grid, start, dest)?;
    for _ in 0..cfg.generations {
        state.step();
    }
    finish(state)
}

/// Extracts the outcome from a finished state, failing when nothing safe
/// was ever found.
pub fn finish(state: GaState<'_>) -> Result<GaOutcome, GaError> {
    let best = state.best().clone();
    if !best.cost.is_finite() {
        return Err(GaError::NoSafeRoute);
    }
    Ok(GaOutcome {
        best: best.route,
        best_cost: best.cost,
        history: state.history,
    })
}
