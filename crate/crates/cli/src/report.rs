//! Run summaries: the per-run report file and benchmark aggregation.

use searoute_core::ga::GenStats;
use searoute_core::islands::IslandsOutcome;
use searoute_core::route::Route;
use std::fmt::Write as _;

/// Everything a single planning run reports besides the route itself.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub route_length_m: f64,
    pub arrival_time_s: f64,
    pub waypoint_count: usize,
    pub wall_time_s: f64,
    pub generations: usize,
    pub islands: usize,
    pub best_island: usize,
    /// Combined cost series: per generation the best over all islands and
    /// the mean of the island means (ignoring islands with no finite mean).
    pub series: Vec<GenStats>,
}

/// Folds the per-island histories into one series per generation.
pub fn combined_series(outcome: &IslandsOutcome) -> Vec<GenStats> {
    let generations = outcome
        .islands
        .iter()
        .map(|i| i.history.len())
        .max()
        .unwrap_or(0);
    (0..generations)
        .map(|g| {
            let mut best = f64::INFINITY;
            let mut mean_sum = 0.0;
            let mut mean_count = 0usize;
            for island in &outcome.islands {
                let Some(stats) = island.history.get(g) else { continue };
                if stats.best < best {
                    best = stats.best;
                }
                if stats.mean.is_finite() {
                    mean_sum += stats.mean;
                    mean_count += 1;
                }
            }
            let mean = if mean_count > 0 { mean_sum / mean_count as f64 } else { f64::INFINITY };
            GenStats { best, mean }
        })
        .collect()
}

impl RunReport {
    pub fn new(outcome: &IslandsOutcome, route: &Route, wall_time_s: f64) -> Self {
        let series = combined_series(outcome);
        RunReport {
            route_length_m: route.length_m(),
            arrival_time_s: route.arrival_time(),
            waypoint_count: route.waypoints.len(),
            wall_time_s,
            generations: series.len().saturating_sub(1),
            islands: outcome.islands.len(),
            best_island: outcome.best_island,
            series,
        }
    }

    /// Renders the report in its line-oriented text form (`REPORT1`).
    pub fn format(&self) -> String {
        let mut out = String::new();
        out.push_str("REPORT1\n");
        let _ = writeln!(out, "route_length_m {}", self.route_length_m);
        let _ = writeln!(out, "arrival_time_s {}", self.arrival_time_s);
        let _ = writeln!(out, "waypoint_count {}", self.waypoint_count);
        let _ = writeln!(out, "wall_time_s {}", self.wall_time_s);
        let _ = writeln!(out, "generations {}", self.generations);
        let _ = writeln!(out, "islands {}", self.islands);
        let _ = writeln!(out, "best_island {}", self.best_island);
        for (g, stats) in self.series.iter().enumerate() {
            let _ = writeln!(out, "series {g} {} {}", stats.best, stats.mean);
        }
        out
    }
}

/// One benchmark run's measurements.
#[derive(Debug, Clone, Copy)]
pub struct BenchRun {
    pub seed: u64,
    pub route_length_m: f64,
    pub arrival_time_s: f64,
    pub wall_time_s: f64,
}

/// Aggregates benchmark runs into the summary CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub runs: usize,
    pub min_length_m: f64,
    pub max_length_m: f64,
    pub mean_length_m: f64,
    pub min_time_s: f64,
    pub max_time_s: f64,
    pub mean_time_s: f64,
}

impl BenchSummary {
    pub fn from_runs(runs: &[BenchRun]) -> Option<BenchSummary> {
        if runs.is_empty() {
            return None;
        }
        let n = runs.len() as f64;
        let fold = |f: fn(f64, f64) -> f64, init: f64, pick: fn(&BenchRun) -> f64| {
            runs.iter().map(pick).fold(init, f)
        };
        Some(BenchSummary {
            runs: runs.len(),
            min_length_m: fold(f64::min, f64::INFINITY, |r| r.route_length_m),
            max_length_m: fold(f64::max, f64::NEG_INFINITY, |r| r.route_length_m),
            mean_length_m: runs.iter().map(|r| r.route_length_m).sum::<f64>() / n,
            min_time_s: fold(f64::min, f64::INFINITY, |r| r.wall_time_s),
            max_time_s: fold(f64::max, f64::NEG_INFINITY, |r| r.wall_time_s),
            mean_time_s: runs.iter().map(|r| r.wall_time_s).sum::<f64>() / n,
        })
    }
}

pub const BENCH_CSV_HEADER: &str =
    "config,runs,min_length_m,max_length_m,mean_length_m,min_time_s,max_time_s,mean_time_s";

pub fn bench_csv(label: &str, summary: &BenchSummary) -> String {
    format!(
        "{BENCH_CSV_HEADER}\n{label},{},{},{},{},{},{},{}\n",
        summary.runs,
        summary.min_length_m,
        summary.max_length_m,
        summary.mean_length_m,
        summary.min_time_s,
        summary.max_time_s,
        summary.mean_time_s,
    )
}
