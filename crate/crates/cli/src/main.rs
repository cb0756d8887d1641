//! `searoute` — grid-free route planning for vessels on depth rasters.
//!
//! Exit codes: 0 success, 2 the search found no safe route, 3 bad input
//! (arguments, config, map or route files).

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use searoute_cli::commands::{self, Archetype, CliError};
use searoute_core::geometry::Point;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "searoute",
    version,
    about = "Plan safe vessel routes on depth maps with an island-model genetic algorithm"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ArchetypeArg {
    Wall,
    Labyrinth,
    Islands,
}

impl From<ArchetypeArg> for Archetype {
    fn from(a: ArchetypeArg) -> Archetype {
        match a {
            ArchetypeArg::Wall => Archetype::Wall,
            ArchetypeArg::Labyrinth => Archetype::Labyrinth,
            ArchetypeArg::Islands => Archetype::Islands,
        }
    }
}

/// Parses `x,y` in metres into a point.
fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let x: f64 = x.trim().parse().map_err(|e| format!("bad x coordinate: {e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("bad y coordinate: {e}"))?;
    if !(x.is_finite() && y.is_finite()) {
        return Err(format!("coordinates must be finite, got `{s}`"));
    }
    Ok(Point::new(x, y))
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic depth map
    Genmap {
        /// Obstacle layout: a single wall, a labyrinth of slats, or an archipelago
        #[arg(long, value_enum)]
        archetype: ArchetypeArg,
        /// Side length of the square map in metres
        #[arg(long)]
        size: f64,
        /// Open-water depth in metres
        #[arg(long, default_value_t = 20.0)]
        deep: f64,
        /// Number of islands (archipelago only)
        #[arg(long, default_value_t = 40)]
        islands: usize,
        /// Number of wall slats (labyrinth only)
        #[arg(long, default_value_t = 4)]
        slats: usize,
        /// Base seed (archipelago only; advanced until the direct corridor is blocked)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output map file
        #[arg(long)]
        out: PathBuf,
    },
    /// Plan a route on a map and write it with a run report
    Plan {
        /// Input map file
        #[arg(long)]
        map: PathBuf,
        /// Run configuration file (flat key = value lines)
        #[arg(long)]
        config: PathBuf,
        /// Start position as `x,y` metres
        #[arg(long, value_parser = parse_point)]
        start: Point,
        /// Destination position as `x,y` metres
        #[arg(long, value_parser = parse_point)]
        dest: Point,
        /// Output route file
        #[arg(long)]
        route_out: PathBuf,
        /// Output run report file
        #[arg(long)]
        report_out: PathBuf,
    },
    /// Run repeated seeded plans and write aggregate statistics as CSV
    Bench {
        /// Input map file
        #[arg(long)]
        map: PathBuf,
        /// Run configuration file; run i uses seed + i
        #[arg(long)]
        config: PathBuf,
        /// Number of seeded repetitions
        #[arg(long)]
        runs: usize,
        /// Start position as `x,y` metres (default: near the south-west corner)
        #[arg(long, value_parser = parse_point)]
        start: Option<Point>,
        /// Destination position as `x,y` metres (default: near the north-east corner)
        #[arg(long, value_parser = parse_point)]
        dest: Option<Point>,
        /// Output CSV file
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a map and a route into an SVG image
    Render {
        /// Input map file
        #[arg(long)]
        map: PathBuf,
        /// Input route file
        #[arg(long)]
        route: PathBuf,
        /// Output SVG file
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Genmap { archetype, size, deep, islands, slats, seed, out } => {
            commands::cmd_genmap(archetype.into(), size, deep, islands, slats, seed, &out)
        }
        Command::Plan { map, config, start, dest, route_out, report_out } => {
            commands::cmd_plan(&map, &config, start, dest, &route_out, &report_out)
        }
        Command::Bench { map, config, runs, start, dest, out } => {
            commands::cmd_bench(&map, &config, runs, start, dest, &out)
        }
        Command::Render { map, route, out } => commands::cmd_render(&map, &route, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("searoute: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
