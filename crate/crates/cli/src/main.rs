//! `flatcone`: inspect, transform and check flat cone surfaces stored as
//! JSON surface files.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "flatcone", version, about = "Flat cone surfaces: charts, flips and volumes")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone)]
pub struct Output {
    /// Write the resulting surface or data to this path.
    #[arg(short = 'o')]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Verb {
    /// Parse and validate a surface file.
    Validate { surface: PathBuf },
    /// Counts, angles and chart dimensions.
    Info { surface: PathBuf },
    /// Flip one edge.
    Flip {
        surface: PathBuf,
        #[arg(long)]
        edge: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Flip to a Delaunay triangulation.
    Delaunay {
        surface: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Flip until a segment becomes an edge.
    Insert {
        surface: PathBuf,
        #[arg(long)]
        corner: usize,
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        vec: (f64, f64),
        #[command(flatten)]
        output: Output,
    },
    /// Flip sequence between two triangulations of one surface.
    FlipPath {
        source: PathBuf,
        target: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Cut along the forest and list the slit pairs.
    Cut { surface: PathBuf },
    /// Assemble the chart system; `-o` writes it as JSON.
    Chart {
        surface: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Volume density of the canonical kernel frame.
    Density { surface: PathBuf },
    /// Density ratios along random flips.
    CheckFlipInvariance {
        surface: PathBuf,
        #[arg(long, default_value_t = 5)]
        moves: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Density ratio between the surface's forest and another tree
    /// (every single-edge exchange when `--tree` is absent).
    CheckTreeInvariance {
        surface: PathBuf,
        #[arg(long, value_parser = parse_tree)]
        tree: Option<Vec<usize>>,
    },
    /// Constancy of the period comparison factor on nearby charts.
    ComparePeriod {
        surface: PathBuf,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Ratio of the chart volume to the complex hyperbolic volume.
    HypCompare {
        surface: PathBuf,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write a standard surface.
    Make {
        #[command(subcommand)]
        kind: Shape,
    },
}

#[derive(Subcommand, Clone)]
pub enum Shape {
    Torus {
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        u: (f64, f64),
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        v: (f64, f64),
        #[command(flatten)]
        output: Output,
    },
    /// Two copies of a regular polygon glued along the boundary.
    Polygon {
        #[arg(long)]
        sides: usize,
        #[command(flatten)]
        output: Output,
    },
    Pillowcase {
        #[command(flatten)]
        output: Output,
    },
    /// Regular 4g-gon with opposite sides identified.
    Gon {
        #[arg(long)]
        genus: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn parse_vec(s: &str) -> Result<(f64, f64), String> {
    let (re, im) = s.split_once(',').ok_or("expected <re>,<im>")?;
    let re = re.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let im = im.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((re, im))
}

fn parse_tree(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<usize>().map_err(|e| e.to_string()))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.verb) {
        Ok(report) => {
            print!("{}", report.render());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            print!("{}", failure.render());
            ExitCode::from(failure.exit_code())
        }
    }
}
