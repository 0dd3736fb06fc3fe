//! `kcoverage` command-line front end. Results go to stdout as JSON or CSV,
//! diagnostics to stderr.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 certification failure.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use kcoverage::analytic::{curve_csv, mass_grid};
use kcoverage::geometry::sample_fixed_count;
use kcoverage::kcover::default_grid_spacing;
use kcoverage::montecarlo::{lambda_grid, rows_to_csv, rows_to_json};
use kcoverage::{
    betti, build_cech, build_rips, certify, k_coverage, make_fence, run_experiment,
    sample_hardcore, sample_poisson, CoverageCertificate, Error, ExperimentConfig, Flavor,
    KCoverResult, NodeSet, PoissonConfig,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "kcoverage",
    version,
    about = "k-coverage of planar wireless networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a node set and print it as JSON.
    #[command(group(ArgGroup::new("mode").required(true).args(["lambda", "count"])))]
    Generate {
        /// Poisson intensity (nodes per unit area).
        #[arg(long)]
        lambda: Option<f64>,
        /// Fixed number of nodes.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 10.0)]
        side: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Hard-core exclusion distance (Matérn II with --lambda, rejection with --count).
        #[arg(long)]
        hardcore: Option<f64>,
        /// Add fence nodes along the boundary at this spacing.
        #[arg(long)]
        fence_spacing: Option<f64>,
        #[arg(long, default_value_t = 2.5)]
        radius: f64,
    },
    /// Betti numbers of the complex built on a node set.
    Betti {
        /// Node set JSON; standard input when omitted or "-".
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "rips")]
        flavor: Flavor,
        /// Override the node set's coverage radius.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Peel 1-coverage layers and report k.
    Kcover {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "rips")]
        flavor: Flavor,
        #[arg(long)]
        radius: Option<f64>,
        /// Replace the node set's fence with one at this spacing.
        #[arg(long)]
        fence_spacing: Option<f64>,
        /// Check every layer against a sampling grid; exit 3 on failure.
        #[arg(long)]
        certify: bool,
        /// Certification grid spacing (default radius / 25).
        #[arg(long)]
        grid_spacing: Option<f64>,
    },
    /// Probability that a point is k-covered, as CSV over a grid of λπr².
    Curves {
        #[arg(long, default_value_t = 6)]
        kmax: usize,
        #[arg(long, default_value_t = 10.0)]
        m_max: f64,
        #[arg(long, default_value_t = 0.1)]
        m_step: f64,
    },
    /// Mean k over repeated Poisson draws, as CSV.
    Table {
        /// Intensities as start:stop:step.
        #[arg(long, default_value = "0.05:0.35:0.05")]
        lambdas: String,
        #[arg(long, default_value_t = 200)]
        runs: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Comma-separated subset of rips,cech.
        #[arg(long, default_value = "rips,cech")]
        flavors: String,
        #[arg(long)]
        certify: bool,
        #[arg(long)]
        fence_spacing: Option<f64>,
        /// Emit JSON rows with per-run k histograms instead of CSV.
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Certification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CertificationFailed {
                ref nodeset_json, ..
            } => Failure::Certification(format!("{e}\noffending node set:\n{nodeset_json}")),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

fn load(path: Option<&PathBuf>, radius: Option<f64>) -> Result<NodeSet, Failure> {
    let ns = NodeSet::from_json(&read_input(path)?)?;
    Ok(match radius {
        Some(r) => ns.with_radius(r)?,
        None => ns,
    })
}

fn parse_range(range: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = range.split(':').collect();
    let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
    match nums.as_deref() {
        Ok([single]) => Ok(vec![*single]),
        Ok([start, stop, step]) => Ok(lambda_grid(*start, *stop, *step)?),
        _ => Err(Failure::Usage(format!(
            "expected start:stop:step, got '{range}'"
        ))),
    }
}

#[derive(Serialize)]
struct BettiReport {
    flavor: Flavor,
    beta0: usize,
    beta1: usize,
    vertices: usize,
    edges: usize,
    triangles: usize,
}

#[derive(Serialize)]
struct KCoverReport<'a> {
    #[serde(flatten)]
    result: &'a KCoverResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<&'a CoverageCertificate>,
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Generate {
            lambda,
            count,
            side,
            seed,
            hardcore,
            fence_spacing,
            radius,
        } => {
            let pattern = match (lambda, count) {
                (Some(l), None) => {
                    let cfg = PoissonConfig {
                        hardcore_distance: hardcore.unwrap_or(0.0),
                        ..PoissonConfig::new(l, side, seed)
                    };
                    if hardcore.is_some() {
                        sample_hardcore(&cfg)?
                    } else {
                        sample_poisson(&cfg)?
                    }
                }
                (None, Some(n)) => sample_fixed_count(n, side, seed, hardcore)?,
                _ => unreachable!("clap enforces exactly one of --lambda / --count"),
            };
            let fence = match fence_spacing {
                Some(s) => make_fence(side, s)?,
                None => Vec::new(),
            };
            Ok(NodeSet::from_pattern(&pattern, &fence, radius)?.to_json())
        }
        Command::Betti {
            input,
            flavor,
            radius,
        } => {
            let ns = load(input.as_ref(), radius)?;
            let s = match flavor {
                Flavor::Rips => build_rips(&ns, 2.0 * ns.radius())?,
                Flavor::Cech => build_cech(&ns, ns.radius())?,
            };
            let b = betti(&s);
            let report = BettiReport {
                flavor,
                beta0: b.beta0,
                beta1: b.beta1,
                vertices: s.vertices().len(),
                edges: s.edges().len(),
                triangles: s.triangles().len(),
            };
            Ok(serde_json::to_string(&report).expect("report serializes"))
        }
        Command::Kcover {
            input,
            flavor,
            radius,
            fence_spacing,
            certify: want_certificate,
            grid_spacing,
        } => {
            let mut ns = load(input.as_ref(), radius)?;
            if let Some(s) = fence_spacing {
                ns = ns.with_fence(&make_fence(ns.domain_side(), s)?)?;
            }
            let result = k_coverage(&ns, flavor)?;
            let certificate = if want_certificate {
                let spacing = grid_spacing.unwrap_or_else(|| default_grid_spacing(ns.radius()));
                Some(certify(&ns, &result, spacing)?)
            } else {
                None
            };
            let text = serde_json::to_string(&KCoverReport {
                result: &result,
                certificate: certificate.as_ref(),
            })
            .expect("report serializes");
            match certificate {
                Some(c) if !c.passes(result.k) => {
                    println!("{text}");
                    Err(Failure::Certification(format!(
                        "certification failed: layers ok = {:?}, min multiplicity {} for k = {}",
                        c.per_layer_ok, c.min_multiplicity, result.k
                    )))
                }
                _ => Ok(text),
            }
        }
        Command::Curves {
            kmax,
            m_max,
            m_step,
        } => {
            let grid = mass_grid(m_max, m_step)?;
            Ok(curve_csv(kmax, &grid)?.trim_end().to_string())
        }
        Command::Table {
            lambdas,
            runs,
            seed,
            flavors,
            certify,
            fence_spacing,
            json,
        } => {
            let mut cfg = ExperimentConfig::table_one(runs, seed);
            cfg.lambdas = parse_range(&lambdas)?;
            cfg.flavors = flavors
                .split(',')
                .map(|f| f.trim().parse::<Flavor>())
                .collect::<Result<_, _>>()?;
            cfg.certify = certify;
            if let Some(s) = fence_spacing {
                cfg.fence_spacing = s;
            }
            eprintln!(
                "running {} intensities x {} runs x {} flavors",
                cfg.lambdas.len(),
                cfg.runs,
                cfg.flavors.len()
            );
            let rows = run_experiment(&cfg)?;
            Ok(if json {
                rows_to_json(&rows)
            } else {
                rows_to_csv(&rows).trim_end().to_string()
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Certification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}
