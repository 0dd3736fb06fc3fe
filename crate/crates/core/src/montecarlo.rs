//! Batch k-coverage experiments over Poisson networks.
//!
//! Run `i` at intensity index `j` draws its nodes with seed
//! `run_seed(base_seed, j, i)`; every flavor sees the same draw.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{round12, PoissonCoverageParams};
use crate::complex::Flavor;
use crate::error::{Error, Result};
use crate::geometry::{make_fence, sample_poisson, NodeSet, PoissonConfig};
use crate::kcover::{certify, default_grid_spacing, k_coverage};
use crate::serial::{format_sig, F17};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub lambdas: Vec<f64>,
    pub runs: usize,
    pub base_seed: u64,
    pub domain_side: f64,
    pub radius: f64,
    pub flavors: Vec<Flavor>,
    pub fence_spacing: f64,
    pub grid_spacing: f64,
    pub certify: bool,
}

impl ExperimentConfig {
    /// Side 10, radius 2.5, fence every 2.5, both flavors, λ = 0.05..0.35.
    pub fn table_one(runs: usize, base_seed: u64) -> Self {
        let radius = 2.5;
        Self {
            lambdas: lambda_grid(0.05, 0.35, 0.05).expect("static grid"),
            runs,
            base_seed,
            domain_side: 10.0,
            radius,
            flavors: Flavor::ALL.to_vec(),
            fence_spacing: radius,
            grid_spacing: default_grid_spacing(radius),
            certify: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidArgument("runs must be at least 1".into()));
        }
        if self.lambdas.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one intensity is required".into(),
            ));
        }
        if self.flavors.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one flavor is required".into(),
            ));
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "intensities must be positive, got {l}"
            )));
        }
        if self.grid_spacing.is_nan() || self.grid_spacing <= 0.0 {
            return Err(Error::InvalidArgument(
                "grid spacing must be positive".into(),
            ));
        }
        PoissonCoverageParams::new(self.lambdas[0], self.radius)?;
        make_fence(self.domain_side, self.fence_spacing)?;
        Ok(())
    }
}

/// `start, start + step, ..` up to `stop` inclusive, rounded to 12 decimals.
pub fn lambda_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step > 0.0 && step.is_finite()) || stop < start {
        return Err(Error::InvalidArgument(format!(
            "invalid range {start}:{stop}:{step}"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| round12(start + i as f64 * step)).collect())
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run` at intensity index `lambda_index`:
/// `mix(mix(mix(base) ^ lambda_index) ^ run)` with the SplitMix64 finalizer.
pub fn run_seed(base_seed: u64, lambda_index: usize, run: usize) -> u64 {
    mix64(mix64(mix64(base_seed) ^ lambda_index as u64) ^ run as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub lambda: F17,
    pub m: F17,
    pub flavor: Flavor,
    pub mean_k: F17,
    pub stderr: F17,
    pub runs_completed: usize,
    pub mean_residual_beta1: F17,
    /// `k_histogram[k]` = number of runs that returned `k`.
    pub k_histogram: Vec<usize>,
}

impl ExperimentRow {
    pub fn lambda(&self) -> f64 {
        self.lambda.0
    }

    pub fn m(&self) -> f64 {
        self.m.0
    }

    pub fn mean_k(&self) -> f64 {
        self.mean_k.0
    }

    pub fn stderr(&self) -> f64 {
        self.stderr.0
    }
}

struct RunOutcome {
    k: usize,
    residual_beta1: usize,
}

fn single_run(
    cfg: &ExperimentConfig,
    fence: &[crate::Point2],
    lambda_index: usize,
    run: usize,
) -> Result<Vec<RunOutcome>> {
    let seed = run_seed(cfg.base_seed, lambda_index, run);
    let pattern = sample_poisson(&PoissonConfig::new(
        cfg.lambdas[lambda_index],
        cfg.domain_side,
        seed,
    ))?;
    let ns = NodeSet::from_pattern(&pattern, fence, cfg.radius)?;
    cfg.flavors
        .iter()
        .map(|&flavor| {
            let result = k_coverage(&ns, flavor)?;
            if cfg.certify {
                let cert = certify(&ns, &result, cfg.grid_spacing)?;
                if !cert.passes(result.k) {
                    return Err(Error::CertificationFailed {
                        seed: Some(seed),
                        failures: cert.failures.len(),
                        nodeset_json: ns.to_json(),
                    });
                }
            }
            Ok(RunOutcome {
                k: result.k,
                residual_beta1: result.residual_betti.beta1,
            })
        })
        .collect()
}

/// Runs every (λ, run) pair in parallel and aggregates per (λ, flavor).
/// Rows come out ordered by λ, then by the configured flavor order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    let fence = make_fence(cfg.domain_side, cfg.fence_spacing)?;
    let pairs: Vec<(usize, usize)> = (0..cfg.lambdas.len())
        .flat_map(|j| (0..cfg.runs).map(move |i| (j, i)))
        .collect();
    let outcomes: Vec<Vec<RunOutcome>> = pairs
        .par_iter()
        .map(|&(j, i)| single_run(cfg, &fence, j, i))
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (j, &lambda) in cfg.lambdas.iter().enumerate() {
        let batch = &outcomes[j * cfg.runs..(j + 1) * cfg.runs];
        let m = PoissonCoverageParams::new(lambda, cfg.radius)?.mass();
        for (f, &flavor) in cfg.flavors.iter().enumerate() {
            let ks: Vec<f64> = batch.iter().map(|o| o[f].k as f64).collect();
            let n = ks.len() as f64;
            let mean = ks.iter().sum::<f64>() / n;
            let stderr = if ks.len() > 1 {
                let var = ks.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / (n - 1.0);
                (var / n).sqrt()
            } else {
                0.0
            };
            let mean_residual_beta1 = batch
                .iter()
                .map(|o| o[f].residual_beta1 as f64)
                .sum::<f64>()
                / n;
            let kmax = batch.iter().map(|o| o[f].k).max().unwrap_or(0);
            let mut hist = vec![0; kmax + 1];
            for o in batch {
                hist[o[f].k] += 1;
            }
            rows.push(ExperimentRow {
                lambda: F17(lambda),
                m: F17(m),
                flavor,
                mean_k: F17(mean),
                stderr: F17(stderr),
                runs_completed: batch.len(),
                mean_residual_beta1: F17(mean_residual_beta1),
                k_histogram: hist,
            });
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "lambda,m,flavor,runs,mean_k,stderr,mean_residual_beta1,theory_mean";

pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            format_sig(r.lambda(), 12),
            format_sig(r.m(), 12),
            r.flavor.to_string(),
            r.runs_completed.to_string(),
            format_sig(r.mean_k(), 12),
            format_sig(r.stderr(), 12),
            format_sig(r.mean_residual_beta1.0, 12),
            format_sig(r.m(), 12),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn rows_to_json(rows: &[ExperimentRow]) -> String {
    serde_json::to_string(rows).expect("rows serialize")
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryComparison {
    pub lambda: f64,
    pub flavor: Flavor,
    pub mean_k: f64,
    pub stderr: f64,
    /// `E[k] = λπr²` for a single point.
    pub theory_mean: f64,
    pub gap: f64,
}

impl TheoryComparison {
    /// The single-point mean bounds the area-wide k from above; only rows
    /// with `m >= 1` are held to it.
    pub fn respects_upper_bound(&self) -> bool {
        self.theory_mean < 1.0 || self.gap > 0.0
    }
}

pub fn compare_to_theory(rows: &[ExperimentRow]) -> Result<Vec<TheoryComparison>> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument(
            "no experiment rows to compare".into(),
        ));
    }
    Ok(rows
        .iter()
        .map(|r| TheoryComparison {
            lambda: r.lambda(),
            flavor: r.flavor,
            mean_k: r.mean_k(),
            stderr: r.stderr(),
            theory_mean: r.m(),
            gap: r.m() - r.mean_k(),
        })
        .collect())
}
