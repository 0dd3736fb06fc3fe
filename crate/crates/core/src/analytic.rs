//! Coverage probabilities of a point under a Poisson network.
//!
//! The number of nodes within distance `r` of a fixed point is Poisson with
//! mean `m = λπr²`, so a point is k-covered with probability `P[N >= k]`.
//! Pmf terms come from the recurrence `t_{i+1} = t_i * m / (i + 1)` started
//! at `e^{-m}`, which stays finite for `m` up to about 700.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::serial::format_sig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonCoverageParams {
    pub intensity: f64,
    pub radius: f64,
    mass: f64,
}

impl PoissonCoverageParams {
    pub fn new(intensity: f64, radius: f64) -> Result<Self> {
        if !(intensity > 0.0 && intensity.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "intensity must be positive, got {intensity}"
            )));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "radius must be positive, got {radius}"
            )));
        }
        Ok(Self {
            intensity,
            radius,
            mass: intensity * PI * radius * radius,
        })
    }

    /// `λπr²`, the mean number of disks covering a point.
    pub fn mass(&self) -> f64 {
        self.mass
    }
}

/// Probability that a point is covered by at least `k >= 1` nodes.
pub fn p_k_covered(params: &PoissonCoverageParams, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "k-coverage probability needs k >= 1".into(),
        ));
    }
    Ok(tail_probability(params.mass, k))
}

/// Probability that a point is covered by exactly `k` nodes.
pub fn p_exactly_k(params: &PoissonCoverageParams, k: usize) -> f64 {
    pmf(params.mass, k)
}

/// Expected number of nodes covering a point: `λπr²`.
pub fn mean_k(params: &PoissonCoverageParams) -> f64 {
    params.mass
}

/// Poisson pmf at `k` for mean `m >= 0`.
pub fn pmf(m: f64, k: usize) -> f64 {
    let mut t = (-m).exp();
    for i in 0..k {
        t *= m / (i + 1) as f64;
    }
    t
}

/// `P[N >= k]` for `N ~ Poisson(m)`, `k >= 1`.
///
/// Below the mode the complement of the lower partial sum is accurate; above
/// it the upper tail is summed directly so tiny probabilities keep their
/// relative precision.
pub fn tail_probability(m: f64, k: usize) -> f64 {
    debug_assert!(k >= 1);
    if m <= 0.0 {
        return 0.0;
    }
    if (k as f64) <= m {
        let mut t = (-m).exp();
        let mut lower = 0.0;
        for i in 0..k {
            lower += t;
            t *= m / (i + 1) as f64;
        }
        (1.0 - lower).clamp(0.0, 1.0)
    } else {
        let mut t = pmf(m, k);
        let mut upper = 0.0;
        let mut i = k;
        while t > 0.0 && t > upper * 1e-18 {
            upper += t;
            i += 1;
            t *= m / i as f64;
        }
        upper.clamp(0.0, 1.0)
    }
}

/// `P[N >= k]` for each mass in `m_grid` (rows) and `k = 1..=kmax` (columns).
pub fn curve_table(kmax: usize, m_grid: &[f64]) -> Result<Vec<Vec<f64>>> {
    if kmax < 1 {
        return Err(Error::InvalidArgument("kmax must be at least 1".into()));
    }
    if let Some(bad) = m_grid.iter().find(|m| !(**m >= 0.0 && m.is_finite())) {
        return Err(Error::InvalidArgument(format!(
            "masses must be finite and >= 0, got {bad}"
        )));
    }
    Ok(m_grid
        .iter()
        .map(|&m| (1..=kmax).map(|k| tail_probability(m, k)).collect())
        .collect())
}

/// Evenly spaced masses `0, step, 2 step, ..` up to `m_max` inclusive.
pub fn mass_grid(m_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) || !(m_max >= 0.0 && m_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "invalid mass grid: max {m_max}, step {step}"
        )));
    }
    let n = (m_max / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| round12(i as f64 * step)).collect())
}

/// Rounds away float noise from grid arithmetic (`3 * 0.1` -> `0.3`).
pub(crate) fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// CSV with header `m,k1,..,kmax` and 12 significant digits.
pub fn curve_csv(kmax: usize, m_grid: &[f64]) -> Result<String> {
    let table = curve_table(kmax, m_grid)?;
    let mut out = String::from("m");
    for k in 1..=kmax {
        out.push_str(&format!(",k{k}"));
    }
    out.push('\n');
    for (m, row) in m_grid.iter().zip(&table) {
        out.push_str(&format_sig(*m, 12));
        for p in row {
            out.push(',');
            out.push_str(&format_sig(*p, 12));
        }
        out.push('\n');
    }
    Ok(out)
}
