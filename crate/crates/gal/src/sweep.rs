//! Noise-robustness sweep: for each noise level, many seeded noisy-uniform
//! starts, predicted `P_max` against the simulated peak.

use std::f64::consts::PI;
use std::io::Write;

use gal_core::analytic::{compute_spectral, probability_profile, rotation_angle};
use gal_core::distributions::{DistributionKind, DistributionSpec};
use gal_core::model::{InitialMoments, SearchInstance};
use gal_core::sim::{SimConfig, Simulator};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::format::{fmt_float, SweepFile};

/// Added to the 3σ band so that noiseless levels, where both spreads are
/// exactly zero, compare at round-off rather than bit-for-bit.
pub const AGREEMENT_FLOOR: f64 = 1e-9;

pub const SWEEP_HEADER: [&str; 12] = [
    "noise_sigma",
    "seeds",
    "sigma_l_sq_mean",
    "sigma_l_sq_std",
    "p_max_pred_mean",
    "p_max_pred_std",
    "p_best_sim_mean",
    "p_best_sim_std",
    "p_int_sim_mean",
    "p_int_sim_std",
    "t_star_mean",
    "t_star_std",
];

/// One seeded run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub noise_sigma: f64,
    pub seed: u64,
    pub sigma_l_sq: f64,
    pub p_max_pred: f64,
    /// Peak of the sinusoid fitted to the simulated `P(t)`.
    pub p_best_sim: f64,
    /// Largest simulated `P(t)` at an integer step.
    pub p_int_sim: f64,
    pub t_star: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    /// Mean and sample standard deviation (zero for a single value).
    pub fn of(xs: impl Iterator<Item = f64> + Clone) -> Self {
        let n = xs.clone().count() as f64;
        let mean = xs.clone().sum::<f64>() / n;
        let ss: f64 = xs.map(|x| (x - mean) * (x - mean)).sum();
        let std = if n > 1.0 {
            (ss / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }

    pub fn standard_error(&self, count: u64) -> f64 {
        self.std / (count as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelSummary {
    pub noise_sigma: f64,
    pub seeds: u64,
    pub sigma_l_sq: Stat,
    pub p_max_pred: Stat,
    pub p_best_sim: Stat,
    pub p_int_sim: Stat,
    pub t_star: Stat,
    pub within_3se: bool,
}

impl LevelSummary {
    fn of(noise_sigma: f64, cells: &[Cell]) -> Self {
        let seeds = cells.len() as u64;
        let stat = |f: fn(&Cell) -> f64| Stat::of(cells.iter().map(f));
        let p_max_pred = stat(|c| c.p_max_pred);
        let p_best_sim = stat(|c| c.p_best_sim);
        let band = 3.0
            * p_max_pred
                .standard_error(seeds)
                .hypot(p_best_sim.standard_error(seeds))
            + AGREEMENT_FLOOR;
        Self {
            noise_sigma,
            seeds,
            sigma_l_sq: stat(|c| c.sigma_l_sq),
            p_max_pred,
            p_best_sim,
            p_int_sim: stat(|c| c.p_int_sim),
            t_star: stat(|c| c.t_star as f64),
            within_3se: (p_best_sim.mean - p_max_pred.mean).abs() <= band,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub n: usize,
    pub r: usize,
    pub base_seed: u64,
    pub levels: Vec<LevelSummary>,
    pub cells: Vec<Cell>,
}

impl SweepReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{},within_3se", SWEEP_HEADER.join(","))?;
        for l in &self.levels {
            let stats = [
                l.sigma_l_sq,
                l.p_max_pred,
                l.p_best_sim,
                l.p_int_sim,
                l.t_star,
            ];
            let mut fields = vec![fmt_float(l.noise_sigma), l.seeds.to_string()];
            for s in stats {
                fields.push(fmt_float(s.mean));
                fields.push(fmt_float(s.std));
            }
            fields.push(l.within_3se.to_string());
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

/// Least-squares fit of `A + B cos 2ωt + C sin 2ωt` to `p[t]`, returning the
/// fitted peak `A + √(B² + C²)`. `None` when the design matrix is singular,
/// which happens for `ω = π/2` or fewer than three samples.
pub fn fitted_peak(omega: f64, p: &[f64]) -> Option<f64> {
    let mut m = [[0.0f64; 3]; 3];
    let mut v = [0.0f64; 3];
    for (t, &y) in p.iter().enumerate() {
        let (s, c) = (2.0 * omega * t as f64).sin_cos();
        let basis = [1.0, c, s];
        for i in 0..3 {
            v[i] += basis[i] * y;
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
        }
    }
    let det = det3(&m);
    let scale = (p.len() as f64).powi(3);
    if det.abs() <= 1e-9 * scale {
        return None;
    }
    let solve = |col: usize| {
        let mut mc = m;
        for i in 0..3 {
            mc[i][col] = v[i];
        }
        det3(&mc) / det
    };
    let (a, b, c) = (solve(0), solve(1), solve(2));
    Some(a + b.hypot(c))
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Simulates one noisy start over `t ∈ [0, ⌈π/ω⌉]`, at least one full period of `P(t)`.
pub fn run_cell(instance: &SearchInstance, noise_sigma: f64, seed: u64) -> Result<Cell> {
    let spec = DistributionSpec::new(DistributionKind::NoisyUniform { noise_sigma }, seed);
    let init = spec.generate(instance)?;
    let moments = InitialMoments::of(&init, instance)?;
    let spectral = compute_spectral(instance, &moments);
    let profile = probability_profile(instance, &moments, &spectral);
    let horizon = (PI / spectral.omega).ceil() as u64;
    let mut sim = Simulator::new(instance, &init, SimConfig::default())?;
    let mut p = Vec::with_capacity(horizon as usize + 1);
    p.push(sim.marked_probability());
    for _ in 0..horizon {
        sim.step()?;
        p.push(sim.marked_probability());
    }
    sim.audit()?;
    let (t_star, p_int) =
        p.iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (t, x)| {
                if x > best.1 {
                    (t, x)
                } else {
                    best
                }
            });
    Ok(Cell {
        noise_sigma,
        seed,
        sigma_l_sq: moments.sigma_l_sq,
        p_max_pred: profile.p_max,
        p_best_sim: fitted_peak(spectral.omega, &p).unwrap_or(p_int),
        p_int_sim: p_int,
        t_star: t_star as u64,
    })
}

fn validate(file: &SweepFile) -> Result<()> {
    if file.noise_levels.is_empty() {
        return Err(LabError::validation("noise_levels", "must not be empty"));
    }
    if let Some(bad) = file
        .noise_levels
        .iter()
        .find(|s| !(s.is_finite() && **s >= 0.0))
    {
        return Err(LabError::validation(
            "noise_levels",
            format!("entries must be finite and non-negative, got {bad}"),
        ));
    }
    if file.seeds_per_level == 0 {
        return Err(LabError::validation(
            "seeds_per_level",
            "must be at least 1",
        ));
    }
    Ok(())
}

/// Runs every (level, seed) cell on a pool of `jobs` threads (`None` lets rayon
/// choose). Seed `s` of every level is `base_seed + s`. Results do not depend on
/// `jobs`: cells are collected in order and aggregated sequentially.
pub fn sweep(file: &SweepFile, jobs: Option<usize>) -> Result<SweepReport> {
    validate(file)?;
    let instance = file.instance()?;
    log::info!(
        "sweep N={} r={} ω={:.6}: {} levels × {} seeds",
        instance.n(),
        instance.r(),
        rotation_angle(&instance),
        file.noise_levels.len(),
        file.seeds_per_level
    );
    let tasks: Vec<(f64, u64)> = file
        .noise_levels
        .iter()
        .flat_map(|&s| (0..file.seeds_per_level).map(move |k| (s, file.base_seed.wrapping_add(k))))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| LabError::validation("jobs", e))?;
    let cells = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(sigma, seed)| run_cell(&instance, sigma, seed))
            .collect::<Result<Vec<_>>>()
    })?;
    let levels = cells
        .chunks(file.seeds_per_level as usize)
        .zip(&file.noise_levels)
        .map(|(chunk, &sigma)| LevelSummary::of(sigma, chunk))
        .collect();
    Ok(SweepReport {
        n: instance.n(),
        r: instance.r(),
        base_seed: file.base_seed,
        levels,
        cells,
    })
}
