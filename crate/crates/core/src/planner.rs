//! Measurement schedules derived from the closed-form probability law.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::analytic::{ProbabilityProfile, Regime, SpectralParams};
use crate::error::{Error, Result};
use crate::model::Tolerances;

/// Worst-case cost of the two-time strategy relative to knowing the moments.
pub const TWO_TIME_SLOWDOWN: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Initial means known: measure at the optimal times.
    KnownMoments,
    /// Moments unknown: two runs a quarter period apart.
    TwoTime,
    /// `P(t)` never changes (or is zero), so no schedule helps.
    Hopeless,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::KnownMoments => "KnownMoments",
            Strategy::TwoTime => "TwoTime",
            Strategy::Hopeless => "Hopeless",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementPlan {
    /// `T(j) = [(j+½)π − Re φ]/ω`, starting from the first nonnegative one.
    pub t_real: Vec<f64>,
    /// Better of `⌊T(j)⌋` and `⌈T(j)⌉` under the probability law (ties go low).
    pub t_int: Vec<u64>,
    pub p_at_t_int: Vec<f64>,
    /// Index `j` of `t_real[0]`; nonzero only if early optima fell before `t = 0`.
    pub first_j: u64,
    pub p_max: f64,
    /// `1/P_max`, absent when `P_max` is zero.
    pub expected_repetitions: Option<f64>,
    pub strategy: Strategy,
}

/// Optimal times for the oscillating regimes.
pub fn optimal_measurement_times(
    spectral: &SpectralParams,
    profile: &ProbabilityProfile,
    j_max: u64,
) -> Result<MeasurementPlan> {
    let re_phi = match spectral.phase_offset() {
        Some(re_phi) if spectral.regime.oscillates() => re_phi,
        _ => return Err(Error::RegimeUnsupported(spectral.regime)),
    };
    let omega = spectral.omega;
    let optimum = |j: u64| ((j as f64 + 0.5) * PI - re_phi) / omega;
    // With the principal branch Re φ ≤ π/2, so T(0) ≥ 0; the shift only guards
    // against callers supplying φ from elsewhere.
    let mut first_j = 0;
    while optimum(first_j) < 0.0 {
        first_j += 1;
    }
    let t_real: Vec<f64> = (first_j..=first_j + j_max).map(optimum).collect();
    let (t_int, p_at_t_int) = t_real
        .iter()
        .map(|&t| best_integer_neighbor(spectral, profile, t))
        .unzip();
    Ok(MeasurementPlan {
        t_real,
        t_int,
        p_at_t_int,
        first_j,
        p_max: profile.p_max,
        expected_repetitions: expected_repetitions(profile).ok(),
        strategy: Strategy::KnownMoments,
    })
}

/// Like [`optimal_measurement_times`], but degenerate regimes yield a
/// `Hopeless` plan carrying the constant probability instead of an error.
pub fn measurement_plan(
    spectral: &SpectralParams,
    profile: &ProbabilityProfile,
    j_max: u64,
) -> MeasurementPlan {
    optimal_measurement_times(spectral, profile, j_max).unwrap_or_else(|_| MeasurementPlan {
        t_real: Vec::new(),
        t_int: Vec::new(),
        p_at_t_int: Vec::new(),
        first_j: 0,
        p_max: profile.p_max,
        expected_repetitions: expected_repetitions(profile).ok(),
        strategy: Strategy::Hopeless,
    })
}

fn best_integer_neighbor(
    spectral: &SpectralParams,
    profile: &ProbabilityProfile,
    t: f64,
) -> (u64, f64) {
    let lo = libm::floor(t).max(0.0);
    let hi = libm::ceil(t).max(0.0);
    let (p_lo, p_hi) = (
        profile.evaluate(spectral, lo),
        profile.evaluate(spectral, hi),
    );
    if p_hi > p_lo {
        (hi as u64, p_hi)
    } else {
        (lo as u64, p_lo)
    }
}

/// Two-run schedule for unknown initial moments.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoTimePlan {
    pub t1: u64,
    pub t2: u64,
    /// `round(π/(2ω))`.
    pub spacing: u64,
    pub slowdown_bound: f64,
    pub strategy: Strategy,
    pub known: Option<TwoTimeCheck>,
}

/// Moment-dependent part of a [`TwoTimePlan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTimeCheck {
    pub p_t1: f64,
    pub p_t2: f64,
    /// Slack `ΔP·|sin(ω·(spacing − π/(2ω)))|` from rounding the spacing.
    pub rounding_slack: f64,
    /// `P_av − rounding_slack`, the guaranteed lower bound on `max(P(t1), P(t2))`.
    pub guarantee: f64,
    pub bound_holds: bool,
}

impl TwoTimeCheck {
    pub fn realized(&self) -> f64 {
        self.p_t1.max(self.p_t2)
    }
}

/// Picks `t1 = round(π/(4ω))` and `t2 = t1 + round(π/(2ω))`.
///
/// Since `P(t) = P_av − ΔP cos 2θ`, advancing θ by a quarter turn flips the
/// sign of the cosine, so one of the two probes sits at or above `P_av`. With
/// the spacing rounded to an integer the phase is off by `ω·δ` (`|δ| ≤ ½`),
/// costing at most `ΔP·|sin(ωδ)|`.
pub fn robust_two_time_plan(
    spectral: &SpectralParams,
    profile_known: Option<&ProbabilityProfile>,
) -> TwoTimePlan {
    let quarter = PI / (2.0 * spectral.omega);
    let spacing = libm::round(quarter) as u64;
    let t1 = libm::round(PI / (4.0 * spectral.omega)) as u64;
    let t2 = t1 + spacing;
    let known = profile_known.map(|profile| {
        let p_t1 = profile.evaluate(spectral, t1 as f64);
        let p_t2 = profile.evaluate(spectral, t2 as f64);
        let rounding_slack =
            profile.delta_p * libm::sin(spectral.omega * (spacing as f64 - quarter)).abs();
        let guarantee = profile.p_av - rounding_slack;
        TwoTimeCheck {
            p_t1,
            p_t2,
            rounding_slack,
            guarantee,
            bound_holds: p_t1.max(p_t2) >= guarantee - Tolerances::IDENTITY,
        }
    });
    let hopeless = profile_known.is_some()
        && (matches!(spectral.regime, Regime::Dead)
            || !spectral.regime.oscillates()
            || profile_known.is_some_and(|p| p.p_max < Tolerances::IDENTITY));
    TwoTimePlan {
        t1,
        t2,
        spacing,
        slowdown_bound: TWO_TIME_SLOWDOWN,
        strategy: if hopeless {
            Strategy::Hopeless
        } else {
            Strategy::TwoTime
        },
        known,
    }
}

/// Expected number of full runs until a marked state is seen, `1/P_max`.
pub fn expected_repetitions(profile: &ProbabilityProfile) -> Result<f64> {
    if profile.p_max < Tolerances::IDENTITY {
        return Err(Error::HopelessInstance);
    }
    Ok(1.0 / profile.p_max)
}

/// Upper bound on the expected runs of the two-time strategy: four times the
/// known-moments cost.
pub fn two_time_repetition_bound(profile: &ProbabilityProfile) -> Result<f64> {
    Ok(TWO_TIME_SLOWDOWN * expected_repetitions(profile)?)
}
