//! The five workflows behind the CLI verbs. Each returns a serializable record;
//! writing it out and mapping failures to exit codes is left to the binary.

use std::f64::consts::PI;
use std::time::Instant;

use gal_core::analytic::{
    compute_spectral_with, ellipse_geometry, mean_amplitudes, probability_profile,
    reconstruct_into, success_probability, ProbabilityProfile, SpectralParams,
};
use gal_core::distributions::GENERATOR_NAME;
use gal_core::model::{InitialMoments, StateVector};
use gal_core::planner::{
    measurement_plan, robust_two_time_plan, MeasurementPlan, Strategy, TwoTimePlan,
};
use gal_core::sim::{global_phase_deviation, DiffusionMethod, Simulator};
use gal_core::Complex64;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::format::{Experiment, Method, Row, WireComplex, SCHEMA_VERSION};

/// Trajectory length for regimes where `P(t)` never changes.
pub const FLAT_HORIZON: u64 = 64;
/// Optimal times listed per plan.
pub const PLAN_TIMES: u64 = 4;

/// Initial state plus everything the closed form derives from it.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub init: StateVector,
    pub moments: InitialMoments,
    pub spectral: SpectralParams,
    pub profile: ProbabilityProfile,
}

impl Analysis {
    pub fn of(exp: &Experiment) -> Result<Self> {
        let init = exp.init.generate(&exp.instance)?;
        let moments = InitialMoments::of(&init, &exp.instance)?;
        let spectral = compute_spectral_with(&exp.instance, &moments, &exp.tolerances);
        let profile = probability_profile(&exp.instance, &moments, &spectral);
        Ok(Self {
            init,
            moments,
            spectral,
            profile,
        })
    }

    /// Two periods of `P(t)` when it oscillates, a fixed span otherwise.
    pub fn default_horizon(&self) -> u64 {
        if self.spectral.regime.oscillates() {
            (2.0 * PI / self.spectral.omega).ceil() as u64
        } else {
            FLAT_HORIZON
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanJson {
    pub strategy: &'static str,
    pub t_real: Vec<f64>,
    pub t_int: Vec<u64>,
    pub p_at_t_int: Vec<f64>,
    pub first_j: u64,
    pub p_max: f64,
    pub expected_repetitions: Option<f64>,
}

impl From<&MeasurementPlan> for PlanJson {
    fn from(p: &MeasurementPlan) -> Self {
        Self {
            strategy: p.strategy.name(),
            t_real: p.t_real.clone(),
            t_int: p.t_int.clone(),
            p_at_t_int: p.p_at_t_int.clone(),
            first_j: p.first_j,
            p_max: p.p_max,
            expected_repetitions: p.expected_repetitions,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoTimeJson {
    pub strategy: &'static str,
    pub t1: u64,
    pub t2: u64,
    pub spacing: u64,
    pub slowdown_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_t1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_t2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounding_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guarantee: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_holds: Option<bool>,
}

impl From<&TwoTimePlan> for TwoTimeJson {
    fn from(p: &TwoTimePlan) -> Self {
        Self {
            strategy: p.strategy.name(),
            t1: p.t1,
            t2: p.t2,
            spacing: p.spacing,
            slowdown_bound: p.slowdown_bound,
            p_t1: p.known.map(|k| k.p_t1),
            p_t2: p.known.map(|k| k.p_t2),
            rounding_slack: p.known.map(|k| k.rounding_slack),
            guarantee: p.known.map(|k| k.guarantee),
            bound_holds: p.known.map(|k| k.bound_holds),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EllipseJson {
    pub eta: f64,
    pub a: f64,
    pub b: f64,
    pub k_scale: f64,
    pub k_eta: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Divergence {
    pub max_p: f64,
    pub max_amplitude: f64,
    pub tolerance: f64,
    /// Amplitudes were compared up to a best-fit global phase (WHT path).
    pub global_phase_aligned: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub command: &'static str,
    pub n: usize,
    pub r: usize,
    pub seed: u64,
    pub generator: &'static str,
    pub method: Option<Method>,
    pub t_max: u64,
    pub omega: f64,
    pub regime: &'static str,
    pub k_bar0: WireComplex,
    pub l_bar0: WireComplex,
    pub sigma_k_sq: f64,
    pub sigma_l_sq: f64,
    pub f_plus0: WireComplex,
    pub f_minus0: WireComplex,
    pub alpha: WireComplex,
    pub phi: Option<WireComplex>,
    pub p_av: f64,
    pub delta_p: f64,
    pub p_max: f64,
    pub p_min: f64,
    pub period: f64,
    pub plan: PlanJson,
    pub two_time: TwoTimeJson,
    pub ellipse: Option<EllipseJson>,
    pub divergence: Option<Divergence>,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub summary: Summary,
    pub rows: Vec<Row>,
}

fn summary(
    command: &'static str,
    exp: &Experiment,
    a: &Analysis,
    method: Option<Method>,
    t_max: u64,
) -> Summary {
    let plan = measurement_plan(&a.spectral, &a.profile, PLAN_TIMES - 1);
    let two_time = robust_two_time_plan(&a.spectral, Some(&a.profile));
    let ellipse = ellipse_geometry(&a.spectral, &exp.instance)
        .ok()
        .map(|e| EllipseJson {
            eta: e.eta,
            a: e.a,
            b: e.b,
            k_scale: e.k_scale,
            k_eta: e.k_eta,
        });
    Summary {
        schema_version: SCHEMA_VERSION,
        command,
        n: exp.instance.n(),
        r: exp.instance.r(),
        seed: exp.init.seed,
        generator: GENERATOR_NAME,
        method,
        t_max,
        omega: a.spectral.omega,
        regime: a.spectral.regime.name(),
        k_bar0: a.moments.k_bar0.into(),
        l_bar0: a.moments.l_bar0.into(),
        sigma_k_sq: a.moments.sigma_k_sq,
        sigma_l_sq: a.moments.sigma_l_sq,
        f_plus0: a.spectral.f_plus0.into(),
        f_minus0: a.spectral.f_minus0.into(),
        alpha: a.spectral.alpha.into(),
        phi: a.spectral.phi.map(Into::into),
        p_av: a.profile.p_av,
        delta_p: a.profile.delta_p,
        p_max: a.profile.p_max,
        p_min: a.profile.p_min,
        period: a.profile.period,
        plan: PlanJson::from(&plan),
        two_time: TwoTimeJson::from(&two_time),
        ellipse,
        divergence: None,
        wall_time_s: 0.0,
    }
}

fn analytic_columns(exp: &Experiment, a: &Analysis, t: u64, row: &mut Row) {
    let (k, l) = mean_amplitudes(&a.spectral, &exp.instance, t);
    row.p_analytic = Some(success_probability(
        &exp.instance,
        &a.moments,
        &a.spectral,
        t,
    ));
    row.k_bar_analytic = Some(k.into());
    row.l_bar_analytic = Some(l.into());
}

fn sim_columns(sim: &Simulator<'_>, row: &mut Row) {
    let trace = sim.trace_row();
    row.p_sim = Some(trace.p);
    row.k_bar_sim = Some(trace.k_bar.into());
    row.l_bar_sim = Some(trace.l_bar.into());
    row.norm_drift = Some(trace.norm_drift);
}

/// Closed-form trajectory and summary.
pub fn predict(exp: &Experiment, t_max: Option<u64>) -> Result<RunRecord> {
    let start = Instant::now();
    let a = Analysis::of(exp)?;
    let t_max = t_max.unwrap_or_else(|| a.default_horizon());
    let rows = (0..=t_max)
        .map(|t| {
            let mut row = Row {
                t,
                ..Row::default()
            };
            analytic_columns(exp, &a, t, &mut row);
            row
        })
        .collect();
    let mut summary = summary("predict", exp, &a, None, t_max);
    summary.wall_time_s = start.elapsed().as_secs_f64();
    Ok(RunRecord { summary, rows })
}

/// Brute-force trajectory; `method` overrides the instance file's choice.
pub fn simulate(exp: &Experiment, t_max: Option<u64>, method: Option<Method>) -> Result<RunRecord> {
    let start = Instant::now();
    let a = Analysis::of(exp)?;
    let t_max = t_max.unwrap_or_else(|| a.default_horizon());
    let config = config_for(exp, method);
    let mut sim = Simulator::new(&exp.instance, &a.init, config)?;
    let mut rows = Vec::with_capacity(t_max as usize + 1);
    for t in 0..=t_max {
        if t > 0 {
            sim.step()?;
        }
        let mut row = Row {
            t,
            ..Row::default()
        };
        sim_columns(&sim, &mut row);
        rows.push(row);
    }
    sim.audit()?;
    let mut summary = summary(
        "simulate",
        exp,
        &a,
        Some(method_of(config.diffusion_method)),
        t_max,
    );
    summary.wall_time_s = start.elapsed().as_secs_f64();
    Ok(RunRecord { summary, rows })
}

/// Test hook for `compare`: shifts ω before predicting, to prove the
/// harness notices a wrong closed form.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompareOptions {
    pub tolerance: Option<f64>,
    pub perturb_omega: Option<f64>,
    pub method: Option<Method>,
}

/// Runs both engines side by side. The record is returned even when the
/// engines disagree; the caller decides what to do with `divergence.passed`.
pub fn compare(exp: &Experiment, t_max: Option<u64>, opts: CompareOptions) -> Result<RunRecord> {
    let start = Instant::now();
    let mut a = Analysis::of(exp)?;
    if let Some(delta) = opts.perturb_omega {
        a.spectral.omega += delta;
    }
    let t_max = t_max.unwrap_or_else(|| a.default_horizon());
    let config = config_for(exp, opts.method);
    let aligned = config.diffusion_method == DiffusionMethod::WalshHadamard;
    let tolerance = opts.tolerance.unwrap_or(exp.compare_tolerance);
    let mut sim = Simulator::new(&exp.instance, &a.init, config)?;
    let mut predicted = vec![Complex64::default(); exp.instance.n()];
    let (mut max_p, mut max_amp) = (0.0f64, 0.0f64);
    let mut rows = Vec::with_capacity(t_max as usize + 1);
    for t in 0..=t_max {
        if t > 0 {
            sim.step()?;
        }
        let mut row = Row {
            t,
            ..Row::default()
        };
        analytic_columns(exp, &a, t, &mut row);
        sim_columns(&sim, &mut row);
        max_p = max_p.max((row.p_analytic.unwrap() - row.p_sim.unwrap()).abs());
        reconstruct_into(&exp.instance, &a.moments, &a.spectral, t, &mut predicted)?;
        let dev = if aligned {
            global_phase_deviation(sim.amplitudes(), &predicted).1
        } else {
            predicted
                .iter()
                .zip(sim.amplitudes())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max)
        };
        max_amp = max_amp.max(dev);
        rows.push(row);
    }
    let passed = max_p <= tolerance && max_amp <= tolerance;
    let mut summary = summary(
        "compare",
        exp,
        &a,
        Some(method_of(config.diffusion_method)),
        t_max,
    );
    summary.divergence = Some(Divergence {
        max_p,
        max_amplitude: max_amp,
        tolerance,
        global_phase_aligned: aligned,
        passed,
    });
    summary.wall_time_s = start.elapsed().as_secs_f64();
    Ok(RunRecord { summary, rows })
}

/// `Err(ToleranceExceeded)` when a compare record failed.
pub fn check_divergence(record: &RunRecord) -> Result<()> {
    match record.summary.divergence {
        Some(d) if !d.passed => Err(LabError::ToleranceExceeded(format!(
            "max |ΔP| = {:e}, max |Δa| = {:e}, tolerance {:e}",
            d.max_p, d.max_amplitude, d.tolerance
        ))),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanReport {
    pub schema_version: u32,
    pub n: usize,
    pub r: usize,
    pub omega: f64,
    pub strategy: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub known_moments: Option<PlanJson>,
    pub two_time: TwoTimeJson,
}

/// Measurement schedule. With `two_time_only` nothing depending on the initial
/// moments is computed or reported; only `N` and `r` are used.
pub fn plan(exp: &Experiment, two_time_only: bool) -> Result<PlanReport> {
    let omega = gal_core::analytic::rotation_angle(&exp.instance);
    if two_time_only {
        let spectral = SpectralParams {
            omega,
            f_plus0: Complex64::default(),
            f_minus0: Complex64::default(),
            alpha: Complex64::default(),
            phi: None,
            regime: gal_core::analytic::Regime::Generic,
        };
        let two = robust_two_time_plan(&spectral, None);
        return Ok(PlanReport {
            schema_version: SCHEMA_VERSION,
            n: exp.instance.n(),
            r: exp.instance.r(),
            omega,
            strategy: two.strategy.name(),
            regime: None,
            known_moments: None,
            two_time: TwoTimeJson::from(&two),
        });
    }
    let a = Analysis::of(exp)?;
    let known = measurement_plan(&a.spectral, &a.profile, PLAN_TIMES - 1);
    let two = robust_two_time_plan(&a.spectral, Some(&a.profile));
    Ok(PlanReport {
        schema_version: SCHEMA_VERSION,
        n: exp.instance.n(),
        r: exp.instance.r(),
        omega,
        strategy: known.strategy.name(),
        regime: Some(a.spectral.regime.name()),
        known_moments: Some(PlanJson::from(&known)),
        two_time: TwoTimeJson::from(&two),
    })
}

/// `Err(Hopeless)` when the plan says no schedule helps.
pub fn check_plan(report: &PlanReport) -> Result<()> {
    if report.strategy == Strategy::Hopeless.name() {
        return Err(LabError::Hopeless(format!(
            "success probability is constant ({} regime)",
            report.regime.unwrap_or("unknown")
        )));
    }
    Ok(())
}

fn config_for(exp: &Experiment, method: Option<Method>) -> gal_core::sim::SimConfig {
    let mut config = exp.sim;
    if let Some(m) = method {
        config.diffusion_method = m.into();
    }
    config
}

fn method_of(m: DiffusionMethod) -> Method {
    match m {
        DiffusionMethod::DirectReflection => Method::Direct,
        DiffusionMethod::WalshHadamard => Method::Wht,
    }
}
