use alloc::vec::Vec;
use core::num::NonZeroU32;

use num_complex::Complex64;

use super::kernels::{
    diffusion_wht_in_place, invert_about_average_in_place, marked_probability, oracle_flip_in_place,
};
use crate::error::{Error, Result};
use crate::model::{block_means, norm_sq, SearchInstance, StateVector, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DiffusionMethod {
    /// `a_i ← 2·mean − a_i`, O(N).
    #[default]
    DirectReflection,
    /// Hadamard, phase π on `|0⟩`, Hadamard; O(N log N), needs `N = 2^n`.
    /// Each step carries an extra global factor of −1 relative to the direct path.
    WalshHadamard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub diffusion_method: DiffusionMethod,
    /// Steps between norm audits.
    pub norm_check_every: NonZeroU32,
    /// Largest tolerated `|‖a‖² − ‖a₀‖²|` at an audit.
    pub drift_tolerance: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            diffusion_method: DiffusionMethod::DirectReflection,
            norm_check_every: NonZeroU32::new(64).unwrap(),
            drift_tolerance: Tolerances::NORM,
        }
    }
}

impl SimConfig {
    pub fn with_method(diffusion_method: DiffusionMethod) -> Self {
        Self {
            diffusion_method,
            ..Self::default()
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.diffusion_method == DiffusionMethod::WalshHadamard && !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        Ok(())
    }
}

/// Per-step observables emitted by [`grover_run_traced`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t: u64,
    pub k_bar: Complex64,
    pub l_bar: Complex64,
    pub p: f64,
    /// `‖a(t)‖² − ‖a(0)‖²`, computed every step when tracing.
    pub norm_drift: f64,
}

/// In-place simulator of the literal iteration (oracle flip, then diffusion).
///
/// The buffer is allocated once in [`Simulator::new`]; stepping never allocates.
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    instance: &'a SearchInstance,
    config: SimConfig,
    amps: Vec<Complex64>,
    t: u64,
    initial_norm_sq: f64,
    max_drift: f64,
}

impl<'a> Simulator<'a> {
    pub fn new(
        instance: &'a SearchInstance,
        init: &StateVector,
        config: SimConfig,
    ) -> Result<Self> {
        config.validate(instance.n())?;
        if init.len() != instance.n() {
            return Err(Error::LengthMismatch {
                expected: instance.n(),
                got: init.len(),
            });
        }
        Ok(Self {
            instance,
            config,
            amps: init.amplitudes().to_vec(),
            t: 0,
            initial_norm_sq: init.norm_sq(),
            max_drift: 0.0,
        })
    }

    /// One Grover iteration. Runs the norm audit on its cadence.
    pub fn step(&mut self) -> Result<()> {
        oracle_flip_in_place(&mut self.amps, self.instance)?;
        match self.config.diffusion_method {
            DiffusionMethod::DirectReflection => invert_about_average_in_place(&mut self.amps),
            DiffusionMethod::WalshHadamard => diffusion_wht_in_place(&mut self.amps)?,
        }
        self.t += 1;
        if self.t % u64::from(self.config.norm_check_every.get()) == 0 {
            self.audit()?;
        }
        Ok(())
    }

    pub fn run(&mut self, steps: u64) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    /// Checks the current norm against the initial one; never renormalizes.
    pub fn audit(&mut self) -> Result<f64> {
        let drift = self.norm_drift();
        self.max_drift = self.max_drift.max(drift.abs());
        if drift.abs() > self.config.drift_tolerance {
            return Err(Error::NormDrift {
                step: self.t,
                drift,
                tolerance: self.config.drift_tolerance,
            });
        }
        Ok(drift)
    }

    pub fn norm_drift(&self) -> f64 {
        norm_sq(&self.amps) - self.initial_norm_sq
    }

    /// Largest drift magnitude seen by any audit so far.
    pub fn max_audited_drift(&self) -> f64 {
        self.max_drift
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn marked_probability(&self) -> f64 {
        marked_probability(&self.amps, self.instance)
    }

    /// `(k̄, l̄)` of the current state.
    pub fn means(&self) -> (Complex64, Complex64) {
        block_means(&self.amps, self.instance)
    }

    pub fn trace_row(&self) -> TraceRow {
        let (k_bar, l_bar) = self.means();
        TraceRow {
            t: self.t,
            k_bar,
            l_bar,
            p: self.marked_probability(),
            norm_drift: self.norm_drift(),
        }
    }

    pub fn into_state(self) -> StateVector {
        StateVector::from_raw(self.amps)
    }
}

/// Applies `t` iterations to `init` and returns the final state.
pub fn grover_run(
    instance: &SearchInstance,
    init: &StateVector,
    t: u64,
    config: SimConfig,
) -> Result<StateVector> {
    let mut sim = Simulator::new(instance, init, config)?;
    sim.run(t)?;
    sim.audit()?;
    Ok(sim.into_state())
}

/// Like [`grover_run`], calling `on_step` with the observables at every
/// `t = 0..=t_max`.
pub fn grover_run_traced(
    instance: &SearchInstance,
    init: &StateVector,
    t_max: u64,
    config: SimConfig,
    mut on_step: impl FnMut(TraceRow),
) -> Result<StateVector> {
    let mut sim = Simulator::new(instance, init, config)?;
    on_step(sim.trace_row());
    for _ in 0..t_max {
        sim.step()?;
        on_step(sim.trace_row());
    }
    sim.audit()?;
    Ok(sim.into_state())
}
