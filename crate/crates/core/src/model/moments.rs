use alloc::vec::Vec;

use num_complex::Complex64;

use super::{SearchInstance, StateVector};
use crate::error::{Error, Result};

/// Block means, variances and per-state deviations of an initial state.
///
/// The deviations `Δk_i = k_i(0) − k̄(0)` and `Δl_i = l_i(0) − l̄(0)` are
/// constants of motion of the iteration (the unmarked ones up to a sign that
/// alternates every step), so together with the means they determine the whole
/// trajectory. Both arrays are in ascending state-index order within their block.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialMoments {
    pub k_bar0: Complex64,
    pub l_bar0: Complex64,
    pub sigma_k_sq: f64,
    pub sigma_l_sq: f64,
    pub delta_k: Vec<Complex64>,
    pub delta_l: Vec<Complex64>,
}

impl InitialMoments {
    pub fn of(vector: &StateVector, instance: &SearchInstance) -> Result<Self> {
        moments_of(vector.amplitudes(), instance)
    }

    /// Probability of measuring a marked state before any iteration.
    pub fn marked_probability(&self) -> f64 {
        let r = self.delta_k.len() as f64;
        r * (self.sigma_k_sq + self.k_bar0.norm_sqr())
    }

    /// `r(σ_k² + |k̄|²) + (N−r)(σ_l² + |l̄|²)`, which equals the squared norm.
    pub fn norm_decomposition(&self) -> f64 {
        let r = self.delta_k.len() as f64;
        let u = self.delta_l.len() as f64;
        r * (self.sigma_k_sq + self.k_bar0.norm_sqr())
            + u * (self.sigma_l_sq + self.l_bar0.norm_sqr())
    }
}

/// Extracts moments from raw amplitudes (no normalization requirement).
pub fn moments_of(amps: &[Complex64], instance: &SearchInstance) -> Result<InitialMoments> {
    if amps.len() != instance.n() {
        return Err(Error::LengthMismatch {
            expected: instance.n(),
            got: amps.len(),
        });
    }
    let mask = instance.marked_mask();
    let (mut k_sum, mut l_sum) = (Complex64::default(), Complex64::default());
    for (a, &m) in amps.iter().zip(mask) {
        if m {
            k_sum += a;
        } else {
            l_sum += a;
        }
    }
    let k_bar0 = k_sum / instance.r() as f64;
    let l_bar0 = l_sum / instance.unmarked_count() as f64;

    let mut delta_k = Vec::with_capacity(instance.r());
    let mut delta_l = Vec::with_capacity(instance.unmarked_count());
    for (a, &m) in amps.iter().zip(mask) {
        if m {
            delta_k.push(a - k_bar0);
        } else {
            delta_l.push(a - l_bar0);
        }
    }
    let sigma_k_sq = mean_norm_sqr(&delta_k);
    let sigma_l_sq = mean_norm_sqr(&delta_l);
    Ok(InitialMoments {
        k_bar0,
        l_bar0,
        sigma_k_sq,
        sigma_l_sq,
        delta_k,
        delta_l,
    })
}

/// `(k̄, l̄)` of raw amplitudes without building the deviation arrays.
pub fn block_means(amps: &[Complex64], instance: &SearchInstance) -> (Complex64, Complex64) {
    let (mut k_sum, mut l_sum) = (Complex64::default(), Complex64::default());
    for (a, &m) in amps.iter().zip(instance.marked_mask()) {
        if m {
            k_sum += a;
        } else {
            l_sum += a;
        }
    }
    (
        k_sum / instance.r() as f64,
        l_sum / instance.unmarked_count() as f64,
    )
}

fn mean_norm_sqr(values: &[Complex64]) -> f64 {
    values.iter().map(Complex64::norm_sqr).sum::<f64>() / values.len() as f64
}
