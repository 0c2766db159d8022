use num_complex::Complex64;

use super::spectral::{Regime, SpectralParams};
use crate::error::{Error, Result};
use crate::model::{InitialMoments, SearchInstance};

/// The scalar that drives one iteration: `C(t) = (2/N)[(N−r)l̄ − r k̄]`, and
/// the mean `x(t) = C(t)/2` of all amplitudes after the oracle flip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionKernel {
    pub c_t: Complex64,
    pub x_t: Complex64,
}

/// One exact step of the coupled mean recursion `k̄' = C + k̄`, `l̄' = C − l̄`.
pub fn recursion_step_exact(
    k_bar: Complex64,
    l_bar: Complex64,
    instance: &SearchInstance,
) -> (Complex64, Complex64, DiffusionKernel) {
    let n = instance.n() as f64;
    let r = instance.r() as f64;
    let x_t = ((n - r) * l_bar - r * k_bar) / n;
    let c_t = 2.0 * x_t;
    (c_t + k_bar, c_t - l_bar, DiffusionKernel { c_t, x_t })
}

/// Closed-form `(k̄(t), l̄(t))`.
///
/// Oscillating regimes use `k̄ = √((N−r)/r)·α sin(ωt+φ)`, `l̄ = α cos(ωt+φ)`.
/// Circular and dead regimes, where φ is meaningless, invert the rotated
/// phasors directly: `l̄ = (f₊+f₋)/2`, `k̄ = −i√((N−r)/(4r))·(f₊−f₋)`.
pub fn mean_amplitudes(
    spectral: &SpectralParams,
    instance: &SearchInstance,
    t: u64,
) -> (Complex64, Complex64) {
    let scale = libm::sqrt(instance.unmarked_count() as f64 / instance.r() as f64);
    match (spectral.regime, spectral.phi) {
        (Regime::Generic | Regime::LinearReal, Some(phi)) => {
            let arg = phi + spectral.omega * t as f64;
            (
                scale * spectral.alpha * arg.sin(),
                spectral.alpha * arg.cos(),
            )
        }
        _ => means_from_phasors(spectral, scale, t),
    }
}

fn means_from_phasors(spectral: &SpectralParams, scale: f64, t: u64) -> (Complex64, Complex64) {
    let (fp, fm) = spectral.phasors_at(t);
    let k_bar = -Complex64::i() * (0.5 * scale) * (fp - fm);
    let l_bar = 0.5 * (fp + fm);
    (k_bar, l_bar)
}

/// Amplitude of state `index` after `t` iterations given the means at `t`:
/// `k̄(t) + Δk_i` for marked states, `l̄(t) + (−1)^t Δl_i` for unmarked ones.
pub fn reconstruct_amplitude(
    instance: &SearchInstance,
    moments: &InitialMoments,
    k_bar_t: Complex64,
    l_bar_t: Complex64,
    t: u64,
    index: usize,
) -> Result<Complex64> {
    let slot = instance.block_rank(index)?;
    Ok(if instance.is_marked(index) {
        k_bar_t + moments.delta_k[slot]
    } else {
        l_bar_t + alternate(t) * moments.delta_l[slot]
    })
}

/// Writes the full reconstructed state at step `t` into `out`.
pub fn reconstruct_into(
    instance: &SearchInstance,
    moments: &InitialMoments,
    spectral: &SpectralParams,
    t: u64,
    out: &mut [Complex64],
) -> Result<()> {
    if out.len() != instance.n() {
        return Err(Error::LengthMismatch {
            expected: instance.n(),
            got: out.len(),
        });
    }
    let (k_bar, l_bar) = mean_amplitudes(spectral, instance, t);
    let sign = alternate(t);
    let (mut dk, mut dl) = (moments.delta_k.iter(), moments.delta_l.iter());
    for (slot, &marked) in out.iter_mut().zip(instance.marked_mask()) {
        *slot = if marked {
            k_bar + dk.next().expect("one deviation per marked state")
        } else {
            l_bar + sign * dl.next().expect("one deviation per unmarked state")
        };
    }
    Ok(())
}

fn alternate(t: u64) -> f64 {
    if t % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
