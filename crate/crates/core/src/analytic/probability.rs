use num_complex::Complex64;

use super::spectral::SpectralParams;
use crate::model::{InitialMoments, SearchInstance};

/// Shape of the success probability `P(t) = P_av − ΔP·cos 2(ωt + Re φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityProfile {
    pub p_av: f64,
    pub delta_p: f64,
    pub p_max: f64,
    pub p_min: f64,
    /// Period of `P(t)` in iterations, `π/ω`.
    pub period: f64,
}

/// Computes `P_av`, `ΔP` and the derived extremes.
///
/// `ΔP = ½|(N−r)l̄(0)² + r k̄(0)²|` uses complex squares, not squared moduli;
/// it equals `(N−r)/2·|f₊(0) f₋(0)|`. `P_av` is evaluated as
/// `rσ_k² + ½[(N−r)|l̄(0)|² + r|k̄(0)|²]`, which equals
/// `1 − (N−r)σ_l² − ½[(N−r)|l̄(0)|² + r|k̄(0)|²]` for a normalized state but
/// does not lean on the norm being exactly one.
pub fn probability_profile(
    instance: &SearchInstance,
    moments: &InitialMoments,
    spectral: &SpectralParams,
) -> ProbabilityProfile {
    let r = instance.r() as f64;
    let u = instance.unmarked_count() as f64;
    let (k, l) = (moments.k_bar0, moments.l_bar0);
    let p_av = r * moments.sigma_k_sq + 0.5 * (u * l.norm_sqr() + r * k.norm_sqr());
    let delta_p = 0.5 * (u * l * l + r * k * k).norm();
    ProbabilityProfile {
        p_av,
        delta_p,
        p_max: p_av + delta_p,
        p_min: p_av - delta_p,
        period: spectral.probability_period(),
    }
}

/// The normalization-based form of `P_av`, kept for cross-checking.
pub fn p_av_from_normalization(instance: &SearchInstance, moments: &InitialMoments) -> f64 {
    let r = instance.r() as f64;
    let u = instance.unmarked_count() as f64;
    1.0 - u * moments.sigma_l_sq
        - 0.5 * (u * moments.l_bar0.norm_sqr() + r * moments.k_bar0.norm_sqr())
}

impl ProbabilityProfile {
    /// `P` at real-valued `t`. Only meaningful when φ is defined; otherwise the
    /// probability is constant at `P_av` (and `ΔP` vanishes).
    pub fn evaluate(&self, spectral: &SpectralParams, t: f64) -> f64 {
        match spectral.phase_offset() {
            Some(re_phi) if spectral.regime.oscillates() => {
                self.p_av - self.delta_p * libm::cos(2.0 * (spectral.omega * t + re_phi))
            }
            _ => self.p_av,
        }
    }
}

/// Probability of measuring a marked state after `t` iterations.
///
/// Oscillating regimes follow the cosine law; circular and dead regimes keep
/// their initial value `rσ_k² + r|k̄(0)|²`.
pub fn success_probability(
    instance: &SearchInstance,
    moments: &InitialMoments,
    spectral: &SpectralParams,
    t: u64,
) -> f64 {
    if t == 0 || !spectral.regime.oscillates() {
        return moments.marked_probability();
    }
    probability_profile(instance, moments, spectral).evaluate(spectral, t as f64)
}

/// `Σ|k_i|²` evaluated from the closed-form marked mean, `r(σ_k² + |k̄(t)|²)`.
pub fn success_probability_from_means(
    instance: &SearchInstance,
    moments: &InitialMoments,
    k_bar_t: Complex64,
) -> f64 {
    instance.r() as f64 * (moments.sigma_k_sq + k_bar_t.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{compute_spectral, mean_amplitudes};
    use crate::model::{moments_of, StateVector};
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn uniform_reaches_certainty() {
        let inst = SearchInstance::new(4, &[3]).unwrap();
        let m = InitialMoments::of(&StateVector::uniform(4), &inst).unwrap();
        let s = compute_spectral(&inst, &m);
        let prof = probability_profile(&inst, &m, &s);
        assert!((prof.p_max - 1.0).abs() < 1e-15);
        assert!((success_probability(&inst, &m, &s, 1) - 1.0).abs() < 1e-15);
        assert_eq!(success_probability(&inst, &m, &s, 0), 0.25);
        assert!((prof.period - 3.0).abs() < 1e-14);
    }

    #[test]
    fn dead_profile_is_zero() {
        let inst = SearchInstance::new(4, &[3]).unwrap();
        let c = |x| Complex64::new(x, 0.0);
        let amps = [c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2), c(0.0), c(0.0)];
        let m = moments_of(&amps, &inst).unwrap();
        let s = compute_spectral(&inst, &m);
        let prof = probability_profile(&inst, &m, &s);
        assert_eq!((prof.p_av, prof.delta_p, prof.p_max), (0.0, 0.0, 0.0));
        for t in 0..10 {
            assert_eq!(success_probability(&inst, &m, &s, t), 0.0);
        }
    }

    #[test]
    fn real_ratio_peak_loses_unmarked_variance() {
        // real amplitudes with nonzero unmarked spread
        let inst = SearchInstance::new(5, &[0, 2]).unwrap();
        let c = |x| Complex64::new(x, 0.0);
        let v =
            StateVector::normalized(alloc::vec![c(0.2), c(0.6), c(0.3), c(0.1), c(0.5)]).unwrap();
        let m = InitialMoments::of(&v, &inst).unwrap();
        let s = compute_spectral(&inst, &m);
        assert_eq!(s.regime, crate::analytic::Regime::LinearReal);
        let prof = probability_profile(&inst, &m, &s);
        assert!((prof.p_max - (1.0 - 3.0 * m.sigma_l_sq)).abs() < 1e-14);
        assert!((prof.p_av - p_av_from_normalization(&inst, &m)).abs() < 1e-14);
    }

    #[test]
    fn cosine_law_matches_mean_form() {
        let inst = SearchInstance::new(6, &[1, 4]).unwrap();
        let amps = [
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.4, -0.3),
            Complex64::new(0.1, 0.2),
            Complex64::new(0.25, 0.05),
            Complex64::new(-0.1, -0.3),
        ];
        let v = StateVector::normalized(amps.to_vec()).unwrap();
        let m = InitialMoments::of(&v, &inst).unwrap();
        let s = compute_spectral(&inst, &m);
        for t in 0..40 {
            let (k, _) = mean_amplitudes(&s, &inst, t);
            let direct = success_probability_from_means(&inst, &m, k);
            assert!((success_probability(&inst, &m, &s, t) - direct).abs() < 1e-14);
        }
    }
}
