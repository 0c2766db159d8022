use num_complex::Complex64;

use crate::model::{InitialMoments, SearchInstance, Tolerances};

/// Qualitative behaviour of the mean amplitudes, decided by the initial phasors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Both phasors nonzero with a complex ratio: the means trace a proper ellipse.
    Generic,
    /// Real `l̄(0)/k̄(0)`: the means oscillate along a straight segment.
    LinearReal,
    /// `f₊(0) = 0`: only `f₋` rotates, so `|k̄|` and `P(t)` stay constant.
    CircularPlus,
    /// `f₋(0) = 0`: only `f₊` rotates, so `|k̄|` and `P(t)` stay constant.
    CircularMinus,
    /// Both phasors vanish: the means are zero for all time.
    Dead,
}

impl Regime {
    /// True when the success probability oscillates, so optimal times exist.
    pub fn oscillates(self) -> bool {
        matches!(self, Regime::Generic | Regime::LinearReal)
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Generic => "Generic",
            Regime::LinearReal => "LinearReal",
            Regime::CircularPlus => "CircularPlus",
            Regime::CircularMinus => "CircularMinus",
            Regime::Dead => "Dead",
        }
    }
}

/// Spectral data of the mean-amplitude recursion.
///
/// The phasors `f±(t) = l̄(t) ± i·√(r/(N−r))·k̄(t)` decouple the recursion:
/// `f±(t+1) = e^{±iω} f±(t)` with `cos ω = 1 − 2r/N`. Writing
/// `α e^{±iφ} = f±(0)` turns the means into `l̄(t) = α cos(ωt+φ)` and
/// `k̄(t) = √((N−r)/r)·α sin(ωt+φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    /// Rotation angle per iteration, in `(0, π/2]`.
    pub omega: f64,
    pub f_plus0: Complex64,
    pub f_minus0: Complex64,
    /// `f₊(0)·e^{−iφ}`; zero when either phasor is exactly zero.
    pub alpha: Complex64,
    /// `(1/2i)·Log(f₊(0)/f₋(0))` on the principal branch, so `Re φ ∈ (−π/2, π/2]`.
    /// `None` when the ratio is undefined.
    pub phi: Option<Complex64>,
    pub regime: Regime,
}

/// `ω` with `cos ω = 1 − 2r/N`, evaluated as `2·asin(√(r/N))` which keeps full
/// relative precision when `r ≪ N`.
pub fn rotation_angle(instance: &SearchInstance) -> f64 {
    2.0 * libm::asin(libm::sqrt(instance.marked_fraction()))
}

/// `√(r/(N−r))`, the weight of `k̄` inside the phasors.
pub(crate) fn coupling(instance: &SearchInstance) -> f64 {
    libm::sqrt(instance.r() as f64 / instance.unmarked_count() as f64)
}

pub fn compute_spectral(instance: &SearchInstance, moments: &InitialMoments) -> SpectralParams {
    compute_spectral_with(instance, moments, &Tolerances::default())
}

pub fn compute_spectral_with(
    instance: &SearchInstance,
    moments: &InitialMoments,
    tol: &Tolerances,
) -> SpectralParams {
    let omega = rotation_angle(instance);
    let ik = Complex64::i() * coupling(instance) * moments.k_bar0;
    let f_plus0 = moments.l_bar0 + ik;
    let f_minus0 = moments.l_bar0 - ik;

    let (alpha, phi) = phase_and_amplitude(f_plus0, f_minus0);

    let (p, m) = (f_plus0.norm(), f_minus0.norm());
    let regime = if p < tol.dead && m < tol.dead {
        Regime::Dead
    } else if m <= tol.circular * (p + m) {
        Regime::CircularMinus
    } else if p <= tol.circular * (p + m) {
        Regime::CircularPlus
    } else if phi.is_some_and(|phi| phi.im.abs() <= tol.linear) {
        Regime::LinearReal
    } else {
        Regime::Generic
    };

    SpectralParams {
        omega,
        f_plus0,
        f_minus0,
        alpha,
        phi,
        regime,
    }
}

/// Resolves the `±` ambiguity of `α = √(f₊f₋)` by taking φ from the principal
/// logarithm and then defining `α = f₊·e^{−iφ}`, which satisfies both
/// `α e^{iφ} = f₊` and `α e^{−iφ} = f₋`.
fn phase_and_amplitude(f_plus: Complex64, f_minus: Complex64) -> (Complex64, Option<Complex64>) {
    if f_plus.norm() == 0.0 || f_minus.norm() == 0.0 {
        return (Complex64::default(), None);
    }
    // Log(f₊/f₋) = ln|f₊/f₋| + i·arg(f₊·conj(f₋)); divide by 2i.
    let arg = (f_plus * f_minus.conj()).arg();
    let log_mod = libm::log(f_plus.norm()) - libm::log(f_minus.norm());
    let phi = Complex64::new(0.5 * arg, -0.5 * log_mod);
    let alpha = f_plus * (-Complex64::i() * phi).exp();
    (alpha, Some(phi))
}

impl SpectralParams {
    /// `(f₊(t), f₋(t))`.
    pub fn phasors_at(&self, t: u64) -> (Complex64, Complex64) {
        let angle = self.omega * t as f64;
        let rot = Complex64::from_polar(1.0, angle);
        (rot * self.f_plus0, rot.conj() * self.f_minus0)
    }

    /// `Re φ`, or `None` when φ is undefined.
    pub fn phase_offset(&self) -> Option<f64> {
        self.phi.map(|phi| phi.re)
    }

    /// Period of `P(t)` in iterations, `π/ω`.
    pub fn probability_period(&self) -> f64 {
        core::f64::consts::PI / self.omega
    }
}
