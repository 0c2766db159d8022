use num_complex::Complex64;

use super::spectral::SpectralParams;
use crate::error::{Error, Result};
use crate::model::SearchInstance;

/// Geometry of the loci traced by `l̄(t)` and `k̄(t)` in the complex plane.
///
/// `l̄(t) = α cos(θ + i·Im φ)` with `θ = ωt + Re φ` expands to
/// `|α| e^{iη} (cosh(Im φ) cos θ − i sinh(Im φ) sin θ)`: an ellipse whose major
/// axis points along `η = arg α`. `k̄(t) = √((N−r)/r)·α sin(θ + i·Im φ)` is the
/// same ellipse scaled by `√((N−r)/r)`, traversed a quarter period out of phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseGeometry {
    pub eta: f64,
    /// Major semi-axis `|α| cosh(Im φ)`.
    pub a: f64,
    /// Minor semi-axis `|α|·|sinh(Im φ)|`; zero for straight-line motion.
    pub b: f64,
    /// `√((N−r)/r)`.
    pub k_scale: f64,
    /// Major-axis angle of the `k̄` ellipse.
    pub k_eta: f64,
}

pub fn ellipse_geometry(
    spectral: &SpectralParams,
    instance: &SearchInstance,
) -> Result<EllipseGeometry> {
    let phi = match spectral.phi {
        Some(phi) if spectral.regime.oscillates() && spectral.alpha.norm() > 0.0 => phi,
        _ => return Err(Error::DegenerateEllipse(spectral.regime)),
    };
    let modulus = spectral.alpha.norm();
    let eta = spectral.alpha.arg();
    let (a, b) = if phi.im.abs() <= 0.0 {
        (modulus, 0.0)
    } else {
        (
            modulus * libm::cosh(phi.im),
            modulus * libm::sinh(phi.im).abs(),
        )
    };
    let k_scale = libm::sqrt(instance.unmarked_count() as f64 / instance.r() as f64);
    Ok(EllipseGeometry {
        eta,
        a,
        b,
        k_scale,
        k_eta: eta,
    })
}

impl EllipseGeometry {
    /// Normalized conic residual `x²/a² + y²/b² − 1` of `z` for the `l̄` ellipse,
    /// where `(x, y)` are coordinates along the axes. For a degenerate segment
    /// (`b = 0`) returns the perpendicular distance, plus any overshoot beyond
    /// the endpoints, relative to `a`.
    pub fn l_residual(&self, z: Complex64) -> f64 {
        residual(z, self.eta, self.a, self.b)
    }

    /// Same as [`l_residual`](Self::l_residual) for the scaled `k̄` ellipse.
    pub fn k_residual(&self, z: Complex64) -> f64 {
        residual(z, self.k_eta, self.a * self.k_scale, self.b * self.k_scale)
    }

    /// True when the motion degenerates to a straight segment.
    pub fn is_segment(&self) -> bool {
        self.b == 0.0
    }
}

fn residual(z: Complex64, eta: f64, a: f64, b: f64) -> f64 {
    let w = z * Complex64::from_polar(1.0, -eta);
    if b == 0.0 {
        (w.im.abs() + (w.re.abs() - a).max(0.0)) / a
    } else {
        (w.re / a) * (w.re / a) + (w.im / b) * (w.im / b) - 1.0
    }
}
