use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Length-N vector of complex probability amplitudes.
///
/// Stored as one contiguous buffer of interleaved `(re, im)` pairs. Construction
/// checks normalization; nothing in this crate ever renormalizes a vector behind
/// the caller's back.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps `amps`, requiring `|Σ|a_i|² − 1| <= tolerance`.
    pub fn new(amps: Vec<Complex64>, tolerance: f64) -> Result<Self> {
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sq = norm_sq(&amps);
        if (norm_sq - 1.0).abs() > tolerance {
            return Err(Error::NotNormalized { norm_sq, tolerance });
        }
        Ok(Self { amps })
    }

    /// Scales `amps` to unit norm.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sq = norm_sq(&amps);
        if norm_sq == 0.0 {
            return Err(Error::ZeroVector);
        }
        let scale = 1.0 / libm::sqrt(norm_sq);
        for a in &mut amps {
            *a *= scale;
        }
        Ok(Self { amps })
    }

    /// Uniform superposition `1/√N` over `n` states.
    pub fn uniform(n: usize) -> Self {
        let a = 1.0 / libm::sqrt(n as f64);
        Self {
            amps: alloc::vec![Complex64::new(a, 0.0); n],
        }
    }

    /// Skips the normalization check. Used by the simulator, whose unitarity is
    /// audited separately.
    pub(crate) fn from_raw(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.amps)
    }
}

impl AsRef<[Complex64]> for StateVector {
    fn as_ref(&self) -> &[Complex64] {
        &self.amps
    }
}

pub(crate) fn norm_sq(amps: &[Complex64]) -> f64 {
    pairwise_sum_by(amps, &Complex64::norm_sqr)
}

/// Pairwise (cascade) summation of `f(x)`: rounding error grows like `log N`
/// instead of `N`, which matters for long runs on uniform-like states.
pub(crate) fn pairwise_sum_by<T, F>(xs: &[Complex64], f: &F) -> T
where
    T: core::ops::Add<Output = T> + core::iter::Sum,
    F: Fn(&Complex64) -> T,
{
    const LEAF: usize = 64;
    if xs.len() <= LEAF {
        return xs.iter().map(f).sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum_by(lo, f) + pairwise_sum_by(hi, f)
}
