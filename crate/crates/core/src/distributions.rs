//! Seeded generators for the initial-distribution families.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::analytic::coupling;
use crate::error::{Error, Result};
use crate::model::{SearchInstance, StateVector};

/// Name of the pseudo-random source, recorded alongside results.
pub const GENERATOR_NAME: &str =
    "ChaCha20Rng::seed_from_u64 + StandardNormal (rand_chacha 0.9, rand_distr 0.5)";

/// Which of the two phasors a circular initialization cancels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CircularBranch {
    /// `f₊(0) = 0`.
    Plus,
    /// `f₋(0) = 0`.
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionKind {
    /// All amplitudes `1/√N`.
    Uniform,
    /// `1/√N` plus complex Gaussian noise with per-component standard deviation
    /// `noise_sigma/√(2N)`, renormalized.
    NoisyUniform { noise_sigma: f64 },
    /// Independent standard complex Gaussians, renormalized.
    RandomComplex,
    /// Zero marked amplitudes and zero-mean unmarked ones: `P(t) = 0` forever.
    WorstCase,
    /// Block-constant amplitudes with one phasor cancelled: constant `P(t)`.
    Circular { branch: CircularBranch },
    /// Caller-supplied amplitudes, renormalized.
    Explicit { amplitudes: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub seed: u64,
}

impl DistributionSpec {
    pub fn new(kind: DistributionKind, seed: u64) -> Self {
        Self { kind, seed }
    }

    pub fn generate(&self, instance: &SearchInstance) -> Result<StateVector> {
        generate(self, instance)
    }
}

pub fn generate(spec: &DistributionSpec, instance: &SearchInstance) -> Result<StateVector> {
    let n = instance.n();
    match &spec.kind {
        DistributionKind::Uniform => Ok(StateVector::uniform(n)),
        DistributionKind::NoisyUniform { noise_sigma } => {
            let sigma = *noise_sigma;
            if !sigma.is_finite() || sigma < 0.0 {
                return Err(Error::InvalidNoise(sigma));
            }
            if sigma == 0.0 {
                return Ok(StateVector::uniform(n));
            }
            let base = 1.0 / libm::sqrt(n as f64);
            let component_sd = sigma / libm::sqrt(2.0 * n as f64);
            let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
            let amps = (0..n)
                .map(|_| {
                    let (re, im) = gaussian_pair(&mut rng);
                    Complex64::new(base + component_sd * re, component_sd * im)
                })
                .collect();
            StateVector::normalized(amps)
        }
        DistributionKind::RandomComplex => {
            let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
            let amps = (0..n)
                .map(|_| {
                    let (re, im) = gaussian_pair(&mut rng);
                    Complex64::new(re, im)
                })
                .collect();
            StateVector::normalized(amps)
        }
        DistributionKind::WorstCase => worst_case(instance),
        DistributionKind::Circular { branch } => circular(instance, *branch),
        DistributionKind::Explicit { amplitudes } => {
            if amplitudes.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: amplitudes.len(),
                });
            }
            StateVector::normalized(amplitudes.clone())
        }
    }
}

fn gaussian_pair(rng: &mut ChaCha20Rng) -> (f64, f64) {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    (re, im)
}

/// Alternates `+c, −c` over an even number of unmarked states (dropping the last
/// one when `N − r` is odd), so the unmarked mean is exactly zero and
/// `(N−r)σ_l² = 1`.
fn worst_case(instance: &SearchInstance) -> Result<StateVector> {
    let unmarked = instance.unmarked_count();
    if unmarked < 2 {
        return Err(Error::WorstCaseImpossible(unmarked));
    }
    let used = unmarked - unmarked % 2;
    let c = 1.0 / libm::sqrt(used as f64);
    let mut amps = vec![Complex64::default(); instance.n()];
    for (j, i) in instance.unmarked().take(used).enumerate() {
        amps[i] = Complex64::new(if j % 2 == 0 { c } else { -c }, 0.0);
    }
    StateVector::normalized(amps)
}

/// Marked amplitudes `k`, unmarked `l = ±i√(r/(N−r))·k`, chosen so the
/// requested phasor `f = l̄ ∓ i√(r/(N−r))k̄` vanishes.
fn circular(instance: &SearchInstance, branch: CircularBranch) -> Result<StateVector> {
    let k = Complex64::new(1.0 / libm::sqrt(2.0 * instance.r() as f64), 0.0);
    let rotate = match branch {
        CircularBranch::Minus => Complex64::i(),
        CircularBranch::Plus => -Complex64::i(),
    };
    let l = rotate * coupling(instance) * k;
    let amps = instance
        .marked_mask()
        .iter()
        .map(|&m| if m { k } else { l })
        .collect();
    StateVector::normalized(amps)
}
