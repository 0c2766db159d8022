#![allow(dead_code)]

use gal_core::analytic::{
    compute_spectral, probability_profile, ProbabilityProfile, SpectralParams,
};
use gal_core::distributions::{DistributionKind, DistributionSpec};
use gal_core::model::{InitialMoments, SearchInstance, StateVector};
use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::SeedableRng;

pub struct Case {
    pub instance: SearchInstance,
    pub init: StateVector,
    pub moments: InitialMoments,
    pub spectral: SpectralParams,
    pub profile: ProbabilityProfile,
}

impl Case {
    pub fn new(instance: SearchInstance, init: StateVector) -> Self {
        let moments = InitialMoments::of(&init, &instance).unwrap();
        let spectral = compute_spectral(&instance, &moments);
        let profile = probability_profile(&instance, &moments, &spectral);
        Self {
            instance,
            init,
            moments,
            spectral,
            profile,
        }
    }

    pub fn horizon(&self, periods: f64) -> u64 {
        (periods * std::f64::consts::PI / self.spectral.omega).ceil() as u64
    }
}

/// Random instance with `r` marked states scattered over `[0, n)`.
pub fn scattered_instance(n: usize, r: usize, seed: u64) -> SearchInstance {
    let mut rng = StdRng::seed_from_u64(seed);
    let marked = sample(&mut rng, n, r).into_vec();
    SearchInstance::new(n, &marked).unwrap()
}

pub fn random_case(n: usize, r: usize, seed: u64, kind: DistributionKind) -> Case {
    let instance = scattered_instance(n, r, seed ^ 0x9e37_79b9_7f4a_7c15);
    let init = DistributionSpec::new(kind, seed)
        .generate(&instance)
        .unwrap();
    Case::new(instance, init)
}
