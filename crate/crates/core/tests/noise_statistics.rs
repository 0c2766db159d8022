mod common;

use common::random_case;
use gal_core::distributions::DistributionKind;

#[test]
fn unmarked_variance_scales_with_noise_power() {
    let n = 4096;
    for sigma in [0.05, 0.1] {
        let seeds = 40;
        let mut total = 0.0;
        for seed in 0..seeds {
            let case = random_case(
                n,
                1,
                seed,
                DistributionKind::NoisyUniform { noise_sigma: sigma },
            );
            total += case.moments.sigma_l_sq;
            // peak loss follows the measured unmarked spread
            let predicted = 1.0 - (n - 1) as f64 * case.moments.sigma_l_sq;
            assert!((case.profile.p_max - predicted).abs() < 1e-3 * sigma * sigma);
        }
        let ratio = total / seeds as f64 * n as f64 / (sigma * sigma);
        assert!((ratio - 1.0).abs() < 0.03, "sigma={sigma} ratio={ratio}");
    }
}
