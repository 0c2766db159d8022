mod common;

use common::random_case;
use gal_core::distributions::DistributionKind;
use gal_core::model::{SearchInstance, StateVector};
use gal_core::sim::{
    global_phase_deviation, invert_about_average, oracle_flip, DiffusionMethod, SimConfig,
    Simulator,
};
use gal_core::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn direct_and_walsh_hadamard_agree(log_n in 3u32..=12, seed in any::<u64>()) {
        let n = 1usize << log_n;
        let r = 1 + (seed as usize) % (n / 2);
        let case = random_case(n, r, seed, DistributionKind::RandomComplex);
        let mut direct = Simulator::new(&case.instance, &case.init, SimConfig::default()).unwrap();
        let mut wht = Simulator::new(
            &case.instance,
            &case.init,
            SimConfig::with_method(DiffusionMethod::WalshHadamard),
        )
        .unwrap();
        for _ in 0..40 {
            direct.step().unwrap();
            wht.step().unwrap();
            prop_assert!((direct.marked_probability() - wht.marked_probability()).abs() <= 1e-12);
            let (_, dev) = global_phase_deviation(direct.amplitudes(), wht.amplitudes());
            prop_assert!(dev <= 1e-10);
        }
    }

    #[test]
    fn reflections_are_involutions(n in 2usize..200, seed in any::<u64>()) {
        let case = random_case(n, 1, seed, DistributionKind::RandomComplex);
        let twice = oracle_flip(&oracle_flip(&case.init, &case.instance).unwrap(), &case.instance).unwrap();
        prop_assert_eq!(&twice, &case.init);
        let inv = invert_about_average(&case.init);
        prop_assert!((inv.norm_sq() - 1.0).abs() <= 1e-12);
        let back = invert_about_average(&inv);
        for (a, b) in back.amplitudes().iter().zip(case.init.amplitudes()) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }
}

#[test]
fn norm_drift_stays_small_over_long_runs() {
    let n = 1 << 16;
    let case = random_case(n, 3, 11, DistributionKind::RandomComplex);
    let mut sim = Simulator::new(&case.instance, &case.init, SimConfig::default()).unwrap();
    sim.run(10_000).unwrap();
    assert!(
        sim.norm_drift().abs() < 1e-8,
        "drift {:e}",
        sim.norm_drift()
    );
    assert!(sim.max_audited_drift() < 1e-8);
}

#[test]
fn real_ratio_probability_is_periodic() {
    // N=4, r=1: ω = π/3, period 3. N=8, r=4: ω = π/2, period 2.
    for (n, marked, period) in [(4usize, vec![2usize], 3u64), (8, vec![0, 3, 5, 6], 2)] {
        let inst = SearchInstance::new(n, &marked).unwrap();
        let amps = (0..n)
            .map(|i| Complex64::new(0.2 + i as f64 * 0.37, 0.0))
            .collect();
        let init = StateVector::normalized(amps).unwrap();
        let mut sim = Simulator::new(&inst, &init, SimConfig::default()).unwrap();
        let mut ps = Vec::new();
        for _ in 0..30 {
            ps.push(sim.marked_probability());
            sim.step().unwrap();
        }
        for t in 0..ps.len() - period as usize {
            assert!(
                (ps[t] - ps[t + period as usize]).abs() < 1e-13,
                "n={n} t={t}"
            );
        }
    }
}
