use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{pairwise_sum_by, SearchInstance, StateVector};

/// Negates the amplitudes of marked states in place.
pub fn oracle_flip_in_place(amps: &mut [Complex64], instance: &SearchInstance) -> Result<()> {
    check_len(amps, instance)?;
    for &i in instance.marked() {
        amps[i] = -amps[i];
    }
    Ok(())
}

pub fn oracle_flip(vector: &StateVector, instance: &SearchInstance) -> Result<StateVector> {
    let mut amps = vector.amplitudes().to_vec();
    oracle_flip_in_place(&mut amps, instance)?;
    Ok(StateVector::from_raw(amps))
}

/// Reflects every amplitude about the mean: `a_i ← 2·mean(a) − a_i`.
/// One pass for the mean, one for the update.
pub fn invert_about_average_in_place(amps: &mut [Complex64]) {
    if amps.is_empty() {
        return;
    }
    let twice_mean = 2.0 * pairwise_sum_by(amps, &|a| *a) / amps.len() as f64;
    for a in amps.iter_mut() {
        *a = twice_mean - *a;
    }
}

pub fn invert_about_average(vector: &StateVector) -> StateVector {
    let mut amps = vector.amplitudes().to_vec();
    invert_about_average_in_place(&mut amps);
    StateVector::from_raw(amps)
}

/// Orthonormal Walsh–Hadamard transform, in place.
///
/// Radix-2 butterflies `(a, b) → ((a+b)/√2, (a−b)/√2)` over `log₂ N` stages,
/// which is `H^{⊗n}` applied to every qubit.
pub fn walsh_hadamard_in_place(amps: &mut [Complex64]) -> Result<()> {
    let n = amps.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let scale = core::f64::consts::FRAC_1_SQRT_2;
    let mut half = 1;
    while half < n {
        for block in amps.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (x + y) * scale;
                *b = (x - y) * scale;
            }
        }
        half *= 2;
    }
    Ok(())
}

/// Diffusion as a circuit: Hadamard on every qubit, phase π on `|0⟩`, Hadamard
/// again. The result is `H(I − 2|0⟩⟨0|)H = I − 2|s⟩⟨s|`, i.e. the negative of
/// the inversion about the average; the two paths differ by a global sign.
pub fn diffusion_wht_in_place(amps: &mut [Complex64]) -> Result<()> {
    walsh_hadamard_in_place(amps)?;
    amps[0] = -amps[0];
    walsh_hadamard_in_place(amps)
}

pub fn diffusion_wht(vector: &StateVector) -> Result<StateVector> {
    let mut amps = vector.amplitudes().to_vec();
    diffusion_wht_in_place(&mut amps)?;
    Ok(StateVector::from_raw(amps))
}

/// `Σ_{i marked} |a_i|²`.
pub fn marked_probability(amps: &[Complex64], instance: &SearchInstance) -> f64 {
    instance
        .marked()
        .iter()
        .filter_map(|&i| amps.get(i))
        .map(Complex64::norm_sqr)
        .sum()
}

/// Best-fit global phase `θ = arg Σ a_i·conj(b_i)` and the residual
/// `max_i |a_i − e^{iθ} b_i|`.
pub fn global_phase_deviation(a: &[Complex64], b: &[Complex64]) -> (f64, f64) {
    let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
    let theta = if overlap.norm() == 0.0 {
        0.0
    } else {
        overlap.arg()
    };
    let rot = Complex64::from_polar(1.0, theta);
    let dev = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - rot * y).norm())
        .fold(0.0, f64::max);
    (theta, dev)
}

fn check_len(amps: &[Complex64], instance: &SearchInstance) -> Result<()> {
    if amps.len() != instance.n() {
        return Err(Error::LengthMismatch {
            expected: instance.n(),
            got: amps.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn flip_marked_sign() {
        let inst = SearchInstance::new(4, &[3]).unwrap();
        let u = StateVector::uniform(4);
        let f = oracle_flip(&u, &inst).unwrap();
        assert_eq!(f.amplitudes(), [c(0.5), c(0.5), c(0.5), c(-0.5)]);
        assert_eq!(oracle_flip(&f, &inst).unwrap(), u);
        let zero_marked = StateVector::new(vec![c(0.6), c(0.8), c(0.0), c(0.0)], 1e-12).unwrap();
        let g = oracle_flip(&zero_marked, &inst).unwrap();
        assert_eq!(g.amplitudes()[..3], zero_marked.amplitudes()[..3]);
        assert_eq!(g.amplitudes()[3].norm(), 0.0);
    }

    #[test]
    fn flip_length_mismatch() {
        let inst = SearchInstance::new(4, &[3]).unwrap();
        assert_eq!(
            oracle_flip(&StateVector::uniform(8), &inst),
            Err(Error::LengthMismatch {
                expected: 4,
                got: 8
            })
        );
    }

    #[test]
    fn inversion_examples() {
        let u = StateVector::uniform(4);
        assert_eq!(invert_about_average(&u), u);
        let e0 = StateVector::new(vec![c(1.0), c(0.0), c(0.0), c(0.0)], 0.0).unwrap();
        let inv = invert_about_average(&e0);
        assert_eq!(inv.amplitudes(), [c(-0.5), c(0.5), c(0.5), c(0.5)]);
        let back = invert_about_average(&inv);
        for (x, y) in back.amplitudes().iter().zip(e0.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn wht_matches_direct_up_to_sign() {
        let e0 = StateVector::new(vec![c(1.0), c(0.0), c(0.0), c(0.0)], 0.0).unwrap();
        let w = diffusion_wht(&e0).unwrap();
        // H e0 = (½,½,½,½); phase on |0⟩ gives (−½,½,½,½); H again:
        for (a, e) in w
            .amplitudes()
            .iter()
            .zip([c(0.5), c(-0.5), c(-0.5), c(-0.5)])
        {
            assert!((a - e).norm() < 1e-15);
        }
        let d = invert_about_average(&e0);
        let (theta, dev) = global_phase_deviation(w.amplitudes(), d.amplitudes());
        assert!((theta.abs() - core::f64::consts::PI).abs() < 1e-15);
        assert!(dev < 1e-15);
        let u = StateVector::uniform(8);
        let (_, dev) =
            global_phase_deviation(diffusion_wht(&u).unwrap().amplitudes(), u.amplitudes());
        assert!(dev < 1e-15);
    }

    #[test]
    fn wht_is_orthonormal_and_involutive() {
        let orig: Vec<_> = (0..16)
            .map(|i| Complex64::new(i as f64, -(i as f64) / 3.0))
            .collect();
        let mut v = orig.clone();
        walsh_hadamard_in_place(&mut v).unwrap();
        let n0: f64 = orig.iter().map(|a| a.norm_sqr()).sum();
        let n1: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        assert!((n0 - n1).abs() < 1e-10);
        // row 0 is the scaled sum
        let sum: Complex64 = orig.iter().sum();
        assert!((v[0] - sum / 4.0).norm() < 1e-12);
        walsh_hadamard_in_place(&mut v).unwrap();
        for (x, y) in v.iter().zip(&orig) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn wht_requires_power_of_two() {
        let mut v = vec![Complex64::default(); 12];
        assert_eq!(
            walsh_hadamard_in_place(&mut v),
            Err(Error::NotPowerOfTwo(12))
        );
    }

    #[test]
    fn marked_probability_examples() {
        let inst = SearchInstance::new(4, &[3]).unwrap();
        assert_eq!(
            marked_probability(StateVector::uniform(4).amplitudes(), &inst),
            0.25
        );
        assert_eq!(
            marked_probability(&[c(1.0), c(0.0), c(0.0), c(0.0)], &inst),
            0.0
        );
    }
}
