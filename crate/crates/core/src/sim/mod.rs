//! Brute-force execution of the iteration on a full state vector; the
//! independent oracle for every closed-form claim.

mod kernels;
mod runner;

pub use kernels::{
    diffusion_wht, diffusion_wht_in_place, global_phase_deviation, invert_about_average,
    invert_about_average_in_place, marked_probability, oracle_flip, oracle_flip_in_place,
    walsh_hadamard_in_place,
};
pub use runner::{grover_run, grover_run_traced, DiffusionMethod, SimConfig, Simulator, TraceRow};
