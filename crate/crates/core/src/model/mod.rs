//! Domain types shared by both engines: the search instance, the state vector,
//! and the moment summary of an initial distribution.

mod instance;
mod moments;
mod state;
mod tolerance;

pub use instance::SearchInstance;
pub use moments::{block_means, moments_of, InitialMoments};
pub use state::StateVector;
pub use tolerance::Tolerances;

pub(crate) use state::{norm_sq, pairwise_sum_by};
