//! Path samplers: one-sided stable draws, multistable subordinator paths and
//! their inverse, and the two time-changed counting processes.

mod counting;
mod rng;
mod stable;
mod subordinator;

pub use counting::{
    sample_smpp_path, sample_tmpp_path, sample_tmpp_waiting_times, CountingPath, SmppSampler, MAX_EXPECTED_EVENTS,
};
pub use rng::{PathRng, RngSpec};
pub use stable::sample_stable;
pub use subordinator::{
    invert_path, sample_increment, sample_multistable_at, sample_multistable_path, sample_tangent_pair, InverseTime,
    SubordinatorPath, TimeGrid, MAX_GRID_CELLS,
};
