//! Evaluators for the SMPP `N(H(t))`: Lévy weights and the Sibuya jump law,
//! the PGF and transition pmf, the governing-equation residual, jump-epoch
//! densities and the upcrossing-time survival function.

mod epochs;
mod pmf;
mod sibuya;
mod upcrossing;

pub use epochs::{epoch_density, epoch_density_mass};
pub use pmf::{
    bernstein_from_atoms, default_fft_size, default_radius, governing_residual, homogeneous_series_pmf, smpp_pgf,
    smpp_series_pmf, smpp_transition_pmf, smpp_transition_pmf_with_radius, PmfMeta, PmfTable, SeriesSpec, SeriesValue,
};
pub use sibuya::{levy_weight, sibuya_pmf, sibuya_sample, SibuyaWeights};
pub use upcrossing::{
    alternating_binomial_closed, alternating_binomial_sum, upcrossing_survival_derivative, upcrossing_survival_integral,
};
