//! Numeric kernels shared by the evaluators: quadrature, power-of-two DFT,
//! Gaver–Stehfest weights, Bell-polynomial recurrence, special functions
//! and compensated summation. Nothing in here knows about the model.

mod bell;
mod fourier;
mod quadrature;
mod special;
mod stehfest;
mod summation;

pub use bell::{bell_derivatives, MAX_BELL_ORDER};
pub use fourier::{dft_coefficients, FourierPlan};
pub use quadrature::{
    adaptive_gauss_legendre, gauss_legendre, gauss_legendre_rule, panel_count, GaussLegendreRule, QuadValue, MAX_PANELS,
};
pub use special::{binomial, binomial_sequence, falling_factorial, gamma, ln_gamma};
pub use stehfest::{stehfest_invert, StehfestWeights, MAX_STEHFEST_ORDER};
pub use summation::CompensatedSum;
