//! Evaluators for the TMPP `N(L(t))`: Mittag-Leffler function, waiting-time
//! and epoch Laplace transforms, state-probability transforms and their
//! numerical inversion.

mod bernstein;
mod inversion;
mod mittag_leffler;
mod transforms;

pub use bernstein::{BernsteinSpec, BernsteinTable};
pub use inversion::{tmpp_pmf, write_tmpp_pmf_csv, InversionSpec, TmppPmfValue, INVERSION_SLACK};
pub use mittag_leffler::mittag_leffler;
pub use transforms::{epoch_lt, state_prob_lt, waiting_time_lt, waiting_time_lt_general};
