//! Monte Carlo comparison machinery: empirical pmfs and Laplace functionals,
//! Kolmogorov–Smirnov distances, comparison reports and the validation suites.

mod empirical;
mod ks;
mod report;
mod suites;

pub use empirical::{empirical_laplace, empirical_pmf, EmpiricalPmf, MeanEstimate, PathValue};
pub use ks::{ks_distance, ks_distance_to, ks_threshold};
pub use report::{Check, ComparisonReport, KsCheck, Status, TrendCheck};
pub use suites::{
    run_suite, validate_localizability, validate_smpp, validate_tmpp, LocalizabilitySettings, Suite, ValidationSettings,
};

/// Process exit code for a batch of reports: 0 when all pass or are skipped,
/// 2 when any comparison fails.
pub fn exit_code(reports: &[ComparisonReport]) -> i32 {
    if reports.iter().all(|r| r.pass) {
        0
    } else {
        2
    }
}
