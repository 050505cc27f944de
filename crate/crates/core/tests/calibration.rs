use multistable_poisson::harness::{empirical_pmf, ComparisonReport, ValidationSettings};
use multistable_poisson::model::{AlphaProfile, ModelParams};
use multistable_poisson::paths::{CountingPath, RngSpec, SmppSampler};
use rayon::prelude::*;

fn sample(sampler: &SmppSampler, seed: u64, n: u64) -> Vec<CountingPath> {
    (0..n)
        .into_par_iter()
        .map(|i| sampler.sample(RngSpec::new(seed, i)).unwrap())
        .collect()
}

#[test]
fn independent_runs_of_one_law_pass_at_three_sigma() {
    let params = ModelParams::new(1.5, AlphaProfile::sinusoidal(0.55, 0.3, 1.0, 0.0).unwrap()).unwrap();
    let sampler = SmppSampler::new(&params, 1.0).unwrap();
    let settings = ValidationSettings::default();
    let trials = 100;
    let passed = (0..trials)
        .filter(|&trial| {
            let a = empirical_pmf(&sample(&sampler, 2 * trial, 2000), 1.0).unwrap();
            let b = empirical_pmf(&sample(&sampler, 2 * trial + 1, 2000), 1.0).unwrap();
            let mut report = ComparisonReport::new("calibration", 2000, settings.sigma_multiplier);
            report.push_two_sample_pmf_checks("t=1", &a, &b, settings.min_expected_count, settings.max_tested_states);
            assert!(report.checks.len() > 3);
            report.pass
        })
        .count();
    assert!(passed >= 95, "{passed} of {trials} trials passed");
}
