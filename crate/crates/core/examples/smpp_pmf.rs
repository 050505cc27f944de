// SMPP state probabilities by PGF coefficient extraction, against the series.

use multistable_poisson::model::{AlphaProfile, ModelParams, QuadratureSpec};
use multistable_poisson::smpp::{
    default_fft_size, homogeneous_series_pmf, smpp_series_pmf, smpp_transition_pmf, SeriesSpec,
};

pub fn run_example() -> multistable_poisson::Result<()> {
    let quad = QuadratureSpec::default();
    let k_max = 10;
    let constant = ModelParams::new(1.0, AlphaProfile::constant(0.5)?)?;
    let table = smpp_transition_pmf(&constant, 0.0, 1.0, k_max, default_fft_size(k_max), &quad)?;
    for (n, p) in table.probs.iter().enumerate() {
        let series = homogeneous_series_pmf(0.5, 1.0, 1.0, n as u64);
        println!("n={n:2}  fft {p:.12}  series {series:.12}");
        assert!((p - series).abs() < 1e-8);
    }
    println!("mass beyond k_max: {:.3e}", table.tail_bound);

    let varying = ModelParams::new(1.0, AlphaProfile::sinusoidal(0.5, 0.2, 1.0, 0.0)?)?;
    let table = smpp_transition_pmf(&varying, 0.25, 1.0, 4, 64, &quad)?;
    let spec = SeriesSpec {
        r_max: 60,
        tolerance: 1e-8,
    };
    for n in 1..=4 {
        let s = smpp_series_pmf(&varying, 0.25, 1.0, n, &spec, &quad)?;
        println!(
            "transition from 0.25, n={n}: fft {:.10}  series {:.10}",
            table.probs[n], s.value
        );
        assert!((table.probs[n] - s.value).abs() < 1e-7);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
