use crate::error::{domain, Result};

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return domain("KS distance needs nonempty samples");
    }
    if samples.iter().any(|x| x.is_nan()) {
        return domain("KS distance got a NaN sample");
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Two-sample Kolmogorov–Smirnov statistic `sup_x |F_a(x) − F_b(x)|`.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    let (a, b) = (sorted(a)?, sorted(b)?);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// One-sample statistic `sup_x |F_n(x) − F(x)|` against a continuous `cdf`.
/// `+∞` marks a sample censored beyond the observation window: it counts in
/// `n` while the supremum runs over finite `x` only.
pub fn ks_distance_to<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    let v = sorted(samples)?;
    let n = v.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in v.iter().enumerate().take_while(|(_, x)| x.is_finite()) {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Rejection threshold `c·√((n + m)/(n·m))`; for a one-sample test pass `m = None`.
/// `c = 1.628` is the asymptotic 1% critical value.
pub fn ks_threshold(coefficient: f64, n: usize, m: Option<usize>) -> f64 {
    let n = n as f64;
    match m {
        Some(m) => coefficient * ((n + m as f64) / (n * m as f64)).sqrt(),
        None => coefficient / n.sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_cases() {
        let a = [0.3, 1.0, -2.0, 5.0];
        assert_eq!(ks_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(ks_distance(&[1.0, 2.0], &[3.0, 4.0, 5.0]).unwrap(), 1.0);
        assert!((ks_distance(&[1.0, 2.0, 3.0], &[2.0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(ks_distance(&[], &a).is_err());
        assert!(ks_distance(&[f64::NAN], &a).is_err());
    }

    #[test]
    fn ties_are_stepped_together() {
        assert_eq!(ks_distance(&[1.0, 1.0, 2.0], &[1.0, 2.0, 2.0]).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn uniform_samples_pass_at_one_percent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a: Vec<f64> = (0..4000).map(|_| rng.random()).collect();
        let b: Vec<f64> = (0..3000).map(|_| rng.random()).collect();
        assert!(ks_distance(&a, &b).unwrap() < ks_threshold(1.628, 4000, Some(3000)));
        let d = ks_distance_to(&a, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(d < ks_threshold(1.628, 4000, None));
        let shifted = ks_distance_to(&a, |x| (x - 0.1).clamp(0.0, 1.0)).unwrap();
        assert!((shifted - 0.1).abs() < 0.03);
    }

    #[test]
    fn censored_samples_only_count_in_n() {
        let d = ks_distance_to(&[0.25, 0.5, f64::INFINITY, f64::INFINITY], |x| x.min(1.0)).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
        assert_eq!(ks_distance_to(&[f64::INFINITY], |x| x).unwrap(), 0.0);
    }

    #[test]
    fn one_sample_single_point() {
        assert_eq!(ks_distance_to(&[0.5], |x| x).unwrap(), 0.5);
    }
}
