use std::iter::FromIterator;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        let naive: f64 = xs.iter().sum();
        let comp: CompensatedSum = xs.iter().copied().collect();
        assert_eq!(naive, 0.0);
        assert_eq!(comp.value(), 2.0);
    }

    #[test]
    fn alternating_harmonic() {
        let s: CompensatedSum = (1..=1_000_000)
            .map(|k| if k % 2 == 1 { 1.0 / k as f64 } else { -1.0 / k as f64 })
            .collect();
        // ln 2 minus the tail of the alternating series, which is about 1/(2N)
        assert!((s.value() - (std::f64::consts::LN_2 - 0.5e-6)).abs() < 1e-12);
    }
}
