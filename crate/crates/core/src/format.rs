/// Shortest round-trip text for `x`, in scientific notation outside `[1e-5, 1e16)`.
pub(crate) fn float(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [
            0.0,
            1.0,
            -2.5,
            1.4464192735372696e-6,
            3.0e200,
            0.1,
            1e-5,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(float(1.4464192735372696e-6), "1.4464192735372696e-6");
        assert_eq!(float(0.25), "0.25");
    }
}
