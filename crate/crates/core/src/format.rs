//! Fixed float formatting for byte-stable output.

/// 17 significant digits in scientific notation, e.g. `-1.2500000000000000e-1`.
pub fn sci(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

#[cfg(test)]
mod tests {
    use super::sci;

    #[test]
    fn round_trips() {
        for v in [0.0, -0.125, 1.0 / 3.0, 6.02e23, -1e-300, f64::MIN_POSITIVE] {
            assert_eq!(sci(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(sci(-0.125), "-1.2500000000000000e-1");
        assert_eq!(sci(f64::NAN), "nan");
    }
}
