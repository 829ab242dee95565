//! Number formatting for machine-readable output.

/// Formats `x` with 12 significant digits, trimming trailing zeros.
/// Very large or very small magnitudes switch to exponent notation.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        return format!("{:.11e}", x);
    }
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig12;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(0.7155164159999999), "0.715516416");
        assert_eq!(sig12(0.811_278_124_459_132_8), "0.811278124459");
        assert_eq!(sig12(123.456), "123.456");
        assert_eq!(sig12(-0.25), "-0.25");
        assert_eq!(sig12(1e-9), "1.00000000000e-9");
        assert_eq!(sig12(0.0), "0");
    }
}
