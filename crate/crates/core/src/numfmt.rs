//! Fixed-precision number formatting for output files.

/// Formats `x` with `digits` significant digits, using plain notation for
/// moderate magnitudes and scientific notation otherwise. Trailing zeros
/// are trimmed. The result parses back with `str::parse::<f64>`.
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // Round first so that the exponent reflects the printed mantissa.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(-2.5, 12), "-2.5");
        assert_eq!(format_sig(std::f64::consts::PI, 12), "3.14159265359");
        assert_eq!(format_sig(123456.789, 4), "1.235e5");
        assert_eq!(format_sig(1234.5678, 6), "1234.57");
        assert_eq!(format_sig(1.5e-9, 12), "1.5e-9");
        assert_eq!(format_sig(9.9999999999999e-6, 12), "0.00001");
        assert_eq!(format_sig(6.02214076e23, 12), "6.02214076e23");
        assert_eq!(format_sig(99.99999999999999, 12), "100");
    }

    #[test]
    fn parses_back_within_precision() {
        for &x in &[1.0 / 3.0, -7.123456789012345e-3, 4.2e17, 0.000123456789] {
            let y: f64 = format_sig(x, 12).parse().unwrap();
            assert!((x - y).abs() <= 1e-11 * x.abs());
        }
    }
}
