//! Number formatting for reports.

/// Scientific notation with three significant digits and a signed two-digit
/// exponent, e.g. `5.49e-03`.
pub fn sci3(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.2e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// `digits` significant digits, trailing zeros removed.
pub fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sci3_matches_table_style() {
        assert_eq!(sci3(5.4903e-3), "5.49e-03");
        assert_eq!(sci3(0.0228), "2.28e-02");
        assert_eq!(sci3(1.0), "1.00e+00");
        assert_eq!(sci3(123456.0), "1.23e+05");
        assert_eq!(sci3(0.0), "0.00e+00");
        assert_eq!(sci3(9.996e-3), "1.00e-02");
        assert_eq!(sci3(-2.5e-12), "-2.50e-12");
    }

    #[test]
    fn significant_digits() {
        assert_eq!(significant(0.319389762, 6), "0.31939");
        assert_eq!(significant(0.0, 6), "0");
        assert_eq!(significant(1.0, 6), "1");
        assert_eq!(significant(-0.0512249938, 6), "-0.051225");
        assert_eq!(significant(1234567.0, 3), "1234567");
        assert_eq!(significant(-1e-9, 2), "-0.000000001");
    }
}
