/// Formats `v` with 9 significant digits, dropping trailing zeros. Switches to
/// exponent notation outside `[1e-5, 1e9)`.
pub fn sig9(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0".into();
    }
    // the exponent after rounding to 9 digits, so 9.999999999 becomes 1e1
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn sig9_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| sig9(x)).collect();
    format!("[{}]", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(std::f64::consts::SQRT_2), "1.41421356");
        assert_eq!(sig9((5.0f64 / 3.0).sqrt()), "1.29099445");
        assert_eq!(sig9(1.5), "1.5");
        assert_eq!(sig9(0.25), "0.25");
        assert_eq!(sig9(-2.0), "-2");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(123456789.4), "123456789");
        assert_eq!(sig9(9.9999999999), "10");
        assert_eq!(sig9(1.0e-7), "1e-7");
        assert_eq!(sig9(6.02214076e23), "6.02214076e23");
        assert_eq!(sig9(f64::INFINITY), "inf");
    }
}
