//! `%.17g`-style float formatting: 17 significant digits, fixed or
//! scientific notation by decimal exponent, trailing zeros trimmed.
//! Locale-independent and lossless (17 significant digits round-trip f64).

/// Format `x` like C's `printf("%.17g", x)`.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    if x == 0.0 {
        return "0".to_string();
    }
    // decimal exponent from the normalized scientific form
    let sci = format!("{:.16e}", x);
    let (_, exp_part) = sci
        .split_once('e')
        .expect("scientific form has an exponent");
    let exp: i32 = exp_part.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let (mantissa, _) = sci.split_once('e').unwrap();
        let mantissa = trim_trailing_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            trim_trailing_zeros(&fixed).to_string()
        } else {
            fixed
        }
    }
}

fn trim_trailing_zeros(s: &str) -> &str {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.')
}
