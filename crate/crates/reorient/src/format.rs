//! Deterministic float formatting for CLI, CSV, and JSON report output.
//!
//! All interface numbers are printed through [`sig`] so identical inputs
//! produce byte-identical output on every platform.

/// Format `x` to `digits` significant digits in shortest form: fixed
/// notation while the decimal exponent lies in [-4, digits), scientific
/// otherwise; trailing fractional zeros are trimmed.
pub fn sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }

    // Round once via exponential formatting, then restyle.
    let exp_form = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp_str) = exp_form
        .split_once('e')
        .expect("exponential format always contains e");
    let exp: i32 = exp_str.parse().expect("exponent is integral");
    let neg = mantissa.starts_with('-');
    let digits_only: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();

    let body = if exp < -4 || exp >= digits as i32 {
        // Scientific: trim mantissa zeros, keep Rust-style exponent.
        let trimmed = trim_digits(&digits_only);
        let mant = if trimmed.len() == 1 {
            trimmed
        } else {
            format!("{}.{}", &trimmed[..1], &trimmed[1..])
        };
        format!("{mant}e{exp}")
    } else if exp >= 0 {
        // Decimal point inside or just after the significant digits.
        let point = exp as usize + 1;
        if point >= digits_only.len() {
            let mut s = digits_only.clone();
            s.push_str(&"0".repeat(point - digits_only.len()));
            s
        } else {
            let frac = frac_trim(&digits_only[point..]);
            if frac.is_empty() {
                digits_only[..point].to_string()
            } else {
                format!("{}.{}", &digits_only[..point], frac)
            }
        }
    } else {
        // Leading zeros after the point.
        let zeros = (-exp - 1) as usize;
        let frac = format!("{}{}", "0".repeat(zeros), digits_only);
        format!("0.{}", frac_trim(&frac))
    };

    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Trim trailing zeros but keep at least one digit.
fn trim_digits(s: &str) -> String {
    let t = s.trim_end_matches('0');
    if t.is_empty() {
        "0".to_string()
    } else {
        t.to_string()
    }
}

/// Trim trailing zeros in a fractional part; empty result means the
/// fraction was all zeros (caller drops the point).
fn frac_trim(s: &str) -> String {
    s.trim_end_matches('0').to_string()
}
