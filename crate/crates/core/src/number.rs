//! Number parsing and fixed-precision formatting shared by the file formats.

use crate::error::{Error, Result};

/// Parses a decimal (`0.25`, `1e-3`) or an exact fraction (`29/9`, `-3/4`).
pub fn parse_number(text: &str) -> Result<f64> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in `{text}`")))?;
            let den: f64 = den
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in `{text}`")))?;
            if den == 0.0 {
                return Err(Error::Parse(format!("zero denominator in `{text}`")));
            }
            num / den
        }
        None => text
            .parse()
            .map_err(|_| Error::Parse(format!("`{text}` is not a number")))?,
    };
    if !value.is_finite() {
        return Err(Error::Parse(format!("`{text}` is not finite")));
    }
    Ok(value)
}

/// Significant digits used in every rendered report.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `v` with 12 significant digits, trailing zeros trimmed.
///
/// Plain decimal notation is used for decimal exponents in `-6..=14`,
/// scientific notation otherwise. Negative zero renders as `0`.
pub fn format_sig(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific formatting");
    let exp: i32 = exp.parse().expect("exponent");
    if (-6..=14).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, v))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

/// `v` rounded to 12 significant digits.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return if v == 0.0 { 0.0 } else { v };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .expect("round trip of formatted float")
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed == "-0" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}
