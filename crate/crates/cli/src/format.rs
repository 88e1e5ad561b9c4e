//! Locale-independent number formatting for CSV output.

/// Formats `x` with `digits` significant digits using the rules of C's `%g`:
/// fixed notation when the decimal exponent lies in `[-4, digits)`,
/// scientific otherwise, trailing zeros removed.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "Inf".into() } else { "-Inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

/// Nine significant digits, the precision used in every CSV column.
pub fn num(x: f64) -> String {
    sig(x, 9)
}

pub fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), num)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
