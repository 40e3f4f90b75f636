//! Text formatting of floating-point values.

/// Formats `value` like C's `%.17g`: 17 significant digits, trailing zeros
/// dropped, scientific notation outside `1e-4 <= |x| < 1e17`.
///
/// Seventeen digits are enough for every `f64` to survive a text round trip.
/// Negative zero prints as `0`.
pub fn g17(value: f64) -> String {
    if value.is_nan() {
        return "nan".into();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if value == 0.0 {
        return "0".into();
    }
    let sci = format!("{value:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        strip_zeros(&format!("{value:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Joins values with `sep` after formatting each with [`g17`].
pub fn join_g17(values: &[f64], sep: &str) -> String {
    values.iter().map(|v| g17(*v)).collect::<Vec<_>>().join(sep)
}
