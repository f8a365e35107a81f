//! Exact decimal-friendly rationals for rates and times.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

pub fn int(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn frac(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// Parses `12`, `0.1`, `1e-3`, `2.5E2` exactly.
pub fn parse_decimal(text: &str) -> Result<Q> {
    let bad = || Error::argument(format!("not a decimal number: {text:?}"));
    let s = text.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fraction) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && fraction.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(fraction.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = format!("{whole}{fraction}");
    let n: i128 = all.parse().map_err(|_| bad())?;
    let scale = exp - fraction.len() as i32;
    if scale.unsigned_abs() > 30 {
        return Err(bad());
    }
    let p = 10i128.pow(scale.unsigned_abs());
    let q = if scale >= 0 { int(n * p) } else { frac(n, p) };
    Ok(if neg { -q } else { q })
}

pub fn to_f64(q: &Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Smallest integer `>= q`.
pub fn ceil(q: &Q) -> i128 {
    q.ceil().to_integer()
}

/// Rounds half away from zero to `places` decimals.
pub fn format_fixed(q: &Q, places: u32) -> String {
    let scale = 10i128.pow(places);
    let scaled = (q * int(scale)).round().to_integer();
    let sign = if scaled < 0 { "-" } else { "" };
    let a = scaled.abs();
    if places == 0 {
        return format!("{sign}{a}");
    }
    format!(
        "{sign}{}.{:0width$}",
        a / scale,
        a % scale,
        width = places as usize
    )
}

/// Rounds to `digits` significant figures, never using exponent notation.
pub fn format_significant(q: &Q, digits: u32) -> String {
    assert!(digits >= 1);
    if *q.numer() == 0 {
        return "0".to_string();
    }
    let a = if *q < int(0) { -q } else { *q };
    // Integer digit count of |q|, negative when |q| < 1.
    let mut magnitude: i32 = 0;
    while a >= int(10).pow(magnitude) {
        magnitude += 1;
    }
    while a < int(10).pow(magnitude - 1) {
        magnitude -= 1;
    }
    let places = digits as i32 - magnitude;
    if places >= 0 {
        format_fixed(q, places as u32)
    } else {
        let unit = int(10).pow(-places);
        let r = (q / unit).round() * unit;
        format_fixed(&r, 0)
    }
}
