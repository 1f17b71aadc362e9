//! Number rendering shared by the CSV writers and the CLI.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Signed};

use crate::ExactRational;

/// Formats `x` in positional notation with `sig` significant digits.
///
/// Rounding is done by the standard library on the exact binary value, so
/// ties round to even.
pub fn significant(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 || !x.is_finite() {
        return format!("{:.*}", sig - 1, x);
    }
    let exp = x.abs().log10().floor() as i32;
    let render = |exp: i32| {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    };
    let s = render(exp);
    // rounding can carry into a new leading digit (9.9999999996 -> 10.00000000)
    let digits = s.chars().filter(|c| c.is_ascii_digit()).skip_while(|&c| c == '0').count();
    if digits > sig && exp < sig as i32 - 1 {
        render(exp + 1)
    } else {
        s
    }
}

/// The 9-significant-digit rendering used in CSV output.
pub fn sig9(x: f64) -> String {
    significant(x, 9)
}

/// Decimal expansion of `r` rounded half away from zero to `places`
/// fractional digits.
pub fn decimal(r: &ExactRational, places: usize) -> String {
    let scale = Pow::pow(BigInt::from(10u32), places);
    let scaled = r.abs() * ExactRational::from_integer(scale.clone());
    let twice = scaled.numer() * 2u32 + scaled.denom();
    let rounded = twice.div_floor(&(scaled.denom() * 2u32));
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && rounded.is_positive() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = places)
    }
}
