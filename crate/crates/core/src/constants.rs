//! Certified rational enclosures of `e` and a few related constants.
//!
//! `e` is summed from the factorial series `sum 1/k!` by binary splitting.
//! Truncating after `k = K` leaves a positive tail below `1/(K! K)`, which
//! is used as the enclosure radius.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::{ExactInt, ExactRational};

pub const MAX_DIGITS: u32 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstantsError {
    #[error("digits must lie in 1..={MAX_DIGITS}, got {0}")]
    DigitsOutOfRange(u32),
    #[error("log10 of zero")]
    ZeroArgument,
    #[error("unknown constant {0:?}")]
    UnknownConstant(String),
}

/// A real number known to lie in `[value - radius, value + radius]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedRational {
    pub value: ExactRational,
    pub radius: ExactRational,
}

impl CertifiedRational {
    pub fn exact(value: ExactRational) -> Self {
        CertifiedRational {
            value,
            radius: ExactRational::zero(),
        }
    }

    pub fn from_bounds(lo: ExactRational, hi: ExactRational) -> Self {
        debug_assert!(lo <= hi);
        let two = ExactRational::from_integer(2.into());
        CertifiedRational {
            value: (&lo + &hi) / &two,
            radius: (hi - lo) / two,
        }
    }

    pub fn lower(&self) -> ExactRational {
        &self.value - &self.radius
    }

    pub fn upper(&self) -> ExactRational {
        &self.value + &self.radius
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        (x - &self.value).abs() <= self.radius
    }

    pub fn intersects(&self, other: &CertifiedRational) -> bool {
        (&self.value - &other.value).abs() <= &self.radius + &other.radius
    }

    pub fn add_integer(&self, k: i64) -> Self {
        CertifiedRational {
            value: &self.value + ExactRational::from_integer(k.into()),
            radius: self.radius.clone(),
        }
    }

    /// Interval reciprocal; `None` when the enclosure touches zero.
    pub fn recip(&self) -> Option<Self> {
        let (lo, hi) = (self.lower(), self.upper());
        if lo.is_positive() || hi.is_negative() {
            Some(CertifiedRational::from_bounds(hi.recip(), lo.recip()))
        } else {
            None
        }
    }

    /// Largest distance from `x` to any point of the enclosure.
    pub fn max_distance(&self, x: &ExactRational) -> ExactRational {
        (x - &self.value).abs() + &self.radius
    }
}

/// Binary splitting of `sum_{k=a+1}^{b} x^(k-a) / ((a+1)(a+2)...k)`.
///
/// Returns `(P, Q, T)` where the sum is `P/Q`, `Q = (a+1)(a+2)...b` and
/// `T = x^(b-a)`.
pub(crate) fn split_series(a: u64, b: u64, x: i64) -> (BigInt, BigInt, BigInt) {
    if b - a == 1 {
        return (BigInt::from(x), BigInt::from(b), BigInt::from(x));
    }
    let m = a + (b - a) / 2;
    let (p1, q1, t1) = split_series(a, m, x);
    let (p2, q2, t2) = split_series(m, b, x);
    (p1 * &q2 + &t1 * p2, q1 * q2, t1 * t2)
}

/// `sum_{k=0}^{K} 1/k!` as `(numerator, K!)`.
pub(crate) fn exp_series(terms: u64) -> (BigInt, BigInt) {
    if terms == 0 {
        return (BigInt::one(), BigInt::one());
    }
    let (p, q, _) = split_series(0, terms, 1);
    (&q + p, q)
}

fn truncation_point(digits: u32) -> u64 {
    let mut acc = 0f64;
    let mut k = 1u64;
    loop {
        acc += (k as f64).log10();
        if acc + (k as f64).log10() >= digits as f64 {
            return k;
        }
        k += 1;
    }
}

fn compute_e(digits: u32) -> CertifiedRational {
    let target = Pow::pow(BigInt::from(10u32), digits);
    let mut k = truncation_point(digits);
    loop {
        let (num, fact) = exp_series(k);
        let tail_den = &fact * BigInt::from(k);
        if tail_den >= target {
            return CertifiedRational {
                value: ExactRational::new(num, fact),
                radius: ExactRational::new(BigInt::one(), tail_den),
            };
        }
        k += 1;
    }
}

fn check_digits(digits: u32) -> Result<(), ConstantsError> {
    if (1..=MAX_DIGITS).contains(&digits) {
        Ok(())
    } else {
        Err(ConstantsError::DigitsOutOfRange(digits))
    }
}

/// Enclosure of `e` with radius at most `10^-digits`.
pub fn e_enclosure(digits: u32) -> Result<CertifiedRational, ConstantsError> {
    check_digits(digits)?;
    static CACHE: OnceLock<Mutex<HashMap<u32, CertifiedRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("e cache poisoned").get(&digits) {
        return Ok(hit.clone());
    }
    let e = compute_e(digits);
    cache
        .lock()
        .expect("e cache poisoned")
        .insert(digits, e.clone());
    Ok(e)
}

fn e_minus_1(digits: u32) -> Result<CertifiedRational, ConstantsError> {
    check_digits(digits)?;
    Ok(e_enclosure(digits)?.add_integer(-1))
}

// Reciprocals shrink the radius for these arguments (all exceed 1), so one
// guard digit keeps the result at or below 10^-digits.
fn guarded(digits: u32) -> Result<CertifiedRational, ConstantsError> {
    check_digits(digits)?;
    e_enclosure((digits + 1).min(MAX_DIGITS))
}

fn inv_e_minus_1(digits: u32) -> Result<CertifiedRational, ConstantsError> {
    Ok(guarded(digits)?.add_integer(-1).recip().expect("e - 1 > 0"))
}

fn inv_e(digits: u32) -> Result<CertifiedRational, ConstantsError> {
    Ok(guarded(digits)?.recip().expect("e > 0"))
}

fn e_over_e_minus_1(digits: u32) -> Result<CertifiedRational, ConstantsError> {
    Ok(inv_e_minus_1(digits)?.add_integer(1))
}

pub type ConstantProducer = fn(u32) -> Result<CertifiedRational, ConstantsError>;

/// Named constants the scanner and error tables can target.
pub fn constant_table() -> Vec<(&'static str, ConstantProducer)> {
    vec![
        ("e", e_enclosure as ConstantProducer),
        ("e-1", e_minus_1),
        ("1/(e-1)", inv_e_minus_1),
        ("1/e", inv_e),
        ("e/(e-1)", e_over_e_minus_1),
    ]
}

pub fn constant(name: &str, digits: u32) -> Result<CertifiedRational, ConstantsError> {
    let (_, producer) = constant_table()
        .into_iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| ConstantsError::UnknownConstant(name.to_owned()))?;
    producer(digits)
}

fn log10_int(x: &ExactInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().expect("fits in f64").log10();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().expect("64-bit head");
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

/// `log10 |r|` from the leading bits of numerator and denominator.
pub fn log10_abs(r: &ExactRational) -> Result<f64, ConstantsError> {
    if r.is_zero() {
        return Err(ConstantsError::ZeroArgument);
    }
    Ok(log10_int(r.numer()) - log10_int(r.denom()))
}

/// Number of decimal digits of `|x|` (at least 1).
pub fn decimal_len(x: &ExactInt) -> usize {
    x.abs().to_str_radix(10).len()
}
