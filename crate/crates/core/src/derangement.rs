//! Factorials and subfactorials.
//!
//! `!n` counts permutations of `n` elements with no fixed point. It is
//! computed here four independent ways (two recurrences, the alternating
//! inclusion–exclusion sum and rounding `n!/e`) so the methods can check
//! one another, plus a floating-point quadrature of
//! `!n = ∫_0^∞ (x-1)^n e^{-x} dx`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::constants::{decimal_len, e_enclosure, split_series, CertifiedRational, ConstantsError, MAX_DIGITS};
use crate::laguerre::GaussLaguerre;
use crate::{ExactInt, ExactRational};

/// Largest `n` accepted by [`subfactorial_integral`].
pub const MAX_QUADRATURE_DEGREE: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerangementError {
    #[error("alternating sum for !{0} did not reduce to an integer")]
    NonIntegralResult(u32),
    #[error("enclosure of e too wide to round {0}!/e unambiguously")]
    InsufficientPrecision(u32),
    #[error("{nodes} nodes cannot integrate degree {degree} exactly; need at least {needed}")]
    TooFewNodes { degree: u32, nodes: usize, needed: usize },
    #[error("degree {0} exceeds the quadrature limit of {MAX_QUADRATURE_DEGREE}")]
    UnsupportedDegree(u32),
    #[error("Gauss-Laguerre rule with {0} nodes did not converge")]
    QuadratureFailed(usize),
    #[error("derangement probability needs at least one element")]
    EmptySet,
    #[error(transparent)]
    Constants(#[from] ConstantsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Rec1,
    Rec2,
    Sum,
    Nearest,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Rec1, Method::Rec2, Method::Sum, Method::Nearest];

    pub fn name(self) -> &'static str {
        match self {
            Method::Rec1 => "rec1",
            Method::Rec2 => "rec2",
            Method::Sum => "sum",
            Method::Nearest => "nearest",
        }
    }

    pub fn compute(self, n: u32) -> Result<ExactInt, DerangementError> {
        match self {
            Method::Rec1 => Ok(subfactorial_rec1(n)),
            Method::Rec2 => Ok(subfactorial_rec2(n)),
            Method::Sum => subfactorial_sum(n),
            Method::Nearest => subfactorial_nearest_auto(n),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

pub fn factorial(n: u32) -> ExactInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `!n = n·!(n-1) + (-1)^n`, `!0 = 1`.
pub fn subfactorial_rec1(n: u32) -> ExactInt {
    (1..=n).fold(BigInt::one(), |acc, k| {
        let next = acc * k;
        if k % 2 == 0 {
            next + 1
        } else {
            next - 1
        }
    })
}

/// `!n = (n-1)(!(n-1) + !(n-2))`, `!0 = 1`, `!1 = 0`.
pub fn subfactorial_rec2(n: u32) -> ExactInt {
    let (mut prev, mut cur) = (BigInt::one(), BigInt::zero());
    if n == 0 {
        return prev;
    }
    for k in 2..=n {
        let next = (&cur + &prev) * (k - 1);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `!n = n! · sum_{k=0}^{n} (-1)^k / k!` in exact rationals.
///
/// The alternating sum is formed by binary splitting, so partial sums are
/// combined pairwise rather than one term at a time.
pub fn subfactorial_sum(n: u32) -> Result<ExactInt, DerangementError> {
    let sum = if n == 0 {
        ExactRational::one()
    } else {
        let (p, q, _) = split_series(0, n as u64, -1);
        ExactRational::new(&q + p, q)
    };
    let total = sum * ExactRational::from_integer(factorial(n));
    if total.is_integer() {
        Ok(total.to_integer())
    } else {
        Err(DerangementError::NonIntegralResult(n))
    }
}

/// `!n = ⌊n!/e + 1/2⌋`, evaluated on both ends of the enclosure.
///
/// The rounding formula gives 0 at `n = 0` while `!0 = 1`, so `n = 0` is
/// answered directly.
pub fn subfactorial_nearest(n: u32, e_ref: &CertifiedRational) -> Result<ExactInt, DerangementError> {
    if n == 0 {
        return Ok(BigInt::one());
    }
    let (lo, hi) = (e_ref.lower(), e_ref.upper());
    if lo <= ExactRational::zero() {
        return Err(DerangementError::InsufficientPrecision(n));
    }
    let fact = ExactRational::from_integer(factorial(n));
    let half = ExactRational::new(1.into(), 2.into());
    let round = |x: ExactRational| (x + &half).floor().to_integer();
    let from_hi = round(&fact / hi);
    let from_lo = round(&fact / lo);
    if from_hi == from_lo {
        Ok(from_hi)
    } else {
        Err(DerangementError::InsufficientPrecision(n))
    }
}

/// [`subfactorial_nearest`] with `e` taken to `len(n!) + 10` digits.
pub fn subfactorial_nearest_auto(n: u32) -> Result<ExactInt, DerangementError> {
    let digits = (decimal_len(&factorial(n)) + 10).min(MAX_DIGITS as usize) as u32;
    subfactorial_nearest(n, &e_enclosure(digits)?)
}

/// Gauss–Laguerre estimate of `∫_0^∞ (x-1)^n e^{-x} dx`.
pub fn subfactorial_integral(n: u32, nodes: usize) -> Result<f64, DerangementError> {
    if n > MAX_QUADRATURE_DEGREE {
        return Err(DerangementError::UnsupportedDegree(n));
    }
    let needed = (n as usize + 2) / 2;
    if nodes < needed {
        return Err(DerangementError::TooFewNodes {
            degree: n,
            nodes,
            needed,
        });
    }
    let rule = GaussLaguerre::new(nodes).ok_or(DerangementError::QuadratureFailed(nodes))?;
    Ok(rule.integrate(|x| (x - 1.0).powi(n as i32)))
}

/// `|estimate - !n| / max(!n, 1)`; the floor of 1 keeps `!1 = 0` meaningful.
pub fn quadrature_relative_error(n: u32, estimate: f64) -> f64 {
    let exact = subfactorial_rec1(n).to_f64().expect("!20 fits in f64");
    (estimate - exact).abs() / exact.abs().max(1.0)
}

/// Probability `!n / n!` that a random permutation of `n` elements is a
/// derangement.
pub fn derangement_probability(n: u32) -> Result<ExactRational, DerangementError> {
    if n == 0 {
        return Err(DerangementError::EmptySet);
    }
    Ok(ExactRational::new(subfactorial_rec1(n), factorial(n)))
}

/// `!0..=!n_max` produced by a single method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubfactorialTable {
    pub values: Vec<ExactInt>,
    pub method: Method,
}

impl SubfactorialTable {
    pub fn build(n_max: u32, method: Method) -> Result<Self, DerangementError> {
        let values = match method {
            // one pass of the recurrence rather than n_max restarts
            Method::Rec1 => {
                let mut v = Vec::with_capacity(n_max as usize + 1);
                v.push(BigInt::one());
                for k in 1..=n_max {
                    let next = v.last().unwrap() * k;
                    v.push(if k % 2 == 0 { next + 1 } else { next - 1 });
                }
                v
            }
            Method::Rec2 => {
                let mut v = vec![BigInt::one()];
                if n_max >= 1 {
                    v.push(BigInt::zero());
                }
                for k in 2..=n_max as usize {
                    let next = (&v[k - 1] + &v[k - 2]) * (k - 1);
                    v.push(next);
                }
                v
            }
            other => (0..=n_max).map(|n| other.compute(n)).collect::<Result<_, _>>()?,
        };
        Ok(SubfactorialTable { values, method })
    }
}
