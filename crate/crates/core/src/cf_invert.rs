//! Recovering partial numerators and denominators from convergents.
//!
//! Given numerators `p_0..p_{L-1}` and denominators `q_0..q_{L-1}`, the
//! starting values are `b0 = p_0`, `b1 = q_1`, `a1 = p_1 - b0*q_1`, and for
//! `n >= 2`
//!
//! ```text
//!        p_{n-1} q_n - p_n q_{n-1}              p_n q_{n-2} - p_{n-2} q_n
//! a_n = ---------------------------     b_n = ---------------------------
//!       p_{n-1} q_{n-2} - p_{n-2} q_{n-1}     p_{n-1} q_{n-2} - p_{n-2} q_{n-1}
//! ```
//!
//! The quotients need not be integers. [`InversionResult::integer_form`]
//! applies the equivalence transformation that clears denominators one
//! level at a time.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cf_core::GcfTerm;
use crate::{ExactInt, ExactRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvertError {
    #[error("numerator and denominator sequences differ in length ({p} vs {q})")]
    LengthMismatch { p: usize, q: usize },
    #[error("need at least two convergents, got {0}")]
    TooShort(usize),
    #[error("degenerate at n={0}")]
    DegenerateAt(usize),
}

/// One recovered `(a_n, b_n)` pair for `n >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertedTerm {
    pub index: usize,
    pub a: ExactRational,
    pub b: ExactRational,
    pub integral: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionResult {
    pub b0: ExactInt,
    pub a1: ExactInt,
    pub b1: ExactInt,
    pub tail: Vec<InvertedTerm>,
}

impl InversionResult {
    pub fn is_integral(&self) -> bool {
        self.tail.iter().all(|t| t.integral)
    }

    /// All recovered pairs from index 1 on, as exact rationals.
    pub fn coefficients(&self) -> Vec<(ExactRational, ExactRational)> {
        std::iter::once((
            ExactRational::from_integer(self.a1.clone()),
            ExactRational::from_integer(self.b1.clone()),
        ))
        .chain(self.tail.iter().map(|t| (t.a.clone(), t.b.clone())))
        .collect()
    }

    /// Equivalent expansion with integer coefficients.
    ///
    /// Level `n` is scaled by the smallest positive `c_n` that makes both
    /// `c_{n-1} c_n a_n` and `c_n b_n` integers (`c_0 = c_1 = 1`). When the
    /// input is already integral this is the identity.
    pub fn integer_form(&self) -> Vec<GcfTerm> {
        let mut out = vec![GcfTerm::new(1, self.a1.clone(), self.b1.clone())];
        let mut prev_scale = BigInt::one();
        for t in &self.tail {
            let a = &t.a * ExactRational::from_integer(prev_scale.clone());
            let scale = a.denom().lcm(t.b.denom());
            let a = (a * ExactRational::from_integer(scale.clone())).to_integer();
            let b = (&t.b * ExactRational::from_integer(scale.clone())).to_integer();
            out.push(GcfTerm::new(t.index as u64, a, b));
            prev_scale = scale;
        }
        out
    }

    /// Runs the forward recurrence over the recovered rational
    /// coefficients, returning `(p_n, q_n)` for `n = 0..=tail.len()+1`.
    pub fn reconstruct(&self) -> Vec<(ExactRational, ExactRational)> {
        let one = ExactRational::one();
        let zero = ExactRational::zero();
        let mut out = Vec::with_capacity(self.tail.len() + 2);
        let (mut p_prev, mut q_prev) = (one.clone(), zero);
        let (mut p, mut q) = (ExactRational::from_integer(self.b0.clone()), one);
        out.push((p.clone(), q.clone()));
        for (a, b) in self.coefficients() {
            let p_next = &b * &p + &a * &p_prev;
            let q_next = &b * &q + &a * &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            out.push((p.clone(), q.clone()));
        }
        out
    }
}

/// Inverts raw convergent numerators and denominators.
///
/// Common factors shared by `p_n` and `q_n` matter here: the same ratios
/// given in lowest terms generally produce different coefficients.
pub fn invert(p: &[ExactInt], q: &[ExactInt]) -> Result<InversionResult, InvertError> {
    if p.len() != q.len() {
        return Err(InvertError::LengthMismatch {
            p: p.len(),
            q: q.len(),
        });
    }
    if p.len() < 2 {
        return Err(InvertError::TooShort(p.len()));
    }
    let b0 = p[0].clone();
    let b1 = q[1].clone();
    let a1 = &p[1] - &b0 * &q[1];
    let mut tail = Vec::with_capacity(p.len().saturating_sub(2));
    for n in 2..p.len() {
        let det = &p[n - 1] * &q[n - 2] - &p[n - 2] * &q[n - 1];
        if det.is_zero() {
            return Err(InvertError::DegenerateAt(n));
        }
        let a_num = &p[n - 1] * &q[n] - &p[n] * &q[n - 1];
        let b_num = &p[n] * &q[n - 2] - &p[n - 2] * &q[n];
        let a = ExactRational::new(a_num, det.clone());
        let b = ExactRational::new(b_num, det);
        let integral = a.is_integer() && b.is_integer();
        tail.push(InvertedTerm {
            index: n,
            a,
            b,
            integral,
        });
    }
    Ok(InversionResult { b0, a1, b1, tail })
}

/// Inverts a sequence of convergent values, using each reduced numerator
/// and denominator as `(p_n, q_n)`.
pub fn invert_rationals(r: &[ExactRational]) -> Result<InversionResult, InvertError> {
    let (p, q): (Vec<_>, Vec<_>) = r.iter().map(|x| (x.numer().clone(), x.denom().clone())).unzip();
    invert(&p, &q)
}
