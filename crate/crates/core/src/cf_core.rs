//! Generalized continued fractions and their convergents.
//!
//! A generalized continued fraction is written in concise form as
//!
//! ```text
//! b0 + a1/(b1+) a2/(b2+) a3/(b3+) ...
//! ```
//!
//! and its convergents `p_n / q_n` follow the three-term recurrence
//!
//! ```text
//! p_k = b_k p_{k-1} + a_k p_{k-2}
//! q_k = b_k q_{k-1} + a_k q_{k-2}
//! ```
//!
//! started from `(p_{-1}, q_{-1}) = (1, 0)` and `(p_0, q_0) = (b0, 1)`.
//! Convergents are kept exactly as the recurrence produces them; nothing is
//! reduced until [`evaluate`] is called.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

use crate::cf_invert;
use crate::{ExactInt, ExactRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("partial numerator a_{0} is zero")]
    ZeroPartialNumerator(u64),
    #[error("explicit term list has {available} terms, {requested} requested")]
    InsufficientTerms { available: usize, requested: usize },
    #[error("convergent {0} has zero denominator")]
    UndefinedConvergent(i64),
    #[error("coefficient {index} is not positive, so the expansion is not simple")]
    NotSimple { index: usize },
    #[error("a simple continued fraction needs at least one coefficient")]
    EmptySimple,
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("term {0} of the power-ratio expansion could not be recovered")]
    DegenerateFamily(u64),
}

/// One partial numerator/denominator pair `(a_k, b_k)`, `k >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GcfTerm {
    pub index: u64,
    pub a: ExactInt,
    pub b: ExactInt,
}

impl GcfTerm {
    pub fn new(index: u64, a: impl Into<ExactInt>, b: impl Into<ExactInt>) -> Self {
        GcfTerm {
            index,
            a: a.into(),
            b: b.into(),
        }
    }
}

/// The named expansions of `e` and `1/(e-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Euler's simple continued fraction `[2; 1, 2, 1, 1, 4, 1, 1, 6, ...]`.
    Euler,
    /// `1 + 1/(0+) 1/(1+) 2/(2+) 3/(3+) ...`, whose convergents are `n! / !n`.
    DerangementRaw,
    /// `2 + 2/(2+) 3/(3+) 4/(4+) ...`.
    DerangementElegant,
    /// `1/(1+) 2/(2+) 3/(3+) ...`, converging to `1/(e-1)`.
    InvEMinus1,
    /// The expansion whose convergents are `(n+1)^n / n^n`.
    PowerRatio,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Euler,
        Family::DerangementRaw,
        Family::DerangementElegant,
        Family::InvEMinus1,
        Family::PowerRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Euler => "euler",
            Family::DerangementRaw => "derangement-raw",
            Family::DerangementElegant => "derangement-elegant",
            Family::InvEMinus1 => "inv-e-minus-1",
            Family::PowerRatio => "power-ratio",
        }
    }

    pub fn b0(self) -> ExactInt {
        match self {
            Family::Euler | Family::DerangementElegant => BigInt::from(2),
            Family::DerangementRaw | Family::PowerRatio => BigInt::one(),
            Family::InvEMinus1 => BigInt::zero(),
        }
    }

    /// Term `k >= 1` of the families with a closed-form coefficient rule.
    fn closed_form_term(self, k: u64) -> Option<GcfTerm> {
        let term = match self {
            Family::Euler => {
                let b = if k % 3 == 2 { 2 * (k + 1) / 3 } else { 1 };
                GcfTerm::new(k, 1, b)
            }
            Family::DerangementRaw => {
                if k == 1 {
                    GcfTerm::new(1, 1, 0)
                } else {
                    GcfTerm::new(k, k - 1, k - 1)
                }
            }
            Family::DerangementElegant => GcfTerm::new(k, k + 1, k + 1),
            Family::InvEMinus1 => GcfTerm::new(k, k, k),
            Family::PowerRatio => return None,
        };
        Some(term)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|fam| fam.name() == s)
            .ok_or_else(|| CfError::UnknownFamily(s.to_owned()))
    }
}

/// `a_n = alpha*n + beta`, `b_n = gamma*n + delta` for `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineRule {
    pub alpha: ExactInt,
    pub beta: ExactInt,
    pub gamma: ExactInt,
    pub delta: ExactInt,
}

impl AffineRule {
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        AffineRule {
            alpha: alpha.into(),
            beta: beta.into(),
            gamma: gamma.into(),
            delta: delta.into(),
        }
    }

    pub fn a(&self, n: u64) -> ExactInt {
        &self.alpha * BigInt::from(n) + &self.beta
    }

    pub fn b(&self, n: u64) -> ExactInt {
        &self.gamma * BigInt::from(n) + &self.delta
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermSource {
    ExplicitList(Vec<GcfTerm>),
    Family(Family),
    AffineRule(AffineRule),
}

/// A full expansion: leading term plus a source of `(a_k, b_k)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcfSpec {
    pub b0: ExactInt,
    pub source: TermSource,
}

impl GcfSpec {
    pub fn family(family: Family) -> Self {
        GcfSpec {
            b0: family.b0(),
            source: TermSource::Family(family),
        }
    }

    pub fn affine(b0: impl Into<ExactInt>, rule: AffineRule) -> Self {
        GcfSpec {
            b0: b0.into(),
            source: TermSource::AffineRule(rule),
        }
    }

    /// Builds an explicit expansion from `(a_k, b_k)` pairs, indexed from 1.
    pub fn explicit<I, A, B>(b0: impl Into<ExactInt>, pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<ExactInt>,
        B: Into<ExactInt>,
    {
        let terms = pairs
            .into_iter()
            .zip(1u64..)
            .map(|((a, b), k)| GcfTerm::new(k, a, b))
            .collect();
        GcfSpec {
            b0: b0.into(),
            source: TermSource::ExplicitList(terms),
        }
    }

    /// Short label used for reporting.
    pub fn label(&self) -> String {
        match &self.source {
            TermSource::Family(f) => f.name().to_owned(),
            TermSource::ExplicitList(_) => "explicit".to_owned(),
            TermSource::AffineRule(_) => "affine".to_owned(),
        }
    }
}

/// `(p_n, q_n)` at index `n`; index `-1` is the `(1, 0)` sentinel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Convergent {
    pub index: i64,
    pub p: ExactInt,
    pub q: ExactInt,
}

impl Convergent {
    pub fn sentinel() -> Self {
        Convergent {
            index: -1,
            p: BigInt::one(),
            q: BigInt::zero(),
        }
    }

    pub fn is_defined(&self) -> bool {
        !self.q.is_zero()
    }

    pub fn value(&self) -> Result<ExactRational, CfError> {
        evaluate(self)
    }
}

/// First `n_terms` partial numerator/denominator pairs of `spec`.
pub fn terms(spec: &GcfSpec, n_terms: usize) -> Result<Vec<GcfTerm>, CfError> {
    match &spec.source {
        TermSource::ExplicitList(list) => {
            if list.len() < n_terms {
                return Err(CfError::InsufficientTerms {
                    available: list.len(),
                    requested: n_terms,
                });
            }
            list[..n_terms]
                .iter()
                .zip(1u64..)
                .map(|(t, k)| {
                    if t.a.is_zero() {
                        Err(CfError::ZeroPartialNumerator(k))
                    } else {
                        Ok(GcfTerm::new(k, t.a.clone(), t.b.clone()))
                    }
                })
                .collect()
        }
        TermSource::AffineRule(rule) => (1..=n_terms as u64)
            .map(|k| {
                let a = rule.a(k);
                if a.is_zero() {
                    Err(CfError::ZeroPartialNumerator(k))
                } else {
                    Ok(GcfTerm::new(k, a, rule.b(k)))
                }
            })
            .collect(),
        TermSource::Family(Family::PowerRatio) => power_ratio_terms(n_terms),
        TermSource::Family(family) => Ok((1..=n_terms as u64)
            .map(|k| family.closed_form_term(k).expect("closed-form family"))
            .collect()),
    }
}

/// Integer coefficients of the power-ratio expansion, obtained by inverting
/// its convergents and clearing denominators level by level.
fn power_ratio_terms(n_terms: usize) -> Result<Vec<GcfTerm>, CfError> {
    if n_terms == 0 {
        return Ok(Vec::new());
    }
    let (p, q): (Vec<_>, Vec<_>) = (0..=n_terms as u64).map(power_ratio_pair).unzip();
    let inverted = cf_invert::invert(&p, &q).map_err(|e| match e {
        cf_invert::InvertError::DegenerateAt(n) => CfError::DegenerateFamily(n as u64),
        _ => CfError::DegenerateFamily(0),
    })?;
    Ok(inverted.integer_form())
}

fn power_ratio_pair(n: u64) -> (ExactInt, ExactInt) {
    let n_big = BigInt::from(n);
    let p = Pow::pow(&(&n_big + 1u32), n);
    let q = if n == 0 { BigInt::one() } else { Pow::pow(&n_big, n) };
    (p, q)
}

/// Convergents with indices `0..=n_max`, straight from the recurrence.
///
/// The power-ratio family is defined by its convergents, so it yields
/// `((n+1)^n, n^n)` directly.
pub fn convergents(spec: &GcfSpec, n_max: usize) -> Result<Vec<Convergent>, CfError> {
    if let TermSource::Family(Family::PowerRatio) = spec.source {
        return Ok((0..=n_max as u64)
            .map(|n| {
                let (p, q) = power_ratio_pair(n);
                Convergent {
                    index: n as i64,
                    p,
                    q,
                }
            })
            .collect());
    }
    let ts = terms(spec, n_max)?;
    Ok(convergents_from_terms(&spec.b0, &ts))
}

/// Runs the recurrence over an already materialized term list.
pub fn convergents_from_terms(b0: &ExactInt, ts: &[GcfTerm]) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(ts.len() + 1);
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (b0.clone(), BigInt::one());
    out.push(Convergent {
        index: 0,
        p: p.clone(),
        q: q.clone(),
    });
    for (k, t) in ts.iter().enumerate() {
        let p_next = &t.b * &p + &t.a * &p_prev;
        let q_next = &t.b * &q + &t.a * &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Convergent {
            index: k as i64 + 1,
            p: p.clone(),
            q: q.clone(),
        });
    }
    out
}

/// `p / q` in lowest terms.
pub fn evaluate(c: &Convergent) -> Result<ExactRational, CfError> {
    if c.q.is_zero() {
        return Err(CfError::UndefinedConvergent(c.index));
    }
    let g = c.p.gcd(&c.q);
    let (mut num, mut den) = (&c.p / &g, &c.q / &g);
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    Ok(ExactRational::new_raw(num, den))
}

/// `[c0; c1, c2, ...]` as a generalized continued fraction with unit
/// partial numerators.
pub fn simple_to_gcf(coeffs: &[ExactInt]) -> Result<GcfSpec, CfError> {
    let (b0, rest) = coeffs.split_first().ok_or(CfError::EmptySimple)?;
    if let Some(pos) = rest.iter().position(|c| !c.is_positive()) {
        return Err(CfError::NotSimple { index: pos + 1 });
    }
    Ok(GcfSpec::explicit(
        b0.clone(),
        rest.iter().map(|c| (BigInt::one(), c.clone())),
    ))
}
