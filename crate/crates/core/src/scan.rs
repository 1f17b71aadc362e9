//! Brute-force search for affine continued fractions matching known
//! constants.
//!
//! Every rule `b0 + a_1/(b_1+) a_2/(b_2+) ...` with `a_n = alpha*n + beta`,
//! `b_n = gamma*n + delta` and all five coefficients in `-L..=L` is run to
//! a fixed depth. A rule becomes a hit when its convergent at `depth` has
//! settled (agrees with the one at `depth/2`) and lies within
//! `10^-match_digits` of a constant from [`constant_table`], and still does
//! at `2*depth`.

use std::io::{self, Write};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::constants::{constant, constant_table, log10_abs, CertifiedRational, ConstantsError};
use crate::format::sig9;
use crate::{ExactInt, ExactRational};

/// Upper limit on `(2L+1)^5`.
pub const MAX_CELLS: u64 = 10_000_000;
pub const MIN_DEPTH: usize = 10;
pub const MIN_MATCH_DIGITS: u32 = 10;
/// Extra digits carried by the reference constants beyond the match bar.
const GUARD_DIGITS: u32 = 10;

pub const HITS_HEADER: &str = "b0,alpha,beta,gamma,delta,constant,residual_log10";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("grid has {0} cells, more than the limit of {MAX_CELLS}")]
    GridTooLarge(u64),
    #[error("depth must be at least {MIN_DEPTH}, got {0}")]
    DepthTooSmall(usize),
    #[error("match digits must lie in {MIN_MATCH_DIGITS}..={max}, got {got}")]
    MatchDigits { got: u32, max: u32 },
    #[error("verification needs more than {match_digits} digits, got {digits}")]
    VerifyDigits { digits: u32, match_digits: u32 },
    #[error(transparent)]
    Constants(#[from] ConstantsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanGrid {
    /// Each coefficient ranges over `-bound..=bound`.
    pub bound: u32,
    pub depth: usize,
    pub match_digits: u32,
}

impl ScanGrid {
    pub fn cell_count(&self) -> u64 {
        (2 * self.bound as u64 + 1).saturating_pow(5)
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        let cells = self.cell_count();
        if cells > MAX_CELLS {
            return Err(ScanError::GridTooLarge(cells));
        }
        if self.depth < MIN_DEPTH {
            return Err(ScanError::DepthTooSmall(self.depth));
        }
        let max = crate::constants::MAX_DIGITS - 2 * GUARD_DIGITS;
        if !(MIN_MATCH_DIGITS..=max).contains(&self.match_digits) {
            return Err(ScanError::MatchDigits {
                got: self.match_digits,
                max,
            });
        }
        Ok(())
    }

    fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        let l = self.bound as i64;
        let side = 2 * l + 1;
        (0..self.cell_count() as i64).map(move |mut idx| {
            let mut next = || {
                let v = idx % side - l;
                idx /= side;
                v
            };
            let (delta, gamma, beta, alpha, b0) = (next(), next(), next(), next(), next());
            Rule {
                b0,
                alpha,
                beta,
                gamma,
                delta,
            }
        })
    }
}

/// `b0` plus `a_n = alpha*n + beta`, `b_n = gamma*n + delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub b0: i64,
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
}

impl Rule {
    pub fn new(b0: i64, alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        Rule {
            b0,
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    /// True if `a_n = 0` for some `1 <= n <= up_to`.
    fn has_zero_numerator(&self, up_to: usize) -> bool {
        if self.alpha == 0 {
            return self.beta == 0;
        }
        self.beta % self.alpha == 0 && {
            let n = -self.beta / self.alpha;
            n >= 1 && n as usize <= up_to
        }
    }

    fn walk(&self) -> Walk {
        Walk {
            rule: *self,
            n: 0,
            p_prev: BigInt::one(),
            q_prev: BigInt::zero(),
            p: BigInt::from(self.b0),
            q: BigInt::one(),
        }
    }
}

/// Streams convergents of a rule.
struct Walk {
    rule: Rule,
    n: usize,
    p_prev: ExactInt,
    q_prev: ExactInt,
    p: ExactInt,
    q: ExactInt,
}

impl Walk {
    fn advance_to(&mut self, target: usize) {
        while self.n < target {
            self.n += 1;
            let n = self.n as i64;
            let a = BigInt::from(self.rule.alpha * n + self.rule.beta);
            let b = BigInt::from(self.rule.gamma * n + self.rule.delta);
            let p_next = &b * &self.p + &a * &self.p_prev;
            let q_next = &b * &self.q + &a * &self.q_prev;
            self.p_prev = std::mem::replace(&mut self.p, p_next);
            self.q_prev = std::mem::replace(&mut self.q, q_next);
        }
    }

    fn value(&self) -> Option<ExactRational> {
        (!self.q.is_zero()).then(|| ExactRational::new(self.p.clone(), self.q.clone()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureHit {
    pub rule: Rule,
    pub constant: String,
    /// `log10` of the worst-case distance from `r_{2 depth}` to the
    /// constant's enclosure.
    pub residual_log10: f64,
    pub stability: bool,
    pub depth: usize,
    pub match_digits: u32,
}

fn tolerance(digits: u32) -> ExactRational {
    ExactRational::new(BigInt::one(), Pow::pow(BigInt::from(10u32), digits))
}

fn reference_constants(digits: u32) -> Result<Vec<(&'static str, CertifiedRational)>, ConstantsError> {
    constant_table()
        .into_iter()
        .map(|(name, producer)| producer(digits).map(|c| (name, c)))
        .collect()
}

fn scan_rule(rule: Rule, grid: &ScanGrid, consts: &[(&'static str, CertifiedRational)], tol: &ExactRational) -> Vec<ConjectureHit> {
    let depth = grid.depth;
    if rule.has_zero_numerator(2 * depth) {
        return Vec::new();
    }
    let mut walk = rule.walk();
    walk.advance_to(depth / 2);
    let (p_half, q_half) = (walk.p.clone(), walk.q.clone());
    walk.advance_to(depth);
    if q_half.is_zero() || walk.q.is_zero() {
        return Vec::new();
    }
    // |p_d/q_d - p_h/q_h| <= tol, cross-multiplied
    let spread = ExactRational::new((&walk.p * &q_half - &p_half * &walk.q).abs(), (&walk.q * &q_half).abs());
    if &spread > tol {
        return Vec::new();
    }
    let r = walk.value().expect("nonzero denominator");
    let matched: Vec<_> = consts.iter().filter(|(_, c)| &c.max_distance(&r) < tol).collect();
    if matched.is_empty() {
        return Vec::new();
    }
    walk.advance_to(2 * depth);
    let Some(r2) = walk.value() else {
        return Vec::new();
    };
    matched
        .into_iter()
        .filter_map(|(name, c)| {
            let residual = c.max_distance(&r2);
            (&residual < tol).then(|| ConjectureHit {
                rule,
                constant: (*name).to_owned(),
                residual_log10: log10_abs(&residual).expect("radius is positive"),
                stability: true,
                depth,
                match_digits: grid.match_digits,
            })
        })
        .collect()
}

/// Runs the whole grid. Output is sorted by rule, then constant name, and
/// does not depend on thread scheduling.
pub fn run_scan(grid: &ScanGrid) -> Result<Vec<ConjectureHit>, ScanError> {
    grid.validate()?;
    let consts = reference_constants(grid.match_digits + GUARD_DIGITS)?;
    let tol = tolerance(grid.match_digits);
    let rules: Vec<Rule> = grid.rules().collect();
    let mut hits: Vec<ConjectureHit> = rules
        .into_par_iter()
        .flat_map_iter(|rule| scan_rule(rule, grid, &consts, &tol))
        .collect();
    hits.sort_by(|a, b| (a.rule, &a.constant).cmp(&(b.rule, &b.constant)));
    hits.dedup_by(|a, b| a.rule == b.rule && a.constant == b.constant);
    Ok(hits)
}

/// Re-checks a hit at `2x` and `4x` its depth against a `digits`-digit
/// constant.
///
/// Passes if the deeper convergent is within `10^-digits`, or if the
/// distance keeps shrinking and the second depth doubling gains at least
/// half as many digits as the first.
pub fn verify_hit(hit: &ConjectureHit, digits: u32) -> Result<bool, ScanError> {
    if digits <= hit.match_digits {
        return Err(ScanError::VerifyDigits {
            digits,
            match_digits: hit.match_digits,
        });
    }
    let c = constant(&hit.constant, digits + GUARD_DIGITS)?;
    let (d0, d1, d2) = (hit.depth, 2 * hit.depth, 4 * hit.depth);
    if hit.rule.has_zero_numerator(d2) {
        return Ok(false);
    }
    let mut walk = hit.rule.walk();
    let mut values = Vec::with_capacity(3);
    for d in [d0, d1, d2] {
        walk.advance_to(d);
        match walk.value() {
            Some(v) => values.push(v),
            None => return Ok(false),
        }
    }
    if c.max_distance(&values[2]) <= tolerance(digits) {
        return Ok(true);
    }
    let logs: Option<Vec<f64>> = values
        .iter()
        .map(|v| log10_abs(&(v - &c.value)).ok())
        .collect();
    let Some(logs) = logs else {
        return Ok(false);
    };
    let (drop1, drop2) = (logs[0] - logs[1], logs[1] - logs[2]);
    Ok(drop1 > 0.0 && drop2 > 0.0 && drop2 >= 0.5 * drop1)
}

/// `log10` of the worst-case distance between the depth-`depth` convergent
/// of `rule` and a `digits`-digit enclosure of `constant`; `None` if that
/// convergent is undefined or a partial numerator vanishes on the way.
pub fn residual_log10(rule: &Rule, constant_name: &str, depth: usize, digits: u32) -> Result<Option<f64>, ScanError> {
    let c = constant(constant_name, digits)?;
    if rule.has_zero_numerator(depth) {
        return Ok(None);
    }
    let mut walk = rule.walk();
    walk.advance_to(depth);
    Ok(walk
        .value()
        .map(|r| log10_abs(&c.max_distance(&r)).expect("radius is positive")))
}

pub fn emit_hits_csv<W: Write>(hits: &[ConjectureHit], mut out: W) -> io::Result<()> {
    writeln!(out, "{HITS_HEADER}")?;
    for h in hits {
        let r = &h.rule;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.b0,
            r.alpha,
            r.beta,
            r.gamma,
            r.delta,
            h.constant,
            sig9(h.residual_log10)
        )?;
    }
    out.flush()
}
