//! Error series `log10 |r_n - c|` for continued-fraction expansions, with
//! CSV and SVG output.
//!
//! The three expansions compared by default are the power-ratio family
//! `(n+1)^n / n^n`, Euler's simple continued fraction and the
//! derangement-elegant family. Families are compared index to index.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cf_core::{convergents, evaluate, CfError, Family, GcfSpec};
use crate::constants::{constant, constant_table, log10_abs, ConstantsError};
use crate::format::sig9;
use crate::{ExactInt, ExactRational};

/// Starting precision for the reference constant.
pub const START_DIGITS: u32 = 50;
/// Precision is doubled up to this many digits before giving up.
pub const MAX_DIGITS: u32 = 10_000;
/// The reference radius must stay below this fraction of the error.
const RELATIVE_RADIUS: i64 = 1_000_000;
/// Margin between two logged errors before one counts as strictly smaller.
/// Each value is within ~4.4e-7 of the truth.
const ORDER_MARGIN: f64 = 2e-6;

pub const FIG1_FAMILIES: [Family; 3] = [Family::PowerRatio, Family::Euler, Family::DerangementElegant];

pub const CSV_HEADER: &str = "family,n,p,q,log10_err";

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("unknown target constant {0:?}")]
    UnknownTarget(String),
    #[error(transparent)]
    Terms(#[from] CfError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error("convergent {n} of {family} equals the target or needs more than {MAX_DIGITS} digits")]
    PrecisionExhausted { family: String, n: u64 },
    #[error("cannot plot an empty table")]
    EmptyTable,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub family: String,
    pub n: u64,
    pub p: ExactInt,
    pub q: ExactInt,
    pub log10_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTable {
    pub records: Vec<ErrorRecord>,
    pub digits_used: u32,
    pub families: Vec<String>,
}

impl ErrorTable {
    /// Sorts by `(family, n)` and drops duplicate keys, keeping the first.
    pub fn new(mut records: Vec<ErrorRecord>, digits_used: u32) -> Self {
        records.sort_by(|a, b| (&a.family, a.n).cmp(&(&b.family, b.n)));
        records.dedup_by(|a, b| a.family == b.family && a.n == b.n);
        let families: BTreeSet<String> = records.iter().map(|r| r.family.clone()).collect();
        ErrorTable {
            records,
            digits_used,
            families: families.into_iter().collect(),
        }
    }

    pub fn series(&self, family: &str) -> Vec<&ErrorRecord> {
        self.records.iter().filter(|r| r.family == family).collect()
    }

    pub fn get(&self, family: &str, n: u64) -> Option<&ErrorRecord> {
        self.records.iter().find(|r| r.family == family && r.n == n)
    }
}

/// `log10 |r - c|` with the radius of `c` pushed below a millionth of the
/// error; returns the value and the digits that achieved it.
fn certified_log10_error(
    r: &ExactRational,
    target: &str,
    start_digits: u32,
) -> Result<Option<(f64, u32)>, AnalysisError> {
    let mut digits = start_digits.clamp(1, MAX_DIGITS);
    loop {
        let c = constant(target, digits)?;
        let diff = r - &c.value;
        let margin = &c.radius * ExactRational::from_integer((RELATIVE_RADIUS + 1).into());
        if !diff.is_zero() && diff.abs() > margin {
            return Ok(Some((log10_abs(&diff)?, digits)));
        }
        if digits >= MAX_DIGITS {
            return Ok(None);
        }
        digits = (digits * 2).min(MAX_DIGITS);
    }
}

fn check_target(target: &str) -> Result<(), AnalysisError> {
    if constant_table().iter().any(|(name, _)| *name == target) {
        Ok(())
    } else {
        Err(AnalysisError::UnknownTarget(target.to_owned()))
    }
}

pub fn error_series(spec: &GcfSpec, target: &str, n_max: usize) -> Result<Vec<ErrorRecord>, AnalysisError> {
    error_series_from(spec, target, n_max, START_DIGITS).map(|(records, _)| records)
}

/// Like [`error_series`] but starting the precision ladder at
/// `start_digits`; also reports the highest precision used.
///
/// Convergents with a zero denominator are skipped.
pub fn error_series_from(
    spec: &GcfSpec,
    target: &str,
    n_max: usize,
    start_digits: u32,
) -> Result<(Vec<ErrorRecord>, u32), AnalysisError> {
    check_target(target)?;
    let family = spec.label();
    let mut records = Vec::with_capacity(n_max);
    let mut digits_used = 0;
    for c in convergents(spec, n_max)?.into_iter().skip(1) {
        let r = match evaluate(&c) {
            Ok(r) => r,
            Err(CfError::UndefinedConvergent(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let n = c.index as u64;
        let (log10_err, digits) = certified_log10_error(&r, target, start_digits)?.ok_or_else(|| {
            AnalysisError::PrecisionExhausted {
                family: family.clone(),
                n,
            }
        })?;
        digits_used = digits_used.max(digits);
        records.push(ErrorRecord {
            family: family.clone(),
            n,
            p: c.p,
            q: c.q,
            log10_err,
        });
    }
    Ok((records, digits_used))
}

/// Error table against `e` for the given families.
pub fn compare(families: &[Family], n_max: usize, start_digits: u32) -> Result<ErrorTable, AnalysisError> {
    let mut records = Vec::new();
    let mut digits_used = 0;
    for &fam in families {
        let (rs, d) = error_series_from(&GcfSpec::family(fam), "e", n_max, start_digits)?;
        records.extend(rs);
        digits_used = digits_used.max(d);
    }
    Ok(ErrorTable::new(records, digits_used))
}

/// The three-family comparison.
pub fn compare_families(n_max: usize) -> Result<ErrorTable, AnalysisError> {
    compare(&FIG1_FAMILIES, n_max, START_DIGITS)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderingVerdict {
    Holds { from: u64, to: u64 },
    ViolatedAt(u64),
    NotApplicable,
}

impl std::fmt::Display for OrderingVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrderingVerdict::Holds { from, to } => write!(f, "ordering holds for n in {from}..{to}"),
            OrderingVerdict::ViolatedAt(n) => write!(f, "ordering violated at n={n}"),
            OrderingVerdict::NotApplicable => f.write_str("ordering check needs at least two families"),
        }
    }
}

/// Checks `err(derangement-elegant) < err(euler) < err(power-ratio)` over
/// `from..=max n`, restricted to whichever of those families the table has.
pub fn ordering_check(table: &ErrorTable, from: u64) -> OrderingVerdict {
    let order: Vec<&str> = [Family::DerangementElegant, Family::Euler, Family::PowerRatio]
        .iter()
        .map(|f| f.name())
        .filter(|name| table.families.iter().any(|f| f == name))
        .collect();
    if order.len() < 2 {
        return OrderingVerdict::NotApplicable;
    }
    let to = table.records.iter().map(|r| r.n).max().unwrap_or(0);
    for n in from..=to {
        let errs: Option<Vec<f64>> = order
            .iter()
            .map(|fam| table.get(fam, n).map(|r| r.log10_err))
            .collect();
        let Some(errs) = errs else {
            return OrderingVerdict::ViolatedAt(n);
        };
        if errs.windows(2).any(|w| w[0] + ORDER_MARGIN >= w[1]) {
            return OrderingVerdict::ViolatedAt(n);
        }
    }
    OrderingVerdict::Holds { from, to }
}

/// True when `log10_err` strictly decreases for `n` in `from..=to`.
pub fn strictly_decreasing(table: &ErrorTable, family: &str, from: u64, to: u64) -> bool {
    let series: BTreeMap<u64, f64> = table.series(family).into_iter().map(|r| (r.n, r.log10_err)).collect();
    (from..to).all(|n| match (series.get(&n), series.get(&(n + 1))) {
        (Some(a), Some(b)) => b + ORDER_MARGIN < *a,
        _ => false,
    })
}

/// True when every index improves on the one `window` steps earlier.
pub fn decreasing_over_windows(table: &ErrorTable, family: &str, from: u64, to: u64, window: u64) -> bool {
    let series: BTreeMap<u64, f64> = table.series(family).into_iter().map(|r| (r.n, r.log10_err)).collect();
    (from..=to.saturating_sub(window)).all(|n| match (series.get(&n), series.get(&(n + window))) {
        (Some(a), Some(b)) => b + ORDER_MARGIN < *a,
        _ => false,
    })
}

pub fn emit_csv<W: Write>(table: &ErrorTable, mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in &table.records {
        writeln!(out, "{},{},{},{},{}", r.family, r.n, r.p, r.q, sig9(r.log10_err))?;
    }
    out.flush()
}

/// Parses the output of [`emit_csv`]. `digits_used` is not stored in the
/// file and comes back as 0.
pub fn read_csv<R: BufRead>(input: R) -> Result<ErrorTable, AnalysisError> {
    let mut records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if i == 0 {
            if line != CSV_HEADER {
                return Err(AnalysisError::Parse {
                    line: lineno,
                    msg: format!("expected header {CSV_HEADER:?}"),
                });
            }
            continue;
        }
        let err = |msg: &str| AnalysisError::Parse {
            line: lineno,
            msg: msg.to_owned(),
        };
        let fields: Vec<&str> = line.split(',').collect();
        let [family, n, p, q, log10_err] = fields[..] else {
            return Err(err("expected 5 fields"));
        };
        records.push(ErrorRecord {
            family: family.to_owned(),
            n: n.parse().map_err(|_| err("bad index"))?,
            p: p.parse().map_err(|_| err("bad numerator"))?,
            q: q.parse().map_err(|_| err("bad denominator"))?,
            log10_err: log10_err.parse().map_err(|_| err("bad log10_err"))?,
        });
    }
    Ok(ErrorTable::new(records, 0))
}

fn stroke_pattern(family: &str) -> Option<&'static str> {
    match family {
        "power-ratio" => Some("8,5"),
        "euler" => Some("2,4"),
        _ => None,
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Step between axis ticks giving at most about eight intervals.
fn tick_step(span: f64) -> f64 {
    let raw = span / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
}

/// Line plot of `log10_err` against `n`, one polyline per family.
pub fn emit_svg<W: Write>(table: &ErrorTable, mut out: W) -> Result<(), AnalysisError> {
    if table.records.is_empty() {
        return Err(AnalysisError::EmptyTable);
    }
    const W_PX: f64 = 720.0;
    const H_PX: f64 = 480.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 180.0;
    const TOP: f64 = 30.0;
    const BOTTOM: f64 = 60.0;

    let n_min = table.records.iter().map(|r| r.n).min().unwrap() as f64;
    let mut n_max = table.records.iter().map(|r| r.n).max().unwrap() as f64;
    if n_max <= n_min {
        n_max = n_min + 1.0;
    }
    let y_lo = table.records.iter().map(|r| r.log10_err).fold(f64::INFINITY, f64::min).floor();
    let mut y_hi = table.records.iter().map(|r| r.log10_err).fold(f64::NEG_INFINITY, f64::max).ceil();
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    let plot_w = W_PX - LEFT - RIGHT;
    let plot_h = H_PX - TOP - BOTTOM;
    let sx = |n: f64| LEFT + (n - n_min) / (n_max - n_min) * plot_w;
    let sy = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W_PX}" height="{H_PX}" viewBox="0 0 {W_PX} {H_PX}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{W_PX}" height="{H_PX}" fill="white"/>"#).unwrap();
    // axes
    let (x0, x1, y0, y1) = (LEFT, LEFT + plot_w, TOP, TOP + plot_h);
    writeln!(
        s,
        r#"<path d="M {x0:.2} {y0:.2} L {x0:.2} {y1:.2} L {x1:.2} {y1:.2}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    let step = tick_step(n_max - n_min).max(1.0);
    let mut t = (n_min / step).ceil() * step;
    while t <= n_max + 1e-9 {
        let x = sx(t);
        writeln!(s, r#"<line x1="{x:.2}" y1="{y1:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, y1 + 5.0).unwrap();
        writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#, y1 + 20.0).unwrap();
        t += step;
    }
    let step = tick_step(y_hi - y_lo);
    let mut t = (y_lo / step).ceil() * step;
    while t <= y_hi + 1e-9 {
        let y = sy(t);
        writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/>"#, x0 - 5.0).unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            y + 4.0,
            t + 0.0
        )
        .unwrap();
        t += step;
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">truncation n</text>"#,
        (x0 + x1) / 2.0,
        H_PX - 15.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">log10 |r_n - e|</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    )
    .unwrap();

    for (i, family) in table.families.iter().enumerate() {
        let dash = stroke_pattern(family)
            .map(|d| format!(r#" stroke-dasharray="{d}""#))
            .unwrap_or_default();
        let points: Vec<String> = table
            .series(family)
            .iter()
            .map(|r| format!("{:.2},{:.2}", sx(r.n as f64), sy(r.log10_err)))
            .collect();
        writeln!(
            s,
            r#"<polyline fill="none" stroke="black" stroke-width="1.5"{dash} points="{}"/>"#,
            points.join(" ")
        )
        .unwrap();
        // legend entries are lines, not polylines, so polyline count equals family count
        let ly = TOP + 20.0 + 20.0 * i as f64;
        let lx = x1 + 15.0;
        writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="black" stroke-width="1.5"{dash}/>"#,
            lx + 30.0
        )
        .unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 36.0, ly + 4.0, escape(family)).unwrap();
    }
    writeln!(s, "</svg>").unwrap();
    out.write_all(s.as_bytes())?;
    out.flush()?;
    Ok(())
}
