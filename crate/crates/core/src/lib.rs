//! Exact generalized continued fractions built around factorials and
//! subfactorials.
//!
//! The crate covers:
//!
//! * forward evaluation of convergents `p_n / q_n` by the three-term
//!   recurrence ([`cf_core`]),
//! * the inverse map from convergent sequences back to partial numerators
//!   and denominators ([`cf_invert`]),
//! * subfactorials `!n` by recurrence, alternating sum, nearest integer and
//!   Gauss–Laguerre quadrature ([`derangement`]),
//! * certified rational enclosures of `e` and friends ([`constants`]),
//! * error series for several expansions of `e` with CSV/SVG output
//!   ([`analysis`]),
//! * a small affine-rule conjecture scanner ([`scan`]).
//!
//! All integer and rational arithmetic is exact; `f64` only appears in
//! quadrature and in rendered logarithms.

pub mod analysis;
pub mod cf_core;
pub mod cf_invert;
pub mod constants;
pub mod derangement;
pub mod format;
pub mod laguerre;
pub mod scan;

pub use cf_core::{convergents, evaluate, simple_to_gcf, terms, CfError, Convergent, Family, GcfSpec, GcfTerm, TermSource};
pub use cf_invert::{invert, invert_rationals, InversionResult, InvertError};
pub use constants::{e_enclosure, CertifiedRational};

/// Arbitrary-precision signed integer.
pub type ExactInt = num_bigint::BigInt;

/// Always-reduced fraction with positive denominator.
pub type ExactRational = num_rational::BigRational;
