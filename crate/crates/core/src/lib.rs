//! Exact counting and exponential rates for intersections of two and three
//! Hamming balls in `{0,1}^n`.
//!
//! The crate is layered bottom-up:
//!
//! - [`combinatorics`]: exact and log-domain binomials, binary entropy (nats).
//! - [`exact`]: words, center triples, block decompositions, sphere/ball
//!   intersection counters and a brute-force oracle.
//! - [`rates`]: the feasible profile set, the entropy objective, the
//!   grid-refinement solver for the three-ball exponent `f3` and the closed
//!   form two-ball exponent `g2`.
//! - [`experiments`]: studies tying finite-n exact counts to the rates.
//! - [`suite`]: the self-check battery behind `hamming-intersect verify`.
//!
//! All exponents are natural-log rates per coordinate.

#![forbid(unsafe_code)]

pub mod combinatorics;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod rates;
pub mod suite;

pub use combinatorics::{BigCount, LogCount};
pub use error::{Error, Result};
