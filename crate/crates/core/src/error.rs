use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("word lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("infeasible centers for n={n}, k={k}: three pairwise distances of at least k need 3k <= 2n")]
    InfeasibleCenters { n: usize, k: usize },

    #[error("empty intersection regime: alpha={alpha} < beta/2 (beta={beta}), balls at distance beta*n are disjoint")]
    EmptyIntersection { alpha: f64, beta: f64 },

    #[error("infeasible centers regime: beta={beta} > 2/3")]
    CentersRegime { beta: f64 },

    #[error("brute-force enumeration refused for n={n} (limit {limit})")]
    OracleTooLarge { n: usize, limit: usize },

    #[error("decomposition is not canonical (n11, n10, n01) = ({n11}, {n10}, {n01})")]
    NonCanonical { n11: usize, n10: usize, n01: usize },

    #[error("profile (theta={theta}, delta={delta}) is outside the feasible set")]
    InfeasibleProfile { theta: f64, delta: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
