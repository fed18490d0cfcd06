//! Studies that tie the exact counters to the rate functions.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::combinatorics::{ln_big, BigCount};
use crate::error::{Error, Result};
use crate::exact::{
    canonical_centers, log_three_ball_intersection, max_sphere_term, three_ball_intersection, BlockCounter,
    BlockDecomposition, SphereProfile,
};
use crate::rates::{f3, g2, RegimeParams, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub beta: f64,
    pub f3: f64,
    pub g2: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub alpha: f64,
    pub rows: Vec<SweepRow>,
    /// One entry per omitted beta.
    pub notes: Vec<String>,
}

/// `f3` and `g2` at `steps` equally spaced betas in `[beta_min, beta_max]`.
pub fn sweep_beta(alpha: f64, beta_min: f64, beta_max: f64, steps: usize, config: &SolverConfig) -> Result<Sweep> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("sweep needs at least 2 steps, got {steps}")));
    }
    if !(beta_min > 0.0 && beta_max >= beta_min && beta_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "beta range [{beta_min}, {beta_max}] must satisfy 0 < beta_min <= beta_max"
        )));
    }
    let last = steps - 1;
    let mut rows = Vec::with_capacity(steps);
    let mut notes = Vec::new();
    for i in 0..steps {
        let beta = match i {
            0 => beta_min,
            i if i == last => beta_max,
            i => beta_min + (beta_max - beta_min) * (i as f64 / last as f64),
        };
        let params = RegimeParams::new(alpha, beta);
        match f3(&params, config).and_then(|res| Ok((res.value, g2(&params)?))) {
            Ok((f, g)) => rows.push(SweepRow { beta, f3: f, g2: g, gap: g - f }),
            Err(e) => notes.push(format!("beta={beta}: omitted ({e})")),
        }
    }
    if rows.is_empty() {
        return Err(Error::InvalidArgument(format!("no feasible beta in [{beta_min}, {beta_max}] for alpha={alpha}")));
    }
    Ok(Sweep { alpha, rows, notes })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub finite_rate: f64,
    pub limit_rate: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Convergence {
    pub alpha: f64,
    pub beta: f64,
    pub rows: Vec<ConvergenceRow>,
    pub notes: Vec<String>,
}

/// Finite-n parameters: `r = round(alpha n)`, `k = 2 round(beta n / 2)`.
pub fn finite_parameters(alpha: f64, beta: f64, n: usize) -> (usize, usize) {
    let r = (alpha * n as f64).round() as usize;
    let k = 2 * (beta * n as f64 / 2.0).round() as usize;
    (k, r)
}

/// Compares `(1/n) ln I_r` on the canonical triple with `f3(alpha, beta)`.
pub fn convergence_study(alpha: f64, beta: f64, n_list: &[usize], config: &SolverConfig) -> Result<Convergence> {
    let limit = f3(&RegimeParams::new(alpha, beta), config)?.value;
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for &n in n_list {
        let (k, r) = finite_parameters(alpha, beta, n);
        if k == 0 || 3 * k > 2 * n || r > n {
            notes.push(format!("n={n}: skipped (k={k}, r={r} infeasible)"));
            continue;
        }
        let log_count = log_three_ball_intersection(n, k, r)?;
        if log_count.is_zero() {
            notes.push(format!("n={n}: skipped (empty intersection at k={k}, r={r})"));
            continue;
        }
        let finite_rate = log_count.ln() / n as f64;
        rows.push(ConvergenceRow { n, k, r, finite_rate, limit_rate: limit, deviation: (finite_rate - limit).abs() });
    }
    Ok(Convergence { alpha, beta, rows, notes })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalRow {
    pub t: usize,
    pub n: usize,
    #[serde(serialize_with = "decimal")]
    pub count: BigCount,
    pub log_count: f64,
}

fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalStudy {
    pub excess: usize,
    pub scale: usize,
    pub rows: Vec<CriticalRow>,
    /// Least-squares slope of `ln I` against `ln n`.
    pub slope: f64,
}

/// Exact `I_{t+C}` on canonical centers with `k = 2t`, `n = scale * t`.
pub fn critical_window_study(excess: usize, t_list: &[usize], scale: usize) -> Result<CriticalStudy> {
    if scale < 4 {
        return Err(Error::InvalidArgument(format!("scale must be at least 4, got {scale}")));
    }
    if t_list.len() < 2 {
        return Err(Error::InvalidArgument("need at least two t values to fit a slope".into()));
    }
    if t_list[0] == 0 || t_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("t values must be positive and increasing".into()));
    }
    let mut rows = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let n = scale * t;
        let d = BlockDecomposition::canonical(n, t)?;
        let count = BlockCounter::new(&d).ball(t + excess);
        if count.is_zero() {
            return Err(Error::InvalidArgument(format!("empty intersection at t={t}")));
        }
        let log_count = ln_big(&count);
        rows.push(CriticalRow { t, n, count, log_count });
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.log_count).collect();
    Ok(CriticalStudy { excess, scale, rows, slope: least_squares_slope(&xs, &ys) })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichOutcome {
    #[serde(serialize_with = "decimal")]
    pub max_term: BigCount,
    pub max_profile: SphereProfile,
    #[serde(serialize_with = "decimal")]
    pub total: BigCount,
}

impl SandwichOutcome {
    /// `M <= I <= (r+1)^3 M`.
    pub fn holds(&self, r: usize) -> bool {
        let factor = BigUint::from((r + 1).pow(3));
        self.max_term <= self.total && self.total <= &self.max_term * factor
    }
}

pub fn sandwich_check(n: usize, k: usize, r: usize) -> Result<SandwichOutcome> {
    let c = canonical_centers(n, k)?;
    let (max_term, max_profile) = max_sphere_term(&c, r);
    let total = three_ball_intersection(&c, r);
    Ok(SandwichOutcome { max_term, max_profile, total })
}

/// A fixed `(r1, r2 + r3)` group whose maximum is not reached at the most
/// balanced admissible split.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryViolation {
    pub r1: usize,
    pub sum: usize,
    pub best: SphereProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryOutcome {
    pub groups: usize,
    /// Groups where some pair with `|r2 - r3| <= 1` attains the maximum.
    pub strictly_balanced: usize,
    /// Groups attained only at `|r2 - r3| = 2` because `r2 = r3` has the
    /// wrong parity for `r1`.
    pub parity_rounded: usize,
    pub violations: Vec<SymmetryViolation>,
}

impl SymmetryOutcome {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every `(r1, r2 + r3)` with radii at most `r`, checks that the largest
/// sphere intersection is attained where the block-`I2`/`I3` loads are
/// balanced: `|r2 - r3| <= 1`, or `|r2 - r3| = 2` when parity excludes
/// every closer split.
pub fn symmetry_check(n: usize, k: usize, r: usize) -> Result<SymmetryOutcome> {
    if !k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("symmetry check needs even k, got {k}")));
    }
    let d = BlockDecomposition::of(&canonical_centers(n, k)?);
    let counter = BlockCounter::new(&d);
    let top = r.min(n);
    let mut out = SymmetryOutcome { groups: 0, strictly_balanced: 0, parity_rounded: 0, violations: vec![] };
    for r1 in 0..=top {
        for sum in 0..=2 * top {
            let lo = sum.saturating_sub(top);
            let hi = sum.min(top);
            let counts: Vec<(usize, BigCount)> =
                (lo..=hi).map(|r2| (r2, counter.sphere(SphereProfile::new(r1, r2, sum - r2)))).collect();
            out.groups += 1;
            let best = counts.iter().map(|(_, c)| c).max().expect("nonempty group").clone();
            let gap = |r2: usize| r2.abs_diff(sum - r2);
            let attained_within = |limit: usize| counts.iter().any(|(r2, c)| *c == best && gap(*r2) <= limit);
            if attained_within(1) {
                out.strictly_balanced += 1;
            } else if attained_within(2) && (sum / 2 + r1) % 2 == 1 && sum % 2 == 0 {
                out.parity_rounded += 1;
            } else {
                let (r2, _) = counts.iter().find(|(_, c)| *c == best).expect("max present");
                out.violations.push(SymmetryViolation { r1, sum, best: SphereProfile::new(r1, *r2, sum - r2) });
            }
        }
    }
    Ok(out)
}
