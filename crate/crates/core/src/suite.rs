//! Self-check battery run by the `verify` command: every invariant of the
//! counters, the rate functions and the studies, reported one line per check.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{binary_entropy, binomial, ln_big, log_binomial};
use crate::exact::{
    brute_force_intersection, canonical_centers, log_two_ball_intersection, three_ball_intersection,
    three_sphere_intersection, two_ball_intersection, BlockDecomposition, SphereProfile, Word,
};
use crate::experiments::{convergence_study, critical_window_study, sandwich_check, symmetry_check};
use crate::rates::{f3, g2, RegimeParams, SolverConfig};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    /// Restricts the oracle to `n <= 10` and shrinks the rate grids.
    pub fast: bool,
    /// Seed for the randomized configuration sampling only.
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { fast: false, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, result: Result<(bool, String)>) -> CheckOutcome {
    match result {
        Ok((passed, detail)) => CheckOutcome { name, passed, detail },
        Err(e) => CheckOutcome { name, passed: false, detail: format!("error: {e}") },
    }
}

type Check = fn(&SuiteConfig) -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("binomial-identities", check_binomials),
    ("log-binomial-accuracy", check_log_binomial),
    ("entropy-symmetry", check_entropy),
    ("oracle-equivalence", check_oracle),
    ("sphere-decomposition", check_sphere_sum),
    ("sandwich-bound", check_sandwich),
    ("symmetry-reduction", check_symmetry),
    ("two-ball-exponent", check_two_ball_rate),
    ("three-ball-convergence", check_convergence),
    ("critical-boundary", check_critical_boundary),
    ("dominance", check_dominance),
    ("critical-window", check_critical_window),
    ("solver-stability", check_solver_stability),
];

pub fn check_names() -> impl Iterator<Item = &'static str> {
    CHECKS.iter().map(|(name, _)| *name)
}

/// Runs every check in a fixed order.
pub fn run(config: &SuiteConfig) -> Vec<CheckOutcome> {
    CHECKS.iter().map(|(name, check)| outcome(name, check(config))).collect()
}

fn check_binomials(_: &SuiteConfig) -> Result<(bool, String)> {
    let mut ok = true;
    for n in 1..=60usize {
        for k in 0..=n as i64 {
            ok &= binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k);
        }
        let total: BigUint = (0..=n as i64).map(|k| binomial(n, k)).sum();
        ok &= total == BigUint::one() << n;
    }
    Ok((ok, "Pascal recurrence and row sums for n <= 60".into()))
}

fn check_log_binomial(config: &SuiteConfig) -> Result<(bool, String)> {
    let top = if config.fast { 120 } else { 300 };
    let mut worst = 0f64;
    for n in 0..=top {
        for k in 0..=n as i64 {
            worst = worst.max((log_binomial(n, k).ln() - ln_big(&binomial(n, k))).abs());
        }
    }
    Ok((worst <= 1e-9, format!("max |log error| = {worst:.3e} for n <= {top}")))
}

fn check_entropy(config: &SuiteConfig) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut worst = 0f64;
    for _ in 0..1000 {
        let p: f64 = rng.gen();
        worst = worst.max((binary_entropy(p)? - binary_entropy(1.0 - p)?).abs());
    }
    Ok((worst <= 1e-12, format!("max |H(p) - H(1-p)| = {worst:.3e} over 1000 samples")))
}

fn check_oracle(config: &SuiteConfig) -> Result<(bool, String)> {
    let top = if config.fast { 10 } else { 12 };
    let mut cases = 0;
    let mut bad = Vec::new();
    for n in 4..=top {
        for k in [2usize, 3, 4] {
            let Ok(c) = canonical_centers(n, k) else { continue };
            let words: Vec<Word> = c.centers().into_iter().cloned().collect();
            for r in 0..=n {
                cases += 1;
                if three_ball_intersection(&c, r) != brute_force_intersection(&words, r)? {
                    bad.push(format!("three-ball n={n} k={k} r={r}"));
                }
            }
        }
        for k in 0..=n {
            let pair = [Word::zeros(n), Word::with_ones(n, 0..k)];
            for r in 0..=n {
                cases += 1;
                if two_ball_intersection(n, k, r)? != brute_force_intersection(&pair, r)? {
                    bad.push(format!("two-ball n={n} k={k} r={r}"));
                }
            }
        }
    }
    Ok((bad.is_empty(), format!("{cases} cases with n <= {top}, mismatches: {bad:?}")))
}

fn check_sphere_sum(_: &SuiteConfig) -> Result<(bool, String)> {
    let configs = sphere_sum_configs();
    let mut bad = Vec::new();
    for &(n, k, r) in &configs {
        let c = canonical_centers(n, k)?;
        let d = BlockDecomposition::of(&c);
        let mut total = BigUint::default();
        for r1 in 0..=r {
            for r2 in 0..=r {
                for r3 in 0..=r {
                    total += three_sphere_intersection(&d, SphereProfile::new(r1, r2, r3));
                }
            }
        }
        if total != three_ball_intersection(&c, r) {
            bad.push((n, k, r));
        }
    }
    Ok((bad.is_empty(), format!("{} configurations, mismatches: {bad:?}", configs.len())))
}

/// Twenty canonical `(n, k, r)` with `n <= 20`, mixing parities of `k`.
pub fn sphere_sum_configs() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for n in [6usize, 9, 12, 15, 18, 20] {
        for k in [2usize, 3, 4, 6] {
            if 3 * k <= 2 * n && out.len() < 20 {
                out.push((n, k, (n / 3 + k / 2).min(n)));
            }
        }
    }
    out.truncate(20);
    out
}

/// Random canonical `(n, k, r)` with `4 <= n <= max_n`.
pub fn random_canonical_configs(seed: u64, count: usize, max_n: usize) -> Vec<(usize, usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(4..=max_n);
            let k = rng.gen_range(1..=2 * n / 3);
            let r = rng.gen_range(0..=n);
            (n, k, r)
        })
        .collect()
}

fn check_sandwich(config: &SuiteConfig) -> Result<(bool, String)> {
    let (count, max_n) = if config.fast { (15, 24) } else { (50, 48) };
    let mut bad = Vec::new();
    for (n, k, r) in random_canonical_configs(config.seed, count, max_n) {
        if !sandwich_check(n, k, r)?.holds(r) {
            bad.push((n, k, r));
        }
    }
    Ok((bad.is_empty(), format!("{count} random configurations (n <= {max_n}), failures: {bad:?}")))
}

fn check_symmetry(config: &SuiteConfig) -> Result<(bool, String)> {
    let top = if config.fast { 10 } else { 12 };
    let mut cases = vec![(40usize, 8usize, 12usize)];
    for n in 4..=top {
        for k in (2..=2 * n / 3).step_by(2) {
            for r in 0..=n {
                cases.push((n, k, r));
            }
        }
    }
    let mut bad = Vec::new();
    let mut rounded = 0;
    for &(n, k, r) in &cases {
        let out = symmetry_check(n, k, r)?;
        rounded += out.parity_rounded;
        if !out.holds() {
            bad.push((n, k, r));
        }
    }
    Ok((bad.is_empty(), format!("{} cases, {rounded} groups balanced up to parity, failures: {bad:?}", cases.len())))
}

fn check_two_ball_rate(config: &SuiteConfig) -> Result<(bool, String)> {
    let g = g2(&RegimeParams::new(0.3, 0.2))?;
    let sizes: &[(usize, f64)] = if config.fast { &[(400, 0.045)] } else { &[(400, 0.045), (1000, 0.021)] };
    let mut ok = true;
    let mut detail = Vec::new();
    for &(n, tol) in sizes {
        let rate = log_two_ball_intersection(n, n / 5, 3 * n / 10)?.ln() / n as f64;
        ok &= (rate - g).abs() <= tol;
        detail.push(format!("n={n}: |{rate:.6} - {g:.6}| <= {tol}"));
    }
    Ok((ok, detail.join("; ")))
}

fn check_convergence(_: &SuiteConfig) -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for (alpha, beta) in [(0.3, 0.2), (0.25, 0.3)] {
        let study = convergence_study(alpha, beta, &[60, 120, 240], &SolverConfig::default())?;
        let devs: Vec<f64> = study.rows.iter().map(|r| r.deviation).collect();
        ok &= devs.len() == 3 && devs.windows(2).all(|w| w[1] < w[0]) && devs[2] <= 0.03;
        detail.push(format!("({alpha}, {beta}): {devs:.4?}"));
    }
    Ok((ok, detail.join("; ")))
}

fn check_critical_boundary(_: &SuiteConfig) -> Result<(bool, String)> {
    let mut worst = 0f64;
    for alpha in [0.05, 0.1, 0.15, 0.2, 0.25, 0.3] {
        worst = worst.max(f3(&RegimeParams::new(alpha, 2.0 * alpha), &SolverConfig::default())?.value);
    }
    Ok((worst <= 1e-6, format!("max f3(alpha, 2 alpha) = {worst:.3e}")))
}

/// Feasible `(alpha, beta)` on a `side x side` lattice of
/// `(0, 1/2] x (0, 0.65]`.
pub fn dominance_grid(side: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 1..=side {
        for j in 1..=side {
            let alpha = 0.5 * i as f64 / side as f64;
            let beta = 0.65 * j as f64 / side as f64;
            if beta <= 2.0 * alpha {
                out.push((alpha, beta));
            }
        }
    }
    out
}

fn check_dominance(config: &SuiteConfig) -> Result<(bool, String)> {
    let side = if config.fast { 6 } else { 20 };
    let cfg = SolverConfig::default();
    let mut worst = f64::NEG_INFINITY;
    for (alpha, beta) in dominance_grid(side) {
        let p = RegimeParams::new(alpha, beta);
        worst = worst.max(f3(&p, &cfg)?.value - g2(&p)?);
    }
    let mut min_gap = f64::INFINITY;
    for (alpha, beta) in [(0.3, 0.2), (0.4, 0.3), (0.25, 0.3)] {
        let p = RegimeParams::new(alpha, beta);
        min_gap = min_gap.min(g2(&p)? - f3(&p, &cfg)?.value);
    }
    Ok((
        worst <= 1e-9 && min_gap >= 1e-4,
        format!("max f3 - g2 = {worst:.3e} on {side}x{side} grid; min interior gap = {min_gap:.4e}"),
    ))
}

fn check_critical_window(_: &SuiteConfig) -> Result<(bool, String)> {
    let one = critical_window_study(1, &[10, 20, 40, 80], 4)?;
    let two = critical_window_study(2, &[10, 20, 40, 80], 4)?;
    let monotone = one.rows.windows(2).all(|w| w[1].log_count >= w[0].log_count);
    let ok = (0.0..=3.2).contains(&one.slope) && (0.0..=6.2).contains(&two.slope) && monotone;
    Ok((ok, format!("slope C=1: {:.4}, C=2: {:.4}", one.slope, two.slope)))
}

/// Random nontrivial `(alpha, beta)` with `beta < 2/3`, `alpha < 1`.
pub fn random_regimes(seed: u64, count: usize) -> Vec<RegimeParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let beta = rng.gen_range(0.01..0.66);
            let alpha = rng.gen_range(beta / 2.0..1.0);
            RegimeParams::new(alpha, beta)
        })
        .collect()
}

fn check_solver_stability(config: &SuiteConfig) -> Result<(bool, String)> {
    let count = if config.fast { 10 } else { 100 };
    let cfg = SolverConfig::default();
    let mut worst = 0f64;
    let mut ok = true;
    for p in random_regimes(config.seed, count) {
        let a = f3(&p, &cfg)?;
        let b = f3(&p, &cfg)?;
        ok &= format!("{a:?}") == format!("{b:?}");
        let levels = &a.grid_levels;
        if levels.len() >= 2 {
            worst = worst.max((levels[levels.len() - 1].value - levels[levels.len() - 2].value).abs());
        }
    }
    Ok((ok && worst <= 1e-6, format!("{count} regimes, max last-level change {worst:.3e}")))
}
