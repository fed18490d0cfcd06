//! Asymptotic exponents in the linear regime `r = alpha n`, `k = beta n`.
//!
//! A normalized profile `(theta, delta)` stands for `a1 = theta n` ones in
//! block `I1` and a common distance `delta n` to the second and third
//! centers. The distance to the first center is then chosen optimally,
//! `rho* = min{alpha, delta + 2 theta - beta/2}`, and the block densities are
//!
//! ```text
//! p1  = 2 theta / beta
//! p23 = (rho* + beta - delta - 2 theta) / beta
//! p4  = (theta + delta - beta) / (1 - 3 beta / 2)
//! ```
//!
//! The three-ball exponent `f3` maximizes
//! `Phi = beta/2 H(p1) + beta H(p23) + (1 - 3beta/2) H(p4)` over the profiles
//! whose densities are valid probabilities and whose radii stay within
//! `alpha`.

use std::fmt;

use serde::Serialize;

use crate::combinatorics::entropy_unchecked;
use crate::error::{Error, Result};

/// Slack allowed on every feasibility inequality.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Slack used when tagging constraints as active at the argmax.
pub const ACTIVE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Nontrivial,
    /// `alpha < beta/2`: even two balls are disjoint.
    InfeasibleEmpty,
    /// `beta > 2/3`: no three centers are pairwise that far apart.
    InfeasibleCenters,
    /// Non-finite or non-positive parameters.
    OutOfDomain,
}

/// Relative radius `alpha = r/n` and relative center distance `beta = k/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeParams {
    pub alpha: f64,
    pub beta: f64,
}

impl RegimeParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        RegimeParams { alpha, beta }
    }

    pub fn regime(&self) -> Regime {
        let RegimeParams { alpha, beta } = *self;
        if !alpha.is_finite() || !beta.is_finite() || beta <= 0.0 || alpha < 0.0 {
            Regime::OutOfDomain
        } else if alpha < beta / 2.0 {
            Regime::InfeasibleEmpty
        } else if beta > 2.0 / 3.0 {
            Regime::InfeasibleCenters
        } else {
            Regime::Nontrivial
        }
    }

    /// Errors unless the parameters are in the nontrivial regime.
    pub fn require_nontrivial(&self) -> Result<()> {
        match self.regime() {
            Regime::Nontrivial => Ok(()),
            Regime::InfeasibleEmpty => Err(Error::EmptyIntersection { alpha: self.alpha, beta: self.beta }),
            Regime::InfeasibleCenters => Err(Error::CentersRegime { beta: self.beta }),
            Regime::OutOfDomain => Err(Error::Domain(format!(
                "parameters (alpha={}, beta={}) must be finite with alpha >= 0 and beta > 0",
                self.alpha, self.beta
            ))),
        }
    }

    fn block4_weight(&self) -> f64 {
        1.0 - 1.5 * self.beta
    }
}

pub fn rho_star(theta: f64, delta: f64, params: &RegimeParams) -> f64 {
    params.alpha.min(delta + 2.0 * theta - params.beta / 2.0)
}

/// Block densities `(p1, p23, p4)`, unclamped.
pub fn densities(theta: f64, delta: f64, params: &RegimeParams) -> Result<(f64, f64, f64)> {
    let beta = params.beta;
    if !(beta > 0.0 && beta < 2.0 / 3.0) {
        return Err(Error::Domain(format!("densities need beta in (0, 2/3), got {beta}")));
    }
    Ok(densities_unchecked(theta, delta, params))
}

#[inline]
fn densities_unchecked(theta: f64, delta: f64, params: &RegimeParams) -> (f64, f64, f64) {
    let beta = params.beta;
    let rho = rho_star(theta, delta, params);
    let p1 = 2.0 * theta / beta;
    let p23 = (rho + beta - delta - 2.0 * theta) / beta;
    let p4 = (theta + delta - beta) / params.block4_weight();
    (p1, p23, p4)
}

#[inline]
fn within(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo - FEASIBILITY_TOL && x <= hi + FEASIBILITY_TOL
}

/// Membership in the feasible profile set.
pub fn is_feasible(theta: f64, delta: f64, params: &RegimeParams) -> bool {
    let beta = params.beta;
    if !(beta > 0.0 && beta < 2.0 / 3.0) || !theta.is_finite() || !delta.is_finite() {
        return false;
    }
    let alpha = params.alpha;
    let rho = rho_star(theta, delta, params);
    let (p1, p23, p4) = densities_unchecked(theta, delta, params);
    within(delta, 0.0, alpha)
        && within(rho, 0.0, alpha)
        && within(p1, 0.0, 1.0)
        && within(p23, 0.0, 1.0)
        && within(p4, 0.0, 1.0)
}

#[inline]
fn clamp01(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// Entropy objective at a feasible profile, in nats.
pub fn phi(theta: f64, delta: f64, params: &RegimeParams) -> Result<f64> {
    if !is_feasible(theta, delta, params) {
        return Err(Error::InfeasibleProfile { theta, delta });
    }
    let (p1, p23, p4) = densities_unchecked(theta, delta, params);
    let beta = params.beta;
    Ok(beta / 2.0 * entropy_unchecked(clamp01(p1))
        + beta * entropy_unchecked(clamp01(p23))
        + params.block4_weight() * entropy_unchecked(clamp01(p4)))
}

/// A profile `(theta, delta)` together with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedProfile {
    pub theta: f64,
    pub delta: f64,
    pub rho_star: f64,
    pub p1: f64,
    pub p23: f64,
    pub p4: f64,
}

impl NormalizedProfile {
    pub fn at(theta: f64, delta: f64, params: &RegimeParams) -> Result<Self> {
        let (p1, p23, p4) = densities(theta, delta, params)?;
        Ok(NormalizedProfile { theta, delta, rho_star: rho_star(theta, delta, params), p1, p23, p4 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ActiveConstraint {
    RhoAtAlpha,
    DeltaAtAlpha,
    P1At0,
    P1At1,
    P23At0,
    P23At1,
    P4At0,
    P4At1,
    Interior,
}

impl ActiveConstraint {
    pub fn tag(self) -> &'static str {
        match self {
            ActiveConstraint::RhoAtAlpha => "rho-at-alpha",
            ActiveConstraint::DeltaAtAlpha => "delta-at-alpha",
            ActiveConstraint::P1At0 => "p1-at-0",
            ActiveConstraint::P1At1 => "p1-at-1",
            ActiveConstraint::P23At0 => "p23-at-0",
            ActiveConstraint::P23At1 => "p23-at-1",
            ActiveConstraint::P4At0 => "p4-at-0",
            ActiveConstraint::P4At1 => "p4-at-1",
            ActiveConstraint::Interior => "interior",
        }
    }
}

impl Serialize for ActiveConstraint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl fmt::Display for ActiveConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

fn active_constraints(p: &NormalizedProfile, params: &RegimeParams) -> Vec<ActiveConstraint> {
    let near = |x: f64, v: f64| (x - v).abs() <= ACTIVE_TOL;
    let mut out = Vec::new();
    if p.delta + 2.0 * p.theta - params.beta / 2.0 >= params.alpha - ACTIVE_TOL {
        out.push(ActiveConstraint::RhoAtAlpha);
    }
    if near(p.delta, params.alpha) {
        out.push(ActiveConstraint::DeltaAtAlpha);
    }
    for (value, at0, at1) in [
        (p.p1, ActiveConstraint::P1At0, ActiveConstraint::P1At1),
        (p.p23, ActiveConstraint::P23At0, ActiveConstraint::P23At1),
        (p.p4, ActiveConstraint::P4At0, ActiveConstraint::P4At1),
    ] {
        if near(value, 0.0) {
            out.push(at0);
        }
        if near(value, 1.0) {
            out.push(at1);
        }
    }
    if out.is_empty() {
        out.push(ActiveConstraint::Interior);
    }
    out
}

/// Dense grid followed by nested refinement around the incumbent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Subdivisions per side of the bounding box at level 0.
    pub mesh: usize,
    /// Number of refinement levels after the dense grid.
    pub levels: usize,
    /// Step (and window) reduction per level.
    pub shrink: usize,
    /// Refinement window half-width, in points of the current level.
    pub half_width: usize,
    /// Stop once the incumbent moves less than this between levels.
    pub tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { mesh: 2000, levels: 4, shrink: 10, half_width: 20, tolerance: 1e-9 }
    }
}

/// Incumbent after one grid level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridLevel {
    pub level: usize,
    pub step_theta: f64,
    pub step_delta: f64,
    pub value: f64,
    pub theta: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateResult {
    pub params: RegimeParams,
    pub value: f64,
    pub argmax: NormalizedProfile,
    pub active_constraints: Vec<ActiveConstraint>,
    pub grid_levels: Vec<GridLevel>,
}

#[derive(Debug, Clone, Copy)]
struct Incumbent {
    value: f64,
    theta: f64,
    delta: f64,
}

impl Incumbent {
    fn offer(&mut self, value: f64, theta: f64, delta: f64) {
        if value > self.value {
            *self = Incumbent { value, theta, delta };
        }
    }
}

/// Objective evaluation for the solver. Returns `None` off the feasible
/// set; `row_entropy` is the hoisted `beta/2 H(p1)` for this `theta`.
#[inline]
fn eval(theta: f64, delta: f64, row_entropy: f64, params: &RegimeParams) -> Option<f64> {
    let alpha = params.alpha;
    let beta = params.beta;
    if !within(delta, 0.0, alpha) {
        return None;
    }
    let rho = rho_star(theta, delta, params);
    if !within(rho, 0.0, alpha) {
        return None;
    }
    let w4 = params.block4_weight();
    let p4 = (theta + delta - beta) / w4;
    if !within(p4, 0.0, 1.0) {
        return None;
    }
    let p23 = (rho + beta - delta - 2.0 * theta) / beta;
    if !within(p23, 0.0, 1.0) {
        return None;
    }
    Some(row_entropy + beta * entropy_unchecked(clamp01(p23)) + w4 * entropy_unchecked(clamp01(p4)))
}

/// Row entropy term, or `None` if `theta` itself is infeasible.
#[inline]
fn row_term(theta: f64, params: &RegimeParams) -> Option<f64> {
    let p1 = 2.0 * theta / params.beta;
    within(p1, 0.0, 1.0).then(|| params.beta / 2.0 * entropy_unchecked(clamp01(p1)))
}

/// Three-ball exponent `f3(alpha, beta)`.
pub fn f3(params: &RegimeParams, config: &SolverConfig) -> Result<RateResult> {
    params.require_nontrivial()?;
    let beta = params.beta;
    if beta >= 2.0 / 3.0 {
        return Err(Error::Domain("f3 needs beta < 2/3 (block I4 must be nonempty)".into()));
    }
    if config.mesh == 0 || config.shrink < 2 {
        return Err(Error::InvalidArgument("solver mesh must be positive and shrink at least 2".into()));
    }
    let alpha = params.alpha;
    let theta_max = beta / 2.0;
    let n = config.mesh;
    let mut step_theta = theta_max / n as f64;
    let mut step_delta = alpha / n as f64;

    let mut best = Incumbent { value: f64::NEG_INFINITY, theta: f64::NAN, delta: f64::NAN };
    for i in 0..=n {
        let theta = theta_max * (i as f64 / n as f64);
        let Some(row) = row_term(theta, params) else { continue };
        // Outside this delta interval some density leaves [0, 1]; pad by two steps.
        let lo = (beta / 2.0 - 2.0 * theta).max(beta - theta).max(0.0) - 2.0 * step_delta;
        let hi = alpha.min(beta - theta + params.block4_weight()).min(alpha + beta - 2.0 * theta) + 2.0 * step_delta;
        if hi < lo {
            continue;
        }
        let j_lo = ((lo / step_delta).floor().max(0.0)) as usize;
        let j_hi = ((hi / step_delta).ceil().min(n as f64)) as usize;
        for j in j_lo..=j_hi {
            let delta = alpha * (j as f64 / n as f64);
            if let Some(v) = eval(theta, delta, row, params) {
                best.offer(v, theta, delta);
            }
        }
    }
    if !best.value.is_finite() {
        return Err(Error::Domain(format!("no feasible grid point for alpha={alpha}, beta={beta} at mesh {n}")));
    }
    let mut levels =
        vec![GridLevel { level: 0, step_theta, step_delta, value: best.value, theta: best.theta, delta: best.delta }];

    let k = config.half_width as i64;
    for level in 1..=config.levels {
        step_theta /= config.shrink as f64;
        step_delta /= config.shrink as f64;
        let prev = best;
        for i in -k..=k {
            let theta = prev.theta + i as f64 * step_theta;
            if !(0.0..=theta_max).contains(&theta) {
                continue;
            }
            let Some(row) = row_term(theta, params) else { continue };
            for j in -k..=k {
                let delta = prev.delta + j as f64 * step_delta;
                if !(0.0..=alpha).contains(&delta) {
                    continue;
                }
                if let Some(v) = eval(theta, delta, row, params) {
                    best.offer(v, theta, delta);
                }
            }
        }
        levels.push(GridLevel {
            level,
            step_theta,
            step_delta,
            value: best.value,
            theta: best.theta,
            delta: best.delta,
        });
        let moved = (best.theta - prev.theta).abs().max((best.delta - prev.delta).abs());
        if moved < config.tolerance {
            break;
        }
    }

    let argmax = NormalizedProfile::at(best.theta, best.delta, params)?;
    let value = phi(best.theta, best.delta, params)?;
    Ok(RateResult {
        params: *params,
        value,
        active_constraints: active_constraints(&argmax, params),
        argmax,
        grid_levels: levels,
    })
}

/// Two-ball exponent `beta ln 2 + (1 - beta) H((alpha - beta/2) / (1 - beta))`.
pub fn g2(params: &RegimeParams) -> Result<f64> {
    let RegimeParams { alpha, beta } = *params;
    if !(beta > 0.0 && beta < 1.0) || !(alpha >= beta / 2.0 && alpha <= 0.5) {
        return Err(Error::Domain(format!(
            "g2 needs 0 < beta < 1 and beta/2 <= alpha <= 1/2, got alpha={alpha}, beta={beta}"
        )));
    }
    let p = clamp01((alpha - beta / 2.0) / (1.0 - beta));
    Ok(beta * std::f64::consts::LN_2 + (1.0 - beta) * entropy_unchecked(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binary_entropy;
    use std::f64::consts::LN_2;

    fn p(alpha: f64, beta: f64) -> RegimeParams {
        RegimeParams::new(alpha, beta)
    }

    #[test]
    fn regime_classification() {
        assert_eq!(p(0.3, 0.2).regime(), Regime::Nontrivial);
        assert_eq!(p(0.1, 0.4).regime(), Regime::InfeasibleEmpty);
        assert_eq!(p(0.5, 0.7).regime(), Regime::InfeasibleCenters);
        assert_eq!(p(0.5, 0.0).regime(), Regime::OutOfDomain);
        assert_eq!(p(f64::NAN, 0.2).regime(), Regime::OutOfDomain);
        assert_eq!(p(0.1, 0.2).regime(), Regime::Nontrivial);
    }

    #[test]
    fn rho_star_examples() {
        let q = p(0.2, 0.4);
        assert_eq!(rho_star(0.2, 0.2, &q), 0.2);
        assert_eq!(rho_star(0.0, 0.0, &q), -0.2);
        assert_eq!(rho_star(0.2, 0.2, &p(0.25, 0.4)), 0.25f64.min(0.2 + 0.4 - 0.2));
        assert_eq!(rho_star(0.3, 0.3, &p(0.1, 0.2)), 0.1);
    }

    #[test]
    fn density_examples() {
        let (p1, p23, p4) = densities(0.2, 0.2, &p(0.2, 0.4)).unwrap();
        assert!((p1 - 1.0).abs() < 1e-15 && p23.abs() < 1e-15 && p4.abs() < 1e-15);
        let beta = 0.3;
        let (p1, _, p4) = densities(0.0, beta, &p(0.3, beta)).unwrap();
        assert_eq!(p1, 0.0);
        assert!(p4.abs() < 1e-15);
        // rho* = beta/2 (balancing branch), so p23 = 1/2
        let (p1, p23, _) = densities(beta / 4.0, beta / 2.0, &p(0.9, beta)).unwrap();
        assert!((p1 - 0.5).abs() < 1e-15);
        assert!((p23 - 0.5).abs() < 1e-15);
        assert!(densities(0.1, 0.1, &p(0.5, 0.7)).is_err());
        assert!(densities(0.1, 0.1, &p(0.5, 0.0)).is_err());
    }

    #[test]
    fn phi_examples() {
        assert!(phi(0.2, 0.2, &p(0.2, 0.4)).unwrap().abs() < 1e-12);
        // p1 = p23 = p4 = 1/2 needs theta = beta/4, delta = 1/2 with alpha = 1/2.
        for beta in [0.1, 0.3, 0.5] {
            let v = phi(beta / 4.0, 0.5, &p(0.5, beta)).unwrap();
            assert!((v - LN_2).abs() < 1e-12, "beta={beta}: {v}");
        }
        let q = p(0.3, 0.2);
        let (theta, delta) = (0.05, 0.15);
        let rho = 0.3f64.min(0.15 + 0.1 - 0.1);
        let term1 = 0.1 * binary_entropy(0.1 / 0.2).unwrap();
        let term2 = 0.2 * binary_entropy((rho + 0.2 - 0.15 - 0.1) / 0.2).unwrap();
        let term3 = 0.7 * binary_entropy((0.05 + 0.15 - 0.2) / 0.7).unwrap();
        assert!((phi(theta, delta, &q).unwrap() - (term1 + term2 + term3)).abs() < 1e-12);
        assert!(matches!(phi(0.0, 0.0, &q), Err(Error::InfeasibleProfile { .. })));
    }

    #[test]
    fn feasibility_examples() {
        assert!(is_feasible(0.2, 0.2, &p(0.2, 0.4)));
        assert!(!is_feasible(0.0, 0.0, &p(0.3, 0.2)));
        assert!(!is_feasible(0.05, 0.31, &p(0.3, 0.2)));
        assert!(!is_feasible(0.05, 0.2, &p(0.3, 0.7)));
    }

    #[test]
    fn f3_errors() {
        let cfg = SolverConfig::default();
        assert!(matches!(f3(&p(0.1, 0.4), &cfg), Err(Error::EmptyIntersection { .. })));
        assert!(matches!(f3(&p(0.5, 0.7), &cfg), Err(Error::CentersRegime { .. })));
        assert!(matches!(f3(&p(0.5, 2.0 / 3.0), &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn f3_at_critical_boundary_is_zero() {
        let cfg = SolverConfig::default();
        for alpha in [0.1, 0.2, 0.3] {
            let res = f3(&p(alpha, 2.0 * alpha), &cfg).unwrap();
            assert!(res.value.abs() < 1e-6, "alpha={alpha}: {}", res.value);
            assert!((res.argmax.p1 - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn f3_result_is_consistent() {
        let q = p(0.3, 0.2);
        let res = f3(&q, &SolverConfig::default()).unwrap();
        assert!(res.value <= LN_2);
        assert!(is_feasible(res.argmax.theta, res.argmax.delta, &q));
        assert!((res.value - phi(res.argmax.theta, res.argmax.delta, &q).unwrap()).abs() <= 1e-12);
        let again = NormalizedProfile::at(res.argmax.theta, res.argmax.delta, &q).unwrap();
        assert_eq!(again, res.argmax);
        for w in res.grid_levels.windows(2) {
            assert!(w[1].value >= w[0].value);
        }
        assert!(!res.active_constraints.is_empty());
    }

    #[test]
    fn g2_examples() {
        assert!((g2(&p(0.5, 0.5)).unwrap() - LN_2).abs() < 1e-15);
        for beta in [0.1, 0.4, 0.8] {
            assert!((g2(&p(beta / 2.0, beta)).unwrap() - beta * LN_2).abs() < 1e-15);
        }
        assert!((g2(&p(0.3, 0.2)).unwrap() - 0.588_497_551_807_035_7).abs() < 1e-12);
        assert!(g2(&p(0.6, 0.2)).is_err());
        assert!(g2(&p(0.05, 0.2)).is_err());
        assert!(g2(&p(0.5, 1.0)).is_err());
    }
}
