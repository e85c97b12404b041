//! Explicit instances behind the closed forms and the impossibility results.

use super::objectives::{case2_closed_form, Case2Subcase};
use super::{domain_error, AdversarialError};
use crate::model::{three_round_cp, validate_instance, Instance};

/// Two rounds with agent 1 holding `(v1, 1 - v1)` and agent 2 holding
/// `(1 - v2, v2)`.
pub fn two_round_instance(v1: f64, v2: f64) -> Result<Instance, AdversarialError> {
    if !((0.0..=1.0).contains(&v1) && (0.0..=1.0).contains(&v2)) {
        return Err(domain_error(format!(
            "values ({v1}, {v2}) must lie in [0, 1]"
        )));
    }
    Ok(validate_instance(
        &[vec![v1, 1.0 - v2], vec![1.0 - v1, v2]],
        true,
    )?)
}

/// Critical-point instance whose first item has value ratio `λ1` and whose
/// first-item values make the guard trip with no slack: agent 1 values it at
/// `(1 + λ1^p) / (2λ1^p)`, agent 2 at `λ1` times that. `eps` is the residual
/// mass of the two tail items.
pub fn case1_instance(p: f64, lambda1: f64, eps: f64) -> Result<Instance, AdversarialError> {
    if !(p > 0.0 && p.is_finite() && lambda1 >= 1.0 && lambda1.is_finite()) {
        return Err(domain_error(format!(
            "case 1 needs p > 0 and lambda1 >= 1, got ({p}, {lambda1})"
        )));
    }
    let lp = lambda1.powf(p);
    let v11 = (1.0 + lp) / (2.0 * lp);
    Ok(three_round_cp(v11, lambda1 * v11, eps)?)
}

/// Three-round instance realizing the case-2 closed forms:
/// `[[v1, λ1 v1], [v2, λ2 v2], [1 - v1 - v2, 0]]`.
pub fn case2_instance(
    p: f64,
    lambda1: f64,
    lambda2: f64,
    subcase: Case2Subcase,
) -> Result<Instance, AdversarialError> {
    let cf = case2_closed_form(p, lambda1, lambda2, subcase)?;
    if !cf.is_feasible() {
        return Err(AdversarialError::InfeasibleClosedForm {
            v1: cf.v1,
            v2: cf.v2,
        });
    }
    let rows = [
        vec![cf.v1, lambda1 * cf.v1],
        vec![cf.v2, lambda2 * cf.v2],
        vec![1.0 - cf.v1 - cf.v2, 0.0],
    ];
    Ok(validate_instance(&rows, true)?)
}

/// Two rounds on which poly-proportional with `p > 2` leaves agent 1 below
/// her fair share: `[[x, 1], [1 - x, 0]]` with `x = (1/(p-1))^{1/p}`.
pub fn fair_share_violation_instance(p: f64) -> Result<Instance, AdversarialError> {
    if !(p > 2.0 && p.is_finite()) {
        return Err(AdversarialError::PNotAboveTwo(p));
    }
    let x = (1.0 / (p - 1.0)).powf(1.0 / p);
    Ok(validate_instance(
        &[vec![x, 1.0], vec![1.0 - x, 0.0]],
        true,
    )?)
}

/// The two branches of the online lower bound. They agree on round 1, so an
/// online algorithm must commit to the same first split on both.
pub fn lower_bound_instances() -> (Instance, Instance) {
    let first = vec![0.568, 0.427];
    let a = validate_instance(&[first.clone(), vec![0.432, 0.573]], true)
        .expect("branch 1 is normalized");
    let b = validate_instance(&[first, vec![0.432, 0.306], vec![0.0, 0.267]], true)
        .expect("branch 2 is normalized");
    (a, b)
}

fn perfect_root(n: usize) -> Result<usize, AdversarialError> {
    let s = (n as f64).sqrt().round() as usize;
    if n < 4 || s * s != n {
        return Err(AdversarialError::NotPerfectSquare(n));
    }
    Ok(s)
}

/// `n` agents over `√n + n` rounds. Each of the first `√n` rounds is worth
/// `(n-1)/n` to one of the first `√n` agents and `(n-1)/(n√n)` to every agent
/// past them; the last `n` rounds give each agent `1/n` in turn.
pub fn multi_agent_instance(n: usize) -> Result<Instance, AdversarialError> {
    let s = perfect_root(n)?;
    let nf = n as f64;
    let heavy = (nf - 1.0) / nf;
    let light = heavy / s as f64;
    let mut rows = Vec::with_capacity(s + n);
    for t in 0..s {
        let mut row = vec![0.0; n];
        row[t] = heavy;
        for v in row.iter_mut().skip(s) {
            *v = light;
        }
        rows.push(row);
    }
    for i in 0..n {
        let mut row = vec![0.0; n];
        row[i] = 1.0 / nf;
        rows.push(row);
    }
    Ok(validate_instance(&rows, true)?)
}

/// Welfare bounds attached to [`multi_agent_instance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiAgentBounds {
    pub n: usize,
    /// Best welfare of any fair-share allocation, `(n-1)/√n + 1`.
    pub offline_fair_share_opt: f64,
    /// Most welfare a fair-share online algorithm can collect from the first
    /// `√n` rounds, `2 - (n + 2√n - 1)/(n√n)`.
    pub prefix_welfare: f64,
    /// Prefix bound plus the `n · 1/n` of the tail rounds.
    pub online_welfare: f64,
    /// `online_welfare / offline_fair_share_opt`.
    pub ratio: f64,
}

/// The prefix must keep `1/n` of each round for every agent past the first
/// `√n` (their later value is zero in the other branch), leaving `1/√n` of
/// each heavy round for its owner.
pub fn multi_agent_bounds(n: usize) -> Result<MultiAgentBounds, AdversarialError> {
    let s = perfect_root(n)? as f64;
    let nf = n as f64;
    let offline = (nf - 1.0) / s + 1.0;
    let prefix = 2.0 - (nf + 2.0 * s - 1.0) / (nf * s);
    let online = prefix + 1.0;
    Ok(MultiAgentBounds {
        n,
        offline_fair_share_opt: offline,
        prefix_welfare: prefix,
        online_welfare: online,
        ratio: online / offline,
    })
}
