//! Closed-form approximation ratios of small worst-case instances.
//!
//! Two-agent instances are parameterized either directly by the agents'
//! values or, for the guarded allocator, by agent 1's value `v_t` and the
//! value ratio `λ_t = v_2t / v_1t` of each item before the critical point.

use super::{domain_error, AdversarialError};
use crate::algorithms::run_guarded;
use crate::metrics::audit;
use crate::model::three_round_cp;

fn check_p(p: f64) -> Result<(), AdversarialError> {
    if p.is_finite() && p > 0.0 {
        Ok(())
    } else {
        Err(domain_error(format!("p = {p} must be positive and finite")))
    }
}

fn in_unit(v: f64) -> bool {
    v > 0.0 && v <= 1.0
}

/// Ratio of the proportional allocator on the two-round instance where agent
/// 1 holds `(v1, 1 - v1)` and agent 2 holds `(1 - v2, v2)`, with
/// `v1 + v2 ≥ 1` so that the optimum is `v1 + v2`.
pub fn alpha_proportional(v1: f64, v2: f64) -> Result<f64, AdversarialError> {
    if !(in_unit(v1) && in_unit(v2) && v1 + v2 >= 1.0) {
        return Err(domain_error(format!(
            "proportional objective needs v1, v2 in (0, 1] with v1 + v2 >= 1, got ({v1}, {v2})"
        )));
    }
    let d = v1 - v2;
    Ok(2.0 * (1.0 + 2.0 * v1 * v2 - v1 - v2) / ((1.0 - d * d) * (v1 + v2)))
}

/// Ratio of the poly-proportional allocator with exponent `p` on the same
/// two-round family, for `v1 + v2 > 1`.
pub fn alpha_poly_two_round(p: f64, v1: f64, v2: f64) -> Result<f64, AdversarialError> {
    check_p(p)?;
    if !(in_unit(v1) && in_unit(v2) && v1 + v2 > 1.0) {
        return Err(domain_error(format!(
            "two-round objective needs v1, v2 in (0, 1] with v1 + v2 > 1, got ({v1}, {v2})"
        )));
    }
    // Welfare of one round in which the agents value the item at a and b.
    let round = |a: f64, b: f64| (a.powf(p + 1.0) + b.powf(p + 1.0)) / (a.powf(p) + b.powf(p));
    let alg = round(1.0 - v1, v2) + round(1.0 - v2, v1);
    Ok(alg / (v1 + v2))
}

/// Guarded ratio when a single item precedes the critical point:
/// `(λ^p + λ^{p+1}) / (3λ^p - 1)` for `λ ≥ 1`.
pub fn alpha_guarded_case1(p: f64, lambda1: f64) -> Result<f64, AdversarialError> {
    check_p(p)?;
    if !(lambda1.is_finite() && lambda1 >= 1.0) {
        return Err(domain_error(format!(
            "case 1 needs lambda1 >= 1, got {lambda1}"
        )));
    }
    let lp = lambda1.powf(p);
    Ok((lp + lp * lambda1) / (3.0 * lp - 1.0))
}

/// Stationary point of the case-1 ratio: the root of
/// `3λ^{p+1} - (p+1)λ - p` above 1. For `p ≤ 1` the ratio is smallest at
/// `λ = 1` and that is returned.
pub fn case1_critical_lambda(p: f64) -> Result<f64, AdversarialError> {
    check_p(p)?;
    let g = |l: f64| 3.0 * l.powf(p + 1.0) - (p + 1.0) * l - p;
    if g(1.0) >= 0.0 {
        return Ok(1.0);
    }
    let mut hi = 2.0;
    while g(hi) <= 0.0 {
        hi *= 2.0;
    }
    let mut lo = 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Ordering of the two value ratios before the critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case2Subcase {
    /// `λ1 > 1 > λ2 > 0`.
    Mixed,
    /// `λ1, λ2 > 1`.
    BothAbove,
}

impl Case2Subcase {
    pub fn name(self) -> &'static str {
        match self {
            Case2Subcase::Mixed => "mixed",
            Case2Subcase::BothAbove => "both-above",
        }
    }
}

/// Everything the case-2 closed forms produce for one `(λ1, λ2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case2ClosedForm {
    pub v1: f64,
    pub v2: f64,
    pub alg: f64,
    pub opt: f64,
    pub alpha: f64,
}

impl Case2ClosedForm {
    /// True when `v1, v2 ≥ 0` and they leave a nonnegative third item.
    pub fn is_feasible(&self) -> bool {
        self.v1 >= 0.0 && self.v2 >= 0.0 && self.v1 + self.v2 <= 1.0
    }
}

/// Evaluates the case-2 closed forms (two items before the critical point,
/// one after) without checking that the implied values are feasible.
pub fn case2_closed_form(
    p: f64,
    lambda1: f64,
    lambda2: f64,
    subcase: Case2Subcase,
) -> Result<Case2ClosedForm, AdversarialError> {
    check_p(p)?;
    let ordered = match subcase {
        Case2Subcase::Mixed => lambda1 > 1.0 && lambda2 < 1.0 && lambda2 > 0.0,
        Case2Subcase::BothAbove => lambda1 > 1.0 && lambda2 > 1.0,
    };
    if !(ordered && lambda1.is_finite() && lambda2.is_finite()) {
        return Err(domain_error(format!(
            "({lambda1}, {lambda2}) does not satisfy the {} ordering",
            subcase.name()
        )));
    }
    let (l1p, l2p) = (lambda1.powf(p), lambda2.powf(p));
    let l2pm1 = lambda2.powf(p - 1.0);
    let denom = l1p * (1.0 + l2p) - lambda1 * l2pm1 * (1.0 + l1p);
    if denom == 0.0 || !denom.is_finite() {
        return Err(domain_error(format!(
            "degenerate denominator at ({lambda1}, {lambda2})"
        )));
    }
    let v1 = (1.0 + l2p - 2.0 * l2pm1) * (1.0 + l1p) / (2.0 * denom);
    let v2 = (1.0 - v1 * lambda1) / lambda2;
    let alg = 0.5 + v1 * l1p * lambda1 / (1.0 + l1p) + v2 * l2p * lambda2 / (1.0 + l2p);
    let opt = match subcase {
        Case2Subcase::Mixed => 2.0 - v1 - v2 * lambda2,
        Case2Subcase::BothAbove => 2.0 - v1 - v2,
    };
    Ok(Case2ClosedForm {
        v1,
        v2,
        alg,
        opt,
        alpha: alg / opt,
    })
}

/// Case-2 guarded ratio; values outside the feasible region are reported as
/// [`AdversarialError::InfeasibleClosedForm`] rather than clamped.
pub fn alpha_guarded_case2(
    p: f64,
    lambda1: f64,
    lambda2: f64,
    subcase: Case2Subcase,
) -> Result<f64, AdversarialError> {
    let cf = case2_closed_form(p, lambda1, lambda2, subcase)?;
    if !cf.is_feasible() {
        return Err(AdversarialError::InfeasibleClosedForm {
            v1: cf.v1,
            v2: cf.v2,
        });
    }
    Ok(cf.alpha)
}

/// Which ratio an [`AlphaObjective`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObjectiveKind {
    /// `(v1, v2)`.
    Proportional,
    /// `(v1, v2)`.
    PolyTwoRound,
    /// `v1 = v2 = v`, the symmetric two-round family.
    PolyDiagonal,
    /// `λ1`.
    GuardedCase1,
    /// `(λ1, λ2)`.
    GuardedCase2(Case2Subcase),
    /// `(v11, v21)` of the three-round critical-point family, scored by
    /// simulating the guarded allocator; points without a critical event are
    /// infeasible.
    GuardedCriticalPoint { eps: f64 },
}

/// A named approximation-ratio function over a box.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaObjective {
    pub kind: ObjectiveKind,
    pub p: Option<f64>,
    /// Closed box `[lo, hi]` per coordinate; the search stays a margin away
    /// from its faces.
    pub domain: Vec<(f64, f64)>,
}

impl AlphaObjective {
    pub fn proportional() -> Self {
        Self {
            kind: ObjectiveKind::Proportional,
            p: None,
            domain: vec![(0.0, 1.0), (0.0, 1.0)],
        }
    }

    pub fn poly_two_round(p: f64) -> Self {
        Self {
            kind: ObjectiveKind::PolyTwoRound,
            p: Some(p),
            domain: vec![(0.0, 1.0), (0.0, 1.0)],
        }
    }

    pub fn poly_diagonal(p: f64) -> Self {
        Self {
            kind: ObjectiveKind::PolyDiagonal,
            p: Some(p),
            domain: vec![(0.5, 1.0)],
        }
    }

    pub fn guarded_case1(p: f64) -> Self {
        Self {
            kind: ObjectiveKind::GuardedCase1,
            p: Some(p),
            domain: vec![(1.0, 4.0)],
        }
    }

    pub fn guarded_case2(p: f64, subcase: Case2Subcase) -> Self {
        let second = match subcase {
            Case2Subcase::Mixed => (0.0, 1.0),
            Case2Subcase::BothAbove => (1.0, 10.0),
        };
        Self {
            kind: ObjectiveKind::GuardedCase2(subcase),
            p: Some(p),
            domain: vec![(1.0, 4.0), second],
        }
    }

    pub fn guarded_critical_point(p: f64, eps: f64) -> Self {
        Self {
            kind: ObjectiveKind::GuardedCriticalPoint { eps },
            p: Some(p),
            domain: vec![(0.0, 1.0), (0.0, 1.0)],
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ObjectiveKind::Proportional => "proportional",
            ObjectiveKind::PolyTwoRound => "poly-two-round",
            ObjectiveKind::PolyDiagonal => "poly-diagonal",
            ObjectiveKind::GuardedCase1 => "guarded-case1",
            ObjectiveKind::GuardedCase2(Case2Subcase::Mixed) => "guarded-case2-mixed",
            ObjectiveKind::GuardedCase2(Case2Subcase::BothAbove) => "guarded-case2-above",
            ObjectiveKind::GuardedCriticalPoint { .. } => "guarded-cp",
        }
    }

    pub fn dim(&self) -> usize {
        self.domain.len()
    }

    fn p(&self) -> Result<f64, AdversarialError> {
        self.p
            .ok_or_else(|| domain_error(format!("{} needs an exponent", self.name())))
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, AdversarialError> {
        if x.len() != self.dim() {
            return Err(domain_error(format!(
                "{} takes {} coordinates, got {}",
                self.name(),
                self.dim(),
                x.len()
            )));
        }
        match self.kind {
            ObjectiveKind::Proportional => alpha_proportional(x[0], x[1]),
            ObjectiveKind::PolyTwoRound => alpha_poly_two_round(self.p()?, x[0], x[1]),
            ObjectiveKind::PolyDiagonal => alpha_poly_two_round(self.p()?, x[0], x[0]),
            ObjectiveKind::GuardedCase1 => alpha_guarded_case1(self.p()?, x[0]),
            ObjectiveKind::GuardedCase2(sub) => alpha_guarded_case2(self.p()?, x[0], x[1], sub),
            ObjectiveKind::GuardedCriticalPoint { eps } => {
                let inst = three_round_cp(x[0], x[1], eps)?;
                let trace = run_guarded(&inst, self.p()?)?;
                if trace.critical_event.is_none() {
                    return Err(domain_error("no critical point on this instance"));
                }
                Ok(audit(&inst, &trace.allocation, crate::DEFAULT_TOL)?.ratio)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proportional_values() {
        let a = 1.0 / 2f64.sqrt();
        let v = alpha_proportional(a, a).unwrap();
        assert!((v - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((v - 0.828_427_1).abs() < 1e-7);
        assert_eq!(alpha_proportional(1.0, 1.0).unwrap(), 1.0);
        assert!(alpha_proportional(0.3, 0.4).is_err());
        assert!(alpha_proportional(1.2, 0.4).is_err());
    }

    #[test]
    fn proportional_matches_first_form() {
        // Same ratio written as per-round welfare over the optimum.
        for (v1, v2) in [(0.9, 0.6), (0.55, 0.7), (0.99, 0.02)] {
            let alg = (v1 * v1 + (1.0 - v2) * (1.0 - v2)) / (v1 + 1.0 - v2)
                + ((1.0 - v1) * (1.0 - v1) + v2 * v2) / (v2 + 1.0 - v1);
            let direct = alg / (v1 + v2);
            assert!((alpha_proportional(v1, v2).unwrap() - direct).abs() < 1e-14);
            assert!((alpha_poly_two_round(1.0, v1, v2).unwrap() - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn poly_two_round_values() {
        assert!((alpha_poly_two_round(2.0, 0.6265, 0.6265).unwrap() - 0.8941).abs() < 1e-4);
        assert!((alpha_poly_two_round(2.0, 0.355, 0.985).unwrap() - 0.9234).abs() < 1e-4);
        assert!((alpha_poly_two_round(2.7, 0.599, 0.599).unwrap() - 0.9164).abs() < 1e-4);
        assert!(alpha_poly_two_round(2.0, 0.3, 0.5).is_err());
        assert!(alpha_poly_two_round(0.0, 0.7, 0.7).is_err());
    }

    #[test]
    fn guarded_case1_values() {
        assert!(alpha_guarded_case1(2.7, 1.27764).unwrap() > 0.916);
        assert_eq!(alpha_guarded_case1(2.7, 1.0).unwrap(), 1.0);
        assert!(alpha_guarded_case1(2.7, 0.9).is_err());
        let root = case1_critical_lambda(2.7).unwrap();
        assert!((root - 1.27764).abs() < 1e-5);
        // Derivative numerator vanishes at the root and α is minimal there.
        let a = alpha_guarded_case1(2.7, root).unwrap();
        assert!(alpha_guarded_case1(2.7, root - 1e-3).unwrap() > a);
        assert!(alpha_guarded_case1(2.7, root + 1e-3).unwrap() > a);
        let r3 = case1_critical_lambda(3.0).unwrap();
        let a3 = alpha_guarded_case1(3.0, r3).unwrap();
        assert!(a3 < a, "case-1 bound keeps falling past p = 2.7");
        assert!((a3 - 0.904).abs() < 1e-3);
        assert_eq!(case1_critical_lambda(0.5).unwrap(), 1.0);
    }

    #[test]
    fn guarded_case2_values() {
        let a = alpha_guarded_case2(2.7, 1.3362, 0.711757, Case2Subcase::Mixed).unwrap();
        assert!(a > 0.93);
        let mid = alpha_guarded_case2(2.7, 1.2, 0.8, Case2Subcase::Mixed).unwrap();
        assert!(mid > 0.9 && mid <= 1.0);
        // The published both-above point sits just outside the feasible set.
        let cf = case2_closed_form(2.7, 1.49709, 6.55238, Case2Subcase::BothAbove).unwrap();
        assert!(cf.v2 < 0.0 && cf.v2 > -1e-4);
        assert!(cf.alpha > 0.93);
        assert!(matches!(
            alpha_guarded_case2(2.7, 1.49709, 6.55238, Case2Subcase::BothAbove),
            Err(AdversarialError::InfeasibleClosedForm { .. })
        ));
        assert!(alpha_guarded_case2(2.7, 0.8, 1.2, Case2Subcase::Mixed).is_err());
        assert!(alpha_guarded_case2(2.7, 1.5, 0.5, Case2Subcase::BothAbove).is_err());
    }

    #[test]
    fn objective_dispatch() {
        let o = AlphaObjective::poly_diagonal(2.0);
        assert_eq!(o.dim(), 1);
        assert!((o.eval(&[0.6265]).unwrap() - 0.8941).abs() < 1e-4);
        assert!(o.eval(&[0.6, 0.6]).is_err());
        let cp = AlphaObjective::guarded_critical_point(2.7, 1e-6);
        assert!((cp.eval(&[0.76, 0.97]).unwrap() - 0.916).abs() < 2e-3);
        assert!(
            cp.eval(&[0.6, 0.6]).is_err(),
            "no critical point on a mild instance"
        );
        assert_eq!(
            AlphaObjective::guarded_case2(2.7, Case2Subcase::BothAbove).name(),
            "guarded-case2-above"
        );
    }
}
