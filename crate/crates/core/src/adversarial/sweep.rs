//! Worst-case ratio of the guarded allocator as a function of `p`, with and
//! without a critical point.

use super::objectives::AlphaObjective;
use super::search::minimize_alpha;
use super::{domain_error, AdversarialError};
use crate::model::DEFAULT_CP_EPS;

/// A row of the published worst-case table. For rows without a critical
/// point the instance is symmetric, so `v21` repeats `v11` (as `v22`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub p: f64,
    pub critical_point: bool,
    pub v11: f64,
    pub v21: f64,
    pub approx: f64,
}

const fn row(p: f64, critical_point: bool, v11: f64, v21: f64, approx: f64) -> TableRow {
    TableRow {
        p,
        critical_point,
        v11,
        v21,
        approx,
    }
}

pub const WORST_CASE_TABLE: [TableRow; 12] = [
    row(2.0, false, 0.626, 0.626, 0.894),
    row(2.1, false, 0.621, 0.621, 0.898),
    row(2.2, false, 0.617, 0.617, 0.902),
    row(2.3, false, 0.613, 0.613, 0.905),
    row(2.4, false, 0.609, 0.609, 0.908),
    row(2.5, false, 0.606, 0.606, 0.911),
    row(2.6, false, 0.602, 0.602, 0.914),
    row(2.7, false, 0.599, 0.599, 0.916),
    row(2.7, true, 0.76, 0.97, 0.916),
    row(2.8, true, 0.75, 0.96, 0.912),
    row(2.9, true, 0.74, 0.95, 0.908),
    row(3.0, true, 0.73, 0.94, 0.904),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Grid step along the symmetric two-round diagonal.
    pub diagonal_step: f64,
    /// Grid step over `(v11, v21)` of the critical-point family.
    pub cp_step: f64,
    pub refine_tol: f64,
    /// Residual mass of the critical-point family's tail items.
    pub cp_eps: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            diagonal_step: 1e-3,
            cp_step: 1e-2,
            refine_tol: 1e-9,
            cp_eps: DEFAULT_CP_EPS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub no_cp_alpha: f64,
    pub no_cp_v11: f64,
    /// `None` when no instance of the family trips the guard.
    pub with_cp_alpha: Option<f64>,
    pub with_cp_v11: Option<f64>,
    pub with_cp_v21: Option<f64>,
}

pub fn worst_case_sweep(p_values: &[f64]) -> Result<Vec<SweepRow>, AdversarialError> {
    worst_case_sweep_with(p_values, &SweepOptions::default())
}

/// For each `p` in `[2, 3]`, in input order: the minimum ratio over the
/// symmetric two-round family and over the three-round family on which the
/// guard trips.
pub fn worst_case_sweep_with(
    p_values: &[f64],
    options: &SweepOptions,
) -> Result<Vec<SweepRow>, AdversarialError> {
    if let Some(p) = p_values.iter().find(|p| !(2.0..=3.0).contains(*p)) {
        return Err(domain_error(format!("sweep covers p in [2, 3], got {p}")));
    }
    p_values
        .iter()
        .map(|&p| {
            let diag = minimize_alpha(
                &AlphaObjective::poly_diagonal(p),
                options.diagonal_step,
                options.refine_tol,
            )?;
            let cp = match minimize_alpha(
                &AlphaObjective::guarded_critical_point(p, options.cp_eps),
                options.cp_step,
                options.refine_tol,
            ) {
                Ok(r) => Some(r),
                Err(AdversarialError::EmptyDomain) => None,
                Err(e) => return Err(e),
            };
            Ok(SweepRow {
                p,
                no_cp_alpha: diag.value,
                no_cp_v11: diag.argmin[0],
                with_cp_alpha: cp.as_ref().map(|r| r.value),
                with_cp_v11: cp.as_ref().map(|r| r.argmin[0]),
                with_cp_v21: cp.as_ref().map(|r| r.argmin[1]),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        let rows = worst_case_sweep(&[3.0, 2.0]).unwrap();
        assert_eq!(rows[0].p, 3.0);
        assert!((rows[1].no_cp_alpha - 0.894).abs() < 1e-3);
        assert!((rows[1].no_cp_v11 - 0.626).abs() < 1e-3);
        assert!((rows[0].with_cp_alpha.unwrap() - 0.904).abs() < 2e-3);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(worst_case_sweep(&[2.5, 3.5]).is_err());
        assert!(worst_case_sweep(&[1.9]).is_err());
        assert_eq!(worst_case_sweep(&[]).unwrap(), vec![]);
    }
}
