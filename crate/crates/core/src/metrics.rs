//! Fairness and efficiency audits.

use thiserror::Error;

use crate::model::{Allocation, Instance, RunTrace, Verdict};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error(
        "instance is {inst_rounds}x{inst_agents} but allocation is {alloc_rounds}x{alloc_agents}"
    )]
    ShapeMismatch {
        inst_rounds: usize,
        inst_agents: usize,
        alloc_rounds: usize,
        alloc_agents: usize,
    },
    #[error("expected {expected} entries, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

fn check_shape(instance: &Instance, allocation: &Allocation) -> Result<(), MetricsError> {
    if instance.rounds() != allocation.rounds() || instance.agents() != allocation.agents() {
        return Err(MetricsError::ShapeMismatch {
            inst_rounds: instance.rounds(),
            inst_agents: instance.agents(),
            alloc_rounds: allocation.rounds(),
            alloc_agents: allocation.agents(),
        });
    }
    Ok(())
}

/// `u_i = Σ_t v_it x_it` for every agent.
pub fn utilities(instance: &Instance, allocation: &Allocation) -> Result<Vec<f64>, MetricsError> {
    check_shape(instance, allocation)?;
    let n = instance.agents();
    let mut u = vec![0.0; n];
    for t in 0..instance.rounds() {
        for (i, ui) in u.iter_mut().enumerate() {
            *ui += instance.value(t, i) * allocation.fraction(t, i);
        }
    }
    Ok(u)
}

/// Value agent `i` assigns to the bundle of agent `j`.
fn cross_value(instance: &Instance, allocation: &Allocation, i: usize, j: usize) -> f64 {
    (0..instance.rounds())
        .map(|t| instance.value(t, i) * allocation.fraction(t, j))
        .sum()
}

/// Unconstrained optimum: every item goes to someone who values it most.
pub fn optimal_welfare(instance: &Instance) -> f64 {
    instance
        .values()
        .rows()
        .map(|r| r.iter().copied().fold(0.0, f64::max))
        .sum()
}

/// Welfare ratio against the unconstrained optimum, fair-share, and (for fully
/// allocated runs) envy-freeness.
pub fn audit(
    instance: &Instance,
    allocation: &Allocation,
    tol: f64,
) -> Result<Verdict, MetricsError> {
    let u = utilities(instance, allocation)?;
    let n = instance.agents();
    let social_welfare: f64 = u.iter().sum();
    let opt = optimal_welfare(instance);
    let ratio = if opt > 0.0 { social_welfare / opt } else { 1.0 };
    let fair_share_margin = u.iter().copied().fold(f64::INFINITY, f64::min) - 1.0 / n as f64;

    let (envy_free_ok, envy_margin) = if allocation.is_full(crate::model::ROUND_SUM_TOL) {
        let mut margin = f64::INFINITY;
        for (i, &ui) in u.iter().enumerate() {
            for j in (0..n).filter(|&j| j != i) {
                margin = margin.min(ui - cross_value(instance, allocation, i, j));
            }
        }
        (Some(margin >= -tol), Some(margin))
    } else {
        (None, None)
    };

    Ok(Verdict {
        utilities: u,
        social_welfare,
        optimal_welfare: opt,
        ratio,
        fair_share_ok: fair_share_margin >= -tol,
        fair_share_margin,
        envy_free_ok,
        envy_margin,
        tolerance: tol,
    })
}

fn deficits(utilities_so_far: &[f64], n: usize) -> Vec<f64> {
    let target = 1.0 / n as f64;
    utilities_so_far
        .iter()
        .map(|&u| (target - u).max(0.0))
        .collect()
}

fn check_dims(utilities_so_far: &[f64], remaining: &[f64], n: usize) -> Result<(), MetricsError> {
    for len in [utilities_so_far.len(), remaining.len()] {
        if len != n {
            return Err(MetricsError::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    Ok(())
}

/// Whether some split of all the agents' remaining value, delivered as one
/// final item, could still give everyone `1/n`.
///
/// Each short agent `i` needs at least `d_i / r_i` of that item, where `d_i`
/// is her shortfall and `r_i` her remaining value; the state is compatible
/// when those needs fit in one item.
pub fn doomsday_compatible(
    utilities_so_far: &[f64],
    remaining: &[f64],
    n: usize,
    tol: f64,
) -> Result<bool, MetricsError> {
    check_dims(utilities_so_far, remaining, n)?;
    let mut need = 0.0;
    for (d, &r) in deficits(utilities_so_far, n).into_iter().zip(remaining) {
        if d <= tol {
            continue;
        }
        if r <= 0.0 {
            return Ok(false);
        }
        need += d / r;
    }
    Ok(need <= 1.0 + tol)
}

/// The explicit witness for a compatible state: each short agent receives
/// exactly `d_i / r_i` of the final item and the slack stays unallocated.
/// `None` when the state is not compatible.
pub fn doomsday_witness(
    utilities_so_far: &[f64],
    remaining: &[f64],
    n: usize,
    tol: f64,
) -> Result<Option<Vec<f64>>, MetricsError> {
    if !doomsday_compatible(utilities_so_far, remaining, n, tol)? {
        return Ok(None);
    }
    let x = deficits(utilities_so_far, n)
        .into_iter()
        .zip(remaining)
        .map(|(d, &r)| if d > tol && r > 0.0 { d / r } else { 0.0 })
        .collect();
    Ok(Some(x))
}

/// Applies the witness of a compatible state to the next round's values and
/// reports whether the resulting state is still compatible.
///
/// Returns `Ok(None)` if the starting state is not compatible.
pub fn witness_carries_forward(
    utilities_so_far: &[f64],
    remaining: &[f64],
    next_round: &[f64],
    n: usize,
    tol: f64,
) -> Result<Option<bool>, MetricsError> {
    check_dims(next_round, remaining, n)?;
    let Some(x) = doomsday_witness(utilities_so_far, remaining, n, tol)? else {
        return Ok(None);
    };
    let u: Vec<f64> = (0..n)
        .map(|i| utilities_so_far[i] + next_round[i] * x[i])
        .collect();
    let r: Vec<f64> = (0..n)
        .map(|i| (remaining[i] - next_round[i]).max(0.0))
        .collect();
    doomsday_compatible(&u, &r, n, tol).map(Some)
}

/// Doomsday compatibility at the end of every round of a run.
pub fn doomsday_trace(
    instance: &Instance,
    trace: &RunTrace,
    tol: f64,
) -> Result<Vec<bool>, MetricsError> {
    check_shape(instance, &trace.allocation)?;
    let n = instance.agents();
    (0..instance.rounds())
        .map(|t| {
            doomsday_compatible(
                trace.cumulative_utility.row(t),
                trace.remaining_value.row(t),
                n,
                tol,
            )
        })
        .collect()
}
