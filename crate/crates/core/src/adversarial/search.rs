//! Grid scan followed by a bounded Nelder-Mead refinement.

use rayon::prelude::*;

use super::{domain_error, AdversarialError, AlphaObjective};

/// Distance kept from every face of the objective's box.
pub const DOMAIN_MARGIN: f64 = 1e-6;

const MAX_REFINE_ITERATIONS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub argmin: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub refined: bool,
}

fn axis_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let (a, b) = (lo + DOMAIN_MARGIN, hi - DOMAIN_MARGIN);
    if a > b {
        return Vec::new();
    }
    let count = ((b - a) / step + 1e-9).floor() as usize;
    let mut pts: Vec<f64> = (0..=count).map(|k| a + k as f64 * step).collect();
    if b - pts[pts.len() - 1] > 1e-12 {
        pts.push(b);
    }
    pts
}

/// Infeasible points and evaluation errors score as +∞ so that both phases
/// simply avoid them.
fn score(objective: &AlphaObjective, x: &[f64]) -> f64 {
    objective.eval(x).unwrap_or(f64::INFINITY)
}

/// Minimizes `objective` over its box: a row-major grid scan at `grid_step`
/// (first point wins ties) seeds a Nelder-Mead descent that stops once the
/// simplex is smaller than `refine_tol`.
pub fn minimize_alpha(
    objective: &AlphaObjective,
    grid_step: f64,
    refine_tol: f64,
) -> Result<SearchResult, AdversarialError> {
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return Err(domain_error(format!(
            "grid step must be positive, got {grid_step}"
        )));
    }
    if !(refine_tol > 0.0 && refine_tol.is_finite()) {
        return Err(domain_error(format!(
            "refine tolerance must be positive, got {refine_tol}"
        )));
    }
    let axes: Vec<Vec<f64>> = objective
        .domain
        .iter()
        .map(|&(lo, hi)| axis_points(lo, hi, grid_step))
        .collect();
    if axes.is_empty() || axes.iter().any(Vec::is_empty) {
        return Err(AdversarialError::EmptyDomain);
    }
    let grid_size: usize = axes.iter().map(Vec::len).product();

    // Each outer index is scanned independently; the ordered collect keeps
    // the reduction row-major whatever the scheduling.
    let inner: usize = axes[1..].iter().map(Vec::len).product();
    let row_best: Vec<Option<(f64, Vec<f64>)>> = axes[0]
        .par_iter()
        .map(|&first| {
            let mut best: Option<(f64, Vec<f64>)> = None;
            let mut point = vec![first; axes.len()];
            for flat in 0..inner {
                let mut rest = flat;
                for d in (1..axes.len()).rev() {
                    point[d] = axes[d][rest % axes[d].len()];
                    rest /= axes[d].len();
                }
                let v = score(objective, &point);
                if v.is_finite() && best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, point.clone()));
                }
            }
            best
        })
        .collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for cand in row_best.into_iter().flatten() {
        if best.as_ref().is_none_or(|(b, _)| cand.0 < *b) {
            best = Some(cand);
        }
    }
    let (_, start) = best.ok_or(AdversarialError::EmptyDomain)?;

    let lower: Vec<f64> = objective
        .domain
        .iter()
        .map(|d| d.0 + DOMAIN_MARGIN)
        .collect();
    let upper: Vec<f64> = objective
        .domain
        .iter()
        .map(|d| d.1 - DOMAIN_MARGIN)
        .collect();
    let (argmin, nm_evals) = nelder_mead(
        |x| {
            if x.iter().zip(&lower).any(|(v, lo)| v < lo)
                || x.iter().zip(&upper).any(|(v, hi)| v > hi)
            {
                f64::INFINITY
            } else {
                score(objective, x)
            }
        },
        &start,
        grid_step,
        &lower,
        &upper,
        refine_tol,
    );
    let value = objective.eval(&argmin)?;
    Ok(SearchResult {
        argmin,
        value,
        evaluations: grid_size + nm_evals + 1,
        refined: true,
    })
}

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). Returns the best vertex and the number of evaluations.
fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    start: &[f64],
    step: f64,
    lower: &[f64],
    upper: &[f64],
    tol: f64,
) -> (Vec<f64>, usize) {
    let dim = start.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64]| {
        evals += 1;
        f(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = eval(start);
    simplex.push((start.to_vec(), v0));
    for d in 0..dim {
        let mut x = start.to_vec();
        // Step inward if the vertex would leave the box.
        x[d] = if x[d] + step <= upper[d] {
            x[d] + step
        } else {
            (x[d] - step).max(lower[d])
        };
        let v = eval(&x);
        simplex.push((x, v));
    }

    let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
    };

    for _ in 0..MAX_REFINE_ITERATIONS {
        // Stable sort keeps earlier vertices first on ties.
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if size < tol {
            break;
        }
        let worst = simplex[dim].clone();
        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let reflected = combine(&centroid, &worst.0, -1.0);
        let fr = eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = combine(&centroid, &worst.0, -2.0);
            let fe = eval(&expanded);
            simplex[dim] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
            continue;
        }
        let (toward, ft) = if fr < worst.1 {
            (reflected, fr)
        } else {
            (worst.0.clone(), worst.1)
        };
        let contracted = combine(&centroid, &toward, 0.5);
        let fc = eval(&contracted);
        if fc < ft {
            simplex[dim] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = combine(&best, &vertex.0, 0.5);
            let v = eval(&x);
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    (simplex.swap_remove(0).0, evals)
}
