//! Ends an instance right after an allocator short-changes someone.

use super::AdversarialError;
use crate::algorithms::OnlineAllocator;
use crate::model::{validate_instance, Instance};

const SEEN_SHARE_TOL: f64 = 1e-12;

/// Runs `allocator` over the unnormalized `prefix`. At the first round where
/// some agent holds less than `1/n` of the value she has seen so far, returns
/// the prefix up to that round followed by one all-zero round: nothing that
/// arrives later can repair her share. Returns `None` if every agent kept her
/// share of the seen value throughout.
pub fn truncation_adversary<A: OnlineAllocator>(
    mut allocator: A,
    prefix: &[Vec<f64>],
) -> Result<Option<Instance>, AdversarialError> {
    let checked = validate_instance(prefix, false)?;
    let n = checked.agents();
    let mut seen = vec![0.0; n];
    let mut utility = vec![0.0; n];
    for t in 0..checked.rounds() {
        let round = checked.round(t);
        let x = allocator.allocate(round)?;
        for i in 0..n {
            seen[i] += round[i];
            utility[i] += x[i] * round[i];
        }
        if (0..n).any(|i| utility[i] < seen[i] / n as f64 - SEEN_SHARE_TOL) {
            let mut rows = prefix[..=t].to_vec();
            rows.push(vec![0.0; n]);
            return Ok(Some(validate_instance(&rows, false)?));
        }
    }
    Ok(None)
}
