//! Runs an online allocator against both branches of the lower-bound pair.

use super::constructions::lower_bound_instances;
use super::AdversarialError;
use crate::algorithms::OnlineAllocator;
use crate::metrics::audit;
use crate::model::{Allocation, Instance};
use crate::DEFAULT_TOL;

/// No fair-share algorithm beats this ratio on both branches.
pub const LOWER_BOUND_RATIO: f64 = 0.933;

const FIRST_SHARE_THRESHOLD: f64 = 0.6977;

/// Which branch of the impossibility argument the algorithm's choices fall
/// into. Informational: the verdict itself rests on the simulated ratios and
/// audits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBoundCase {
    /// `x11 < 0.6977`: fair share for agent 1 costs welfare on branch 1.
    SmallFirstShare,
    /// `x'22 < (0.427 x11 - 0.194) / 0.306`: agent 2 ends below 1/2 on branch 2.
    StarvesAgentTwo,
    /// Otherwise branch 2 loses welfare.
    GenerousSecondShare,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundVerdict {
    pub ratio1: f64,
    pub ratio2: f64,
    pub fair_share_violated: bool,
    /// Agent 1's share of the common first item.
    pub x11: f64,
    /// Agent 2's share of the second item on branch 2.
    pub x22_prime: f64,
    pub case: LowerBoundCase,
}

impl LowerBoundVerdict {
    pub fn min_ratio(&self) -> f64 {
        self.ratio1.min(self.ratio2)
    }

    /// The impossibility result: the ratio bound or fair share must give.
    pub fn consistent(&self) -> bool {
        self.min_ratio() <= LOWER_BOUND_RATIO + 1e-6 || self.fair_share_violated
    }
}

fn finish<A: OnlineAllocator>(
    alloc: &mut A,
    first: &[f64],
    instance: &Instance,
) -> Result<Allocation, AdversarialError> {
    let mut rows = vec![first.to_vec()];
    for t in 1..instance.rounds() {
        rows.push(alloc.allocate(instance.round(t))?);
    }
    Ok(Allocation::from_rows(&rows)?)
}

/// Feeds the shared first round once, then continues a clone of the
/// allocator on each branch so both see the same first decision.
pub fn replay_lower_bound<A: OnlineAllocator + Clone>(
    allocator: A,
) -> Result<LowerBoundVerdict, AdversarialError> {
    let (one, two) = lower_bound_instances();
    let mut a = allocator;
    let first = a.allocate(one.round(0))?;
    let mut b = a.clone();
    let alloc1 = finish(&mut a, &first, &one)?;
    let alloc2 = finish(&mut b, &first, &two)?;
    let v1 = audit(&one, &alloc1, DEFAULT_TOL)?;
    let v2 = audit(&two, &alloc2, DEFAULT_TOL)?;

    let x11 = first[0];
    let x22_prime = alloc2.fraction(1, 1);
    let case = if x11 < FIRST_SHARE_THRESHOLD {
        LowerBoundCase::SmallFirstShare
    } else if x22_prime < (0.427 * x11 - 0.194) / 0.306 {
        LowerBoundCase::StarvesAgentTwo
    } else {
        LowerBoundCase::GenerousSecondShare
    };
    Ok(LowerBoundVerdict {
        ratio1: v1.ratio,
        ratio2: v2.ratio,
        fair_share_violated: !(v1.fair_share_ok && v2.fair_share_ok),
        x11,
        x22_prime,
        case,
    })
}
