//! Online allocators.
//!
//! The non-adaptive poly-proportional rule splits each item in proportion to
//! `v_i^p`; `p = 0` is equal-split, `p = 1` proportional, `p = 2` quadratic
//! and `p = ∞` greedy. The guarded variant (two agents only) follows the same
//! rule until some agent's utility plus her unrevealed value would drop below
//! one half, then hands that agent everything that is left.
//!
//! No allocator ever looks at the number of rounds: the guarded one derives
//! unrevealed value from the normalization `Σ_t v_it = 1`.

use std::fmt;

use thiserror::Error;

use crate::model::{Allocation, CoreError, CriticalEvent, Instance, Matrix, RunTrace};

/// A guard trips once the surplus `u_i + remaining_i - 1/2` would fall below
/// `-TRIP_TOL`. Touching zero without crossing (up to rounding) does not
/// trip, so an agent who has already seen all her value is never handed
/// items she does not want.
pub const TRIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgorithmError {
    #[error("guarded allocation is defined for two agents, got {0}")]
    NotTwoAgents(usize),
    #[error("guarded allocation needs a finite exponent")]
    InfiniteP,
    #[error("exponent must be a nonnegative number, got {0}")]
    InvalidP(f64),
    #[error("guarded allocation needs a normalized instance")]
    NotNormalized,
    #[error("round has {found} values, allocator expects {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Exponent of the poly-proportional rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolyParam {
    Finite(f64),
    Infinity,
}

impl PolyParam {
    pub const EQUAL_SPLIT: PolyParam = PolyParam::Finite(0.0);
    pub const PROPORTIONAL: PolyParam = PolyParam::Finite(1.0);
    pub const QUADRATIC: PolyParam = PolyParam::Finite(2.0);

    pub fn new(p: f64) -> Result<Self, AlgorithmError> {
        if p.is_nan() || p < 0.0 {
            Err(AlgorithmError::InvalidP(p))
        } else if p == f64::INFINITY {
            Ok(PolyParam::Infinity)
        } else {
            Ok(PolyParam::Finite(p))
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            PolyParam::Finite(p) => p,
            PolyParam::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for PolyParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyParam::Finite(p) => write!(f, "{p}"),
            PolyParam::Infinity => f.write_str("inf"),
        }
    }
}

fn equal_split(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

/// Splits one item among the agents in proportion to `v_i^p`.
///
/// Always hands out the whole item. Zero-valued agents get nothing for
/// `p > 0` (`0^p = 0`), while `p = 0` gives everyone `1/n`. Greedy splits
/// evenly among the tied maxima, and a round nobody values is split evenly.
pub fn poly_round(values: &[f64], p: PolyParam) -> Vec<f64> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let vmax = values.iter().copied().fold(0.0_f64, f64::max);
    if vmax <= 0.0 {
        return equal_split(n);
    }
    match p {
        PolyParam::Finite(0.0) => equal_split(n),
        PolyParam::Finite(p) => {
            // Powers of v / vmax stay in [0, 1] for any p.
            let weights: Vec<f64> = values
                .iter()
                .map(|&v| if v > 0.0 { (v / vmax).powf(p) } else { 0.0 })
                .collect();
            let total: f64 = weights.iter().sum();
            weights.into_iter().map(|w| w / total).collect()
        }
        PolyParam::Infinity => {
            let winners = values.iter().filter(|&&v| v == vmax).count() as f64;
            values
                .iter()
                .map(|&v| if v == vmax { 1.0 / winners } else { 0.0 })
                .collect()
        }
    }
}

/// An allocator that sees one round at a time and commits to a split before
/// the next round is revealed.
pub trait OnlineAllocator {
    /// Fractions of this round's item for each agent.
    fn allocate(&mut self, round: &[f64]) -> Result<Vec<f64>, AlgorithmError>;

    /// The critical event, once one has happened.
    fn critical_event(&self) -> Option<CriticalEvent> {
        None
    }
}

/// Memoryless poly-proportional allocator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyAllocator {
    p: PolyParam,
}

impl PolyAllocator {
    pub fn new(p: PolyParam) -> Self {
        Self { p }
    }
}

impl OnlineAllocator for PolyAllocator {
    fn allocate(&mut self, round: &[f64]) -> Result<Vec<f64>, AlgorithmError> {
        Ok(poly_round(round, self.p))
    }
}

/// What the guarded allocator knows between rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuardedState {
    /// Index of the next round to be allocated.
    pub round_index: usize,
    pub utility_so_far: [f64; 2],
    /// Value not yet allocated, counting the round about to be allocated.
    pub remaining_value: [f64; 2],
    pub tripped_agent: Option<usize>,
}

impl GuardedState {
    /// State before the first round of a normalized instance.
    pub fn fresh() -> Self {
        Self {
            round_index: 0,
            utility_so_far: [0.0; 2],
            remaining_value: [1.0; 2],
            tripped_agent: None,
        }
    }
}

impl Default for GuardedState {
    fn default() -> Self {
        Self::fresh()
    }
}

/// Finds where inside the coming round an agent would hit her critical point.
///
/// Allocating a fraction `f` of the item by the poly rule leaves agent `i`
/// with surplus `u_i + f·share_i + (1 - f)·v_i + after_i - 1/2`, where
/// `share_i = x_i v_i` and `after_i` is her value beyond this round. The
/// surplus is affine and nonincreasing in `f`; the returned `f` is where it
/// reaches zero, clamped to `[0, 1]`. An agent is reported only if finishing
/// the round by the poly rule would leave her surplus below `-TRIP_TOL`.
/// When both agents qualify the smaller `f` wins, then the lower index.
pub fn critical_fraction(
    state: &GuardedState,
    round_values: &[f64],
    p: PolyParam,
) -> Result<Option<(usize, f64)>, AlgorithmError> {
    if round_values.len() != 2 {
        return Err(AlgorithmError::NotTwoAgents(round_values.len()));
    }
    if state.tripped_agent.is_some() {
        return Ok(None);
    }
    let shares = poly_round(round_values, p);
    let mut best: Option<(usize, f64)> = None;
    for i in 0..2 {
        let v = round_values[i];
        let surplus_start = state.utility_so_far[i] + state.remaining_value[i] - 0.5;
        let drop = v - shares[i] * v;
        if drop <= 0.0 || surplus_start - drop >= -TRIP_TOL {
            continue;
        }
        let f = (surplus_start / drop).clamp(0.0, 1.0);
        if best.is_none_or(|(_, bf)| f < bf) {
            best = Some((i, f));
        }
    }
    Ok(best)
}

/// Guarded poly-proportional allocator for two agents with normalized values.
#[derive(Debug, Clone, PartialEq)]
pub struct GuardedAllocator {
    p: PolyParam,
    state: GuardedState,
    event: Option<CriticalEvent>,
}

impl GuardedAllocator {
    pub fn new(p: f64) -> Result<Self, AlgorithmError> {
        match PolyParam::new(p)? {
            PolyParam::Infinity => Err(AlgorithmError::InfiniteP),
            finite => Ok(Self {
                p: finite,
                state: GuardedState::fresh(),
                event: None,
            }),
        }
    }

    pub fn state(&self) -> &GuardedState {
        &self.state
    }
}

impl OnlineAllocator for GuardedAllocator {
    fn allocate(&mut self, round: &[f64]) -> Result<Vec<f64>, AlgorithmError> {
        if round.len() != 2 {
            return Err(AlgorithmError::NotTwoAgents(round.len()));
        }
        let x = match self.state.tripped_agent {
            Some(i) => {
                let mut x = vec![0.0; 2];
                x[i] = 1.0;
                x
            }
            None => {
                let mut x = poly_round(round, self.p);
                if let Some((agent, f)) = critical_fraction(&self.state, round, self.p)? {
                    for xi in x.iter_mut() {
                        *xi *= f;
                    }
                    x[agent] += 1.0 - f;
                    self.state.tripped_agent = Some(agent);
                    self.event = Some(CriticalEvent {
                        round: self.state.round_index,
                        fraction: f,
                        agent,
                    });
                }
                x
            }
        };
        for i in 0..2 {
            self.state.utility_so_far[i] += x[i] * round[i];
            self.state.remaining_value[i] -= round[i];
        }
        self.state.round_index += 1;
        Ok(x)
    }

    fn critical_event(&self) -> Option<CriticalEvent> {
        self.event
    }
}

/// Feeds the instance to `allocator` round by round and records the run.
pub fn simulate<A: OnlineAllocator + ?Sized>(
    instance: &Instance,
    allocator: &mut A,
) -> Result<RunTrace, AlgorithmError> {
    let (rounds, n) = (instance.rounds(), instance.agents());
    let mut fractions = Matrix::zeros(rounds, n);
    let mut cumulative = Matrix::zeros(rounds, n);
    let mut remaining = Matrix::zeros(rounds, n);
    let mut utility = vec![0.0; n];
    for t in 0..rounds {
        let round = instance.round(t);
        let x = allocator.allocate(round)?;
        if x.len() != n {
            return Err(AlgorithmError::WidthMismatch {
                expected: n,
                found: x.len(),
            });
        }
        fractions.row_mut(t).copy_from_slice(&x);
        for i in 0..n {
            utility[i] += round[i] * x[i];
        }
        cumulative.row_mut(t).copy_from_slice(&utility);
    }
    let mut after = vec![0.0; n];
    for t in (0..rounds).rev() {
        remaining.row_mut(t).copy_from_slice(&after);
        for (a, v) in after.iter_mut().zip(instance.round(t)) {
            *a += v;
        }
    }
    Ok(RunTrace {
        allocation: Allocation::from_matrix(fractions)?,
        cumulative_utility: cumulative,
        remaining_value: remaining,
        critical_event: allocator.critical_event(),
    })
}

/// Runs the non-adaptive poly-proportional rule over the whole instance.
pub fn run_poly(instance: &Instance, p: PolyParam) -> RunTrace {
    simulate(instance, &mut PolyAllocator::new(p))
        .expect("poly-proportional splits are always valid allocations")
}

/// Runs the guarded poly-proportional rule (two agents, finite `p`).
pub fn run_guarded(instance: &Instance, p: f64) -> Result<RunTrace, AlgorithmError> {
    if instance.agents() != 2 {
        return Err(AlgorithmError::NotTwoAgents(instance.agents()));
    }
    let mut allocator = GuardedAllocator::new(p)?;
    if !instance.is_normalized() {
        return Err(AlgorithmError::NotNormalized);
    }
    simulate(instance, &mut allocator)
}

/// The allocators shipped with the crate, by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Poly(PolyParam),
    Guarded(f64),
}

impl Algorithm {
    pub const EQUAL_SPLIT: Algorithm = Algorithm::Poly(PolyParam::EQUAL_SPLIT);
    pub const PROPORTIONAL: Algorithm = Algorithm::Poly(PolyParam::PROPORTIONAL);
    pub const QUADRATIC: Algorithm = Algorithm::Poly(PolyParam::QUADRATIC);
    pub const GREEDY: Algorithm = Algorithm::Poly(PolyParam::Infinity);

    /// Every algorithm family this crate certifies against the two-instance
    /// lower bound, with the guarded exponents of interest.
    pub fn builtins() -> Vec<Algorithm> {
        vec![
            Self::EQUAL_SPLIT,
            Self::PROPORTIONAL,
            Self::QUADRATIC,
            Self::GREEDY,
            Algorithm::Guarded(2.0),
            Algorithm::Guarded(2.7),
            Algorithm::Guarded(3.0),
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Poly(PolyParam::Infinity) => "greedy",
            Algorithm::Poly(PolyParam::Finite(p)) if *p == 0.0 => "equal-split",
            Algorithm::Poly(PolyParam::Finite(p)) if *p == 1.0 => "proportional",
            Algorithm::Poly(PolyParam::Finite(p)) if *p == 2.0 => "quadratic",
            Algorithm::Poly(_) => "poly",
            Algorithm::Guarded(_) => "guarded",
        }
    }

    pub fn p(&self) -> PolyParam {
        match self {
            Algorithm::Poly(p) => *p,
            Algorithm::Guarded(p) => PolyParam::Finite(*p),
        }
    }

    pub fn allocator(&self) -> Result<Allocator, AlgorithmError> {
        Ok(match self {
            Algorithm::Poly(p) => Allocator::Poly(PolyAllocator::new(*p)),
            Algorithm::Guarded(p) => Allocator::Guarded(GuardedAllocator::new(*p)?),
        })
    }

    pub fn run(&self, instance: &Instance) -> Result<RunTrace, AlgorithmError> {
        match self {
            Algorithm::Poly(p) => Ok(run_poly(instance, *p)),
            Algorithm::Guarded(p) => run_guarded(instance, *p),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Poly(PolyParam::Finite(p)) if self.name() == "poly" => {
                write!(f, "poly(p={p})")
            }
            Algorithm::Guarded(p) => write!(f, "guarded(p={p})"),
            _ => f.write_str(self.name()),
        }
    }
}

/// Concrete allocator behind an [`Algorithm`]; cloneable so a run can be
/// forked after a shared prefix.
#[derive(Debug, Clone, PartialEq)]
pub enum Allocator {
    Poly(PolyAllocator),
    Guarded(GuardedAllocator),
}

impl OnlineAllocator for Allocator {
    fn allocate(&mut self, round: &[f64]) -> Result<Vec<f64>, AlgorithmError> {
        match self {
            Allocator::Poly(a) => a.allocate(round),
            Allocator::Guarded(a) => a.allocate(round),
        }
    }

    fn critical_event(&self) -> Option<CriticalEvent> {
        match self {
            Allocator::Poly(a) => a.critical_event(),
            Allocator::Guarded(a) => a.critical_event(),
        }
    }
}
