//! Online allocation of divisible items among agents with normalized additive
//! valuations.
//!
//! Items arrive one per round and each must be split irrevocably before the
//! next one is revealed. The crate provides:
//!
//! * [`model`]: instances, allocations, run traces and audit verdicts;
//! * [`algorithms`]: the poly-proportional family (equal-split, proportional,
//!   quadratic, greedy) and the guarded poly-proportional allocator;
//! * [`metrics`]: utilities, welfare ratios, fair-share/envy checks and the
//!   doomsday-compatibility test;
//! * [`adversarial`]: closed-form approximation objectives, a grid-then-simplex
//!   minimizer, and generators for the known worst-case constructions.

pub mod adversarial;
pub mod algorithms;
pub mod metrics;
pub mod model;

pub use algorithms::{
    run_guarded, run_poly, Algorithm, GuardedAllocator, OnlineAllocator, PolyAllocator, PolyParam,
};
pub use metrics::{audit, optimal_welfare, utilities};
pub use model::{Allocation, CriticalEvent, Instance, RunTrace, Verdict};

/// Tolerance used by audits and invariants unless a caller asks for another.
pub const DEFAULT_TOL: f64 = 1e-9;
