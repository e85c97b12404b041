//! Instances, allocations and run records.
//!
//! All matrices are stored dense and round-major: row `t` holds the values
//! (or fractions) of every agent for the item of round `t`. Indices are
//! zero-based throughout the API; error messages print them one-based.

use thiserror::Error;

/// Absolute tolerance on each agent's column sum for an instance to count as
/// normalized.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Slack allowed on individual allocation fractions outside `[0, 1]`.
pub const FRACTION_TOL: f64 = 1e-12;

/// Slack allowed on a round's total allocated fraction above 1.
pub const ROUND_SUM_TOL: f64 = 1e-9;

/// Default residual used by [`three_round_cp`].
pub const DEFAULT_CP_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("instance has no rounds or no agents")]
    EmptyInstance,
    #[error("row {} has {found} entries, expected {expected}", .row + 1)]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("need at least two agents, got {0}")]
    TooFewAgents(usize),
    /// `round` and `agent` are zero-based.
    #[error("negative value {value} for agent {} in round {}", .agent + 1, .round + 1)]
    NegativeValue {
        round: usize,
        agent: usize,
        value: f64,
    },
    #[error("non-finite entry in round {}, agent {}", .round + 1, .agent + 1)]
    NonFinite { round: usize, agent: usize },
    /// `agent` is zero-based.
    #[error("agent {} values sum to {sum}, not 1", .agent + 1)]
    NotNormalized { agent: usize, sum: f64 },
    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },
    #[error("fraction {value} for agent {} in round {} is outside [0, 1]", .agent + 1, .round + 1)]
    FractionOutOfRange {
        round: usize,
        agent: usize,
        value: f64,
    },
    #[error("round {} allocates a total of {total} > 1", .round + 1)]
    OverAllocated { round: usize, total: f64 },
    #[error("shape mismatch: expected {expected_rounds}x{expected_agents}, got {rounds}x{agents}")]
    ShapeMismatch {
        expected_rounds: usize,
        expected_agents: usize,
        rounds: usize,
        agents: usize,
    },
}

/// Dense round-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rounds: usize,
    agents: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rounds: usize, agents: usize) -> Self {
        Self {
            rounds,
            agents,
            data: vec![0.0; rounds * agents],
        }
    }

    fn from_rows(rows: &[Vec<f64>]) -> Result<Self, CoreError> {
        let agents = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || agents == 0 {
            return Err(CoreError::EmptyInstance);
        }
        let mut data = Vec::with_capacity(rows.len() * agents);
        for (t, row) in rows.iter().enumerate() {
            if row.len() != agents {
                return Err(CoreError::Ragged {
                    row: t,
                    expected: agents,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rounds: rows.len(),
            agents,
            data,
        })
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn get(&self, t: usize, i: usize) -> f64 {
        self.data[t * self.agents + i]
    }

    pub fn set(&mut self, t: usize, i: usize, value: f64) {
        self.data[t * self.agents + i] = value;
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.agents..(t + 1) * self.agents]
    }

    pub fn row_mut(&mut self, t: usize) -> &mut [f64] {
        &mut self.data[t * self.agents..(t + 1) * self.agents]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.agents)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn column_sum(&self, i: usize) -> f64 {
        self.rows().map(|r| r[i]).sum()
    }
}

/// Valuations `v[t][i]` of agent `i` for the item of round `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    values: Matrix,
    normalized: bool,
}

impl Instance {
    pub fn agents(&self) -> usize {
        self.values.agents()
    }

    pub fn rounds(&self) -> usize {
        self.values.rounds()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn value(&self, t: usize, i: usize) -> f64 {
        self.values.get(t, i)
    }

    pub fn round(&self, t: usize) -> &[f64] {
        self.values.row(t)
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    /// Total value of agent `i` over all rounds.
    pub fn total_value(&self, i: usize) -> f64 {
        self.values.column_sum(i)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.values.to_rows()
    }

    /// Returns a copy with the rounds reordered so that new round `k` is old
    /// round `order[k]`.
    pub fn permute_rounds(&self, order: &[usize]) -> Result<Instance, CoreError> {
        let rows: Vec<Vec<f64>> = order.iter().map(|&t| self.round(t).to_vec()).collect();
        validate_instance(&rows, false)
    }
}

/// Builds an [`Instance`] from round-major rows.
///
/// The `normalized` flag is set whenever every column sums to 1 within
/// [`NORMALIZATION_TOL`]; with `require_normalized` an off-unit column is an
/// error instead.
pub fn validate_instance(
    rows: &[Vec<f64>],
    require_normalized: bool,
) -> Result<Instance, CoreError> {
    let values = Matrix::from_rows(rows)?;
    if values.agents() < 2 {
        return Err(CoreError::TooFewAgents(values.agents()));
    }
    for (t, row) in values.rows().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(CoreError::NonFinite { round: t, agent: i });
            }
            if v < 0.0 {
                return Err(CoreError::NegativeValue {
                    round: t,
                    agent: i,
                    value: v,
                });
            }
        }
    }
    let mut normalized = true;
    for i in 0..values.agents() {
        let sum = values.column_sum(i);
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            if require_normalized {
                return Err(CoreError::NotNormalized { agent: i, sum });
            }
            normalized = false;
        }
    }
    Ok(Instance { values, normalized })
}

/// Two agents, two rounds: `v11 = v22 = v11`, off-diagonal `1 - v11`.
pub fn two_round_symmetric(v11: f64) -> Result<Instance, CoreError> {
    if !(v11 > 0.0 && v11 < 1.0) {
        return Err(CoreError::OutOfRange {
            what: "v11",
            detail: format!("{v11} not in (0, 1)"),
        });
    }
    let off = 1.0 - v11;
    validate_instance(&[vec![v11, off], vec![off, v11]], true)
}

/// Three-round instance in which agent 1 holds `v11` then the rest of her
/// value in round 2, while agent 2 holds `v21` then the rest in round 3. Each
/// agent also has a residual `eps` in the other agent's round.
///
/// Agent 1: `(v11, 1 - v11 - eps, eps)`; agent 2: `(v21, eps, 1 - v21 - eps)`.
pub fn three_round_cp(v11: f64, v21: f64, eps: f64) -> Result<Instance, CoreError> {
    for (what, v) in [("v11", v11), ("v21", v21)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(CoreError::OutOfRange {
                what,
                detail: format!("{v} not in (0, 1)"),
            });
        }
    }
    let cap = (1.0 - v11).min(1.0 - v21);
    if !(eps > 0.0 && eps < cap) {
        return Err(CoreError::OutOfRange {
            what: "eps",
            detail: format!("{eps} not in (0, {cap})"),
        });
    }
    validate_instance(
        &[
            vec![v11, v21],
            vec![1.0 - v11 - eps, eps],
            vec![eps, 1.0 - v21 - eps],
        ],
        true,
    )
}

/// Fractions `x[t][i]` of the round-`t` item given to agent `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    fractions: Matrix,
}

impl Allocation {
    /// Checks every fraction lies in `[0, 1]` and no round hands out more than
    /// the whole item.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, CoreError> {
        let fractions = Matrix::from_rows(rows)?;
        Self::from_matrix(fractions)
    }

    pub(crate) fn from_matrix(fractions: Matrix) -> Result<Self, CoreError> {
        for (t, row) in fractions.rows().enumerate() {
            for (i, &x) in row.iter().enumerate() {
                if !x.is_finite() || !(-FRACTION_TOL..=1.0 + FRACTION_TOL).contains(&x) {
                    return Err(CoreError::FractionOutOfRange {
                        round: t,
                        agent: i,
                        value: x,
                    });
                }
            }
            let total: f64 = row.iter().sum();
            if total > 1.0 + ROUND_SUM_TOL {
                return Err(CoreError::OverAllocated { round: t, total });
            }
        }
        Ok(Self { fractions })
    }

    pub fn rounds(&self) -> usize {
        self.fractions.rounds()
    }

    pub fn agents(&self) -> usize {
        self.fractions.agents()
    }

    pub fn fraction(&self, t: usize, i: usize) -> f64 {
        self.fractions.get(t, i)
    }

    pub fn round(&self, t: usize) -> &[f64] {
        self.fractions.row(t)
    }

    pub fn fractions(&self) -> &Matrix {
        &self.fractions
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.fractions.to_rows()
    }

    /// True when every round hands out the whole item, within `tol`.
    pub fn is_full(&self, tol: f64) -> bool {
        self.fractions
            .rows()
            .all(|r| (r.iter().sum::<f64>() - 1.0).abs() <= tol)
    }

    /// An allocation giving nothing to anyone.
    pub fn empty(rounds: usize, agents: usize) -> Self {
        Self {
            fractions: Matrix::zeros(rounds, agents),
        }
    }
}

/// The moment an adaptive allocator committed the rest of the run to one
/// agent: round index (zero-based), the fraction of that round's item already
/// split by the base rule, and the agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalEvent {
    pub round: usize,
    pub fraction: f64,
    pub agent: usize,
}

/// Round-by-round record of one simulated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub allocation: Allocation,
    /// Utility of each agent through the end of round `t`.
    pub cumulative_utility: Matrix,
    /// Value each agent still has in rounds strictly after `t`.
    pub remaining_value: Matrix,
    pub critical_event: Option<CriticalEvent>,
}

impl RunTrace {
    /// Final utilities (last row of the cumulative matrix).
    pub fn final_utilities(&self) -> Vec<f64> {
        let last = self.cumulative_utility.rounds() - 1;
        self.cumulative_utility.row(last).to_vec()
    }
}

/// Outcome of auditing an allocation against its instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub utilities: Vec<f64>,
    pub social_welfare: f64,
    pub optimal_welfare: f64,
    pub ratio: f64,
    pub fair_share_ok: bool,
    /// `min_i u_i - 1/n`; negative means some agent is short.
    pub fair_share_margin: f64,
    /// `None` when some round was not fully allocated.
    pub envy_free_ok: Option<bool>,
    /// `min_{i,j} (u_i(x_i) - u_i(x_j))` when `envy_free_ok` is reported.
    pub envy_margin: Option<f64>,
    pub tolerance: f64,
}
