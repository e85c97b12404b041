//! Command bodies. Each returns the rendered report; `main` only parses
//! flags, prints, and maps errors to exit codes.

use fairdiv::adversarial::{
    minimize_alpha, replay_lower_bound, worst_case_sweep_with, AlphaObjective, Case2Subcase,
    LowerBoundCase, SweepOptions,
};
use fairdiv::algorithms::Algorithm;
use fairdiv::metrics::{audit, doomsday_trace};
use fairdiv::model::{Allocation, DEFAULT_CP_EPS};

use crate::generators::NamedInstance;
use crate::report::{emit_report, Cell, Format, RunRecord, Table};
use crate::CliError;

fn p_of(alg: &Algorithm) -> f64 {
    alg.p().as_f64()
}

/// Runs every algorithm on every instance, instances outermost.
pub fn run(
    instances: &[NamedInstance],
    algorithms: &[Algorithm],
    tol: f64,
    format: Format,
) -> Result<String, CliError> {
    let mut records = Vec::new();
    for src in instances {
        for alg in algorithms {
            let trace = alg.run(&src.instance)?;
            records.push(RunRecord {
                algorithm: alg.name().to_string(),
                p: Some(p_of(alg)),
                instance_name: src.name.clone(),
                verdict: audit(&src.instance, &trace.allocation, tol)?,
                critical_event: trace.critical_event,
            });
        }
    }
    Ok(emit_report(&records, format))
}

/// Audits a supplied allocation. The flag is true when fair share fails.
pub fn verify(
    src: &NamedInstance,
    allocation: &Allocation,
    tol: f64,
    format: Format,
) -> Result<(String, bool), CliError> {
    let verdict = audit(&src.instance, allocation, tol)?;
    let violated = !verdict.fair_share_ok;
    let record = RunRecord {
        algorithm: "supplied".into(),
        p: None,
        instance_name: src.name.clone(),
        verdict,
        critical_event: None,
    };
    Ok((emit_report(&[record], format), violated))
}

pub fn sweep(p_values: &[f64], options: &SweepOptions, format: Format) -> Result<String, CliError> {
    let mut table = Table::new([
        "p",
        "no_cp_alpha",
        "no_cp_v11",
        "with_cp_alpha",
        "with_cp_v11",
        "with_cp_v21",
    ]);
    for row in worst_case_sweep_with(p_values, options)? {
        table.push(vec![
            row.p.into(),
            row.no_cp_alpha.into(),
            row.no_cp_v11.into(),
            row.with_cp_alpha.into(),
            row.with_cp_v11.into(),
            row.with_cp_v21.into(),
        ]);
    }
    Ok(table.render(format))
}

pub const OBJECTIVES: [&str; 7] = [
    "proportional",
    "poly-two-round",
    "poly-diagonal",
    "guarded-case1",
    "guarded-case2-mixed",
    "guarded-case2-above",
    "guarded-cp",
];

/// Looks up an objective by name; all but `proportional` need `p`.
pub fn objective(name: &str, p: Option<f64>, eps: Option<f64>) -> Result<AlphaObjective, CliError> {
    if name == "proportional" {
        return Ok(AlphaObjective::proportional());
    }
    if !OBJECTIVES.contains(&name) {
        return Err(CliError::Usage(format!(
            "unknown objective {name:?} (expected one of {})",
            OBJECTIVES.join(", ")
        )));
    }
    let p = p.ok_or_else(|| CliError::Usage(format!("objective {name:?} needs --p")))?;
    Ok(match name {
        "poly-two-round" => AlphaObjective::poly_two_round(p),
        "poly-diagonal" => AlphaObjective::poly_diagonal(p),
        "guarded-case1" => AlphaObjective::guarded_case1(p),
        "guarded-case2-mixed" => AlphaObjective::guarded_case2(p, Case2Subcase::Mixed),
        "guarded-case2-above" => AlphaObjective::guarded_case2(p, Case2Subcase::BothAbove),
        _ => AlphaObjective::guarded_critical_point(p, eps.unwrap_or(DEFAULT_CP_EPS)),
    })
}

pub fn search(
    objective: &AlphaObjective,
    grid_step: f64,
    refine_tol: f64,
    format: Format,
) -> Result<String, CliError> {
    let r = minimize_alpha(objective, grid_step, refine_tol)?;
    let mut table = Table::new([
        "objective",
        "p",
        "x1",
        "x2",
        "value",
        "evaluations",
        "refined",
    ]);
    table.push(vec![
        objective.name().into(),
        objective.p.into(),
        r.argmin[0].into(),
        r.argmin.get(1).copied().into(),
        r.value.into(),
        r.evaluations.into(),
        r.refined.into(),
    ]);
    Ok(table.render(format))
}

pub fn replay_lb(algorithms: &[Algorithm], format: Format) -> Result<String, CliError> {
    let mut table = Table::new([
        "algorithm",
        "p",
        "ratio1",
        "ratio2",
        "min_ratio",
        "fair_share_violated",
        "x11",
        "x22_prime",
        "case",
        "consistent",
    ]);
    for alg in algorithms {
        let v = replay_lower_bound(alg.allocator()?)?;
        let case = match v.case {
            LowerBoundCase::SmallFirstShare => "small-first-share",
            LowerBoundCase::StarvesAgentTwo => "starves-agent-two",
            LowerBoundCase::GenerousSecondShare => "generous-second-share",
        };
        table.push(vec![
            alg.name().into(),
            p_of(alg).into(),
            v.ratio1.into(),
            v.ratio2.into(),
            v.min_ratio().into(),
            v.fair_share_violated.into(),
            v.x11.into(),
            v.x22_prime.into(),
            case.into(),
            v.consistent().into(),
        ]);
    }
    Ok(table.render(format))
}

fn joined(values: &[f64]) -> Cell {
    let parts: Vec<String> = values
        .iter()
        .map(|&v| crate::report::round_significant(v).to_string())
        .collect();
    Cell::Text(parts.join(" "))
}

/// Per-round doomsday compatibility, with the utilities and remaining
/// values it was judged on. Rounds are 1-based.
pub fn doomsday(
    instances: &[NamedInstance],
    algorithm: &Algorithm,
    tol: f64,
    format: Format,
) -> Result<String, CliError> {
    let mut table = Table::new([
        "instance_name",
        "algorithm",
        "p",
        "round",
        "compatible",
        "utilities",
        "remaining",
    ]);
    for src in instances {
        let trace = algorithm.run(&src.instance)?;
        let flags = doomsday_trace(&src.instance, &trace, tol)?;
        for (t, ok) in flags.into_iter().enumerate() {
            table.push(vec![
                src.name.as_str().into(),
                algorithm.name().into(),
                p_of(algorithm).into(),
                (t + 1).into(),
                ok.into(),
                joined(trace.cumulative_utility.row(t)),
                joined(trace.remaining_value.row(t)),
            ]);
        }
    }
    Ok(table.render(format))
}
