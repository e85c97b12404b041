mod common;

use common::instance_strategy;
use fairdiv::algorithms::Algorithm;
use fairdiv::metrics::{audit, doomsday_trace, optimal_welfare, witness_carries_forward};
use fairdiv::DEFAULT_TOL;
use proptest::prelude::*;

fn algorithm_strategy() -> impl Strategy<Value = Algorithm> {
    prop::sample::select(Algorithm::builtins())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn doomsday_trace_all_true_iff_fair_share(inst in instance_strategy(2, 12), alg in algorithm_strategy()) {
        let trace = alg.run(&inst).unwrap();
        let verdict = audit(&inst, &trace.allocation, DEFAULT_TOL).unwrap();
        let compatible = doomsday_trace(&inst, &trace, DEFAULT_TOL).unwrap();
        prop_assert_eq!(compatible.iter().all(|&c| c), verdict.fair_share_ok, "{} {:?}", alg, compatible);
    }

    #[test]
    fn witness_keeps_compatibility(inst in instance_strategy(2, 12), alg in algorithm_strategy()) {
        let trace = alg.run(&inst).unwrap();
        for t in 0..inst.rounds().saturating_sub(1) {
            let carried = witness_carries_forward(
                trace.cumulative_utility.row(t),
                trace.remaining_value.row(t),
                inst.round(t + 1),
                2,
                DEFAULT_TOL,
            )
            .unwrap();
            prop_assert_ne!(carried, Some(false), "round {}", t);
        }
    }

    #[test]
    fn ratio_never_exceeds_one(inst in instance_strategy(3, 10), alg in algorithm_strategy()) {
        let Ok(trace) = alg.run(&inst) else { return Ok(()) };
        let v = audit(&inst, &trace.allocation, DEFAULT_TOL).unwrap();
        prop_assert!(v.ratio <= 1.0 + 1e-12);
        prop_assert!((v.optimal_welfare - optimal_welfare(&inst)).abs() < 1e-15);
    }

    #[test]
    fn envy_free_implies_fair_share(inst in instance_strategy(2, 12), alg in algorithm_strategy()) {
        let trace = alg.run(&inst).unwrap();
        let v = audit(&inst, &trace.allocation, DEFAULT_TOL).unwrap();
        if v.envy_free_ok == Some(true) {
            prop_assert!(v.fair_share_ok);
        }
    }
}

#[test]
fn three_agents_can_pass_through_an_incompatible_round() {
    // Greedy hands round 1 to agent 3; agents 1 and 2 then each need most of
    // a single remaining item, yet their values arrive in separate rounds.
    let inst = fairdiv::model::validate_instance(
        &[
            vec![0.6, 0.6, 1.0],
            vec![0.4, 0.0, 0.0],
            vec![0.0, 0.4, 0.0],
        ],
        true,
    )
    .unwrap();
    let trace = Algorithm::GREEDY.run(&inst).unwrap();
    assert!(
        audit(&inst, &trace.allocation, DEFAULT_TOL)
            .unwrap()
            .fair_share_ok
    );
    assert_eq!(
        doomsday_trace(&inst, &trace, DEFAULT_TOL).unwrap(),
        vec![false, true, true]
    );
}
