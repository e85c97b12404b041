mod common;

use fairdiv::adversarial::{
    alpha_guarded_case1, alpha_guarded_case2, alpha_poly_two_round, alpha_proportional,
    case1_instance, case2_instance, fair_share_violation_instance, multi_agent_bounds,
    multi_agent_instance, two_round_instance, worst_case_sweep, Case2Subcase,
};
use fairdiv::algorithms::{run_guarded, run_poly, PolyParam};
use fairdiv::metrics::audit;
use fairdiv::model::Instance;
use fairdiv::DEFAULT_TOL;
use proptest::prelude::*;

fn poly_ratio(inst: &Instance, p: f64) -> f64 {
    audit(
        inst,
        &run_poly(inst, PolyParam::Finite(p)).allocation,
        DEFAULT_TOL,
    )
    .unwrap()
    .ratio
}

fn guarded_ratio(inst: &Instance, p: f64) -> f64 {
    audit(inst, &run_guarded(inst, p).unwrap().allocation, DEFAULT_TOL)
        .unwrap()
        .ratio
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn proportional_closed_form_matches_simulation(v1 in 1e-3f64..1.0, v2 in 1e-3f64..1.0) {
        prop_assume!(v1 + v2 >= 1.0);
        let inst = two_round_instance(v1, v2).unwrap();
        let closed = alpha_proportional(v1, v2).unwrap();
        prop_assert!((closed - poly_ratio(&inst, 1.0)).abs() < 1e-9);
    }

    #[test]
    fn two_round_closed_form_matches_simulation(p in 0.05f64..6.0, v1 in 1e-3f64..1.0, v2 in 1e-3f64..1.0) {
        prop_assume!(v1 + v2 > 1.0);
        let inst = two_round_instance(v1, v2).unwrap();
        let closed = alpha_poly_two_round(p, v1, v2).unwrap();
        prop_assert!((closed - poly_ratio(&inst, p)).abs() < 1e-9);
        let quad = alpha_poly_two_round(2.0, v1, v2).unwrap();
        prop_assert!((quad - poly_ratio(&inst, 2.0)).abs() < 1e-9);
    }

    #[test]
    fn case1_closed_form_matches_simulation(p in 2.3f64..4.0, lambda in 1.0f64..2.0) {
        let Ok(inst) = case1_instance(p, lambda, 1e-7) else { return Ok(()) };
        let closed = alpha_guarded_case1(p, lambda).unwrap();
        prop_assert!((closed - guarded_ratio(&inst, p)).abs() < 1e-6, "closed {closed}");
    }

    #[test]
    fn case2_closed_form_matches_simulation(
        p in 2.0f64..3.5,
        l1 in 1.0001f64..4.0,
        l2 in 1e-3f64..10.0,
    ) {
        let sub = if l2 < 1.0 { Case2Subcase::Mixed } else { Case2Subcase::BothAbove };
        prop_assume!((l2 - 1.0).abs() > 1e-4);
        let Ok(closed) = alpha_guarded_case2(p, l1, l2, sub) else { return Ok(()) };
        let inst = case2_instance(p, l1, l2, sub).unwrap();
        prop_assert!((closed - guarded_ratio(&inst, p)).abs() < 1e-6, "closed {closed}");
    }

    #[test]
    fn violation_instance_starves_agent_one(p in 2.0001f64..=6.0) {
        let inst = fair_share_violation_instance(p).unwrap();
        let v = audit(&inst, &run_poly(&inst, PolyParam::Finite(p)).allocation, DEFAULT_TOL).unwrap();
        prop_assert!(v.utilities[0] < 0.5);
        prop_assert!(!v.fair_share_ok || v.utilities[0] >= 0.5 - DEFAULT_TOL);
        let guarded = run_guarded(&inst, p).unwrap().final_utilities();
        prop_assert!(guarded.iter().all(|&u| u >= 0.5 - 1e-9));
    }
}

#[test]
fn sweep_moves_the_right_way() {
    let ps: Vec<f64> = (0..=10).map(|k| 2.0 + 0.1 * k as f64).collect();
    let rows = worst_case_sweep(&ps).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].no_cp_alpha >= w[0].no_cp_alpha, "{w:?}");
        if w[0].p >= 2.7 - 1e-12 {
            assert!(
                w[1].with_cp_alpha.unwrap() <= w[0].with_cp_alpha.unwrap(),
                "{w:?}"
            );
        }
    }
}

#[test]
fn proportional_is_within_half_root_n_on_the_construction() {
    for n in [4usize, 9, 16, 25, 36] {
        let inst = multi_agent_instance(n).unwrap();
        let ratio = poly_ratio(&inst, 1.0);
        assert!(
            ratio >= 1.0 / (2.0 * (n as f64).sqrt()) - 1e-9,
            "n={n}: {ratio}"
        );
        let b = multi_agent_bounds(n).unwrap();
        assert!(b.online_welfare < b.offline_fair_share_opt + 1e-12);
    }
}

#[test]
fn random_multi_agent_instances_respect_half_root_n() {
    let mut rng = common::rng(11);
    for n in [3usize, 4, 9] {
        for _ in 0..200 {
            let inst = common::random_instance(&mut rng, n, 12);
            let ratio = poly_ratio(&inst, 1.0);
            assert!(ratio >= 1.0 / (2.0 * (n as f64).sqrt()) - 1e-9);
        }
    }
}

#[test]
fn fixed_guarded_points_match_simulation() {
    let inst = case1_instance(2.7, 1.27764, 1e-7).unwrap();
    let sim = guarded_ratio(&inst, 2.7);
    assert!((alpha_guarded_case1(2.7, 1.27764).unwrap() - sim).abs() < 1e-6);
    assert!(run_guarded(&inst, 2.7).unwrap().critical_event.is_some());

    for (l1, l2, sub) in [
        (1.2, 0.8, Case2Subcase::Mixed),
        (1.3362, 0.711757, Case2Subcase::Mixed),
        (1.4, 3.0, Case2Subcase::BothAbove),
    ] {
        let closed = alpha_guarded_case2(2.7, l1, l2, sub).unwrap();
        let sim = guarded_ratio(&case2_instance(2.7, l1, l2, sub).unwrap(), 2.7);
        assert!(
            (closed - sim).abs() < 1e-6,
            "({l1}, {l2}): {closed} vs {sim}"
        );
        assert!(closed > 0.9 && closed <= 1.0);
    }
}
