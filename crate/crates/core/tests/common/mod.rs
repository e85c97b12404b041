#![allow(dead_code)]

use fairdiv::model::{validate_instance, Instance};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Normalizes each column of nonnegative weights to 1. A column that is
/// all zero gets its whole value in one random round.
pub fn normalize_columns<R: Rng>(rng: &mut R, mut rows: Vec<Vec<f64>>) -> Instance {
    let n = rows[0].len();
    let rounds = rows.len();
    for i in 0..n {
        let mut sum: f64 = rows.iter().map(|r| r[i]).sum();
        if sum <= 0.0 {
            rows[rng.gen_range(0..rounds)][i] = 1.0;
            sum = 1.0;
        }
        for r in rows.iter_mut() {
            r[i] /= sum;
        }
    }
    validate_instance(&rows, true).expect("normalized by construction")
}

/// Random normalized instance with `n` agents and `1..=max_rounds` rounds.
/// About a third of the entries are zero so that rounds only one agent
/// wants show up often.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize, max_rounds: usize) -> Instance {
    let rounds = rng.gen_range(1..=max_rounds);
    let rows = (0..rounds)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(0.35) {
                        0.0
                    } else {
                        rng.gen::<f64>()
                    }
                })
                .collect()
        })
        .collect();
    normalize_columns(rng, rows)
}

/// Proptest strategy over normalized instances, shrinking on the raw
/// weights.
pub fn instance_strategy(n: usize, max_rounds: usize) -> impl Strategy<Value = Instance> {
    prop::collection::vec(
        prop::collection::vec(prop_oneof![1 => Just(0.0), 2 => 0.0f64..1.0], n),
        1..=max_rounds,
    )
    .prop_map(|rows| normalize_columns(&mut rng(0), rows))
}
