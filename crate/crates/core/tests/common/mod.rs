//! Seeded generator of small asynchronously composable pairs.

#![allow(dead_code)]

pub mod oracle;

use iots_compat::{Iots, RawIots};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_STATES: usize = 4;
pub const MAX_PER_CLASS: usize = 3;

fn pick(rng: &mut ChaCha8Rng, prefix: &str, max: usize) -> Vec<String> {
    let n = rng.gen_range(0..=max);
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn component(
    rng: &mut ChaCha8Rng,
    name: &str,
    inputs: Vec<String>,
    outputs: Vec<String>,
    internals: Vec<String>,
) -> Iots {
    let n = rng.gen_range(1..=MAX_STATES);
    let states: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let labels: Vec<String> = inputs
        .iter()
        .chain(&outputs)
        .chain(&internals)
        .cloned()
        .collect();
    let mut raw = RawIots::new(name)
        .states(states.clone())
        .initial("0")
        .inputs(inputs)
        .outputs(outputs)
        .internals(internals);
    if !labels.is_empty() {
        for s in &states {
            for _ in 0..rng.gen_range(0..=3) {
                let x = labels.choose(rng).unwrap();
                let t = states.choose(rng).unwrap();
                raw = raw.transition(s, x, t);
            }
        }
    }
    raw.build().expect("generated component is valid")
}

/// A pair with at most four states and three actions per class each. Messages
/// `m*` go from left to right and `n*` from right to left; every other action
/// is private to its side.
pub fn random_pair(seed: u64) -> (Iots, Iots) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = pick(&mut rng, "m", 2);
    let n = pick(&mut rng, "n", 2);
    let a_in: Vec<String> = n.iter().cloned().chain(pick(&mut rng, "ai", MAX_PER_CLASS - n.len())).collect();
    let a_out: Vec<String> = m.iter().cloned().chain(pick(&mut rng, "ao", MAX_PER_CLASS - m.len())).collect();
    let a_int = pick(&mut rng, "at", MAX_PER_CLASS);
    let b_in: Vec<String> = m.iter().cloned().chain(pick(&mut rng, "bi", MAX_PER_CLASS - m.len())).collect();
    let b_out: Vec<String> = n.iter().cloned().chain(pick(&mut rng, "bo", MAX_PER_CLASS - n.len())).collect();
    let b_int = pick(&mut rng, "bt", MAX_PER_CLASS);
    let a = component(&mut rng, "A", a_in, a_out, a_int);
    let b = component(&mut rng, "B", b_in, b_out, b_int);
    (a, b)
}
