//! Seeded random description systems for property tests and experiments.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::BitString;
use crate::descsys::set::{ceil_log2, FiniteSet};
use crate::descsys::{DescriptionSystem, SystemBuilder};

/// Shape of a random system.
#[derive(Clone, Debug)]
pub struct RandomSystemParams {
    /// Universe length.
    pub n: u32,
    /// Random set programs, in addition to the cube and any singletons.
    pub sets: usize,
    /// Data programs beyond one per universe element.
    pub extra_data: usize,
    /// Conditional shortcut programs.
    pub shortcuts: usize,
    /// Add every singleton `{x}` with a set program no longer than `K(x)`.
    pub singleton_dominated: bool,
    /// Spread of program lengths above the shortest feasible ones.
    pub slack: u32,
}

impl Default for RandomSystemParams {
    fn default() -> Self {
        RandomSystemParams {
            n: 5,
            sets: 24,
            extra_data: 8,
            shortcuts: 6,
            singleton_dominated: false,
            slack: 4,
        }
    }
}

/// Random lengths, each at least its floor, repaired until `Σ 2^{-len} ≤ 1`.
fn assign_lengths(rng: &mut ChaCha8Rng, floors: &[u32], slack: u32) -> Vec<u32> {
    let lo = ceil_log2(floors.len().max(1) as u64).saturating_sub(2);
    let mut lens: Vec<u32> = floors
        .iter()
        .map(|&f| f.max(lo + rng.gen_range(0..=slack)))
        .collect();
    const SCALE: u32 = 62;
    let weight = |l: u32| if l >= SCALE { 1u128 } else { 1u128 << (SCALE - l) };
    let mut total: u128 = lens.iter().map(|&l| weight(l)).sum();
    while total > 1u128 << SCALE {
        let i = rng.gen_range(0..lens.len());
        total -= weight(lens[i]);
        lens[i] += 1;
        total += weight(lens[i]);
    }
    lens
}

/// A prefix-free code with the given lengths, scrambled by a fixed bit mask so
/// that program order does not mirror length order.
fn prefix_code(rng: &mut ChaCha8Rng, lens: &[u32]) -> Vec<BitString> {
    let mut order: Vec<usize> = (0..lens.len()).collect();
    order.sort_by_key(|&i| lens[i]);
    let mask: u64 = rng.gen();
    let mut out = vec![BitString::new(); lens.len()];
    let mut code: u64 = 0;
    let mut prev = order.first().map_or(0, |&i| lens[i]);
    for (rank, &i) in order.iter().enumerate() {
        let len = lens[i];
        if rank > 0 {
            code = (code + 1) << (len - prev);
        }
        prev = len;
        let flip = if len == 0 { 0 } else { mask >> (64 - len) };
        out[i] = BitString::from_word(code ^ flip, len);
    }
    out
}

fn random_set(rng: &mut ChaCha8Rng, n: u32, earlier: &[FiniteSet]) -> FiniteSet {
    let size = 1u64 << n;
    match rng.gen_range(0..10) {
        0..=3 => {
            let card = 1u64 << rng.gen_range(0..=n);
            let card = if rng.gen_bool(0.5) { card } else { rng.gen_range(1..=card) };
            let picks = sample(rng, size as usize, card as usize);
            FiniteSet::new(n, picks.into_iter().map(|v| v as u64)).expect("nonempty")
        }
        4..=5 => {
            let len = rng.gen_range(0..=n);
            let prefix = if len == 0 { 0 } else { rng.gen_range(0..(1u64 << len)) };
            let free = n - len;
            FiniteSet::new(n, (0..(1u64 << free)).map(|r| (prefix << free) | r)).expect("nonempty")
        }
        6 => FiniteSet::singleton(n, rng.gen_range(0..size)),
        7 => {
            let k = rng.gen_range(0..=n);
            FiniteSet::new(n, (0..size).filter(|w| w.count_ones() == k)).expect("nonempty")
        }
        _ if !earlier.is_empty() => earlier[rng.gen_range(0..earlier.len())].clone(),
        _ => FiniteSet::cube(n),
    }
}

/// Builds a valid random system; identical `(params, seed)` give identical systems.
pub fn random_system(params: &RandomSystemParams, seed: u64) -> DescriptionSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.n;
    let size = 1u64 << n;

    let mut sets: Vec<FiniteSet> = Vec::new();
    if rng.gen_bool(0.8) {
        sets.push(FiniteSet::cube(n));
    }
    for _ in 0..params.sets {
        let s = random_set(&mut rng, n, &sets);
        sets.push(s);
    }
    let first_singleton = sets.len();
    if params.singleton_dominated {
        sets.extend((0..size).map(|x| FiniteSet::singleton(n, x)));
    }
    let set_lens = assign_lengths(&mut rng, &vec![0; sets.len()], params.slack);
    let set_codes = prefix_code(&mut rng, &set_lens);

    // one data program per element, plus extras
    let mut outputs: Vec<u64> = (0..size).collect();
    outputs.extend((0..params.extra_data).map(|_| rng.gen_range(0..size)));
    let floors: Vec<u32> = outputs
        .iter()
        .map(|&x| {
            if params.singleton_dominated {
                set_lens[first_singleton + x as usize]
            } else {
                0
            }
        })
        .collect();
    let data_lens = assign_lengths(&mut rng, &floors, params.slack);
    let data_codes = prefix_code(&mut rng, &data_lens);

    let mut b = SystemBuilder::new(n);
    for (p, x) in data_codes.into_iter().zip(outputs) {
        b.data_word(p, x);
    }
    for (p, s) in set_codes.into_iter().zip(sets.iter().cloned()) {
        b.set(p, s);
    }

    // shortcuts grouped per set so each group gets its own prefix code
    if !sets.is_empty() && params.shortcuts > 0 {
        let mut groups: Vec<(FiniteSet, Vec<u64>)> = Vec::new();
        for _ in 0..params.shortcuts {
            let s = sets[rng.gen_range(0..sets.len())].clone();
            let x = if rng.gen_bool(0.8) {
                s.words()[rng.gen_range(0..s.len())]
            } else {
                rng.gen_range(0..size)
            };
            match groups.iter_mut().find(|(t, _)| *t == s) {
                Some((_, xs)) => xs.push(x),
                None => groups.push((s, vec![x])),
            }
        }
        for (s, xs) in groups {
            let floors: Vec<u32> = xs
                .iter()
                .map(|_| rng.gen_range(0..=s.index_code_len()))
                .collect();
            let lens = assign_lengths(&mut rng, &floors, 1);
            for (q, x) in prefix_code(&mut rng, &lens).into_iter().zip(xs) {
                b.cond_word(q, s.clone(), x);
            }
        }
    }
    b.build().expect("random systems are valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_is_reproducible() {
        for seed in 0..50 {
            let p = RandomSystemParams {
                n: (seed % 6) as u32 + 1,
                singleton_dominated: seed % 2 == 0,
                ..Default::default()
            };
            let a = random_system(&p, seed);
            let b = random_system(&p, seed);
            assert_eq!(a.to_descriptor(), b.to_descriptor());
            if p.singleton_dominated {
                for x in 0..a.universe_size() {
                    let ks = a.k_set(&FiniteSet::singleton(p.n, x)).unwrap();
                    assert!(ks <= a.k_data(x));
                }
            }
        }
    }

    #[test]
    fn codes_are_prefix_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let lens = vec![1, 2, 3, 3];
        let code = prefix_code(&mut rng, &lens);
        assert!(crate::codec::find_prefix_violation(code.iter()).is_none());
        for (c, &l) in code.iter().zip(&lens) {
            assert_eq!(c.len() as u32, l);
        }
    }
}
