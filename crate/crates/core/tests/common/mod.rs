//! Independent brute-force oracle and the systems the integration tests share.
//!
//! The oracle reads a system back from its descriptor text and recomputes
//! every profile with plain loops over the programs, comparing logarithms
//! through exact big-integer cross multiplication.

#![allow(dead_code)]

use std::cmp::Ordering;

use kstruct::descsys::{random_system, RandomSystemParams};
use kstruct::{DescriptionSystem, LogBits};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct RawSystem {
    pub n: u32,
    pub data: Vec<(String, u64)>,
    pub sets: Vec<(String, Vec<u64>)>,
    /// `(program, set, output)`.
    pub cond: Vec<(String, Vec<u64>, u64)>,
}

fn prog(tok: &str) -> String {
    if tok == "-" {
        String::new()
    } else {
        tok.to_string()
    }
}

fn word(tok: &str) -> u64 {
    u64::from_str_radix(tok, 2).expect("binary string")
}

fn elems(list: &str) -> Vec<u64> {
    let mut v: Vec<u64> = list.split(',').map(word).collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn raw(sys: &DescriptionSystem) -> RawSystem {
    let text = sys.to_descriptor().to_string();
    let mut out = RawSystem {
        n: 0,
        data: vec![],
        sets: vec![],
        cond: vec![],
    };
    for line in text.lines() {
        let f: Vec<&str> = line.split('\t').collect();
        match f[0] {
            "universe" => out.n = f[1].parse().unwrap(),
            "data" => out.data.push((prog(f[1]), word(f[2]))),
            "set" => out.sets.push((prog(f[1]), elems(f[2]))),
            "cond" => out.cond.push((prog(f[1]), elems(f[3]), word(f[2]))),
            other => panic!("unexpected record {other}"),
        }
    }
    out
}

pub fn shortlex(a: &str, b: &str) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// `log2(card) + shift`.
#[derive(Clone, Copy, Debug)]
pub struct Val {
    pub card: u64,
    pub shift: i64,
}

impl Val {
    pub fn cmp(&self, o: &Val) -> Ordering {
        let m = self.shift.min(o.shift);
        let a = BigUint::from(self.card) << (self.shift - m) as u64;
        let b = BigUint::from(o.card) << (o.shift - m) as u64;
        a.cmp(&b)
    }

    pub fn to_logbits(self) -> LogBits {
        LogBits::log2(self.card).add_int(self.shift)
    }
}

pub fn ceil_log2(m: u64) -> i64 {
    let mut k = 0;
    while (1u64 << k) < m {
        k += 1;
    }
    k
}

#[derive(Debug, PartialEq)]
pub struct OracleProfile {
    pub k_x: u32,
    pub h: Vec<LogBits>,
    pub lambda: Vec<LogBits>,
    pub beta: Vec<LogBits>,
    pub h_w: Vec<Option<String>>,
    pub lambda_w: Vec<Option<String>>,
    pub beta_w: Vec<Option<String>>,
}

/// `(K(S), witness)` for the set printed by each set program.
pub fn set_complexities(raw: &RawSystem) -> Vec<(u32, String)> {
    raw.sets
        .iter()
        .map(|(_, s)| {
            let mut best: Option<&str> = None;
            for (q, t) in &raw.sets {
                if t == s && best.is_none_or(|b| shortlex(q, b) == Ordering::Less) {
                    best = Some(q);
                }
            }
            let w = best.unwrap().to_string();
            (w.len() as u32, w)
        })
        .collect()
}

pub fn k_data(raw: &RawSystem, x: u64) -> u32 {
    raw.data
        .iter()
        .filter(|(_, y)| *y == x)
        .map(|(p, _)| p.len() as u32)
        .min()
        .expect("every string has a data program")
}

pub fn k_cond(raw: &RawSystem, x: u64, s: &[u64]) -> Option<u32> {
    let index = s.contains(&x).then(|| ceil_log2(s.len() as u64) as u32);
    let short = raw
        .cond
        .iter()
        .filter(|(_, t, y)| *y == x && t.as_slice() == s)
        .map(|(q, _, _)| q.len() as u32)
        .min();
    match (index, short) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

pub fn oracle_profile(raw: &RawSystem, ks: &[(u32, String)], x: u64, alpha_max: u32) -> OracleProfile {
    let mut p = OracleProfile {
        k_x: k_data(raw, x),
        h: vec![],
        lambda: vec![],
        beta: vec![],
        h_w: vec![],
        lambda_w: vec![],
        beta_w: vec![],
    };
    for alpha in 0..=alpha_max {
        let mut best: [Option<(Val, String)>; 3] = [None, None, None];
        for (i, (_, s)) in raw.sets.iter().enumerate() {
            let (k, w) = &ks[i];
            if *k > alpha || !s.contains(&x) {
                continue;
            }
            let card = s.len() as u64;
            let kc = k_cond(raw, x, s).expect("member");
            let keys = [
                Val { card, shift: 0 },
                Val {
                    card,
                    shift: i64::from(*k),
                },
                Val {
                    card,
                    shift: -i64::from(kc),
                },
            ];
            for (slot, key) in best.iter_mut().zip(keys) {
                let better = match slot {
                    None => true,
                    Some((v, bw)) => key.cmp(v).then_with(|| shortlex(w, bw)) == Ordering::Less,
                };
                if better {
                    *slot = Some((key, w.clone()));
                }
            }
        }
        let val = |s: &Option<(Val, String)>| s.as_ref().map_or(LogBits::INFINITY, |(v, _)| v.to_logbits());
        let wit = |s: &Option<(Val, String)>| s.as_ref().map(|(_, w)| w.clone());
        p.h.push(val(&best[0]));
        p.lambda.push(val(&best[1]));
        p.beta.push(val(&best[2]));
        p.h_w.push(wit(&best[0]));
        p.lambda_w.push(wit(&best[1]));
        p.beta_w.push(wit(&best[2]));
    }
    p
}

/// Random system parameters for the `i`-th oracle system: universes of 2 to
/// 8 bits with at most 500 programs.
pub fn oracle_params(i: u64) -> RandomSystemParams {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + i);
    let n = 2 + (i % 7) as u32;
    let room = 460 - (1usize << n);
    RandomSystemParams {
        n,
        sets: rng.gen_range(1..=room.min(120)),
        extra_data: rng.gen_range(0..=16),
        shortcuts: rng.gen_range(0..=24),
        singleton_dominated: n <= 6 && i.is_multiple_of(3),
        slack: rng.gen_range(0..=6),
    }
}

pub fn oracle_system(i: u64) -> DescriptionSystem {
    random_system(&oracle_params(i), 1000 + i)
}
