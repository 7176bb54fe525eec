//! Exact structure functions `h_x`, `λ_x`, `β_x`, randomness deficiency, the
//! triple set `B_x`, and the curve-closeness relation.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::codec::BitString;
use crate::descsys::{DescriptionSystem, FiniteSet};
use crate::error::{Error, Result};
use crate::logbits::LogBits;

/// A representable set seen from a (possibly absent) query string `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelRecord {
    pub set: FiniteSet,
    pub k_set: u32,
    pub card: u64,
    pub log_card: LogBits,
    /// `Λ(S) = K(S) + log2|S|`.
    pub lambda: LogBits,
    /// `K(x|S)` for the query, `None` without a query or when infinite.
    pub k_cond: Option<u32>,
    /// `δ(x|S)`; `None` without a query, infinite when `x ∉ S`.
    pub delta: Option<LogBits>,
    pub witness_program: BitString,
}

impl ModelRecord {
    pub fn from_system(sys: &DescriptionSystem, id: usize, x: Option<u64>) -> Self {
        let e = sys.set_entry(id);
        let log_card = e.set.log_card();
        let k_cond = x.and_then(|x| sys.k_cond_id(x, id));
        let delta = x.map(|x| delta_of(&e.set, log_card, x, sys.k_cond_id(x, id)));
        ModelRecord {
            set: e.set.clone(),
            k_set: e.k,
            card: e.set.len() as u64,
            log_card,
            lambda: log_card.add_int(i64::from(e.k)),
            k_cond,
            delta,
            witness_program: e.witness.clone(),
        }
    }
}

fn delta_of(set: &FiniteSet, log_card: LogBits, x: u64, k_cond: Option<u32>) -> LogBits {
    match k_cond {
        Some(k) if set.contains(x) => log_card.sub_int(i64::from(k)),
        _ => LogBits::INFINITY,
    }
}

/// `δ(x|S) = log2|S| − K(x|S)` for `x ∈ S`, infinite otherwise.
pub fn deficiency(sys: &DescriptionSystem, x: &BitString, s: &FiniteSet) -> Result<LogBits> {
    let w = sys.word(x)?;
    let id = sys.set_id(s).ok_or(Error::Unrepresentable)?;
    Ok(delta_of(s, s.log_card(), w, sys.k_cond_id(w, id)))
}

/// The witness chosen for one objective at one α.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Id of the set in [`DescriptionSystem::sets`].
    pub set_id: usize,
    pub program: BitString,
}

/// The least α whose MDL value meets `K(x) + slack`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SufficientStatistic {
    pub alpha: u32,
    pub witness: Witness,
    pub slack: i64,
}

/// A Pareto-minimal triple `⟨K(S), δ(x|S), Λ(S)⟩` realized by some `S ∋ x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triple {
    pub k: u32,
    pub delta: LogBits,
    pub lambda: LogBits,
    pub witness: Witness,
}

/// All three structure functions of one string, on `α ∈ [0, alpha_max]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureProfile {
    pub x: BitString,
    pub k_x: u32,
    pub alpha_max: u32,
    pub h: Vec<LogBits>,
    pub lambda: Vec<LogBits>,
    pub beta: Vec<LogBits>,
    pub h_witness: Vec<Option<Witness>>,
    pub lambda_witness: Vec<Option<Witness>>,
    pub beta_witness: Vec<Option<Witness>>,
    pub critical: Vec<u32>,
    pub mss: Option<SufficientStatistic>,
    pub triples: Vec<Triple>,
    /// No representable set contains `x` at any α in range.
    pub infeasible: bool,
}

impl StructureProfile {
    /// The diagonal `K(x) − α`.
    pub fn sufficiency_line(&self, alpha: u32) -> i64 {
        i64::from(self.k_x) - i64::from(alpha)
    }
}

struct Candidate {
    id: usize,
    k: u32,
    program: BitString,
    log_card: LogBits,
    lambda: LogBits,
    delta: LogBits,
}

fn pick<'a>(
    best: Option<&'a Candidate>,
    cand: &'a Candidate,
    key: impl Fn(&Candidate) -> LogBits,
) -> &'a Candidate {
    match best {
        None => cand,
        Some(b) => match key(cand).cmp(&key(b)).then_with(|| cand.program.cmp(&b.program)) {
            Ordering::Less => cand,
            _ => b,
        },
    }
}

fn witness(c: &Candidate) -> Witness {
    Witness {
        set_id: c.id,
        program: c.program.clone(),
    }
}

/// Computes `h_x`, `λ_x`, `β_x` with witnesses, critical points, the minimal
/// sufficient statistic at the given slack (default `c_sub`), and `B_x`.
pub fn profile(
    sys: &DescriptionSystem,
    x: &BitString,
    alpha_max: u32,
    slack: Option<i64>,
) -> Result<StructureProfile> {
    let w = sys.word(x)?;
    Ok(profile_word(sys, w, alpha_max, slack))
}

pub(crate) fn profile_word(
    sys: &DescriptionSystem,
    w: u64,
    alpha_max: u32,
    slack: Option<i64>,
) -> StructureProfile {
    let mut cands: Vec<Candidate> = sys
        .containing(w)
        .iter()
        .map(|&id| {
            let e = sys.set_entry(id);
            let log_card = e.set.log_card();
            Candidate {
                id,
                k: e.k,
                program: e.witness.clone(),
                log_card,
                lambda: log_card.add_int(i64::from(e.k)),
                delta: delta_of(&e.set, log_card, w, sys.k_cond_id(w, id)),
            }
        })
        .collect();
    // program shortlex order sorts by K(S) first
    cands.sort_by(|a, b| a.program.cmp(&b.program));

    let len = alpha_max as usize + 1;
    let mut h = Vec::with_capacity(len);
    let mut lambda = Vec::with_capacity(len);
    let mut beta = Vec::with_capacity(len);
    let mut h_w = Vec::with_capacity(len);
    let mut l_w = Vec::with_capacity(len);
    let mut b_w = Vec::with_capacity(len);
    let (mut bh, mut bl, mut bb): (Option<&Candidate>, Option<&Candidate>, Option<&Candidate>) =
        (None, None, None);
    let mut next = 0;
    for alpha in 0..=alpha_max {
        while next < cands.len() && cands[next].k <= alpha {
            let c = &cands[next];
            bh = Some(pick(bh, c, |c| c.log_card));
            bl = Some(pick(bl, c, |c| c.lambda));
            bb = Some(pick(bb, c, |c| c.delta));
            next += 1;
        }
        h.push(bh.map_or(LogBits::INFINITY, |c| c.log_card));
        lambda.push(bl.map_or(LogBits::INFINITY, |c| c.lambda));
        beta.push(bb.map_or(LogBits::INFINITY, |c| c.delta));
        h_w.push(bh.map(witness));
        l_w.push(bl.map(witness));
        b_w.push(bb.map(witness));
    }

    let critical = critical_points(&lambda);
    let k_x = sys.k_data(w);
    let slack = slack.unwrap_or(sys.c_sub());
    let bound = LogBits::int(i64::from(k_x) + slack);
    let mss = lambda
        .iter()
        .position(|l| *l <= bound)
        .map(|a| SufficientStatistic {
            alpha: a as u32,
            witness: l_w[a].clone().expect("finite λ has a witness"),
            slack,
        });

    let triples = pareto_triples(&cands);
    StructureProfile {
        x: sys.string(w),
        k_x,
        alpha_max,
        infeasible: h.iter().all(LogBits::is_infinite),
        h,
        lambda,
        beta,
        h_witness: h_w,
        lambda_witness: l_w,
        beta_witness: b_w,
        critical,
        mss,
        triples,
    }
}

/// `{α : λ(α) < λ(α−1)}` with `λ(−1) = ∞`.
pub fn critical_points(lambda: &[LogBits]) -> Vec<u32> {
    let mut prev = LogBits::INFINITY;
    let mut out = Vec::new();
    for (a, &l) in lambda.iter().enumerate() {
        if l < prev {
            out.push(a as u32);
        }
        prev = l;
    }
    out
}

fn pareto_triples(cands: &[Candidate]) -> Vec<Triple> {
    // cands are in program order, so the first of equal triples keeps the least program
    let mut distinct: Vec<&Candidate> = Vec::new();
    for c in cands {
        if !distinct
            .iter()
            .any(|d| d.k == c.k && d.delta == c.delta && d.lambda == c.lambda)
        {
            distinct.push(c);
        }
    }
    let dominates = |a: &Candidate, b: &Candidate| {
        a.k <= b.k
            && a.delta <= b.delta
            && a.lambda <= b.lambda
            && (a.k, a.delta, a.lambda) != (b.k, b.delta, b.lambda)
    };
    let mut out: Vec<Triple> = distinct
        .iter()
        .filter(|c| !distinct.iter().any(|d| dominates(d, c)))
        .map(|c| Triple {
            k: c.k,
            delta: c.delta,
            lambda: c.lambda,
            witness: witness(c),
        })
        .collect();
    out.sort_by_key(|a| (a.k, a.delta, a.lambda));
    out
}

/// Profiles of every universe element, in universe order.
pub fn profile_all(
    sys: &DescriptionSystem,
    alpha_max: u32,
    slack: Option<i64>,
) -> Vec<StructureProfile> {
    (0..sys.universe_size())
        .into_par_iter()
        .map(|w| profile_word(sys, w, alpha_max, slack))
        .collect()
}

/// The block containing `x` when `S`, in sorted order, is cut into `2^m`
/// contiguous blocks of `⌈|S|/2^m⌉` elements (the last may be shorter).
pub fn subdivide(s: &FiniteSet, x: &BitString, m: u32) -> Result<FiniteSet> {
    if x.len() as u32 != s.width() {
        return Err(Error::NotMember(x.to_token()));
    }
    let pos = s
        .index_of(x.to_word())
        .ok_or_else(|| Error::NotMember(x.to_token()))?;
    if m >= 64 || (1u64 << m) > s.len() as u64 {
        return Err(Error::invalid(format!(
            "cannot split {} elements into 2^{m} parts",
            s.len()
        )));
    }
    let parts = 1usize << m;
    let block = s.len().div_ceil(parts);
    let start = pos / block * block;
    let end = (start + block).min(s.len());
    FiniteSet::new(s.width(), s.words()[start..end].iter().copied())
}

/// Tolerances for the closeness relation; both evaluated on `[0, k]`.
#[derive(Clone, Debug)]
pub struct ClosenessSpec {
    pub epsilon: Vec<u32>,
    pub delta: Vec<u32>,
}

impl ClosenessSpec {
    pub fn constant(k: u32, epsilon: u32, delta: u32) -> Self {
        ClosenessSpec {
            epsilon: vec![epsilon; k as usize + 1],
            delta: vec![delta; k as usize + 1],
        }
    }
}

/// Which side of the closeness relation failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Below,
    Above,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub i: u32,
    pub side: Side,
    /// `None` is ∞.
    pub value: Option<i64>,
    pub bound: Option<i64>,
}

/// Checks that `f` is `(ε(i), δ(i))`-close to `g`: for every `i ∈ [ε(0), k]`,
/// `f(i)` lies between the window minimum of `g` minus `δ(i)` and the window
/// maximum plus `δ(i)`, where the window is `j ∈ [ε(0), k]`, `|j − i| ≤ ε(i)`.
/// Curves use `None` for ∞. Returns the first violation, if any.
pub fn curves_close(
    f: &[Option<i64>],
    g: &[Option<i64>],
    spec: &ClosenessSpec,
) -> Result<Option<Violation>> {
    let n = f.len();
    if n == 0 || g.len() != n || spec.epsilon.len() != n || spec.delta.len() != n {
        return Err(Error::invalid("curves and tolerances must share the domain [0, k]"));
    }
    let k = n - 1;
    let e0 = spec.epsilon[0] as usize;
    // None sorts below Some in Option's order; map ∞ explicitly instead
    let key = |v: Option<i64>| v.map_or(i128::MAX, i128::from);
    for i in e0..=k {
        let eps = spec.epsilon[i] as usize;
        let lo = e0.max(i.saturating_sub(eps));
        let hi = k.min(i + eps);
        let window = &g[lo..=hi];
        let d = i128::from(spec.delta[i]);
        let min = window.iter().map(|&v| key(v)).min().expect("window contains i");
        let max = window.iter().map(|&v| key(v)).max().expect("window contains i");
        let fi = key(f[i]);
        let back = |v: i128| (v != i128::MAX).then_some(v as i64);
        if min != i128::MAX && fi < min - d {
            return Ok(Some(Violation {
                i: i as u32,
                side: Side::Below,
                value: f[i],
                bound: back(min - d),
            }));
        }
        if min == i128::MAX && fi != i128::MAX {
            return Ok(Some(Violation {
                i: i as u32,
                side: Side::Below,
                value: f[i],
                bound: None,
            }));
        }
        if max != i128::MAX && fi > max + d {
            return Ok(Some(Violation {
                i: i as u32,
                side: Side::Above,
                value: f[i],
                bound: back(max + d),
            }));
        }
    }
    Ok(None)
}

/// A LogBits curve rounded up to integers, for closeness checks.
pub fn ceil_curve(values: &[LogBits]) -> Vec<Option<i64>> {
    values.iter().map(LogBits::ceil).collect()
}
