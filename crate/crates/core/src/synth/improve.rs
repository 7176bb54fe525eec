use std::cmp::Ordering;

use serde::Serialize;

use crate::codec::BitString;
use crate::descsys::{DescriptionSystem, FiniteSet};
use crate::error::{Error, Result};
use crate::logbits::{cmp_sums, diff_f64, LogBits};
use crate::structfn::{profile_word, ModelRecord};

/// One candidate `S ∋ x` with `Λ(S) ≤ Λ(A)` and which of the three bounds it meets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateReport {
    pub program: BitString,
    pub k: u32,
    pub lambda: LogBits,
    pub delta: LogBits,
    pub meets: [bool; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Improvement {
    pub alpha: u32,
    /// Additive constant granted to each bound.
    pub c: i64,
    pub model: ModelRecord,
    /// The returned set meets all three bounds.
    pub meets_bounds: bool,
    /// Realized `lhs − rhs` of each bound before adding `c`:
    /// `Λ(S) − λ(α) − (δ(x|A) − β(α))`,
    /// `K(S) − K(A) − (λ(α) − Λ(A)) − (δ(x|A) − β(α))`,
    /// `K(S) − α − (h(α) − log|A|) − (δ(x|A) − β(α))`.
    pub slacks: [f64; 3],
    pub candidates: Vec<CandidateReport>,
}

/// Looks for `S ∋ x` no worse than `A` in two-part length that also meets the
/// three improvement bounds, each with additive constant `c` (default `c_sub`).
///
/// Among candidates meeting all bounds the least `Λ(S)` wins, then `K(S)`,
/// then program order; when none meets them, the same order over all
/// candidates decides and `meets_bounds` is false.
pub fn improve_model(
    sys: &DescriptionSystem,
    x: &BitString,
    a: &FiniteSet,
    alpha: u32,
    c: Option<i64>,
) -> Result<Improvement> {
    let w = sys.word(x)?;
    let a_id = sys.set_id(a).ok_or(Error::Unrepresentable)?;
    if !a.contains(w) {
        return Err(Error::NotMember(x.to_token()));
    }
    let c = c.unwrap_or(sys.c_sub());
    let a_rec = ModelRecord::from_system(sys, a_id, Some(w));
    let prof = profile_word(sys, w, alpha, None);
    let (h, lam, beta) = (prof.h[alpha as usize], prof.lambda[alpha as usize], prof.beta[alpha as usize]);
    let delta_a = a_rec.delta.expect("x is in A");
    let ka = LogBits::int(i64::from(a_rec.k_set));
    let cb = LogBits::int(c);
    let al = LogBits::int(i64::from(alpha));

    let mut cands: Vec<(ModelRecord, [bool; 3])> = sys
        .containing(w)
        .iter()
        .map(|&id| ModelRecord::from_system(sys, id, Some(w)))
        .filter(|r| r.lambda <= a_rec.lambda)
        .map(|r| {
            let ks = LogBits::int(i64::from(r.k_set));
            // each bound rearranged so both sides are sums
            let meets = [
                cmp_sums(&[r.lambda, beta], &[lam, delta_a, cb]) != Ordering::Greater,
                cmp_sums(&[ks, a_rec.lambda, beta], &[ka, lam, delta_a, cb]) != Ordering::Greater,
                cmp_sums(&[ks, a_rec.log_card, beta], &[al, h, delta_a, cb]) != Ordering::Greater,
            ];
            (r, meets)
        })
        .collect();
    cands.sort_by(|(p, _), (q, _)| {
        (p.lambda, p.k_set, &p.witness_program).cmp(&(q.lambda, q.k_set, &q.witness_program))
    });
    let best = cands
        .iter()
        .find(|(_, m)| m.iter().all(|&b| b))
        .or(cands.first())
        .expect("A itself is a candidate");
    let (s, meets) = best.clone();
    let ks = LogBits::int(i64::from(s.k_set));
    let slacks = [
        diff_f64(&[s.lambda, beta], &[lam, delta_a]),
        diff_f64(&[ks, a_rec.lambda, beta], &[ka, lam, delta_a]),
        diff_f64(&[ks, a_rec.log_card, beta], &[al, h, delta_a]),
    ];
    let candidates = cands
        .iter()
        .map(|(r, m)| CandidateReport {
            program: r.witness_program.clone(),
            k: r.k_set,
            lambda: r.lambda,
            delta: r.delta.expect("query given"),
            meets: *m,
        })
        .collect();
    Ok(Improvement {
        alpha,
        c,
        model: s,
        meets_bounds: meets.iter().all(|&b| b),
        slacks,
        candidates,
    })
}
