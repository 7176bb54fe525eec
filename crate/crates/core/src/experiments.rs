//! Experiment systems and measured-gap reports. Nothing here asserts a
//! bound; the reports record how far finite systems sit from the asymptotic
//! statements.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codec::BitString;
use crate::descsys::{DescriptionSystem, Family, FiniteSet, KraftReport, SystemBuilder};
use crate::error::{Error, Result};
use crate::logbits::LogBits;
use crate::search::{anytime_search, improvement_audit, SearchMode};
use crate::structfn::{profile_all, StructureProfile};
use crate::synth::improve_model;
use crate::unistat::{build_index, induced_data, DObject};

fn bs(s: &str) -> BitString {
    s.parse().expect("literal bit string")
}

/// Literal data programs; Hamming slices under `0`, the cube under a 7-bit
/// tag, and every singleton under a 10-bit tag.
///
/// For mid-weight strings the slice beats the cube by about 3 bits of
/// two-part length and the singleton loses to both, so an mdl trace that
/// meets the singleton first improves by more than `log2 n`.
pub fn hamming_system(n: u32) -> Result<DescriptionSystem> {
    let mut b = SystemBuilder::new(n);
    b.data_family(&BitString::new(), Family::Literal)?;
    b.set_family(&bs("0"), Family::Hamming)?;
    b.set(bs("1000000"), FiniteSet::cube(n));
    b.set_family(&bs("1100000000"), Family::Singletons)?;
    b.build()
}

/// Patch-colour product sets under `0`, the cube under `10`, literal data.
pub fn patches_system(n: u32, m: u32) -> Result<DescriptionSystem> {
    let mut b = SystemBuilder::new(n);
    b.data_family(&BitString::new(), Family::Literal)?;
    b.set_family(&bs("0"), Family::Patches { m })?;
    b.set(bs("10"), FiniteSet::cube(n));
    b.build()
}

/// Prefix cylinders under `0`, singletons under `11`, literal data under `1`.
pub fn cylinder_system(n: u32, max_prefix: u32) -> Result<DescriptionSystem> {
    let mut b = SystemBuilder::new(n);
    b.data_family(&bs("1"), Family::Literal)?;
    b.set_family(&bs("0"), Family::Cylinders { max_prefix })?;
    b.set_family(&bs("11"), Family::Singletons)?;
    b.build()
}

/// Parameters of the planted non-stochastic system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonstochPlan {
    pub n: u32,
    /// Deficiency kept by every model below `alpha0`.
    pub level: u32,
    /// Complexity at which the singleton becomes available.
    pub alpha0: u32,
    /// Number of planted strings.
    pub count: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlantedString {
    pub x: BitString,
    pub k_x: u32,
    pub beta: Vec<LogBits>,
    pub lambda: Vec<LogBits>,
    /// First α where the plan fails, if any.
    pub first_violation: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonstochReport {
    pub plan: NonstochPlan,
    pub programs: usize,
    pub kraft: KraftReport,
    pub c_sub: i64,
    pub strings: Vec<PlantedString>,
    pub verified: bool,
}

/// Builds a system in which each planted `x` has `β_x(α) ≥ level` for every
/// `α < alpha0` and `β_x(α) = 0` from `alpha0` on.
///
/// Sets are the prefix cylinders `{y∗}` with `|y| ≤ n − level` (program
/// `0 ∥ ȳ`, so complexity `2|y| + 2`), and the singletons `{x}` of the planted
/// strings at exactly `alpha0` bits. Each cylinder containing a planted `x`
/// gets a conditional program for `x` that is `level` bits shorter than the
/// index code, which keeps the deficiency at `level` until the singleton is
/// affordable.
pub fn nonstoch(plan: &NonstochPlan) -> Result<(DescriptionSystem, NonstochReport)> {
    let NonstochPlan {
        n,
        level,
        alpha0,
        count,
        seed,
    } = *plan;
    if level > n || n > 16 {
        return Err(Error::invalid("need level ≤ n ≤ 16"));
    }
    let free = n - level;
    if count == 0 || count as u64 > 1u64 << free {
        return Err(Error::invalid(format!("between 1 and 2^{free} planted strings fit")));
    }
    let tag_bits = 64 - (count as u64 - 1).leading_zeros();
    if alpha0 < 2 * free + 3 || alpha0 < 1 + tag_bits || alpha0 > 40 {
        return Err(Error::invalid(format!(
            "alpha0 must exceed every cylinder complexity 2(n − level) + 2 = {} and stay ≤ 40",
            2 * free + 2
        )));
    }
    // distinct (n − level)-bit prefixes, random low bits
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prefixes: Vec<u64> = sample(&mut rng, 1usize << free, count)
        .into_iter()
        .map(|v| v as u64)
        .collect();
    prefixes.sort_unstable();
    let xs: Vec<u64> = prefixes
        .iter()
        .map(|&p| {
            let low = if level == 0 {
                0
            } else {
                rand::Rng::gen_range(&mut rng, 0..(1u64 << level))
            };
            (p << level) | low
        })
        .collect();

    let mut b = SystemBuilder::new(n);
    b.data_family(&BitString::new(), Family::Literal)?;
    b.set_family(&bs("0"), Family::Cylinders { max_prefix: free })?;
    for (k, &x) in xs.iter().enumerate() {
        let mut prog = bs("1");
        prog.extend_from(&BitString::from_word(k as u64, alpha0 - 1));
        b.set(prog, FiniteSet::singleton(n, x));
        for j in 0..=free {
            let cyl = FiniteSet::new(n, {
                let base = (x >> (n - j)) << (n - j);
                (0..(1u64 << (n - j))).map(move |r| base | r)
            })?;
            // the bits of x between position j and n − level name it among
            // planted strings sharing the prefix
            let q = BitString::from_word((x >> level) & ((1u64 << (free - j)) - 1), free - j);
            b.cond_word(q, cyl, x);
        }
    }
    let sys = b.build()?;

    let alpha_max = alpha0 + 2;
    let mut strings = Vec::new();
    for &x in &xs {
        let p = crate::structfn::profile(&sys, &sys.string(x), alpha_max, None)?;
        let first_violation = (0..=alpha_max).find(|&a| {
            let beta = p.beta[a as usize];
            if a < alpha0 {
                beta < LogBits::int(i64::from(level))
            } else {
                beta != LogBits::ZERO
            }
        });
        strings.push(PlantedString {
            x: sys.string(x),
            k_x: p.k_x,
            beta: p.beta,
            lambda: p.lambda,
            first_violation,
        });
    }
    let verified = strings.iter().all(|s| s.first_violation.is_none());
    let report = NonstochReport {
        plan: plan.clone(),
        programs: sys.program_count(),
        kraft: sys.kraft().clone(),
        c_sub: sys.c_sub(),
        strings,
        verified,
    };
    Ok((sys, report))
}

/// Two-sided defect of `K(x) ≈ K(S) + K(x|S)` over pairs `x ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoiDefect {
    /// `max K(x) − K(S) − K(x|S)`: how much a two-part route undercuts `K(x)`.
    pub upper: i64,
    pub upper_witness: (BitString, BitString),
    /// `max_x min_S K(S) + K(x|S) − K(x)`: how far the best route through a
    /// set stays above `K(x)`.
    pub lower: i64,
    pub lower_witness: BitString,
    pub pairs: u64,
}

pub fn soi_defect(sys: &DescriptionSystem) -> Option<SoiDefect> {
    let mut upper: Option<(i64, BitString, BitString)> = None;
    let mut lower: Option<(i64, BitString)> = None;
    let mut pairs = 0u64;
    for x in 0..sys.universe_size() {
        let kx = i64::from(sys.k_data(x));
        let mut best: Option<i64> = None;
        for &id in sys.containing(x) {
            let e = sys.set_entry(id);
            let Some(kc) = sys.k_cond_id(x, id) else { continue };
            pairs += 1;
            let route = i64::from(e.k) + i64::from(kc);
            if upper.as_ref().is_none_or(|u| kx - route > u.0) {
                upper = Some((kx - route, sys.string(x), e.witness.clone()));
            }
            best = Some(best.map_or(route, |b| b.min(route)));
        }
        if let Some(b) = best {
            if lower.as_ref().is_none_or(|l| b - kx > l.0) {
                lower = Some((b - kx, sys.string(x)));
            }
        }
    }
    let (upper, ux, up) = upper?;
    let (lower, lx) = lower?;
    Some(SoiDefect {
        upper,
        upper_witness: (ux, up),
        lower,
        lower_witness: lx,
        pairs,
    })
}

/// Summary of a real-valued gap over many `(x, α)` points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapStats {
    pub count: u64,
    pub max: Option<f64>,
    pub min: Option<f64>,
    pub mean: Option<f64>,
}

impl GapStats {
    fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut count, mut sum) = (0u64, 0.0);
        let (mut max, mut min): (Option<f64>, Option<f64>) = (None, None);
        for v in values {
            count += 1;
            sum += v;
            max = Some(max.map_or(v, |m| m.max(v)));
            min = Some(min.map_or(v, |m| m.min(v)));
        }
        GapStats {
            count,
            max,
            min,
            mean: (count > 0).then(|| sum / count as f64),
        }
    }
}

/// `λ(α + ε) − β(α) − K(x)` over all strings and all α where both are finite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReverseGap {
    pub eps: u32,
    pub gap: GapStats,
}

pub fn reverse_gap(profiles: &[StructureProfile], eps: u32) -> ReverseGap {
    let values = profiles.iter().flat_map(|p| {
        (0..=p.alpha_max.saturating_sub(eps)).filter_map(move |a| {
            let l = p.lambda[(a + eps) as usize];
            let b = p.beta[a as usize];
            (l.is_finite() && b.is_finite()).then(|| l.to_f64() - b.to_f64() - f64::from(p.k_x))
        })
    });
    ReverseGap {
        eps,
        gap: GapStats::from_values(values),
    }
}

/// How well the blocks `S_i^l` of the induced string enumeration track the
/// exact `h_x(α)` and `λ_x(α)`. The block holding `x` at level `l` has
/// `i = |m_x^l|`, which stands for its complexity, so it competes at every
/// `α ≥ i`; each `(x, α)` takes the best such block over all levels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorollaryGap {
    pub levels: u32,
    /// `log2|S_i^l| − h_x(α)`, minimized over `l` and `i ≤ α`.
    pub h_gap: GapStats,
    /// `i + log2|S_i^l| − λ_x(α)`, minimized over `l` and `i ≤ α`.
    pub lambda_gap: GapStats,
    /// Points `(x, α)` with finite `h_x(α)` but no block at `α`.
    pub uncovered: u64,
}

pub fn corollary_gap(sys: &DescriptionSystem, profiles: &[StructureProfile]) -> CorollaryGap {
    let max_k = (0..sys.universe_size()).map(|x| sys.k_data(x)).max().unwrap_or(0);
    // blocks[x] = (i, log2 of block size) over every level
    let mut blocks: BTreeMap<u64, Vec<(u32, u32)>> = BTreeMap::new();
    for l in 0..=max_k {
        let d = induced_data(sys, l);
        let w = d.width();
        for x in 0..sys.universe_size() {
            let r = build_index(&d, &DObject::Str(sys.string(x)));
            if let Some(i) = r.m_len() {
                blocks.entry(x).or_default().push((i, w - i - 1));
            }
        }
    }
    let (mut hg, mut lg, mut uncovered) = (Vec::new(), Vec::new(), 0u64);
    for (x, p) in profiles.iter().enumerate() {
        let mine = blocks.get(&(x as u64)).map_or(&[][..], Vec::as_slice);
        for a in 0..=p.alpha_max {
            let h = p.h[a as usize];
            if h.is_infinite() {
                continue;
            }
            let usable = mine.iter().filter(|(i, _)| *i <= a);
            match (usable.clone().map(|&(_, s)| s).min(), usable.map(|&(i, s)| i + s).min()) {
                (Some(s), Some(code)) => {
                    hg.push(f64::from(s) - h.to_f64());
                    lg.push(f64::from(code) - p.lambda[a as usize].to_f64());
                }
                _ => uncovered += 1,
            }
        }
    }
    CorollaryGap {
        levels: max_k + 1,
        h_gap: GapStats::from_values(hg),
        lambda_gap: GapStats::from_values(lg),
        uncovered,
    }
}

/// Realized slacks of model improvement over every `x`, every representable
/// `A ∋ x` and every α.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImprovementSlacks {
    pub cases: u64,
    pub meets_bounds: u64,
    pub slack: [GapStats; 3],
}

pub fn improvement_slacks(sys: &DescriptionSystem, xs: &[u64], alpha_max: u32) -> Result<ImprovementSlacks> {
    let mut cols: [Vec<f64>; 3] = Default::default();
    let (mut cases, mut meets) = (0u64, 0u64);
    for &x in xs {
        let xs = sys.string(x);
        for &id in sys.containing(x) {
            let a = sys.set_entry(id).set.clone();
            for alpha in 0..=alpha_max {
                let imp = improve_model(sys, &xs, &a, alpha, None)?;
                cases += 1;
                meets += u64::from(imp.meets_bounds);
                for (c, v) in cols.iter_mut().zip(imp.slacks) {
                    if v.is_finite() {
                        c.push(v);
                    }
                }
            }
        }
    }
    let [a, b, c] = cols;
    Ok(ImprovementSlacks {
        cases,
        meets_bounds: meets,
        slack: [
            GapStats::from_values(a),
            GapStats::from_values(b),
            GapStats::from_values(c),
        ],
    })
}

/// The deficiency audit over mdl traces for several strings and seeds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditSummary {
    pub c: f64,
    pub traces: u64,
    pub qualifying_pairs: u64,
    pub deficiency_not_increased: u64,
    pub slack: GapStats,
}

pub fn audit_summary(sys: &DescriptionSystem, xs: &[u64], alpha: u32, seeds: &[u64], c: f64) -> Result<AuditSummary> {
    let mut traces = 0;
    let (mut pairs, mut held) = (0u64, 0u64);
    let mut slacks = Vec::new();
    for &seed in seeds {
        let stream = sys.enumeration_stream(seed);
        for &x in xs {
            let xs = sys.string(x);
            let t = anytime_search(sys, &xs, alpha, &stream, SearchMode::Mdl)?;
            let a = improvement_audit(sys, &xs, &t, c)?;
            traces += 1;
            pairs += a.pairs.len() as u64;
            held += a.pairs.iter().filter(|p| p.deficiency_not_increased).count() as u64;
            slacks.extend(a.pairs.iter().map(|p| p.slack));
        }
    }
    Ok(AuditSummary {
        c,
        traces,
        qualifying_pairs: pairs,
        deficiency_not_increased: held,
        slack: GapStats::from_values(slacks),
    })
}

/// All measured gaps for one system.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub system: String,
    pub n: u32,
    pub programs: usize,
    pub c_sub: i64,
    pub kraft: KraftReport,
    pub alpha_max: u32,
    pub reverse: Vec<ReverseGap>,
    pub corollary: CorollaryGap,
    pub soi: Option<SoiDefect>,
    pub improvement: ImprovementSlacks,
    pub audit: AuditSummary,
}

/// Builds the full report. Improvement slacks and mdl audits are computed on
/// an evenly spaced sample of at most `sample` strings.
pub fn gap_report(name: &str, sys: &DescriptionSystem, alpha_max: u32, seeds: &[u64], sample: usize) -> Result<GapReport> {
    let profiles = profile_all(sys, alpha_max, None);
    let n = sys.universe();
    let log_n = 32 - n.max(1).leading_zeros();
    let mut eps: Vec<u32> = vec![0, 1, log_n];
    eps.dedup();
    let reverse = eps.into_iter().map(|e| reverse_gap(&profiles, e)).collect();
    let size = sys.universe_size();
    let step = (size / sample.max(1) as u64).max(1);
    let xs: Vec<u64> = (0..size).step_by(step as usize).take(sample).collect();
    Ok(GapReport {
        system: name.to_string(),
        n,
        programs: sys.program_count(),
        c_sub: sys.c_sub(),
        kraft: sys.kraft().clone(),
        alpha_max,
        reverse,
        corollary: corollary_gap(sys, &profiles),
        soi: soi_defect(sys),
        improvement: improvement_slacks(sys, &xs, alpha_max)?,
        audit: audit_summary(sys, &xs, alpha_max, seeds, 0.5)?,
    })
}
