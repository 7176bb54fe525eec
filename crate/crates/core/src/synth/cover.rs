use serde::Serialize;

use crate::codec::BitString;
use crate::descsys::{ceil_log2, FiniteSet};
use crate::error::{Error, Result};

/// A halting program's output as seen by the covering algorithm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverRecord {
    pub set: FiniteSet,
    /// Claimed `K(A)`.
    pub k: u32,
    /// Claimed `K(A|x)` class.
    pub k_cond: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverRun {
    pub x: BitString,
    pub delta: u32,
    /// Multiplicity threshold `t = 2^{max(0, K(A₀|x) − δ)}`.
    pub t: u64,
    pub block_size: u64,
    pub sets: Vec<FiniteSet>,
    pub records: usize,
    /// Times the chop step ran.
    pub firings: u64,
    pub complete_blocks: u64,
    pub incomplete_blocks: u64,
    /// Union elements with multiplicity at least `t` at the end.
    pub heavy_elements: u64,
    /// `⌈records/t⌉ + ⌊heavy/block⌋ + 1`.
    pub bound: u64,
    /// `2 · 2^{K(A₀) − K(A₀|x) + δ}`, from the lemma's counting.
    pub claim_bound: u64,
    pub x_multiplicity: u64,
    /// Index into `sets` of the block holding `x`.
    pub covered_by: Option<usize>,
}

impl CoverRun {
    pub fn covered(&self) -> bool {
        self.covered_by.is_some()
    }

    /// Counting bounds that every run must meet; empty when all hold.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.sets.len() as u64;
        if n > self.bound {
            out.push(format!("{n} blocks exceed the bound {}", self.bound));
        }
        if self.firings > self.records as u64 / self.t {
            out.push(format!("{} firings exceed records/t", self.firings));
        }
        if self.complete_blocks > self.heavy_elements / self.block_size {
            out.push(format!("{} complete blocks exceed heavy/block", self.complete_blocks));
        }
        if self.incomplete_blocks > self.firings {
            out.push("more incomplete blocks than firings".into());
        }
        if self.x_multiplicity >= 2 * self.t && !self.covered() {
            out.push("x reached multiplicity 2t but is uncovered".into());
        }
        out
    }
}

/// Covers, with few blocks of size `2^{⌈log|A₀|⌉}`, everything covered often
/// by the records, where `A₀` is the first record containing `x`.
///
/// Multiplicity counts records, so two programs printing the same set count
/// twice. `delta` defaults to `⌈log2 m⌉ + 1` with `m = ⌈K(A₀) + log|A₀|⌉`.
pub fn cover_family(records: &[CoverRecord], x: &BitString, delta: Option<u32>) -> Result<CoverRun> {
    let a0 = records
        .iter()
        .find(|r| r.set.width() as usize == x.len() && r.set.contains_str(x))
        .ok_or_else(|| Error::NotMember(x.to_token()))?;
    let width = a0.set.width();
    let log_a0 = a0.set.index_code_len();
    let class = (a0.k, log_a0, a0.k_cond);
    if let Some(bad) = records
        .iter()
        .position(|r| r.set.width() != width || (r.k, r.set.index_code_len(), r.k_cond) != class)
    {
        return Err(Error::invalid(format!(
            "record {bad} differs from A₀ in claimed K, ⌈log|A|⌉ or K(A|x)"
        )));
    }
    let delta = delta.unwrap_or_else(|| {
        let m = a0.set.log_card().add_int(i64::from(a0.k)).ceil().unwrap_or(0).max(1);
        ceil_log2(m as u64) + 1
    });
    if log_a0 >= 63 || a0.k_cond.saturating_sub(delta) >= 63 {
        return Err(Error::invalid("block size or threshold out of range"));
    }
    let t = 1u64 << a0.k_cond.saturating_sub(delta);
    let block = 1usize << log_a0;

    // multiplicity per word, and whether the word is in C
    let mut mult: std::collections::BTreeMap<u64, u64> = Default::default();
    let mut in_c: std::collections::BTreeSet<u64> = Default::default();
    let mut sets = Vec::new();
    let (mut firings, mut complete, mut incomplete) = (0u64, 0u64, 0u64);
    for r in records {
        // Step 1
        for &w in r.set.words() {
            *mult.entry(w).or_default() += 1;
        }
        // Step 2: D is recomputed from U∖C; the map keys are U
        let d: Vec<u64> = mult
            .iter()
            .filter(|(w, &m)| m >= t && !in_c.contains(w))
            .map(|(&w, _)| w)
            .collect();
        // Step 3
        if d.iter().any(|w| mult[w] >= 2 * t) {
            firings += 1;
            for chunk in d.chunks(block) {
                if chunk.len() == block {
                    complete += 1;
                } else {
                    incomplete += 1;
                }
                in_c.extend(chunk.iter().copied());
                sets.push(FiniteSet::new(width, chunk.iter().copied())?);
            }
        }
    }

    let xw = x.to_word();
    let heavy = mult.values().filter(|&&m| m >= t).count() as u64;
    let exp = i64::from(a0.k) - i64::from(a0.k_cond) + i64::from(delta) + 1;
    Ok(CoverRun {
        x: x.clone(),
        delta,
        t,
        block_size: block as u64,
        covered_by: sets.iter().position(|s| s.contains(xw)),
        records: records.len(),
        firings,
        complete_blocks: complete,
        incomplete_blocks: incomplete,
        heavy_elements: heavy,
        bound: (records.len() as u64).div_ceil(t) + heavy / block as u64 + 1,
        claim_bound: if exp >= 63 { u64::MAX } else { 1u64 << exp.max(0) },
        x_multiplicity: mult.get(&xw).copied().unwrap_or(0),
        sets,
    })
}

/// Reads a records file:
///
/// ```text
/// universe<TAB>n
/// record<TAB>k<TAB>k_cond<TAB>e1,e2,…
/// ```
///
/// Records keep file order, which is the order the covering algorithm sees
/// them. `#` starts a comment.
pub fn parse_cover_records(text: &str) -> Result<(u32, Vec<CoverRecord>)> {
    let mut n: Option<u32> = None;
    let mut records = Vec::new();
    let num = |line: usize, s: &str| -> Result<u32> {
        if s.is_empty() || s.len() > 9 || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(line, format!("expected a decimal number, found {s:?}")));
        }
        Ok(s.parse().expect("checked digits"))
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim_end();
        if content.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = content.split('\t').collect();
        match (f[0], f.len()) {
            ("universe", 2) => {
                if n.is_some() {
                    return Err(Error::parse(line, "universe declared twice"));
                }
                let v = num(line, f[1])?;
                if v > 16 {
                    return Err(Error::parse(line, "universe length exceeds 16"));
                }
                n = Some(v);
            }
            ("record", 4) => {
                let width = n.ok_or_else(|| Error::parse(line, "record before universe"))?;
                let k = num(line, f[1])?;
                let k_cond = num(line, f[2])?;
                let mut strings = Vec::new();
                for item in f[3].split(',') {
                    let s: BitString = item
                        .parse()
                        .map_err(|e: Error| Error::parse(line, e.to_string()))?;
                    if s.len() as u32 != width {
                        return Err(Error::parse(line, format!("{item:?} is not a {width}-bit string")));
                    }
                    strings.push(s);
                }
                let set = FiniteSet::from_strings(width, &strings)
                    .map_err(|e| Error::parse(line, e.to_string()))?;
                records.push(CoverRecord { set, k, k_cond });
            }
            _ => return Err(Error::parse(line, format!("unrecognized record {:?}", f[0]))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing universe"))?;
    Ok((n, records))
}

/// Inverse of [`parse_cover_records`].
pub fn cover_records_fixture(n: u32, records: &[CoverRecord]) -> String {
    let mut out = format!("universe\t{n}\n");
    for r in records {
        let elems: Vec<String> = r.set.strings().map(|s| s.to_token()).collect();
        out.push_str(&format!("record\t{}\t{}\t{}\n", r.k, r.k_cond, elems.join(",")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(set: FiniteSet, k: u32, k_cond: u32) -> CoverRecord {
        CoverRecord { set, k, k_cond }
    }

    #[test]
    fn single_record_never_fires_with_t_one() {
        let a0 = FiniteSet::new(3, [0, 1, 2, 3]).unwrap();
        let x: BitString = "001".parse().unwrap();
        let run = cover_family(&[rec(a0.clone(), 2, 0)], &x, Some(0)).unwrap();
        assert_eq!(run.t, 1);
        assert!(run.sets.is_empty());
        assert!(!run.covered());

        let run = cover_family(&[rec(a0.clone(), 2, 0), rec(a0.clone(), 2, 0)], &x, Some(0)).unwrap();
        assert_eq!(run.sets, vec![a0]);
        assert!(run.covered());
        assert!(run.violations().is_empty());
    }

    #[test]
    fn disjoint_records_leave_x_uncovered() {
        let recs: Vec<_> = (0..4u64)
            .map(|i| rec(FiniteSet::new(4, (0..4).map(|r| i * 4 + r)).unwrap(), 3, 1))
            .collect();
        let run = cover_family(&recs, &"0101".parse().unwrap(), Some(0)).unwrap();
        assert_eq!(run.t, 2);
        assert_eq!(run.x_multiplicity, 1);
        assert!(!run.covered());
        assert!(run.violations().is_empty());
    }

    #[test]
    fn heterogeneous_records_are_rejected() {
        let a = FiniteSet::new(3, [0, 1]).unwrap();
        let b = FiniteSet::new(3, [0, 1, 2, 3]).unwrap();
        let err = cover_family(&[rec(a, 2, 0), rec(b, 2, 0)], &"000".parse().unwrap(), None);
        assert!(err.is_err());
        let a = FiniteSet::new(3, [0, 1]).unwrap();
        assert!(cover_family(&[rec(a, 2, 0)], &"111".parse().unwrap(), None).is_err());
    }

    #[test]
    fn default_delta() {
        // m = ⌈2 + log 3⌉ = 4, δ = 2 + 1
        let a = FiniteSet::new(3, [0, 1, 2]).unwrap();
        let run = cover_family(&[rec(a, 2, 5)], &"000".parse().unwrap(), None).unwrap();
        assert_eq!(run.delta, 3);
        assert_eq!(run.t, 4);
    }

    #[test]
    fn records_file_round_trip() {
        let text = "# two records\nuniverse\t3\nrecord\t4\t1\t000,001\nrecord\t4\t1\t010,011\n";
        let (n, recs) = parse_cover_records(text).unwrap();
        assert_eq!(n, 3);
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].set.words(), &[2, 3]);
        assert_eq!(parse_cover_records(&cover_records_fixture(n, &recs)).unwrap().1, recs);
        assert!(parse_cover_records("record\t1\t1\t0\n").is_err());
        assert!(parse_cover_records("universe\t2\nrecord\t1\t1\t000\n").is_err());
    }
}
