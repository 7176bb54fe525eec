//! Constructive arguments as algorithms: shape synthesis against an
//! enumeration of small sets, the covering family, and model improvement.

mod cover;
mod improve;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codec::BitString;
use crate::descsys::{floor_log2, kraft_sum, FiniteSet};
use crate::error::{Error, Result};

pub use cover::{cover_family, cover_records_fixture, parse_cover_records, CoverRecord, CoverRun};
pub use improve::{improve_model, CandidateReport, Improvement};

/// A halting event seen by the synthesis: a program of length `j` printed `set`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SynthEvent {
    pub j: u32,
    pub set: FiniteSet,
}

/// Outcome of the synthesis for one level `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelRun {
    pub i: u32,
    pub target: u32,
    pub replacements: u64,
    /// Replacements after which some element of the replaced contents had
    /// been removed by a `j`-step with `j ≤ i`.
    pub replacements_low: u64,
    /// Replacements whose contents were removed entirely by `j`-steps with `j > i`.
    pub replacements_high: u64,
    /// Events with `j ≤ i`, which bound the low replacements.
    pub low_events: u64,
    pub final_set: FiniteSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SynthesisRun {
    pub n: u32,
    pub target: Vec<u32>,
    pub universe_size: u64,
    pub events: usize,
    /// `Σ 2^{-j}` over the events.
    pub event_kraft: String,
    pub levels: Vec<LevelRun>,
    /// Least universe element no event removed; it lies in every final set.
    pub witness: Option<BitString>,
    /// Least element outside every event set `B` with `j + log2|B| < λ(j)`.
    pub lower_bound_witness: Option<BitString>,
    /// Number of universe elements inside such low sets.
    pub low_covered: u64,
}

impl SynthesisRun {
    /// Bound checks that must hold for every run; empty when all pass.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in &self.levels {
            let cap = 1u64 << (l.i + 1);
            if l.replacements > cap {
                out.push(format!("level {}: {} replacements > 2^{}", l.i, l.replacements, l.i + 1));
            }
            if l.replacements_low > l.low_events {
                out.push(format!(
                    "level {}: {} low replacements > {} low events",
                    l.i, l.replacements_low, l.low_events
                ));
            }
            if l.replacements_high > 1u64 << l.i {
                out.push(format!("level {}: {} high replacements > 2^{}", l.i, l.replacements_high, l.i));
            }
            let size_cap = 1u64 << (l.target - l.i);
            if l.final_set.len() as u64 > size_cap {
                out.push(format!("level {}: final set larger than 2^{}", l.i, l.target - l.i));
            }
            if let Some(w) = &self.witness {
                if !l.final_set.contains_str(w) {
                    out.push(format!("level {}: witness {} not in final set", l.i, w));
                }
            }
        }
        if self.low_covered >= 1u64 << self.n {
            out.push(format!("{} elements covered by low sets, not < 2^{}", self.low_covered, self.n));
        }
        if self.lower_bound_witness.is_none() {
            out.push("no element escapes the low sets".into());
        }
        out
    }
}

/// Checks the target curve: non-increasing on `[0, k]`, `λ(k) = k`, `λ(0) ≤ n`.
pub fn check_target(target: &[u32], n: u32) -> Result<()> {
    let Some(&last) = target.last() else {
        return Err(Error::invalid("target curve is empty"));
    };
    let k = target.len() as u32 - 1;
    if target.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::invalid("target curve must be non-increasing"));
    }
    if last != k {
        return Err(Error::invalid(format!("target must end at λ(k) = k = {k}, found {last}")));
    }
    if target[0] > n {
        return Err(Error::invalid(format!("λ(0) = {} exceeds n = {n}", target[0])));
    }
    Ok(())
}

fn check_events(target: &[u32], universe: &FiniteSet, events: &[SynthEvent]) -> Result<BigRational> {
    let k = target.len() as u32 - 1;
    for (t, ev) in events.iter().enumerate() {
        if ev.j > k {
            return Err(Error::invalid(format!("event {t}: length {} outside [0, {k}]", ev.j)));
        }
        if ev.set.width() != universe.width() {
            return Err(Error::invalid(format!("event {t}: strings of the wrong length")));
        }
        let cap = 1u64 << (target[ev.j as usize] - ev.j);
        if ev.set.len() as u64 > cap {
            return Err(Error::invalid(format!(
                "event {t}: |B| = {} exceeds 2^(λ({}) - {})",
                ev.set.len(),
                ev.j,
                ev.j
            )));
        }
    }
    let sum = kraft_sum(events.iter().map(|e| e.j as usize));
    if sum > BigRational::one() {
        return Err(Error::KraftViolation {
            namespace: "event stream".into(),
            sum: sum.to_string(),
        });
    }
    Ok(sum)
}

/// Per-level simulation state.
struct Level {
    i: u32,
    size: usize,
    /// Indices into the universe.
    s: Vec<usize>,
    /// Whether an element of the current contents was removed by a `j ≤ i` step.
    hit_low: bool,
    replacements: u64,
    low: u64,
    high: u64,
}

impl Level {
    fn refill(&mut self, alive: &[bool]) {
        self.s = alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(u, _)| u)
            .take(self.size)
            .collect();
        self.hit_low = false;
    }
}

/// Incremental form of the synthesis, so an adversary can look at the
/// current sets before choosing its next event.
pub struct Synthesizer {
    n: u32,
    target: Vec<u32>,
    universe: FiniteSet,
    alive: Vec<bool>,
    levels: Vec<Level>,
    events: Vec<SynthEvent>,
    low_hit: Vec<bool>,
    low_events: Vec<u64>,
}

impl Synthesizer {
    pub fn new(target: &[u32], universe: &FiniteSet) -> Result<Self> {
        let n = floor_log2(universe.len() as u64);
        check_target(target, n)?;
        let alive = vec![true; universe.len()];
        let levels = target
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let mut lv = Level {
                    i: i as u32,
                    size: 1usize << (l - i as u32),
                    s: Vec::new(),
                    hit_low: false,
                    replacements: 0,
                    low: 0,
                    high: 0,
                };
                lv.refill(&alive);
                lv
            })
            .collect();
        Ok(Synthesizer {
            n,
            target: target.to_vec(),
            universe: universe.clone(),
            low_hit: vec![false; universe.len()],
            low_events: vec![0; target.len()],
            alive,
            levels,
            events: Vec::new(),
        })
    }

    /// Current contents of the set for level `i`.
    pub fn current(&self, i: usize) -> Vec<u64> {
        self.levels[i]
            .s
            .iter()
            .map(|&u| self.universe.words()[u])
            .collect()
    }

    /// Elements not yet removed.
    pub fn alive(&self) -> Vec<u64> {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(u, _)| self.universe.words()[u])
            .collect()
    }

    pub fn target(&self) -> &[u32] {
        &self.target
    }

    /// Processes one `j`-step. Bounds are validated here for the single event;
    /// the Kraft budget of the whole stream is validated in [`Self::finish`].
    pub fn step(&mut self, ev: SynthEvent) -> Result<()> {
        let k = self.target.len() as u32 - 1;
        if ev.j > k || ev.set.width() != self.universe.width() {
            return Err(Error::invalid("event outside the target's domain or universe"));
        }
        let cap = 1u64 << (self.target[ev.j as usize] - ev.j);
        if ev.set.len() as u64 > cap {
            return Err(Error::invalid(format!("|B| = {} exceeds 2^{}", ev.set.len(), cap.ilog2())));
        }
        for c in self.low_events.iter_mut().skip(ev.j as usize) {
            *c += 1;
        }
        let removed: Vec<usize> = ev
            .set
            .words()
            .iter()
            .filter_map(|&w| self.universe.index_of(w))
            .collect();
        let low_set = (ev.set.len() as u64) < cap;
        for &u in &removed {
            self.alive[u] = false;
            if low_set {
                self.low_hit[u] = true;
            }
        }
        let any_alive = self.alive.iter().any(|&a| a);
        for lv in &mut self.levels {
            if ev.j <= lv.i && lv.s.iter().any(|u| removed.contains(u)) {
                lv.hit_low = true;
            }
            if lv.s.iter().all(|&u| !self.alive[u]) && any_alive {
                lv.replacements += 1;
                if lv.hit_low {
                    lv.low += 1;
                } else {
                    lv.high += 1;
                }
                lv.refill(&self.alive);
            }
        }
        self.events.push(ev);
        Ok(())
    }

    pub fn finish(self) -> Result<SynthesisRun> {
        let kraft = check_events(&self.target, &self.universe, &self.events)?;
        let width = self.universe.width();
        let string = |u: usize| BitString::from_word(self.universe.words()[u], width);
        let witness = self.alive.iter().position(|&a| a).map(string);
        let lower_bound_witness = self.low_hit.iter().position(|&h| !h).map(string);
        let low_covered = self.low_hit.iter().filter(|&&h| h).count() as u64;
        let levels = self
            .levels
            .iter()
            .map(|lv| LevelRun {
                i: lv.i,
                target: self.target[lv.i as usize],
                replacements: lv.replacements,
                replacements_low: lv.low,
                replacements_high: lv.high,
                low_events: self.low_events[lv.i as usize],
                final_set: FiniteSet::new(width, lv.s.iter().map(|&u| self.universe.words()[u]))
                    .expect("level sets are never empty"),
            })
            .collect();
        Ok(SynthesisRun {
            n: self.n,
            target: self.target,
            universe_size: self.universe.len() as u64,
            events: self.events.len(),
            event_kraft: kraft.to_string(),
            levels,
            witness,
            lower_bound_witness,
            low_covered,
        })
    }
}

/// Runs the synthesis for every level `i ∈ [0, k]` over a fixed event list.
///
/// The universe may be any set with at least `2^n` elements, where `n` is
/// `⌊log2|universe|⌋`.
pub fn synthesize(target: &[u32], universe: &FiniteSet, events: &[SynthEvent]) -> Result<SynthesisRun> {
    check_events(target, universe, events)?;
    let mut s = Synthesizer::new(target, universe)?;
    for ev in events {
        s.step(ev.clone())?;
    }
    s.finish()
}

/// Plays an adversary that aims its events at the current contents of
/// randomly chosen levels, within the Kraft budget `Σ 2^{-j} ≤ 1`.
pub fn adversarial_run(target: &[u32], universe: &FiniteSet, seed: u64) -> Result<SynthesisRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Synthesizer::new(target, universe)?;
    let k = target.len() as u32 - 1;
    // remaining budget in units of 2^{-k}
    let mut budget: u64 = 1 << k;
    let width = universe.width();
    while budget > 0 {
        let affordable: Vec<u32> = (0..=k).filter(|&j| 1u64 << (k - j) <= budget).collect();
        let j = if rng.gen_bool(0.7) {
            *affordable.last().expect("j = k is always affordable")
        } else {
            affordable[rng.gen_range(0..affordable.len())]
        };
        budget -= 1 << (k - j);
        let cap = 1usize << (target[j as usize] - j);
        let i = rng.gen_range(0..=k as usize);
        let alive: std::collections::HashSet<u64> = s.alive().into_iter().collect();
        let mut pick: Vec<u64> = s.current(i).into_iter().filter(|w| alive.contains(w)).collect();
        if rng.gen_bool(0.3) {
            // also sweep the front of what is left, to force refills to move on
            pick.extend(s.alive().into_iter().take(cap));
        }
        pick.sort_unstable();
        pick.dedup();
        pick.truncate(cap);
        if pick.is_empty() {
            pick.push(universe.words()[rng.gen_range(0..universe.len())]);
        }
        let set = FiniteSet::new(width, pick)?;
        s.step(SynthEvent { j, set })?;
    }
    s.finish()
}

/// Parses a synthesis stream fixture:
///
/// ```text
/// universe<TAB>n
/// target<TAB>λ(0),λ(1),…,λ(k)
/// event<TAB>step<TAB>j<TAB>e1,e2,…
/// ```
///
/// `step` is the event time and must strictly increase. `#` starts a comment.
pub fn parse_stream(text: &str) -> Result<(FiniteSet, Vec<u32>, Vec<SynthEvent>)> {
    let mut n: Option<u32> = None;
    let mut target: Option<Vec<u32>> = None;
    let mut events = Vec::new();
    let mut last_step: Option<u64> = None;
    let num = |line: usize, s: &str| -> Result<u64> {
        if s.is_empty() || s.len() > 18 || !s.bytes().all(|b| b.is_ascii_digit()) {
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
                n = Some(v as u32);
            }
            ("target", 2) => {
                if target.is_some() {
                    return Err(Error::parse(line, "target declared twice"));
                }
                let curve = f[1]
                    .split(',')
                    .map(|s| num(line, s).and_then(|v| u32::try_from(v).map_err(|_| Error::parse(line, "value too large"))))
                    .collect::<Result<Vec<u32>>>()?;
                if curve.len() > 63 {
                    return Err(Error::parse(line, "target longer than 63 levels"));
                }
                target = Some(curve);
            }
            ("event", 4) => {
                let width = n.ok_or_else(|| Error::parse(line, "event before universe"))?;
                let step = num(line, f[1])?;
                if last_step.is_some_and(|s| step <= s) {
                    return Err(Error::parse(line, "steps must strictly increase"));
                }
                last_step = Some(step);
                let j = u32::try_from(num(line, f[2])?).map_err(|_| Error::parse(line, "j too large"))?;
                let mut words = Vec::new();
                for item in f[3].split(',') {
                    let s: BitString = item
                        .parse()
                        .map_err(|e: Error| Error::parse(line, e.to_string()))?;
                    if s.len() as u32 != width || item == "-" {
                        return Err(Error::parse(line, format!("{item:?} is not a {width}-bit string")));
                    }
                    words.push(s.to_word());
                }
                let count = words.len();
                let set = FiniteSet::new(width, words).map_err(|e| Error::parse(line, e.to_string()))?;
                if set.len() != count {
                    return Err(Error::parse(line, "element listed twice"));
                }
                events.push(SynthEvent { j, set });
            }
            (kind, _) => {
                return Err(Error::parse(line, format!("malformed {kind:?} record")));
            }
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing universe record"))?;
    let target = target.ok_or_else(|| Error::parse(0, "missing target record"))?;
    Ok((FiniteSet::cube(n), target, events))
}
