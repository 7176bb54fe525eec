//! Finite description systems: prefix-free program→object maps that stand in
//! for the universal prefix machine and make every complexity exact.

mod descriptor;
mod family;
mod random;
mod set;
mod stream;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::codec::{find_prefix_violation, BitString};
use crate::error::{Error, Result};
use crate::structfn::ModelRecord;

pub use descriptor::{parse_descriptor, Descriptor, Record};
pub use family::Family;
pub use random::{random_system, RandomSystemParams};
pub use set::{ceil_log2, floor_log2, FiniteSet};
pub use stream::{EnumerationEvent, EventKind};

/// Largest universe length a system may declare.
pub const MAX_UNIVERSE: u32 = 20;

/// A representable set together with its complexity and programs.
#[derive(Clone, Debug)]
pub struct SetEntry {
    pub set: FiniteSet,
    /// `K(S)`, the length of the shortest program printing exactly this set.
    pub k: u32,
    /// Lexicographically least program among the shortest.
    pub witness: BitString,
    /// Every program printing this set, shortlex ascending.
    pub programs: Vec<BitString>,
    /// Conditional shortcuts `(x, |q|)`, minimal length per `x`, sorted by `x`.
    shortcuts: Vec<(u64, u32)>,
}

impl SetEntry {
    pub fn shortcut(&self, x: u64) -> Option<u32> {
        self.shortcuts
            .binary_search_by_key(&x, |&(y, _)| y)
            .ok()
            .map(|i| self.shortcuts[i].1)
    }
}

/// A conditional program `q` printing `output` when given `set`.
#[derive(Clone, Debug)]
pub struct CondEntry {
    pub program: BitString,
    pub set: FiniteSet,
    pub output: u64,
}

/// Exact Kraft sums of the namespaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KraftReport {
    pub data: BigRational,
    pub set: BigRational,
    /// Largest sum over the per-set conditional namespaces, if any exist.
    pub cond_max: Option<BigRational>,
}

impl Serialize for KraftReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("KraftReport", 3)?;
        st.serialize_field("data", &self.data.to_string())?;
        st.serialize_field("set", &self.set.to_string())?;
        st.serialize_field("cond_max", &self.cond_max.as_ref().map(|r| r.to_string()))?;
        st.end()
    }
}

/// Query accepted by [`DescriptionSystem::complexity`].
#[derive(Clone, Copy, Debug)]
pub enum Query<'a> {
    Data(&'a BitString),
    Set(&'a FiniteSet),
    Conditional(&'a BitString, &'a FiniteSet),
}

/// An immutable, validated description system over `{0,1}^n`.
#[derive(Clone, Debug)]
pub struct DescriptionSystem {
    n: u32,
    /// `(program, output)`, shortlex by program.
    data: Vec<(BitString, u64)>,
    /// `(program, set id)`, shortlex by program.
    set_programs: Vec<(BitString, usize)>,
    /// Distinct representable sets ordered by `(K(S), |S|, witness)`.
    sets: Vec<SetEntry>,
    set_ids: HashMap<FiniteSet, usize>,
    cond: Vec<CondEntry>,
    /// Shortcuts for sets no set program prints.
    loose_shortcuts: HashMap<FiniteSet, Vec<(u64, u32)>>,
    data_k: Vec<u32>,
    data_witness: Vec<usize>,
    containing: Vec<Vec<usize>>,
    c_sub: i64,
    kraft: KraftReport,
}

/// Accumulates entries and validates them into a [`DescriptionSystem`].
#[derive(Clone, Debug)]
pub struct SystemBuilder {
    n: u32,
    data: Vec<(BitString, u64)>,
    sets: Vec<(BitString, FiniteSet)>,
    cond: Vec<CondEntry>,
}

impl SystemBuilder {
    pub fn new(n: u32) -> Self {
        SystemBuilder {
            n,
            data: Vec::new(),
            sets: Vec::new(),
            cond: Vec::new(),
        }
    }

    pub fn universe(&self) -> u32 {
        self.n
    }

    pub fn data(&mut self, program: BitString, output: &BitString) -> Result<&mut Self> {
        let x = self.word(output)?;
        self.data.push((program, x));
        Ok(self)
    }

    pub fn data_word(&mut self, program: BitString, x: u64) -> &mut Self {
        self.data.push((program, x));
        self
    }

    pub fn set(&mut self, program: BitString, set: FiniteSet) -> &mut Self {
        self.sets.push((program, set));
        self
    }

    pub fn cond(&mut self, program: BitString, set: FiniteSet, output: &BitString) -> Result<&mut Self> {
        let x = self.word(output)?;
        self.cond.push(CondEntry {
            program,
            set,
            output: x,
        });
        Ok(self)
    }

    pub fn cond_word(&mut self, program: BitString, set: FiniteSet, x: u64) -> &mut Self {
        self.cond.push(CondEntry {
            program,
            set,
            output: x,
        });
        self
    }

    pub fn set_family(&mut self, tag: &BitString, family: Family) -> Result<&mut Self> {
        let expanded = family.expand_sets(tag, self.n)?;
        self.sets.extend(expanded);
        Ok(self)
    }

    pub fn data_family(&mut self, tag: &BitString, family: Family) -> Result<&mut Self> {
        let expanded = family.expand_data(tag, self.n)?;
        self.data.extend(expanded);
        Ok(self)
    }

    fn word(&self, x: &BitString) -> Result<u64> {
        if x.len() as u32 != self.n {
            return Err(Error::OutsideUniverse {
                element: x.to_token(),
                n: self.n,
            });
        }
        Ok(x.to_word())
    }

    pub fn build(self) -> Result<DescriptionSystem> {
        DescriptionSystem::from_parts(self.n, self.data, self.sets, self.cond)
    }
}

fn check_namespace<'a>(
    namespace: &str,
    programs: impl IntoIterator<Item = &'a BitString>,
) -> Result<BigRational> {
    let programs: Vec<&BitString> = programs.into_iter().collect();
    if let Some((a, b)) = find_prefix_violation(programs.iter().copied()) {
        return Err(if a == b {
            Error::DuplicateProgram {
                namespace: namespace.to_string(),
                program: a.to_token(),
            }
        } else {
            Error::NotPrefixFree {
                namespace: namespace.to_string(),
                shorter: a.to_token(),
                longer: b.to_token(),
            }
        });
    }
    let sum = kraft_sum(programs.iter().map(|p| p.len()));
    if sum > BigRational::one() {
        return Err(Error::KraftViolation {
            namespace: namespace.to_string(),
            sum: sum.to_string(),
        });
    }
    Ok(sum)
}

/// `Σ 2^{-len}` over the given lengths, exactly.
pub fn kraft_sum(lengths: impl IntoIterator<Item = usize>) -> BigRational {
    let mut counts: Vec<u64> = Vec::new();
    for len in lengths {
        if counts.len() <= len {
            counts.resize(len + 1, 0);
        }
        counts[len] += 1;
    }
    let Some(max) = counts.len().checked_sub(1) else {
        return BigRational::zero();
    };
    // Σ c_l 2^{max-l} / 2^max
    let mut numer = BigInt::zero();
    for (len, &c) in counts.iter().enumerate() {
        numer += BigInt::from(c) << (max - len);
    }
    BigRational::new(numer, BigInt::one() << max)
}

impl DescriptionSystem {
    pub fn builder(n: u32) -> SystemBuilder {
        SystemBuilder::new(n)
    }

    fn from_parts(
        n: u32,
        mut data: Vec<(BitString, u64)>,
        set_list: Vec<(BitString, FiniteSet)>,
        mut cond: Vec<CondEntry>,
    ) -> Result<Self> {
        if n > MAX_UNIVERSE {
            return Err(Error::invalid(format!(
                "universe length {n} exceeds the supported maximum {MAX_UNIVERSE}"
            )));
        }
        let size = 1u64 << n;
        let outside = |x: u64| Error::OutsideUniverse {
            element: format!("{x:#x}"),
            n,
        };

        if let Some(&(_, x)) = data.iter().find(|(_, x)| *x >= size) {
            return Err(outside(x));
        }
        for (_, s) in &set_list {
            if s.width() != n {
                return Err(Error::OutsideUniverse {
                    element: format!("set of {}-bit strings", s.width()),
                    n,
                });
            }
        }
        for c in &cond {
            if c.set.width() != n || c.output >= size {
                return Err(outside(c.output));
            }
        }

        let data_kraft = check_namespace("data", data.iter().map(|(p, _)| p))?;
        let set_kraft = check_namespace("set", set_list.iter().map(|(p, _)| p))?;

        // cond namespaces are per set
        cond.sort_by(|a, b| {
            a.set
                .words()
                .cmp(b.set.words())
                .then_with(|| a.program.cmp(&b.program))
        });
        let mut cond_max: Option<BigRational> = None;
        for group in cond.chunk_by(|a, b| a.set == b.set) {
            let name = format!("cond[{}]", group[0].set);
            let sum = check_namespace(&name, group.iter().map(|c| &c.program))?;
            if cond_max.as_ref().is_none_or(|m| sum > *m) {
                cond_max = Some(sum);
            }
        }

        // data complexities
        data.sort_by(|a, b| a.0.cmp(&b.0));
        let mut data_k = vec![u32::MAX; size as usize];
        let mut data_witness = vec![usize::MAX; size as usize];
        for (i, (p, x)) in data.iter().enumerate() {
            let slot = *x as usize;
            if data_witness[slot] == usize::MAX {
                data_k[slot] = p.len() as u32;
                data_witness[slot] = i;
            }
        }
        if let Some(x) = data_witness.iter().position(|&w| w == usize::MAX) {
            return Err(Error::Uncovered(BitString::from_word(x as u64, n).to_token()));
        }

        // distinct sets; shortlex program order makes the first program the witness
        let mut set_list = set_list;
        set_list.sort_by(|a, b| a.0.cmp(&b.0));
        let mut first_seen: HashMap<FiniteSet, usize> = HashMap::new();
        let mut raw: Vec<SetEntry> = Vec::new();
        let mut program_to_raw = Vec::with_capacity(set_list.len());
        for (p, s) in &set_list {
            let id = *first_seen.entry(s.clone()).or_insert_with(|| {
                raw.push(SetEntry {
                    set: s.clone(),
                    k: p.len() as u32,
                    witness: p.clone(),
                    programs: Vec::new(),
                    shortcuts: Vec::new(),
                });
                raw.len() - 1
            });
            raw[id].programs.push(p.clone());
            program_to_raw.push(id);
        }
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| {
            let (ea, eb) = (&raw[a], &raw[b]);
            ea.k.cmp(&eb.k)
                .then(ea.set.len().cmp(&eb.set.len()))
                .then_with(|| ea.witness.cmp(&eb.witness))
        });
        let mut remap = vec![0usize; raw.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut slots: Vec<Option<SetEntry>> = raw.into_iter().map(Some).collect();
        let mut sets: Vec<SetEntry> = order
            .iter()
            .map(|&old| slots[old].take().expect("each set moved once"))
            .collect();
        let set_programs: Vec<(BitString, usize)> = set_list
            .into_iter()
            .zip(program_to_raw)
            .map(|((p, _), id)| (p, remap[id]))
            .collect();
        let set_ids: HashMap<FiniteSet, usize> = sets
            .iter()
            .enumerate()
            .map(|(i, e)| (e.set.clone(), i))
            .collect();

        // shortcuts: minimal length per (set, x)
        let mut loose: HashMap<FiniteSet, Vec<(u64, u32)>> = HashMap::new();
        for c in &cond {
            let len = c.program.len() as u32;
            let list = match set_ids.get(&c.set) {
                Some(&id) => &mut sets[id].shortcuts,
                None => loose.entry(c.set.clone()).or_default(),
            };
            list.push((c.output, len));
        }
        let normalize = |list: &mut Vec<(u64, u32)>| {
            list.sort_unstable();
            list.dedup_by_key(|e| e.0);
        };
        for e in &mut sets {
            normalize(&mut e.shortcuts);
        }
        for list in loose.values_mut() {
            normalize(list);
        }

        let mut containing: Vec<Vec<usize>> = vec![Vec::new(); size as usize];
        for (id, e) in sets.iter().enumerate() {
            for &x in e.set.words() {
                containing[x as usize].push(id);
            }
        }

        let mut sys = DescriptionSystem {
            n,
            data,
            set_programs,
            sets,
            set_ids,
            cond,
            loose_shortcuts: loose,
            data_k,
            data_witness,
            containing,
            c_sub: 0,
            kraft: KraftReport {
                data: data_kraft,
                set: set_kraft,
                cond_max,
            },
        };
        sys.c_sub = sys.measure_c_sub();
        Ok(sys)
    }

    /// `max K(x) − K(S) − min(K(x|S), ⌊log2|S|⌋)` over representable `S ∋ x`;
    /// 0 when no set is representable.
    fn measure_c_sub(&self) -> i64 {
        let mut best: Option<i64> = None;
        for e in &self.sets {
            let floor = i64::from(floor_log2(e.set.len() as u64));
            for &x in e.set.words() {
                let kc = i64::from(self.k_cond_in(e, x).expect("members have index codes"));
                let v = i64::from(self.data_k[x as usize]) - i64::from(e.k) - kc.min(floor);
                best = Some(best.map_or(v, |b| b.max(v)));
            }
        }
        best.unwrap_or(0)
    }

    pub fn universe(&self) -> u32 {
        self.n
    }

    pub fn universe_size(&self) -> u64 {
        1u64 << self.n
    }

    pub fn data_programs(&self) -> &[(BitString, u64)] {
        &self.data
    }

    pub fn set_programs(&self) -> &[(BitString, usize)] {
        &self.set_programs
    }

    pub fn cond_programs(&self) -> &[CondEntry] {
        &self.cond
    }

    pub fn program_count(&self) -> usize {
        self.data.len() + self.set_programs.len() + self.cond.len()
    }

    /// Distinct representable sets, ordered by `(K(S), |S|, witness)`.
    pub fn sets(&self) -> &[SetEntry] {
        &self.sets
    }

    pub fn set_entry(&self, id: usize) -> &SetEntry {
        &self.sets[id]
    }

    pub fn set_id(&self, s: &FiniteSet) -> Option<usize> {
        self.set_ids.get(s).copied()
    }

    /// Ids of representable sets containing `x`, in set order.
    pub fn containing(&self, x: u64) -> &[usize] {
        &self.containing[x as usize]
    }

    pub fn c_sub(&self) -> i64 {
        self.c_sub
    }

    pub fn kraft(&self) -> &KraftReport {
        &self.kraft
    }

    /// Longest set program, the α at which every profile saturates.
    pub fn max_set_program_len(&self) -> u32 {
        self.set_programs
            .iter()
            .map(|(p, _)| p.len() as u32)
            .max()
            .unwrap_or(0)
    }

    /// Universe word of `x`, rejecting strings of the wrong length.
    pub fn word(&self, x: &BitString) -> Result<u64> {
        if x.len() as u32 != self.n {
            return Err(Error::OutsideUniverse {
                element: x.to_token(),
                n: self.n,
            });
        }
        Ok(x.to_word())
    }

    pub fn string(&self, x: u64) -> BitString {
        BitString::from_word(x, self.n)
    }

    /// `K(x)` for a universe word. Always finite.
    pub fn k_data(&self, x: u64) -> u32 {
        self.data_k[x as usize]
    }

    /// Shortest (then least) data program printing `x`.
    pub fn data_witness(&self, x: u64) -> &BitString {
        &self.data[self.data_witness[x as usize]].0
    }

    /// `K(S)`, `None` when no program prints exactly `S`.
    pub fn k_set(&self, s: &FiniteSet) -> Option<u32> {
        self.set_id(s).map(|id| self.sets[id].k)
    }

    fn k_cond_in(&self, e: &SetEntry, x: u64) -> Option<u32> {
        let index = e.set.contains(x).then(|| e.set.index_code_len());
        match (index, e.shortcut(x)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// `K(x|S)` for a representable set id.
    pub fn k_cond_id(&self, x: u64, id: usize) -> Option<u32> {
        self.k_cond_in(&self.sets[id], x)
    }

    /// `K(x|S)`: the index code if `x ∈ S`, or a shorter shortcut; `None` for ∞.
    pub fn k_cond(&self, x: u64, s: &FiniteSet) -> Option<u32> {
        if let Some(id) = self.set_id(s) {
            return self.k_cond_id(x, id);
        }
        let index = s.contains(x).then(|| s.index_code_len());
        let shortcut = self.loose_shortcuts.get(s).and_then(|list| {
            list.binary_search_by_key(&x, |&(y, _)| y)
                .ok()
                .map(|i| list[i].1)
        });
        match (index, shortcut) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Exact complexity of a query; `None` is ∞.
    pub fn complexity(&self, query: Query<'_>) -> Result<Option<u32>> {
        match query {
            Query::Data(x) => Ok(Some(self.k_data(self.word(x)?))),
            Query::Set(s) => {
                self.check_set(s)?;
                Ok(self.k_set(s))
            }
            Query::Conditional(x, s) => {
                let w = self.word(x)?;
                self.check_set(s)?;
                Ok(self.k_cond(w, s))
            }
        }
    }

    fn check_set(&self, s: &FiniteSet) -> Result<()> {
        if s.width() != self.n {
            return Err(Error::OutsideUniverse {
                element: format!("set of {}-bit strings", s.width()),
                n: self.n,
            });
        }
        Ok(())
    }

    /// Representable sets with `K(S) ≤ alpha`, optionally only those containing
    /// `x`, ordered by `(K(S), |S|, witness program)`.
    pub fn enumerate_models(&self, alpha: i64, x: Option<&BitString>) -> Result<Vec<ModelRecord>> {
        let xw = x.map(|x| self.word(x)).transpose()?;
        let ids: Box<dyn Iterator<Item = usize>> = match xw {
            Some(w) => Box::new(self.containing(w).iter().copied()),
            None => Box::new(0..self.sets.len()),
        };
        Ok(ids
            .filter(|&id| i64::from(self.sets[id].k) <= alpha)
            .map(|id| ModelRecord::from_system(self, id, xw))
            .collect())
    }

    /// `m(x)`: the least `K(y)` over universe strings `y ≥ x`.
    pub fn m_of_x(&self, x: &BitString) -> Result<u32> {
        let w = self.word(x)?;
        Ok(self.data_k[w as usize..]
            .iter()
            .copied()
            .min()
            .expect("x is in the universe"))
    }

    /// The curve `m(x)` over the whole universe, computed as a suffix minimum.
    pub fn m_curve(&self) -> Vec<u32> {
        let mut out = self.data_k.clone();
        for i in (0..out.len().saturating_sub(1)).rev() {
            out[i] = out[i].min(out[i + 1]);
        }
        out
    }

    /// The same system with every output transported by the permutation `pi`
    /// of universe words.
    pub fn permuted(&self, pi: impl Fn(u64) -> u64) -> Result<DescriptionSystem> {
        let mut b = SystemBuilder::new(self.n);
        for (p, x) in &self.data {
            b.data_word(p.clone(), pi(*x));
        }
        for (p, id) in &self.set_programs {
            b.set(p.clone(), self.sets[*id].set.map(&pi));
        }
        for c in &self.cond {
            b.cond_word(c.program.clone(), c.set.map(&pi), pi(c.output));
        }
        let out = b.build()?;
        if out.sets.len() != self.sets.len() {
            return Err(Error::invalid("map is not a permutation of the universe"));
        }
        Ok(out)
    }

    /// Explicit codebook entries, one record per program.
    pub fn to_descriptor(&self) -> Descriptor {
        let mut records = Vec::with_capacity(self.program_count());
        for (p, x) in &self.data {
            records.push(Record::Data {
                program: p.clone(),
                output: self.string(*x),
            });
        }
        for (p, id) in &self.set_programs {
            records.push(Record::Set {
                program: p.clone(),
                elements: self.sets[*id].set.strings().collect(),
            });
        }
        for c in &self.cond {
            records.push(Record::Cond {
                program: c.program.clone(),
                output: self.string(c.output),
                elements: c.set.strings().collect(),
            });
        }
        Descriptor {
            universe: self.n,
            records,
        }
    }

    /// The fixture used throughout the documentation and tests.
    pub fn fixture_a() -> DescriptionSystem {
        parse_descriptor(FIXTURE_A)
            .and_then(|d| d.build())
            .expect("fixture is valid")
    }
}

/// Descriptor text of the two-bit reference fixture.
pub const FIXTURE_A: &str = "\
# two-bit reference system
universe\t2
set\t0\t00,01,10,11
set\t10\t00,01
set\t110\t00
data\t0\t00
data\t10\t01
data\t110\t10
data\t111\t11
";

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn set(n: u32, items: &[&str]) -> FiniteSet {
        let strs: Vec<BitString> = items.iter().map(|s| bs(s)).collect();
        FiniteSet::from_strings(n, strs.iter()).unwrap()
    }

    #[test]
    fn fixture_complexities() {
        let sys = DescriptionSystem::fixture_a();
        let k: Vec<u32> = (0..4).map(|x| sys.k_data(x)).collect();
        assert_eq!(k, vec![1, 2, 3, 3]);
        assert_eq!(
            sys.complexity(Query::Data(&bs("00"))).unwrap(),
            Some(1)
        );
        let b = set(2, &["00", "01"]);
        assert_eq!(
            sys.complexity(Query::Conditional(&bs("00"), &b)).unwrap(),
            Some(1)
        );
        let unrep = set(2, &["01", "10"]);
        assert_eq!(sys.complexity(Query::Set(&unrep)).unwrap(), None);
        assert_eq!(sys.k_cond(3, &b), None);
        assert!(sys.complexity(Query::Data(&bs("000"))).is_err());
    }

    #[test]
    fn fixture_audit() {
        let sys = DescriptionSystem::fixture_a();
        let k = sys.kraft();
        assert_eq!(k.set, BigRational::new(7.into(), 8.into()));
        assert_eq!(k.data, BigRational::one());
        assert_eq!(k.cond_max, None);
        // K(x) − K(S) − min(K(x|S), ⌊log|S|⌋) peaks at 0, e.g. x=10, S=A: 3−1−2
        assert_eq!(sys.c_sub(), 0);
    }

    #[test]
    fn fixture_models() {
        let sys = DescriptionSystem::fixture_a();
        let at = |alpha| -> Vec<String> {
            sys.enumerate_models(alpha, Some(&bs("00")))
                .unwrap()
                .iter()
                .map(|r| r.set.to_list())
                .collect()
        };
        assert_eq!(at(1), vec!["00,01,10,11"]);
        assert_eq!(at(3), vec!["00,01,10,11", "00,01", "00"]);
        assert!(at(-1).is_empty());
    }

    #[test]
    fn m_of_x_is_suffix_minimum() {
        let sys = DescriptionSystem::fixture_a();
        assert_eq!(sys.m_of_x(&bs("00")).unwrap(), 1);
        assert_eq!(sys.m_of_x(&bs("11")).unwrap(), 3);
        assert_eq!(sys.m_curve(), vec![1, 2, 3, 3]);
    }

    #[test]
    fn rejects_prefix_violations_and_gaps() {
        let mut b = DescriptionSystem::builder(1);
        b.data(bs("0"), &bs("0")).unwrap();
        b.data(bs("01"), &bs("1")).unwrap();
        assert!(matches!(
            b.build(),
            Err(Error::NotPrefixFree { .. })
        ));

        let mut b = DescriptionSystem::builder(1);
        b.data(bs("0"), &bs("0")).unwrap();
        assert_eq!(b.build().unwrap_err(), Error::Uncovered("1".into()));

        let mut b = DescriptionSystem::builder(1);
        b.data(bs("0"), &bs("0")).unwrap();
        b.data(bs("0"), &bs("1")).unwrap();
        assert!(matches!(
            b.build(),
            Err(Error::DuplicateProgram { .. })
        ));
    }

    #[test]
    fn duplicate_set_programs_share_one_entry() {
        let mut b = DescriptionSystem::builder(1);
        b.data(bs("0"), &bs("0")).unwrap();
        b.data(bs("1"), &bs("1")).unwrap();
        b.set(bs("11"), FiniteSet::cube(1));
        b.set(bs("10"), FiniteSet::cube(1));
        b.set(bs("0"), FiniteSet::singleton(1, 0));
        let sys = b.build().unwrap();
        assert_eq!(sys.sets().len(), 2);
        let cube = &sys.sets()[sys.set_id(&FiniteSet::cube(1)).unwrap()];
        assert_eq!(cube.k, 2);
        assert_eq!(cube.witness, bs("10"));
        assert_eq!(cube.programs, vec![bs("10"), bs("11")]);
    }

    #[test]
    fn shortcuts_lower_conditional_complexity() {
        let mut b = DescriptionSystem::builder(2);
        b.data_family(&BitString::new(), Family::Literal).unwrap();
        b.set(bs("0"), FiniteSet::cube(2));
        b.cond(bs("0"), FiniteSet::cube(2), &bs("11")).unwrap();
        b.cond(bs("10"), FiniteSet::singleton(2, 0), &bs("01")).unwrap();
        let sys = b.build().unwrap();
        assert_eq!(sys.k_cond(3, &FiniteSet::cube(2)), Some(1));
        assert_eq!(sys.k_cond(2, &FiniteSet::cube(2)), Some(2));
        // shortcut for a set outside the system, printing a non-member
        assert_eq!(sys.k_cond(1, &FiniteSet::singleton(2, 0)), Some(2));
        assert_eq!(sys.kraft().cond_max, Some(BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn permutation_preserves_complexities() {
        let sys = DescriptionSystem::fixture_a();
        let moved = sys.permuted(|x| x ^ 0b11).unwrap();
        for x in 0..4 {
            assert_eq!(moved.k_data(x ^ 3), sys.k_data(x));
        }
        assert!(sys.permuted(|_| 0).is_err());
    }
}
