//! Universal statistics from an enumeration of low-complexity objects:
//! indexes, their common prefixes with the object count, the blocks `S_i^l`,
//! and reconstruction of `λ_x` from an enumeration truncated at `x`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::codec::BitString;
use crate::descsys::{DescriptionSystem, FiniteSet};
use crate::error::{Error, Result};
use crate::logbits::LogBits;

/// An enumerated object: a string, or a finite set of equal-length strings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DObject {
    Str(BitString),
    Set(FiniteSet),
}

impl fmt::Display for DObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DObject::Str(s) => f.write_str(&s.to_token()),
            DObject::Set(s) => write!(f, "{{{}}}", s.to_list()),
        }
    }
}

impl Serialize for DObject {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for DObject {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let elems = inner
                .split(',')
                .map(str::parse)
                .collect::<Result<Vec<BitString>>>()?;
            let width = elems[0].len();
            if width == 0 || width > 63 || elems.iter().any(|e| e.len() != width) {
                return Err(Error::invalid("set elements must be non-empty strings of one length"));
            }
            let set = FiniteSet::new(width as u32, elems.iter().map(BitString::to_word))?;
            if set.len() != elems.len() {
                return Err(Error::invalid("set element listed twice"));
            }
            return Ok(DObject::Set(set));
        }
        Ok(DObject::Str(s.parse()?))
    }
}

/// A pair `⟨object, i⟩` meaning "the object has complexity at most `i`".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DPair {
    pub object: DObject,
    pub i: u32,
}

/// A fixed enumeration order over pairs, truncated to levels `i ≤ l`.
///
/// Indexes count distinct objects: the index of `x` is the number of distinct
/// objects whose first pair with `i ≤ l` precedes the first such pair of `x`.
/// For an enumeration with one pair per object this is the pair position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumeratedD {
    l: u32,
    pairs: Vec<DPair>,
    #[serde(skip)]
    index: BTreeMap<DObject, u64>,
    /// Objects in index order.
    #[serde(skip)]
    objects: Vec<DObject>,
}

impl EnumeratedD {
    pub fn new(l: u32, pairs: Vec<DPair>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for p in &pairs {
            if !seen.insert((&p.object, p.i)) {
                return Err(Error::invalid(format!("pair ⟨{}, {}⟩ enumerated twice", p.object, p.i)));
            }
        }
        let mut index = BTreeMap::new();
        let mut objects = Vec::new();
        for p in pairs.iter().filter(|p| p.i <= l) {
            if !index.contains_key(&p.object) {
                index.insert(p.object.clone(), objects.len() as u64);
                objects.push(p.object.clone());
            }
        }
        Ok(EnumeratedD {
            l,
            pairs,
            index,
            objects,
        })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn pairs(&self) -> &[DPair] {
        &self.pairs
    }

    /// `N^l`: distinct objects with a pair at level `≤ l`.
    pub fn count(&self) -> u64 {
        self.objects.len() as u64
    }

    /// `|N^l|`, the length of the binary notation of `N^l`.
    pub fn width(&self) -> u32 {
        64 - self.count().leading_zeros()
    }

    /// The same enumeration truncated at a different level.
    pub fn at_level(&self, l: u32) -> EnumeratedD {
        EnumeratedD::new(l, self.pairs.clone()).expect("pairs already validated")
    }

    /// Objects in index order.
    pub fn objects(&self) -> &[DObject] {
        &self.objects
    }

    pub fn index_of(&self, x: &DObject) -> Option<u64> {
        self.index.get(x).copied()
    }

    /// Text form: an `l` header, then one `object<TAB>i` line per pair.
    pub fn to_fixture(&self) -> String {
        let mut out = format!("l\t{}\n", self.l);
        for p in &self.pairs {
            out.push_str(&format!("{}\t{}\n", p.object, p.i));
        }
        out
    }
}

/// Parses an enumeration fixture. An optional first line `l<TAB>value` sets
/// the level; otherwise it is the largest `i` listed.
pub fn parse_enumeration(text: &str) -> Result<EnumeratedD> {
    let mut l: Option<u32> = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim_end();
        if content.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = content.split('\t').collect();
        if f.len() != 2 {
            return Err(Error::parse(line, "expected two tab-separated fields"));
        }
        if f[1].is_empty() || f[1].len() > 9 || !f[1].bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(line, format!("bad level {:?}", f[1])));
        }
        let v: u32 = f[1].parse().expect("checked digits");
        if f[0] == "l" {
            if l.is_some() || !pairs.is_empty() {
                return Err(Error::parse(line, "the l header must come first, once"));
            }
            l = Some(v);
            continue;
        }
        let object = f[0].parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
        pairs.push(DPair { object, i: v });
    }
    let l = l.unwrap_or_else(|| pairs.iter().map(|p| p.i).max().unwrap_or(0));
    EnumeratedD::new(l, pairs).map_err(|e| Error::parse(0, e.to_string()))
}

/// The strings of a system with their complexities, as pairs `⟨x, K(x)⟩`
/// ordered by shortest program (length, then lexicographic).
pub fn induced_data(sys: &DescriptionSystem, l: u32) -> EnumeratedD {
    let mut xs: Vec<(BitString, u64)> = (0..sys.universe_size())
        .map(|x| (sys.data_witness(x).clone(), x))
        .collect();
    xs.sort();
    let pairs = xs
        .into_iter()
        .map(|(p, x)| DPair {
            object: DObject::Str(sys.string(x)),
            i: p.len() as u32,
        })
        .collect();
    EnumeratedD::new(l, pairs).expect("one pair per string")
}

/// All pairs `⟨y, i⟩` with `K(y) ≤ i ≤ k` over strings and sets, level by
/// level; within a level sets come before strings, each in program order.
pub fn induced_levels(sys: &DescriptionSystem, k: u32) -> EnumeratedD {
    let mut sets: Vec<(BitString, DObject)> = sys
        .sets()
        .iter()
        .map(|e| (e.witness.clone(), DObject::Set(e.set.clone())))
        .collect();
    sets.sort();
    let mut data: Vec<(BitString, DObject)> = (0..sys.universe_size())
        .map(|x| (sys.data_witness(x).clone(), DObject::Str(sys.string(x))))
        .collect();
    data.sort();
    let mut pairs = Vec::new();
    for i in 0..=k {
        for (p, o) in sets.iter().chain(&data) {
            if p.len() as u32 <= i {
                pairs.push(DPair { object: o.clone(), i });
            }
        }
    }
    EnumeratedD::new(k, pairs).expect("one pair per object and level")
}

/// `I_x^l` and the common prefix `m_x^l` of its binary notation with `N^l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexRecord {
    pub x: DObject,
    /// `None` is ∞: no pair of `x` at a level `≤ l`.
    pub index: Option<u64>,
    pub count: u64,
    pub width: u32,
    pub m: Option<BitString>,
}

impl IndexRecord {
    pub fn m_len(&self) -> Option<u32> {
        self.m.as_ref().map(|m| m.len() as u32)
    }
}

pub fn build_index(d: &EnumeratedD, x: &DObject) -> IndexRecord {
    let index = d.index_of(x);
    let width = d.width();
    let m = index.map(|i| {
        let a = BitString::from_word(i, width);
        let b = BitString::from_word(d.count(), width);
        let common = a.bits().iter().zip(b.bits()).take_while(|(p, q)| p == q).count();
        a.prefix(common)
    });
    IndexRecord {
        x: x.clone(),
        index,
        count: d.count(),
        width,
        m,
    }
}

/// The objects whose index is `N_i^l 0 ∗…∗`, with the index range they occupy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub i: u32,
    pub prefix: BitString,
    pub first: u64,
    pub objects: Vec<DObject>,
}

impl Block {
    /// The block as a set, when all objects are strings of length `n`.
    pub fn to_set(&self, n: u32) -> Result<FiniteSet> {
        let words = self
            .objects
            .iter()
            .map(|o| match o {
                DObject::Str(s) if s.len() as u32 == n => Ok(s.to_word()),
                _ => Err(Error::invalid(format!("{o} is not a {n}-bit string"))),
            })
            .collect::<Result<Vec<u64>>>()?;
        FiniteSet::new(n, words)
    }
}

/// `S_i^l`. Refuses when bit `i` (from the most significant, 0-based) of
/// `N^l` is 0, since the block is then not guaranteed full.
pub fn build_sli(d: &EnumeratedD, i: u32) -> Result<Block> {
    let w = d.width();
    if i >= w {
        return Err(Error::invalid(format!("i = {i} must be below |N^l| = {w}")));
    }
    let n = d.count();
    if (n >> (w - 1 - i)) & 1 == 0 {
        return Err(Error::Refused(format!(
            "bit {i} of N^l = {n} is 0, so S_{i}^l is not defined as a full block"
        )));
    }
    let prefix_val = n >> (w - i);
    let first = prefix_val << (w - i);
    let size = 1u64 << (w - i - 1);
    let objects = d.objects[first as usize..(first + size) as usize].to_vec();
    Ok(Block {
        i,
        prefix: BitString::from_word(prefix_val, i),
        first,
        objects,
    })
}

/// Recovers every object with a pair at level `≤ i` from a prefix `m` of the
/// index of the last such object: enumerate until `m 1 0…0` distinct objects
/// (written in `|N^l|` bits) have appeared.
pub fn reconstruct_from_prefix(d: &EnumeratedD, i: u32, m: &BitString) -> Result<Vec<DObject>> {
    let w = d.width();
    if m.len() as u32 >= w {
        return Err(Error::invalid("prefix must be shorter than |N^l|"));
    }
    let mut target = m.to_word();
    target = (target << 1) | 1;
    target <<= w - m.len() as u32 - 1;
    let stop = (target as usize).min(d.objects.len());
    let seen: BTreeSet<&DObject> = d.objects[..stop].iter().collect();
    let mut out = Vec::new();
    let mut emitted = BTreeSet::new();
    for p in d.pairs.iter().filter(|p| p.i <= i) {
        if seen.contains(&p.object) && emitted.insert(&p.object) {
            out.push(p.object.clone());
        }
    }
    Ok(out)
}

/// The prefix a reconstruction of level `i` needs: `m_y^l` for the object `y`
/// of level `≤ i` with the largest index.
pub fn level_prefix(d: &EnumeratedD, i: u32) -> Option<BitString> {
    let last = d
        .pairs
        .iter()
        .filter(|p| p.i <= i)
        .filter_map(|p| d.index_of(&p.object).map(|ix| (ix, &p.object)))
        .max()?;
    build_index(d, last.1).m
}

/// The finite analog of the universal-family theorem for one model `S ∋ x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dominance {
    /// `l = ⌈Λ(S)⌉ + extra`.
    pub l: u32,
    pub extra: i64,
    pub index: Option<u64>,
    pub m_len: Option<u32>,
    pub width: u32,
    /// Size of `S_i^l` with `i = |m_x^l|`, when `x` is indexed.
    pub block_size: Option<u64>,
    pub contains_x: bool,
    /// `⌈log2|S_i^l|⌉ + i − l`.
    pub slack: Option<i64>,
}

/// Checks `x ∈ S_i^l` for `l = ⌈Λ(S)⌉ + extra` and `i = |m_x^l|` over the
/// system's induced string enumeration. Use `extra = c_sub` for the variant
/// that guarantees `K(x) ≤ l`, or 0 for the bare two-part length.
pub fn dominance(sys: &DescriptionSystem, x: &BitString, s: &FiniteSet, extra: i64) -> Result<Dominance> {
    let w = sys.word(x)?;
    if !s.contains(w) {
        return Err(Error::NotMember(x.to_token()));
    }
    let k = sys.k_set(s).ok_or(Error::Unrepresentable)?;
    let lam = s.log_card().add_int(i64::from(k)).ceil().expect("finite");
    let l = u32::try_from((lam + extra).max(0)).map_err(|_| Error::invalid("level out of range"))?;
    let d = induced_data(sys, l);
    let rec = build_index(&d, &DObject::Str(x.clone()));
    let (block_size, contains_x, slack) = match rec.m_len() {
        Some(i) => {
            let b = build_sli(&d, i)?;
            let size = b.objects.len() as u64;
            let inside = b.objects.contains(&DObject::Str(x.clone()));
            let log = i64::from(64 - (size - 1).leading_zeros()) * i64::from(size > 1);
            (Some(size), inside, Some(log + i64::from(i) - i64::from(l)))
        }
        None => (None, false, None),
    };
    Ok(Dominance {
        l,
        extra,
        index: rec.index,
        m_len: rec.m_len(),
        width: rec.width,
        block_size,
        contains_x,
        slack,
    })
}

/// Reconstructs `λ_x` on `[0, k]` from a level enumeration: pairs are read
/// until the first pair carrying the string `x`; for `α ≤ alpha0` the value
/// is the least `i + log2|S|` over listed set pairs `⟨S, i⟩` with `x ∈ S` and
/// `i ≤ α`, and `k` above `alpha0`.
pub fn muchnik_lambda(d: &EnumeratedD, x: &BitString, k: u32, alpha0: u32) -> Result<Vec<LogBits>> {
    if alpha0 > k {
        return Err(Error::invalid("alpha0 must not exceed k"));
    }
    let target = DObject::Str(x.clone());
    let cut = d
        .pairs
        .iter()
        .position(|p| p.object == target && p.i <= k)
        .ok_or_else(|| Error::invalid(format!("{} never appears in the enumeration", x.to_token())))?;
    let mut best_at = vec![LogBits::INFINITY; k as usize + 1];
    for p in &d.pairs[..cut] {
        if let DObject::Set(s) = &p.object {
            if p.i <= k && s.width() as usize == x.len() && s.contains_str(x) {
                let v = s.log_card().add_int(i64::from(p.i));
                let slot = &mut best_at[p.i as usize];
                *slot = (*slot).min(v);
            }
        }
    }
    let mut out = Vec::with_capacity(k as usize + 1);
    let mut run = LogBits::INFINITY;
    for a in 0..=k {
        run = run.min(best_at[a as usize]);
        out.push(if a <= alpha0 { run } else { LogBits::int(i64::from(k)) });
    }
    Ok(out)
}
