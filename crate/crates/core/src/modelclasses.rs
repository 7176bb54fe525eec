//! Conversions between finite-set models, finitely supported rational
//! probability mass functions and total functions, with exact bounds.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codec::BitString;
use crate::descsys::{DescriptionSystem, FiniteSet};
use crate::error::{Error, Result};
use crate::predict::parse_ratio;

/// A probability mass function on `n`-bit strings with finite support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbModel {
    n: u32,
    pmf: BTreeMap<BitString, BigRational>,
}

impl ProbModel {
    /// Zero entries are dropped; the rest must lie in `(0, 1]` and sum to 1.
    pub fn new(n: u32, pmf: BTreeMap<BitString, BigRational>) -> Result<Self> {
        if n > 63 {
            return Err(Error::invalid("string length exceeds 63"));
        }
        let mut total = BigRational::zero();
        let mut kept = BTreeMap::new();
        for (x, p) in pmf {
            if x.len() as u32 != n {
                return Err(Error::OutsideUniverse { element: x.to_token(), n });
            }
            if p.is_negative() || p > BigRational::one() {
                return Err(Error::invalid(format!("P({}) outside [0, 1]", x.to_token())));
            }
            if !p.is_zero() {
                total += &p;
                kept.insert(x, p);
            }
        }
        if total != BigRational::one() {
            return Err(Error::invalid(format!("probabilities sum to {total}, not 1")));
        }
        Ok(ProbModel { n, pmf: kept })
    }

    pub fn width(&self) -> u32 {
        self.n
    }

    pub fn support(&self) -> impl Iterator<Item = (&BitString, &BigRational)> {
        self.pmf.iter()
    }

    pub fn prob(&self, x: &BitString) -> BigRational {
        self.pmf.get(x).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn to_fixture(&self) -> String {
        self.pmf
            .iter()
            .map(|(x, p)| format!("{}\t{}/{}\n", x.to_token(), p.numer(), p.denom()))
            .collect()
    }
}

/// A function from every argument of the declared lengths to `n`-bit strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalFnModel {
    /// Argument lengths on which the function is defined.
    lengths: BTreeSet<u32>,
    table: BTreeMap<BitString, BitString>,
}

impl TotalFnModel {
    /// The table must list every argument of each length it mentions, and all
    /// values must share one length.
    pub fn new(table: BTreeMap<BitString, BitString>) -> Result<Self> {
        let lengths: BTreeSet<u32> = table.keys().map(|d| d.len() as u32).collect();
        if lengths.is_empty() {
            return Err(Error::invalid("function table is empty"));
        }
        for &l in &lengths {
            if l > 20 {
                return Err(Error::invalid("argument length exceeds 20"));
            }
            let count = table.keys().filter(|d| d.len() as u32 == l).count() as u64;
            if count != 1u64 << l {
                return Err(Error::invalid(format!("function is not total on arguments of length {l}")));
            }
        }
        let mut widths = table.values().map(BitString::len);
        let w = widths.next().expect("nonempty");
        if widths.any(|v| v != w) {
            return Err(Error::invalid("function values differ in length"));
        }
        Ok(TotalFnModel { lengths, table })
    }

    pub fn lengths(&self) -> &BTreeSet<u32> {
        &self.lengths
    }

    pub fn apply(&self, d: &BitString) -> Option<&BitString> {
        self.table.get(d)
    }

    /// `min{|d| : p(d) = x}`.
    pub fn arg_len(&self, x: &BitString) -> Option<u32> {
        self.table
            .iter()
            .filter(|(_, v)| *v == x)
            .map(|(d, _)| d.len() as u32)
            .min()
    }

    pub fn to_fixture(&self) -> String {
        self.table
            .iter()
            .map(|(d, v)| format!("{}\t{}\n", d.to_token(), v.to_token()))
            .collect()
    }
}

/// The uniform mass function on `S`.
pub fn set_to_pmf(s: &FiniteSet) -> ProbModel {
    let p = BigRational::new(BigInt::one(), BigInt::from(s.len()));
    ProbModel {
        n: s.width(),
        pmf: s.strings().map(|x| (x, p.clone())).collect(),
    }
}

/// `p(d) = S[int(d) mod |S|]` on arguments of length `⌈log2|S|⌉`, where
/// `int(d)` is the binary value of `d` and `S` is in sorted order.
pub fn set_to_fn(s: &FiniteSet) -> TotalFnModel {
    let l = s.index_code_len();
    let table = (0..1u64 << l)
        .map(|d| {
            let v = s.words()[(d % s.len() as u64) as usize];
            (BitString::from_word(d, l), BitString::from_word(v, s.width()))
        })
        .collect();
    TotalFnModel::new(table).expect("total by construction")
}

/// A set recovered from a mass function, with the quantities that certify it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PmfRestriction {
    pub set: FiniteSet,
    /// `m = ⌊−log2 P(x)⌋`.
    pub m: u32,
    pub contains_x: bool,
    /// `|S| < 2^{m+1}`.
    pub below_pow: bool,
    /// `|S| · P(x) < 2`.
    pub below_inverse: bool,
}

/// `S = {y : P(y) > 2^{−m−1}}` with `m = ⌊−log2 P(x)⌋`.
pub fn restrict_pmf(model: &ProbModel, x: &BitString) -> Result<PmfRestriction> {
    let px = model.prob(x);
    if px.is_zero() {
        return Err(Error::invalid(format!("P({}) = 0", x.to_token())));
    }
    // least m with P(x) > 2^{−m−1}; then 2^{−m−1} < P(x) ≤ 2^{−m}
    let two = BigRational::from_integer(BigInt::from(2));
    let mut m = 0u32;
    let mut half_pow = BigRational::new(BigInt::one(), BigInt::from(2)); // 2^{−m−1}
    while px <= half_pow {
        m += 1;
        half_pow /= &two;
    }
    let words: Vec<u64> = model
        .pmf
        .iter()
        .filter(|(_, p)| **p > half_pow)
        .map(|(y, _)| y.to_word())
        .collect();
    let set = FiniteSet::new(model.n, words)?;
    let card = BigInt::from(set.len());
    Ok(PmfRestriction {
        contains_x: set.contains_str(x),
        below_pow: card < BigInt::one() << (m as usize + 1),
        below_inverse: BigRational::from_integer(card) * &px < two,
        m,
        set,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FnRestriction {
    pub set: FiniteSet,
    /// `len(x, p)`.
    pub arg_len: u32,
    pub contains_x: bool,
    /// `⌈log2|S|⌉ ≤ len(x, p)`.
    pub within_len: bool,
}

/// `S = {p(d) : |d| = len(x, p)}`.
pub fn restrict_fn(model: &TotalFnModel, x: &BitString) -> Result<FnRestriction> {
    let l = model
        .arg_len(x)
        .ok_or_else(|| Error::invalid(format!("{} is not a value of the function", x.to_token())))?;
    let width = x.len() as u32;
    if width > 63 {
        return Err(Error::invalid("values longer than 63 bits"));
    }
    let set = FiniteSet::new(
        width,
        model
            .table
            .iter()
            .filter(|(d, _)| d.len() as u32 == l)
            .map(|(_, v)| v.to_word()),
    )?;
    Ok(FnRestriction {
        contains_x: set.contains_str(x),
        within_len: set.index_code_len() <= l,
        arg_len: l,
        set,
    })
}

/// Parses `string<TAB>num/den` rows; all strings must share one length.
pub fn parse_pmf(text: &str) -> Result<ProbModel> {
    let mut pmf = BTreeMap::new();
    let mut n: Option<u32> = None;
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
        let x: BitString = f[0].parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
        if *n.get_or_insert(x.len() as u32) != x.len() as u32 {
            return Err(Error::parse(line, "strings differ in length"));
        }
        let p = parse_ratio(f[1]).map_err(|e| Error::parse(line, e.to_string()))?;
        if pmf.insert(x, p).is_some() {
            return Err(Error::parse(line, "string listed twice"));
        }
    }
    ProbModel::new(n.unwrap_or(0), pmf).map_err(|e| Error::parse(0, e.to_string()))
}

/// Parses `arg<TAB>value` rows of a total function.
pub fn parse_fn(text: &str) -> Result<TotalFnModel> {
    let mut table = BTreeMap::new();
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
        let d: BitString = f[0].parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
        let v: BitString = f[1].parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
        if d.len() > 20 {
            return Err(Error::parse(line, "argument longer than 20 bits"));
        }
        if table.insert(d, v).is_some() {
            return Err(Error::parse(line, "argument listed twice"));
        }
    }
    TotalFnModel::new(table).map_err(|e| Error::parse(0, e.to_string()))
}

/// A random pmf on `n`-bit strings with the given support size and small
/// random integer weights.
pub fn random_pmf(n: u32, support: usize, seed: u64) -> ProbModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 1u64 << n;
    let support = support.clamp(1, size as usize);
    let picks = rand::seq::index::sample(&mut rng, size as usize, support);
    let weights: Vec<u64> = (0..support).map(|_| rng.gen_range(1..=20)).collect();
    let total: u64 = weights.iter().sum();
    let pmf = picks
        .into_iter()
        .zip(weights)
        .map(|(x, w)| {
            (
                BitString::from_word(x as u64, n),
                BigRational::new(BigInt::from(w), BigInt::from(total)),
            )
        })
        .collect();
    ProbModel::new(n, pmf).expect("weights sum to the total")
}

/// `h` over a codebook of mass functions: the largest `P(x)` among models
/// whose program is at most `α` bits, as `(P(x), program)`; `None` when the
/// class is empty. A zero probability is an infinite code length.
pub fn pmf_structure(
    book: &[(BitString, ProbModel)],
    x: &BitString,
    alpha_max: u32,
) -> Vec<Option<(BigRational, BitString)>> {
    let mut sorted: Vec<&(BitString, ProbModel)> = book.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let mut best: Option<(BigRational, BitString)> = None;
    let mut next = 0;
    let mut out = Vec::new();
    for alpha in 0..=alpha_max {
        while next < sorted.len() && sorted[next].0.len() as u32 <= alpha {
            let (prog, model) = sorted[next];
            let p = model.prob(x);
            if best.as_ref().is_none_or(|(b, _)| p > *b) {
                best = Some((p, prog.clone()));
            }
            next += 1;
        }
        out.push(best.clone());
    }
    out
}

/// Each set program of a system paired with the uniform pmf of its set.
pub fn pmf_codebook(sys: &DescriptionSystem) -> Vec<(BitString, ProbModel)> {
    sys.set_programs()
        .iter()
        .map(|(p, id)| (p.clone(), set_to_pmf(&sys.set_entry(*id).set)))
        .collect()
}
