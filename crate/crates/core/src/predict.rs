//! Log-loss prediction strategies over strings of a fixed length, their exact
//! conversions to and from finite sets, and snooping curves over codebooks.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::codec::{find_prefix_violation, BitString};
use crate::descsys::{kraft_sum, DescriptionSystem, FiniteSet};
use crate::error::{Error, Result};
use crate::logbits::LogBits;

/// Horizon cap: a strategy stores `2^n − 1` rationals.
pub const MAX_HORIZON: u32 = 16;

/// Probability that the next bit is 1, for every prefix shorter than `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PredictionStrategy {
    n: u32,
    /// Indexed by the natural of the prefix: ε, 0, 1, 00, …
    table: Vec<BigRational>,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl PredictionStrategy {
    pub fn new(n: u32, table: Vec<BigRational>) -> Result<Self> {
        if n > MAX_HORIZON {
            return Err(Error::invalid(format!("horizon {n} exceeds {MAX_HORIZON}")));
        }
        if table.len() as u64 != (1u64 << n) - 1 {
            return Err(Error::invalid("a strategy needs one value per prefix shorter than n"));
        }
        if table.iter().any(|p| p.is_negative() || *p > BigRational::one()) {
            return Err(Error::invalid("predictions must lie in [0, 1]"));
        }
        Ok(PredictionStrategy { n, table })
    }

    /// Predicts 1/2 everywhere.
    pub fn uniform(n: u32) -> Result<Self> {
        Self::new(n, vec![ratio(1, 2); ((1u64 << n.min(MAX_HORIZON + 1)) - 1) as usize])
    }

    pub fn horizon(&self) -> u32 {
        self.n
    }

    pub fn predict(&self, prefix: &BitString) -> Option<&BigRational> {
        if prefix.len() as u32 >= self.n {
            return None;
        }
        self.table.get(prefix.to_index()? as usize)
    }

    /// `(prefix, p)` rows in prefix order.
    pub fn rows(&self) -> impl Iterator<Item = (BitString, &BigRational)> {
        self.table
            .iter()
            .enumerate()
            .map(|(i, p)| (BitString::from_index(i as u64), p))
    }

    /// Text form: one `prefix<TAB>num/den` line per prefix.
    pub fn to_fixture(&self) -> String {
        let mut out = format!("n\t{}\n", self.n);
        for (y, p) in self.rows() {
            out.push_str(&format!("{}\t{}/{}\n", y.to_token(), p.numer(), p.denom()));
        }
        out
    }

    /// Realized probability of `x`: the product over steps of the
    /// probability assigned to the bit that actually came.
    fn product(&self, x: &BitString) -> BigRational {
        let mut acc = BigRational::one();
        let mut node: u64 = 0;
        for &b in x.bits() {
            let p = &self.table[node as usize];
            acc *= if b { p.clone() } else { BigRational::one() - p };
            if acc.is_zero() {
                return acc;
            }
            node = 2 * node + 1 + u64::from(b);
        }
        acc
    }
}

/// Exact loss of a strategy on one string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Loss {
    #[serde(serialize_with = "ser_ratio")]
    pub product: BigRational,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{}/{}", r.numer(), r.denom()))
}

impl Loss {
    /// `−log2 product`, for display. Infinite when the product is 0.
    pub fn bits(&self) -> f64 {
        if self.product.is_zero() {
            return f64::INFINITY;
        }
        -self.product.to_f64().unwrap_or(0.0).log2()
    }

    /// The loss as an exact logarithm, when the product is `1/m` for a
    /// dyadic rational `m`.
    pub fn exact(&self) -> Option<LogBits> {
        if self.product.is_zero() {
            return Some(LogBits::INFINITY);
        }
        let num: u64 = self.product.numer().try_into().ok()?;
        let den: u64 = self.product.denom().try_into().ok()?;
        if !num.is_power_of_two() {
            return None;
        }
        Some(LogBits::dyadic(den, -i64::from(num.trailing_zeros())))
    }
}

pub fn evaluate_loss(p: &PredictionStrategy, x: &BitString) -> Result<Loss> {
    if x.len() as u32 != p.n {
        return Err(Error::invalid(format!(
            "string of length {} against a strategy of horizon {}",
            x.len(),
            p.n
        )));
    }
    Ok(Loss { product: p.product(x) })
}

/// `P(y) = |A_{y1}| / |A_y|`, and 1/2 where no element of `A` extends `y`.
pub fn set_to_strategy(a: &FiniteSet) -> Result<PredictionStrategy> {
    let n = a.width();
    if n > MAX_HORIZON {
        return Err(Error::invalid(format!("horizon {n} exceeds {MAX_HORIZON}")));
    }
    let mut table = Vec::with_capacity((1usize << n) - 1);
    for len in 0..n {
        // counts of elements per prefix value at this length
        let mut counts = vec![0u64; 1 << len];
        let mut ones = vec![0u64; 1 << len];
        for &w in a.words() {
            let y = (w >> (n - len)) as usize;
            counts[y] += 1;
            if (w >> (n - len - 1)) & 1 == 1 {
                ones[y] += 1;
            }
        }
        for (c, o) in counts.into_iter().zip(ones) {
            table.push(if c == 0 {
                ratio(1, 2)
            } else {
                BigRational::new(BigInt::from(o), BigInt::from(c))
            });
        }
    }
    PredictionStrategy::new(n, table)
}

/// `{x : product(P, x) ≥ 2^{−m}}`, where the threshold `m` is given as an
/// exact logarithm (so `m = log2|A|` means the bound `1/|A|`).
///
/// Returns `None` when no string qualifies.
pub fn strategy_to_set(p: &PredictionStrategy, m: LogBits) -> Result<Option<FiniteSet>> {
    if m < LogBits::ZERO {
        return Err(Error::invalid("threshold must be non-negative"));
    }
    if m.is_infinite() {
        return Ok(Some(FiniteSet::new(p.n, 0..(1u64 << p.n))?));
    }
    let bound = m.antilog().expect("finite").recip();
    let mut out = Vec::new();
    // depth-first; products only shrink along a path
    let mut stack = vec![(0u64, 0u32, BigRational::one())];
    while let Some((word, depth, prod)) = stack.pop() {
        if prod < bound {
            continue;
        }
        if depth == p.n {
            out.push(word);
            continue;
        }
        let node = ((1u64 << depth) - 1 + word) as usize;
        let q = &p.table[node];
        stack.push(((word << 1) | 1, depth + 1, &prod * q));
        stack.push((word << 1, depth + 1, &prod * (BigRational::one() - q)));
    }
    if out.is_empty() {
        return Ok(None);
    }
    Ok(Some(FiniteSet::new(p.n, out)?))
}

/// `Σ_x product(P, x)` over all strings of length `n`.
pub fn total_mass(p: &PredictionStrategy) -> BigRational {
    (0..1u64 << p.n)
        .map(|w| p.product(&BitString::from_word(w, p.n)))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Parses `prefix<TAB>num/den` rows, with an optional first `n<TAB>value`
/// line; without it the horizon is one more than the longest prefix.
pub fn parse_strategy(text: &str) -> Result<PredictionStrategy> {
    let mut n: Option<u32> = None;
    let mut rows: Vec<(BitString, BigRational)> = Vec::new();
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
        if f[0] == "n" {
            if n.is_some() || !rows.is_empty() {
                return Err(Error::parse(line, "the n header must come first, once"));
            }
            let v = f[1]
                .parse::<u32>()
                .map_err(|_| Error::parse(line, "bad horizon"))?;
            if v > MAX_HORIZON {
                return Err(Error::parse(line, format!("horizon exceeds {MAX_HORIZON}")));
            }
            n = Some(v);
            continue;
        }
        let y: BitString = f[0].parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
        if y.len() as u32 >= MAX_HORIZON {
            return Err(Error::parse(line, "prefix too long"));
        }
        rows.push((y, parse_ratio(f[1]).map_err(|e| Error::parse(line, e.to_string()))?));
    }
    let n = n.unwrap_or_else(|| rows.iter().map(|(y, _)| y.len() as u32 + 1).max().unwrap_or(0));
    let size = ((1u64 << n) - 1) as usize;
    let mut table: Vec<Option<BigRational>> = vec![None; size];
    for (y, p) in rows {
        let i = y.to_index().expect("short prefix") as usize;
        if i >= size {
            return Err(Error::parse(0, format!("prefix {} is not shorter than n = {n}", y.to_token())));
        }
        if table[i].replace(p).is_some() {
            return Err(Error::parse(0, format!("prefix {} listed twice", y.to_token())));
        }
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.ok_or_else(|| {
                Error::parse(0, format!("missing prefix {}", BitString::from_index(i as u64).to_token()))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PredictionStrategy::new(n, table)
}

/// Parses `num/den` or an integer; the denominator must be positive.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let digits = |t: &str, sign: bool| {
        let body = if sign { t.strip_prefix('-').unwrap_or(t) } else { t };
        !body.is_empty() && body.len() <= 64 && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num, true) || !digits(den, false) {
        return Err(Error::invalid(format!("bad rational {s:?}")));
    }
    let num: BigInt = num.parse().map_err(|_| Error::invalid("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| Error::invalid("bad denominator"))?;
    if den.is_zero() {
        return Err(Error::invalid("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// A prefix-free program table of strategies of one horizon.
#[derive(Clone, Debug)]
pub struct StrategyCodebook {
    n: u32,
    entries: Vec<(BitString, PredictionStrategy)>,
}

impl StrategyCodebook {
    pub fn new(n: u32, entries: Vec<(BitString, PredictionStrategy)>) -> Result<Self> {
        if let Some((a, b)) = find_prefix_violation(entries.iter().map(|(p, _)| p)) {
            return Err(Error::NotPrefixFree {
                namespace: "strategy".into(),
                shorter: a.to_token(),
                longer: b.to_token(),
            });
        }
        let mut programs: Vec<&BitString> = entries.iter().map(|(p, _)| p).collect();
        programs.sort();
        if programs.windows(2).any(|w| w[0] == w[1]) {
            let dup = programs.windows(2).find(|w| w[0] == w[1]).expect("checked")[0];
            return Err(Error::DuplicateProgram {
                namespace: "strategy".into(),
                program: dup.to_token(),
            });
        }
        let sum = kraft_sum(entries.iter().map(|(p, _)| p.len()));
        if sum > BigRational::one() {
            return Err(Error::KraftViolation {
                namespace: "strategy".into(),
                sum: sum.to_string(),
            });
        }
        if entries.iter().any(|(_, s)| s.n != n) {
            return Err(Error::invalid("all strategies must share the horizon"));
        }
        Ok(StrategyCodebook { n, entries })
    }

    /// Each set program of a system paired with the strategy of its set.
    pub fn from_sets(sys: &DescriptionSystem) -> Result<Self> {
        let entries = sys
            .set_programs()
            .iter()
            .map(|(p, id)| Ok((p.clone(), set_to_strategy(&sys.set_entry(*id).set)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sys.universe(), entries)
    }

    pub fn entries(&self) -> &[(BitString, PredictionStrategy)] {
        &self.entries
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnoopPoint {
    pub alpha: u32,
    /// Best loss among strategies with program length ≤ α; `None` when there are none.
    pub loss: Option<Loss>,
    pub witness_program: Option<BitString>,
}

/// `L_x(α)` on `[0, alpha_max]`: the least loss on `x` over strategies whose
/// program is at most `α` bits, with the shortlex-least program on ties.
pub fn snooping_curve(book: &StrategyCodebook, x: &BitString, alpha_max: u32) -> Result<Vec<SnoopPoint>> {
    if x.len() as u32 != book.n {
        return Err(Error::invalid("string length differs from the codebook horizon"));
    }
    let mut scored: Vec<(BitString, BigRational)> = book
        .entries
        .par_iter()
        .map(|(prog, s)| (prog.clone(), s.product(x)))
        .collect();
    scored.sort_by(|a, b| a.0.cmp(&b.0));
    let mut best: Option<&(BitString, BigRational)> = None;
    let mut next = 0;
    let mut out = Vec::with_capacity(alpha_max as usize + 1);
    for alpha in 0..=alpha_max {
        while next < scored.len() && scored[next].0.len() as u32 <= alpha {
            let c = &scored[next];
            best = match best {
                // larger product is smaller loss; earlier program wins ties
                Some(b) if b.1.cmp(&c.1) != Ordering::Less => Some(b),
                _ => Some(c),
            };
            next += 1;
        }
        out.push(SnoopPoint {
            alpha,
            loss: best.map(|b| Loss { product: b.1.clone() }),
            witness_program: best.map(|b| b.0.clone()),
        });
    }
    Ok(out)
}
