//! Binary strings, the integer correspondence, and the two self-delimiting
//! codes every program length in the crate is built from.
//!
//! Strings and naturals are identified by the shortlex enumeration
//! `ε ↔ 0, "0" ↔ 1, "1" ↔ 2, "00" ↔ 3, ...`, so the string for `m` has
//! length `⌊log2(m+1)⌋`. Two codes are provided:
//!
//! * `x̄ = 1^|x| 0 x`, of length `2|x| + 1`;
//! * `x' = (|x|)‾ x`, of length `|x| + 2⌊log2(|x|+1)⌋ + 1`.
//!
//! Pairs use `⟨x, y⟩ = x̄ y`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite binary string. Ordered by length first, then lexicographically,
/// which is the order of the corresponding naturals.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    /// The string corresponding to the natural `m`.
    pub fn from_index(m: u64) -> Self {
        // binary notation of m + 1 without its leading one
        let v = u128::from(m) + 1;
        let width = 127 - v.leading_zeros();
        let bits = (0..width).rev().map(|i| (v >> i) & 1 == 1).collect();
        BitString { bits }
    }

    /// The natural corresponding to this string, if it fits in a `u64`.
    pub fn to_index(&self) -> Option<u64> {
        if self.bits.len() >= 64 {
            return None;
        }
        let mut v: u64 = 1;
        for &b in &self.bits {
            v = (v << 1) | u64::from(b);
        }
        Some(v - 1)
    }

    /// The `width`-bit big-endian binary notation of `value`.
    pub fn from_word(value: u64, width: u32) -> Self {
        let bits = (0..width).rev().map(|i| (value >> i) & 1 == 1).collect();
        BitString { bits }
    }

    /// Big-endian value of the bits. Only meaningful for `len() <= 64`.
    pub fn to_word(&self) -> u64 {
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn prefix(&self, len: usize) -> BitString {
        BitString {
            bits: self.bits[..len.min(self.bits.len())].to_vec(),
        }
    }

    /// True when `self` is a prefix of `other` (possibly equal).
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Plain lexicographic comparison, in which a proper prefix sorts first.
    pub fn cmp_lex(&self, other: &BitString) -> Ordering {
        self.bits.cmp(&other.bits)
    }

    /// Text form used by all fixture files: `-` for the empty string.
    pub fn to_token(&self) -> String {
        if self.is_empty() {
            "-".to_string()
        } else {
            self.to_string()
        }
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits
            .len()
            .cmp(&other.bits.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Accepts `0`/`1` characters; `-`, `ε` and the empty string denote ε.
    fn from_str(s: &str) -> Result<Self> {
        if s == "-" || s == "ε" {
            return Ok(BitString::new());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Decode(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::from_bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `⌊log2(m + 1)⌋`, the length of the string corresponding to `m`.
pub fn index_len(m: u64) -> u32 {
    (u128::from(m) + 1).ilog2()
}

/// `x̄ = 1^|x| 0 x`.
pub fn encode_sd(x: &BitString) -> BitString {
    let mut bits = Vec::with_capacity(2 * x.len() + 1);
    bits.extend(std::iter::repeat_n(true, x.len()));
    bits.push(false);
    bits.extend_from_slice(x.bits());
    BitString { bits }
}

/// Parses one `x̄` code word from the front of `input`, returning the payload
/// and the number of bits consumed.
pub fn read_sd(input: &[bool]) -> Result<(BitString, usize)> {
    let n = input.iter().take_while(|&&b| b).count();
    if n == input.len() {
        return Err(Error::Decode("unterminated unary length".into()));
    }
    let start = n + 1;
    if input.len() - start < n {
        return Err(Error::Decode(format!(
            "payload of {n} bits truncated to {}",
            input.len() - start
        )));
    }
    Ok((BitString::from_bits(input[start..start + n].to_vec()), start + n))
}

/// Inverse of [`encode_sd`]; the whole input must be one code word.
pub fn decode_sd(code: &BitString) -> Result<BitString> {
    let (x, used) = read_sd(code.bits())?;
    if used != code.len() {
        return Err(Error::Decode(format!(
            "{} trailing bits after code word",
            code.len() - used
        )));
    }
    Ok(x)
}

/// `x' = (|x|)‾ x`, the length written as its corresponding string.
pub fn encode_std(x: &BitString) -> BitString {
    let mut out = encode_sd(&BitString::from_index(x.len() as u64));
    out.extend_from(x);
    out
}

/// Parses one `x'` code word from the front of `input`.
pub fn read_std(input: &[bool]) -> Result<(BitString, usize)> {
    let (len_str, used) = read_sd(input)?;
    let n = len_str
        .to_index()
        .ok_or_else(|| Error::Decode("length field too wide".into()))?;
    let rest = (input.len() - used) as u64;
    if rest < n {
        return Err(Error::Decode(format!(
            "payload of {n} bits truncated to {rest}"
        )));
    }
    let n = n as usize;
    Ok((
        BitString::from_bits(input[used..used + n].to_vec()),
        used + n,
    ))
}

/// Inverse of [`encode_std`]; the whole input must be one code word.
pub fn decode_std(code: &BitString) -> Result<BitString> {
    let (x, used) = read_std(code.bits())?;
    if used != code.len() {
        return Err(Error::Decode(format!(
            "{} trailing bits after code word",
            code.len() - used
        )));
    }
    Ok(x)
}

/// `⟨x, y⟩ = x̄ y`.
pub fn pair(x: &BitString, y: &BitString) -> BitString {
    let mut out = encode_sd(x);
    out.extend_from(y);
    out
}

/// Inverse of [`pair`]. Every input with a complete `x̄` prefix decodes.
pub fn unpair(z: &BitString) -> Result<(BitString, BitString)> {
    let (x, used) = read_sd(z.bits())?;
    Ok((x, BitString::from_bits(z.bits()[used..].to_vec())))
}

/// Checks that no word is a proper prefix of another and that words are
/// distinct. On failure returns the offending `(shorter, longer)` pair.
pub fn find_prefix_violation<'a, I>(words: I) -> Option<(BitString, BitString)>
where
    I: IntoIterator<Item = &'a BitString>,
{
    let mut sorted: Vec<&BitString> = words.into_iter().collect();
    sorted.sort_by(|a, b| a.cmp_lex(b));
    // in lexicographic order, a word that prefixes anything prefixes its successor
    sorted
        .windows(2)
        .find(|w| w[0].is_prefix_of(w[1]))
        .map(|w| (w[0].clone(), w[1].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn integer_correspondence_table() {
        let table = ["-", "0", "1", "00", "01", "10", "11", "000"];
        for (m, s) in table.iter().enumerate() {
            assert_eq!(BitString::from_index(m as u64), bs(s));
            assert_eq!(bs(s).to_index(), Some(m as u64));
        }
    }

    #[test]
    fn index_length_is_floor_log() {
        for m in 0u64..5000 {
            let expect = ((m + 1) as f64).log2().floor() as usize;
            assert_eq!(BitString::from_index(m).len(), expect);
            assert_eq!(index_len(m) as usize, expect);
        }
    }

    #[test]
    fn sd_examples() {
        assert_eq!(encode_sd(&BitString::new()), bs("0"));
        assert_eq!(encode_sd(&bs("010")), bs("1110010"));
        assert_eq!(encode_sd(&bs("1")), bs("101"));
        assert_eq!(decode_sd(&bs("101")).unwrap(), bs("1"));
    }

    #[test]
    fn std_examples() {
        assert_eq!(encode_std(&BitString::new()), bs("0"));
        // |x| = 3 ↔ "00", so x' = "11000" ++ "010"
        assert_eq!(encode_std(&bs("010")), bs("11000010"));
    }

    #[test]
    fn pair_examples() {
        assert_eq!(pair(&BitString::new(), &BitString::new()), bs("0"));
        assert_eq!(pair(&bs("1"), &bs("0")), bs("1010"));
        assert_eq!(unpair(&bs("1010")).unwrap(), (bs("1"), bs("0")));
    }

    #[test]
    fn decoders_reject_garbage() {
        assert!(decode_sd(&bs("111")).is_err());
        assert!(decode_sd(&bs("1101")).is_err());
        assert!(decode_sd(&bs("00")).is_err());
        assert!(decode_std(&bs("1110110")).is_err());
        assert!(unpair(&BitString::new()).is_err());
    }

    #[test]
    fn prefix_violation_detection() {
        let words = [bs("0"), bs("01")];
        assert_eq!(
            find_prefix_violation(words.iter()),
            Some((bs("0"), bs("01")))
        );
        let ok = [bs("0"), bs("10"), bs("110"), bs("111")];
        assert_eq!(find_prefix_violation(ok.iter()), None);
        let dup = [bs("10"), bs("0"), bs("10")];
        assert!(find_prefix_violation(dup.iter()).is_some());
    }
}
