use std::fmt;

use serde::{Serialize, Serializer};

use crate::codec::BitString;
use crate::error::{Error, Result};
use crate::logbits::LogBits;

/// A nonempty finite set of equal-length binary strings, kept sorted.
///
/// Elements are stored as `width`-bit words; for equal-length strings the
/// word order coincides with the shortlex order of [`BitString`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteSet {
    width: u32,
    elems: Vec<u64>,
}

impl FiniteSet {
    pub fn new(width: u32, elems: impl IntoIterator<Item = u64>) -> Result<Self> {
        if width > 63 {
            return Err(Error::invalid(format!("string width {width} exceeds 63")));
        }
        let mut elems: Vec<u64> = elems.into_iter().collect();
        if let Some(&bad) = elems.iter().find(|&&e| e >> width != 0) {
            return Err(Error::OutsideUniverse {
                element: format!("{bad:#x}"),
                n: width,
            });
        }
        elems.sort_unstable();
        elems.dedup();
        if elems.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(FiniteSet { width, elems })
    }

    /// Builds from strings, all of which must have length `width`.
    pub fn from_strings<'a>(
        width: u32,
        strings: impl IntoIterator<Item = &'a BitString>,
    ) -> Result<Self> {
        let words = strings
            .into_iter()
            .map(|s| {
                if s.len() as u32 != width {
                    Err(Error::OutsideUniverse {
                        element: s.to_token(),
                        n: width,
                    })
                } else {
                    Ok(s.to_word())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(width, words)
    }

    /// All `2^width` strings.
    pub fn cube(width: u32) -> Self {
        assert!(width <= 24, "cube of width {width} is too large to materialize");
        FiniteSet {
            width,
            elems: (0..(1u64 << width)).collect(),
        }
    }

    pub fn singleton(width: u32, x: u64) -> Self {
        FiniteSet {
            width,
            elems: vec![x],
        }
    }

    pub(crate) fn from_sorted_unchecked(width: u32, elems: Vec<u64>) -> Self {
        debug_assert!(!elems.is_empty() && elems.windows(2).all(|w| w[0] < w[1]));
        FiniteSet { width, elems }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn words(&self) -> &[u64] {
        &self.elems
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn contains_str(&self, x: &BitString) -> bool {
        x.len() as u32 == self.width && self.contains(x.to_word())
    }

    /// Rank of `x` in sorted order.
    pub fn index_of(&self, x: u64) -> Option<usize> {
        self.elems.binary_search(&x).ok()
    }

    pub fn strings(&self) -> impl Iterator<Item = BitString> + '_ {
        self.elems
            .iter()
            .map(move |&w| BitString::from_word(w, self.width))
    }

    /// `log2 |S|`, exact.
    pub fn log_card(&self) -> LogBits {
        LogBits::log2(self.elems.len() as u64)
    }

    /// `⌈log2 |S|⌉`, the length of the index code.
    pub fn index_code_len(&self) -> u32 {
        ceil_log2(self.elems.len() as u64)
    }

    pub fn is_subset_of(&self, other: &FiniteSet) -> bool {
        self.width == other.width && self.elems.iter().all(|&e| other.contains(e))
    }

    /// Applies a permutation of the `width`-bit words.
    pub fn map(&self, f: impl Fn(u64) -> u64) -> FiniteSet {
        let mut elems: Vec<u64> = self.elems.iter().map(|&e| f(e)).collect();
        elems.sort_unstable();
        elems.dedup();
        FiniteSet {
            width: self.width,
            elems,
        }
    }

    /// Comma-separated element list, the fixture syntax.
    pub fn to_list(&self) -> String {
        self.strings()
            .map(|s| s.to_token())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// `⌈log2 n⌉` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n > 0);
    if n == 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// `⌊log2 n⌋` for `n >= 1`.
pub fn floor_log2(n: u64) -> u32 {
    assert!(n > 0);
    n.ilog2()
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elems.len() > 16 {
            write!(f, "{{{} strings of width {}}}", self.elems.len(), self.width)
        } else {
            write!(f, "{{{}}}", self.to_list())
        }
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_list())
    }
}

impl Serialize for FiniteSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.elems.len()))?;
        for e in self.strings() {
            seq.serialize_element(&e.to_string())?;
        }
        seq.end()
    }
}
