//! Model-family grammars: deterministic expansion of `@family:name(params)`
//! rows into concrete program→object entries.
//!
//! Every expanded program is the row's tag followed by a self-delimiting
//! parameter code, so a family's programs are prefix-free by construction.

use std::fmt;
use std::str::FromStr;

use crate::codec::{encode_sd, BitString};
use crate::descsys::set::FiniteSet;
use crate::error::{Error, Result};

/// A grammar for a family of set programs or data programs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// One program printing `{0,1}^n`: the tag itself.
    Cube,
    /// `tag ∥ x` prints `{x}` for every `x`.
    Singletons,
    /// `tag ∥ ȳ` prints the cylinder of strings extending `y`, `|y| ≤ max_prefix`.
    Cylinders { max_prefix: u32 },
    /// `tag ∥ k̄` prints the strings of Hamming weight `k`, `k ∈ [0, n]`.
    Hamming,
    /// `n` is split into `n/m` patches of `m` bits;
    /// `tag ∥ k̄₁ ∥ … ∥ k̄_l` prints the product of per-patch weight slices.
    Patches { m: u32 },
    /// Data family: `tag ∥ x` prints `x`.
    Literal,
}

impl Family {
    pub fn is_data_family(&self) -> bool {
        matches!(self, Family::Literal)
    }

    fn check(&self, n: u32) -> Result<()> {
        match *self {
            Family::Cylinders { max_prefix } if max_prefix > n => Err(Error::invalid(format!(
                "cylinder prefix length {max_prefix} exceeds universe length {n}"
            ))),
            Family::Patches { m } if m == 0 || !n.is_multiple_of(m) => Err(Error::invalid(format!(
                "patch width {m} does not divide universe length {n}"
            ))),
            _ => Ok(()),
        }
    }

    /// Expands a set family under `tag` for the universe `{0,1}^n`.
    pub fn expand_sets(&self, tag: &BitString, n: u32) -> Result<Vec<(BitString, FiniteSet)>> {
        self.check(n)?;
        let with = |code: &BitString| tag.concat(code);
        let mut out = Vec::new();
        match *self {
            Family::Cube => out.push((tag.clone(), FiniteSet::cube(n))),
            Family::Singletons => {
                for x in 0..(1u64 << n) {
                    out.push((with(&BitString::from_word(x, n)), FiniteSet::singleton(n, x)));
                }
            }
            Family::Cylinders { max_prefix } => {
                for len in 0..=max_prefix {
                    let free = n - len;
                    for y in 0..(1u64 << len) {
                        let prefix = BitString::from_word(y, len);
                        let base = y << free;
                        let set = FiniteSet::from_sorted_unchecked(
                            n,
                            (0..(1u64 << free)).map(|r| base | r).collect(),
                        );
                        out.push((with(&encode_sd(&prefix)), set));
                    }
                }
            }
            Family::Hamming => {
                for k in 0..=n {
                    let elems: Vec<u64> = (0..(1u64 << n))
                        .filter(|w| w.count_ones() == k)
                        .collect();
                    let set = FiniteSet::from_sorted_unchecked(n, elems);
                    out.push((with(&encode_sd(&BitString::from_index(u64::from(k)))), set));
                }
            }
            Family::Patches { m } => {
                let patches = n / m;
                let mask = (1u64 << m) - 1;
                // odometer over weight vectors, first patch most significant
                let mut weights = vec![0u32; patches as usize];
                loop {
                    let elems: Vec<u64> = (0..(1u64 << n))
                        .filter(|&w| {
                            weights.iter().enumerate().all(|(i, &k)| {
                                let shift = m * (patches - 1 - i as u32);
                                ((w >> shift) & mask).count_ones() == k
                            })
                        })
                        .collect();
                    let mut program = tag.clone();
                    for &k in &weights {
                        program.extend_from(&encode_sd(&BitString::from_index(u64::from(k))));
                    }
                    out.push((program, FiniteSet::from_sorted_unchecked(n, elems)));
                    let mut i = weights.len();
                    loop {
                        if i == 0 {
                            return Ok(out);
                        }
                        i -= 1;
                        if weights[i] < m {
                            weights[i] += 1;
                            break;
                        }
                        weights[i] = 0;
                    }
                }
            }
            Family::Literal => {
                return Err(Error::invalid("literal() is a data family"));
            }
        }
        Ok(out)
    }

    /// Expands a data family under `tag`.
    pub fn expand_data(&self, tag: &BitString, n: u32) -> Result<Vec<(BitString, u64)>> {
        match self {
            Family::Literal => Ok((0..(1u64 << n))
                .map(|x| (tag.concat(&BitString::from_word(x, n)), x))
                .collect()),
            other => Err(Error::invalid(format!("{other} is a set family"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cube => write!(f, "@family:cube()"),
            Family::Singletons => write!(f, "@family:singletons()"),
            Family::Cylinders { max_prefix } => write!(f, "@family:cylinders({max_prefix})"),
            Family::Hamming => write!(f, "@family:hamming()"),
            Family::Patches { m } => write!(f, "@family:patches({m})"),
            Family::Literal => write!(f, "@family:literal()"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .strip_prefix("@family:")
            .ok_or_else(|| Error::invalid(format!("family reference must start with @family: ({s:?})")))?;
        let (name, rest) = body
            .split_once('(')
            .ok_or_else(|| Error::invalid(format!("missing parameter list in {s:?}")))?;
        let params = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::invalid(format!("unterminated parameter list in {s:?}")))?;
        let number = || -> Result<u32> {
            if params.is_empty() || !params.bytes().all(|b| b.is_ascii_digit()) || params.len() > 3 {
                return Err(Error::invalid(format!("{name} takes one small decimal parameter")));
            }
            Ok(params.parse().expect("checked digits"))
        };
        let none = |fam: Family| -> Result<Family> {
            if params.is_empty() {
                Ok(fam)
            } else {
                Err(Error::invalid(format!("{name} takes no parameters")))
            }
        };
        match name {
            "cube" => none(Family::Cube),
            "singletons" => none(Family::Singletons),
            "hamming" => none(Family::Hamming),
            "literal" => none(Family::Literal),
            "cylinders" => Ok(Family::Cylinders { max_prefix: number()? }),
            "patches" => Ok(Family::Patches { m: number()? }),
            other => Err(Error::invalid(format!("unknown family {other:?}"))),
        }
    }
}
