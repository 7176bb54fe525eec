//! Exact base-2 logarithms of dyadic multiples of integers.
//!
//! Every quantity the structure functions compare has the form
//! `log2(m * 2^e)` for a positive integer `m` and an integer `e`:
//! `log2|S|`, `K(S) + log2|S|`, `log2|S| - K(x|S)` and their integer shifts.
//! Storing the pair `(m, e)` with `m` odd makes equality structural and
//! ordering an exact integer comparison, so no floating-point tie can flip
//! a witness.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Serialize, Serializer};

/// `log2(mant * 2^exp)` with `mant` odd, or `+inf` when `mant == 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LogBits {
    mant: u64,
    exp: i64,
}

impl LogBits {
    /// The value of a minimum over an empty class.
    pub const INFINITY: LogBits = LogBits { mant: 0, exp: 0 };
    pub const ZERO: LogBits = LogBits { mant: 1, exp: 0 };

    /// `log2(n * 2^shift)`. Panics on `n == 0`, whose logarithm is `-inf`.
    pub fn dyadic(n: u64, shift: i64) -> Self {
        assert!(n > 0, "log2 of zero is not representable");
        let tz = n.trailing_zeros();
        LogBits {
            mant: n >> tz,
            exp: shift + i64::from(tz),
        }
    }

    /// An integer number of bits.
    pub fn int(k: i64) -> Self {
        LogBits { mant: 1, exp: k }
    }

    /// `log2(n)`.
    pub fn log2(n: u64) -> Self {
        Self::dyadic(n, 0)
    }

    pub fn is_finite(&self) -> bool {
        self.mant != 0
    }

    pub fn is_infinite(&self) -> bool {
        self.mant == 0
    }

    /// `Some(k)` when the value is exactly the integer `k`.
    pub fn as_integer(&self) -> Option<i64> {
        (self.mant == 1).then_some(self.exp)
    }

    /// Adds an integer number of bits; infinity absorbs.
    pub fn add_int(self, k: i64) -> Self {
        if self.is_infinite() {
            self
        } else {
            LogBits {
                mant: self.mant,
                exp: self.exp + k,
            }
        }
    }

    pub fn sub_int(self, k: i64) -> Self {
        self.add_int(-k)
    }

    /// `floor` of the value, `None` for infinity.
    pub fn floor(&self) -> Option<i64> {
        if self.is_infinite() {
            return None;
        }
        Some(self.exp + i64::from(63 - self.mant.leading_zeros()))
    }

    /// `ceil` of the value, `None` for infinity.
    pub fn ceil(&self) -> Option<i64> {
        let f = self.floor()?;
        Some(if self.mant == 1 { f } else { f + 1 })
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            (self.mant as f64).log2() + self.exp as f64
        }
    }

    /// The number whose logarithm this is, as an exact rational.
    pub fn antilog(&self) -> Option<BigRational> {
        if self.is_infinite() {
            return None;
        }
        let m = BigInt::from(self.mant);
        let p = BigInt::one() << self.exp.unsigned_abs();
        Some(if self.exp >= 0 {
            BigRational::from_integer(m * p)
        } else {
            BigRational::new(m, p)
        })
    }

    /// Mantissa and exponent, for infinite values `None`.
    pub fn parts(&self) -> Option<(u64, i64)> {
        self.is_finite().then_some((self.mant, self.exp))
    }
}

impl Ord for LogBits {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Greater,
            (false, true) => return Ordering::Less,
            _ => {}
        }
        // compare mant_a * 2^(ea - eb) with mant_b
        let d = self.exp - other.exp;
        if d >= 0 {
            if d >= 64 {
                return Ordering::Greater;
            }
            (u128::from(self.mant) << d).cmp(&u128::from(other.mant))
        } else {
            if -d >= 64 {
                return Ordering::Less;
            }
            u128::from(self.mant).cmp(&(u128::from(other.mant) << (-d)))
        }
    }
}

impl PartialOrd for LogBits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LogBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parts() {
            None => write!(f, "inf"),
            Some((1, e)) => write!(f, "{e}"),
            Some((m, e)) => write!(f, "log2({m})+{e}"),
        }
    }
}

impl fmt::Display for LogBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else if let Some(k) = self.as_integer() {
            write!(f, "{k}")
        } else {
            write!(f, "{:.6}", self.to_f64())
        }
    }
}

impl Serialize for LogBits {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else if let Some(k) = self.as_integer() {
            s.serialize_i64(k)
        } else {
            s.serialize_f64(self.to_f64())
        }
    }
}

/// Exact comparison of `sum(lhs)` against `sum(rhs)` for finite values.
///
/// Sums of logarithms are logarithms of products, so the comparison reduces
/// to big-integer arithmetic. Infinite terms make the side infinite.
pub fn cmp_sums(lhs: &[LogBits], rhs: &[LogBits]) -> Ordering {
    let l_inf = lhs.iter().any(LogBits::is_infinite);
    let r_inf = rhs.iter().any(LogBits::is_infinite);
    match (l_inf, r_inf) {
        (true, true) => return Ordering::Equal,
        (true, false) => return Ordering::Greater,
        (false, true) => return Ordering::Less,
        _ => {}
    }
    let (mut lm, mut le) = (BigUint::one(), 0i64);
    for v in lhs {
        lm *= v.mant;
        le += v.exp;
    }
    let (mut rm, mut re) = (BigUint::one(), 0i64);
    for v in rhs {
        rm *= v.mant;
        re += v.exp;
    }
    let shift = le - re;
    if shift >= 0 {
        (lm << shift.unsigned_abs()).cmp(&rm)
    } else {
        lm.cmp(&(rm << shift.unsigned_abs()))
    }
}

/// Floating-point view of `sum(lhs) - sum(rhs)`, for reports only.
pub fn diff_f64(lhs: &[LogBits], rhs: &[LogBits]) -> f64 {
    lhs.iter().map(LogBits::to_f64).sum::<f64>() - rhs.iter().map(LogBits::to_f64).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_powers_of_two() {
        assert_eq!(LogBits::log2(8), LogBits::int(3));
        assert_eq!(LogBits::dyadic(12, -2), LogBits::log2(3));
        assert_eq!(LogBits::log2(1), LogBits::ZERO);
    }

    #[test]
    fn ordering_is_exact() {
        assert!(LogBits::log2(3) < LogBits::int(2));
        assert!(LogBits::log2(3) > LogBits::int(1));
        assert!(LogBits::log2(5) < LogBits::log2(6));
        assert!(LogBits::log2(3).add_int(1) == LogBits::log2(6));
        assert!(LogBits::int(1000) < LogBits::INFINITY);
        assert!(LogBits::int(-1000) < LogBits::log2(3));
        assert!(LogBits::INFINITY == LogBits::INFINITY.add_int(5));
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(LogBits::log2(3).floor(), Some(1));
        assert_eq!(LogBits::log2(3).ceil(), Some(2));
        assert_eq!(LogBits::log2(4).ceil(), Some(2));
        assert_eq!(LogBits::dyadic(3, -3).floor(), Some(-2));
        assert_eq!(LogBits::dyadic(3, -3).ceil(), Some(-1));
        assert_eq!(LogBits::INFINITY.ceil(), None);
    }

    #[test]
    fn sums_compare_exactly() {
        // log 3 + log 5 = log 15 < 4 = log 16
        let l = [LogBits::log2(3), LogBits::log2(5)];
        assert_eq!(cmp_sums(&l, &[LogBits::int(4)]), Ordering::Less);
        assert_eq!(
            cmp_sums(&l, &[LogBits::log2(15)]),
            Ordering::Equal
        );
        assert_eq!(
            cmp_sums(&[LogBits::INFINITY], &[LogBits::int(4)]),
            Ordering::Greater
        );
    }

    #[test]
    fn antilog_round_trip() {
        let v = LogBits::dyadic(3, -2);
        assert_eq!(v.antilog().unwrap(), BigRational::new(3.into(), 4.into()));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn order_agrees_with_rationals(a in 1u64..5000, ea in -20i64..20, b in 1u64..5000, eb in -20i64..20) {
                let x = LogBits::dyadic(a, ea);
                let y = LogBits::dyadic(b, eb);
                let (rx, ry) = (x.antilog().unwrap(), y.antilog().unwrap());
                prop_assert_eq!(x.cmp(&y), rx.cmp(&ry));
            }
        }
    }
}
