//! Integers with a machine-word fast path, for fraction-free reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Int {
    Small(i64),
    Big(BigInt),
}

impl Int {
    pub fn zero() -> Self {
        Int::Small(0)
    }

    fn from_i128(v: i128) -> Self {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::Big(BigInt::from(v)),
        }
    }

    fn from_big(v: BigInt) -> Self {
        match v.to_i64() {
            Some(s) => Int::Small(s),
            None => Int::Big(v),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(s) => BigInt::from(*s),
            Int::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(s) => *s < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn neg(&self) -> Int {
        match self {
            Int::Small(s) => Int::from_i128(-(*s as i128)),
            Int::Big(b) => Int::from_big(-b),
        }
    }

    pub fn sub(&self, o: &Int) -> Int {
        match (self, o) {
            (Int::Small(a), Int::Small(b)) => Int::from_i128(*a as i128 - *b as i128),
            _ => Int::from_big(self.to_big() - o.to_big()),
        }
    }

    pub fn mul(&self, o: &Int) -> Int {
        match (self, o) {
            (Int::Small(a), Int::Small(b)) => Int::from_i128(*a as i128 * *b as i128),
            (Int::Small(1), x) | (x, Int::Small(1)) => x.clone(),
            _ => Int::from_big(self.to_big() * o.to_big()),
        }
    }

    pub fn gcd(&self, o: &Int) -> Int {
        match (self, o) {
            (Int::Small(a), Int::Small(b)) => Int::from_i128((*a as i128).gcd(&(*b as i128))),
            _ => Int::from_big(self.to_big().gcd(&o.to_big())),
        }
    }

    /// Exact division.
    pub fn div_exact(&self, o: &Int) -> Int {
        match (self, o) {
            (_, Int::Small(1)) => self.clone(),
            (Int::Small(a), Int::Small(b)) => Int::from_i128(*a as i128 / *b as i128),
            _ => Int::from_big(self.to_big() / o.to_big()),
        }
    }

    pub fn bits(&self) -> u64 {
        match self {
            Int::Small(s) => 64 - s.unsigned_abs().leading_zeros() as u64,
            Int::Big(b) => b.bits(),
        }
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int::from_big(v)
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}
