//! Exact rational coefficients with a machine-word fast path. Gröbner runs
//! on jet ideals see mostly small numbers; normalizing big rationals after
//! every operation dominated the run time.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::poly::Rational;

/// `Small(n, d)` is always reduced with `d > 0`; `Big` is used only when a
/// value does not fit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Small(i64, i64),
    Big(Rational),
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        return gcd_u64(a as u64, b as u64) as u128;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Small(0, 1)
    }

    pub fn one() -> Self {
        Coeff::Small(1, 1)
    }

    pub fn integer(n: i64) -> Self {
        Coeff::Small(n, 1)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs()) as i128;
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Coeff::Small(n, d),
            _ => Coeff::Big(Rational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: Rational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Coeff::Small(n, d),
            _ => Coeff::Big(r),
        }
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            Coeff::Small(n, d) => Rational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Coeff::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coeff::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coeff::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Small(n, _) => *n < 0,
            Coeff::Big(r) => r.is_negative(),
        }
    }

    pub fn abs(&self) -> Coeff {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Small(n, d) => Coeff::from_i128(-(*n as i128), *d as i128),
            Coeff::Big(r) => Coeff::from_big(-r),
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Small(a, b), Coeff::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Coeff::from_i128(a + c, b)
                } else {
                    Coeff::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Coeff::from_big(self.to_rational() + other.to_rational()),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Small(a, b), Coeff::Small(c, d)) => {
                Coeff::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Coeff::from_big(self.to_rational() * other.to_rational()),
        }
    }

    pub fn recip(&self) -> Coeff {
        match self {
            Coeff::Small(n, d) => Coeff::from_i128(*d as i128, *n as i128),
            Coeff::Big(r) => Coeff::from_big(r.recip()),
        }
    }

    pub fn div(&self, other: &Coeff) -> Coeff {
        self.mul(&other.recip())
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Coeff::Small(n, _) => BigInt::from(*n),
            Coeff::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Coeff::Small(_, d) => BigInt::from(*d),
            Coeff::Big(r) => r.denom().clone(),
        }
    }
}

impl From<Rational> for Coeff {
    fn from(r: Rational) -> Self {
        Coeff::from_big(r)
    }
}

impl From<&Rational> for Coeff {
    fn from(r: &Rational) -> Self {
        Coeff::from_big(r.clone())
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Small(n, 1) => write!(f, "{n}"),
            Coeff::Small(n, d) => write!(f, "{n}/{d}"),
            Coeff::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Coeff::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}
