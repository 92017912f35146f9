//! Sparse Laurent polynomials with exact rational coefficients over base
//! variables `x_1..x_n` and jet variables.
//!
//! In ordinary mode the jet variables are `x_i^(j)`; in log mode they are
//! opaque symbols `u[i,j]` standing for `x_i^(j) / x_i`. Base exponents are
//! signed, jet exponents are not.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse_poly, ParseError};

use crate::monoid::AffineMonoid;

/// Exact coefficient field.
pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JetMode {
    Ordinary,
    Log,
}

impl fmt::Display for JetMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetMode::Ordinary => f.write_str("ordinary"),
            JetMode::Log => f.write_str("log"),
        }
    }
}

/// `n` base variables, jet order `m` (0 is the base ring), and the mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    pub n: usize,
    pub m: usize,
    pub mode: JetMode,
}

impl RingDescriptor {
    pub fn new(n: usize, m: usize, mode: JetMode) -> Self {
        assert!(n >= 1, "a ring needs at least one base variable");
        RingDescriptor { n, m, mode }
    }

    pub fn base(n: usize) -> Self {
        Self::new(n, 0, JetMode::Ordinary)
    }

    pub fn with_order(self, m: usize) -> Self {
        RingDescriptor { m, ..self }
    }

    pub fn with_mode(self, mode: JetMode) -> Self {
        RingDescriptor { mode, ..self }
    }

    pub fn jet_count(&self) -> usize {
        self.n * self.m
    }

    /// Position of the jet variable `(i, j)` (1-based) in the jet exponent vector.
    pub fn jet_slot(&self, i: usize, j: usize) -> usize {
        debug_assert!((1..=self.n).contains(&i) && (1..=self.m).contains(&j));
        (i - 1) * self.m + (j - 1)
    }

    pub fn jet_of_slot(&self, slot: usize) -> (usize, usize) {
        (slot / self.m + 1, slot % self.m + 1)
    }

    fn jet_name(&self, i: usize, j: usize) -> String {
        match self.mode {
            JetMode::Ordinary => format!("x{i}({j})"),
            JetMode::Log => format!("u[{i},{j}]"),
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ring, n={}, m={}", self.mode, self.n, self.m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch {
        left: RingDescriptor,
        right: RingDescriptor,
    },
}

/// Exponents of one monomial: signed on base variables, unsigned on jet
/// variables (ordered by `(i, j)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JetMonomial {
    base: Vec<i32>,
    jets: Vec<u32>,
}

impl JetMonomial {
    pub fn one(ring: &RingDescriptor) -> Self {
        JetMonomial {
            base: vec![0; ring.n],
            jets: vec![0; ring.jet_count()],
        }
    }

    pub fn from_parts(base: Vec<i32>, jets: Vec<u32>) -> Self {
        JetMonomial { base, jets }
    }

    pub fn base_exponents(&self) -> &[i32] {
        &self.base
    }

    pub fn jet_exponents(&self) -> &[u32] {
        &self.jets
    }

    pub fn is_one(&self) -> bool {
        self.base.iter().all(|e| *e == 0) && self.jets.iter().all(|e| *e == 0)
    }

    pub fn has_jets(&self) -> bool {
        self.jets.iter().any(|e| *e != 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.base.iter().map(|&e| e as i64).sum::<i64>() + self.jets.iter().map(|&e| e as i64).sum::<i64>()
    }

    fn mul(&self, other: &JetMonomial) -> JetMonomial {
        JetMonomial {
            base: self.base.iter().zip(&other.base).map(|(a, b)| a + b).collect(),
            jets: self.jets.iter().zip(&other.jets).map(|(a, b)| a + b).collect(),
        }
    }

    fn exponent_sequence(&self) -> impl DoubleEndedIterator<Item = i64> + '_ {
        self.base
            .iter()
            .map(|&e| e as i64)
            .chain(self.jets.iter().map(|&e| e as i64))
    }
}

impl Ord for JetMonomial {
    /// Degree reverse lexicographic order over base variables followed by
    /// jet variables in `(i, j)` order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                for (a, b) in self.exponent_sequence().rev().zip(other.exponent_sequence().rev()) {
                    if a != b {
                        return b.cmp(&a);
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for JetMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in a fixed [`RingDescriptor`]. Terms are kept in canonical
/// form: no zero coefficients, monomials in degrevlex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetPoly {
    ring: RingDescriptor,
    terms: BTreeMap<JetMonomial, Rational>,
}

impl JetPoly {
    pub fn zero(ring: RingDescriptor) -> Self {
        JetPoly {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: RingDescriptor, c: Rational) -> Self {
        Self::term(ring, c, JetMonomial::one(&ring))
    }

    pub fn one(ring: RingDescriptor) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn term(ring: RingDescriptor, c: Rational, monomial: JetMonomial) -> Self {
        assert_eq!(monomial.base.len(), ring.n);
        assert_eq!(monomial.jets.len(), ring.jet_count());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(monomial, c);
        }
        JetPoly { ring, terms }
    }

    /// The base variable `x_i` (1-based).
    pub fn var(ring: RingDescriptor, i: usize) -> Self {
        Self::base_monomial(ring, &unit_exponent(ring.n, i))
    }

    /// `x^a` for a signed exponent vector.
    pub fn base_monomial(ring: RingDescriptor, exponents: &[i32]) -> Self {
        let mut m = JetMonomial::one(&ring);
        m.base.copy_from_slice(exponents);
        Self::term(ring, Rational::one(), m)
    }

    /// The jet variable `(i, j)`: `x_i^(j)` in ordinary mode, `u[i,j]` in log
    /// mode. For `j = 0` in ordinary mode this is `x_i` itself.
    pub fn jet_var(ring: RingDescriptor, i: usize, j: usize) -> Self {
        if j == 0 {
            assert_eq!(ring.mode, JetMode::Ordinary, "u[i,0] is not a variable");
            return Self::var(ring, i);
        }
        assert!(j <= ring.m, "jet order {j} exceeds ring order {}", ring.m);
        let mut m = JetMonomial::one(&ring);
        m.jets[ring.jet_slot(i, j)] = 1;
        Self::term(ring, Rational::one(), m)
    }

    pub(crate) fn from_terms(ring: RingDescriptor, terms: impl IntoIterator<Item = (JetMonomial, Rational)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms from the leading (largest) monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &JetMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&JetMonomial::one(&self.ring))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// No jet variable occurs.
    pub fn is_base(&self) -> bool {
        self.terms.keys().all(|m| !m.has_jets())
    }

    /// No negative base exponent occurs.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.base.iter().all(|e| *e >= 0))
    }

    pub(crate) fn add_term(&mut self, m: JetMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &JetPoly) -> Result<(), PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &JetPoly) -> Result<JetPoly, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &JetPoly) -> Result<JetPoly, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &JetPoly) -> Result<JetPoly, PolyError> {
        self.check_ring(other)?;
        let mut out = JetPoly::zero(self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> JetPoly {
        let mut result = JetPoly::one(self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, c: &Rational) -> JetPoly {
        if c.is_zero() {
            return JetPoly::zero(self.ring);
        }
        JetPoly {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Multiplies by `x^a` (signed exponents on base variables).
    pub fn shift_base(&self, a: &[i32]) -> JetPoly {
        JetPoly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.base.iter_mut().zip(a).for_each(|(e, s)| *e += s);
                    (m, c.clone())
                })
                .collect(),
        }
    }

    /// Reinterprets the polynomial in a ring with the same `n` and mode but
    /// a larger jet order.
    pub fn lift(&self, ring: RingDescriptor) -> JetPoly {
        assert_eq!(ring.n, self.ring.n);
        assert!(ring.m >= self.ring.m || self.is_base());
        let terms = self.terms.iter().map(|(m, c)| {
            let mut jets = vec![0; ring.jet_count()];
            for (slot, &e) in m.jets.iter().enumerate() {
                if e > 0 {
                    let (i, j) = self.ring.jet_of_slot(slot);
                    jets[ring.jet_slot(i, j)] = e;
                }
            }
            (JetMonomial { base: m.base.clone(), jets }, c.clone())
        });
        JetPoly::from_terms(ring, terms)
    }

    /// Same terms, viewed in a ring of the other mode. Only meaningful for
    /// polynomials without jet variables.
    pub fn with_mode(&self, mode: JetMode) -> JetPoly {
        assert!(self.is_base() || mode == self.ring.mode);
        JetPoly {
            ring: self.ring.with_mode(mode),
            terms: self.terms.clone(),
        }
    }

    /// Partial derivative in the base variable `x_i` (Laurent exponents allowed).
    pub fn partial_base(&self, i: usize) -> JetPoly {
        let mut out = JetPoly::zero(self.ring);
        for (m, c) in &self.terms {
            let e = m.base[i - 1];
            if e != 0 {
                let mut m2 = m.clone();
                m2.base[i - 1] -= 1;
                out.add_term(m2, c * integer(e as i64));
            }
        }
        out
    }

    /// Smallest exponent of each base variable over all terms (0 if none
    /// negative): multiplying by `x^(-min)` clears every negative exponent.
    pub fn negative_base_floor(&self) -> Vec<i32> {
        let mut floor = vec![0; self.ring.n];
        for m in self.terms.keys() {
            for (f, &e) in floor.iter_mut().zip(&m.base) {
                *f = (*f).min(e);
            }
        }
        floor
    }

    /// Distinct base exponent vectors occurring in the polynomial.
    pub fn base_support(&self) -> Vec<Vec<i32>> {
        let mut out: Vec<Vec<i32>> = self.terms.keys().map(|m| m.base.clone()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Whether every base exponent vector, read in the coordinates of
    /// `basis`, is an element of `monoid`.
    pub fn support_in_monoid(&self, monoid: &AffineMonoid, basis: &[crate::lattice::LatticeVector]) -> bool {
        self.first_support_violation(monoid, basis).is_none()
    }

    /// The first base exponent vector whose lattice point is not in `monoid`.
    pub fn first_support_violation(
        &self,
        monoid: &AffineMonoid,
        basis: &[crate::lattice::LatticeVector],
    ) -> Option<Vec<i32>> {
        assert_eq!(basis.len(), self.ring.n);
        self.base_support()
            .into_iter()
            .find(|a| !monoid.contains(&lattice_point(basis, a)))
    }

    /// Renders in the input grammar, leading term first.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn unit_exponent(n: usize, i: usize) -> Vec<i32> {
    assert!((1..=n).contains(&i), "variable index {i} out of range 1..={n}");
    let mut a = vec![0; n];
    a[i - 1] = 1;
    a
}

/// `Σ a_i e_i` for basis vectors `e_i`.
pub fn lattice_point(basis: &[crate::lattice::LatticeVector], a: &[i32]) -> Vec<i64> {
    let n = basis.first().map_or(0, |b| b.rank());
    let mut v = vec![0i64; n];
    for (e, &k) in basis.iter().zip(a) {
        for (x, y) in v.iter_mut().zip(e.iter()) {
            *x += (k as i64) * y;
        }
    }
    v
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&JetPoly> for &JetPoly {
            type Output = JetPoly;

            /// Panics on a ring mismatch; see the `checked_*` variant.
            fn $method(self, rhs: &JetPoly) -> JetPoly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl std::ops::$trait<JetPoly> for JetPoly {
            type Output = JetPoly;

            fn $method(self, rhs: JetPoly) -> JetPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &JetPoly {
    type Output = JetPoly;

    fn neg(self) -> JetPoly {
        JetPoly {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl std::ops::Neg for JetPoly {
    type Output = JetPoly;

    fn neg(self) -> JetPoly {
        -&self
    }
}

pub(crate) fn format_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.base.iter().enumerate() {
                if e != 0 {
                    factors.push(power(&format!("x{}", i + 1), e as i64));
                }
            }
            for (slot, &e) in m.jets.iter().enumerate() {
                if e != 0 {
                    let (i, j) = self.ring.jet_of_slot(slot);
                    factors.push(power(&self.ring.jet_name(i, j), e as i64));
                }
            }
            if factors.is_empty() {
                f.write_str(&format_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn power(name: &str, e: i64) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}
