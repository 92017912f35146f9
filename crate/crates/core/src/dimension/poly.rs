//! Dense-exponent sparse polynomials used by the Gröbner engine. Unlike
//! [`JetPoly`](crate::JetPoly) these have no jet structure: just `k`
//! variables in a declared order and nonnegative exponents.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::coeff::Coeff;
use crate::poly::Rational;

/// Most variables an engine polynomial may have.
pub const MAX_VARS: usize = 64;

/// Exponent vector stored inline (at most [`MAX_VARS`] variables, each
/// exponent below 256).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    nvars: u8,
    degree: u16,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Monomial {
            exps: [0; MAX_VARS],
            nvars: nvars as u8,
            degree: 0,
        }
    }

    pub fn new(exps: Vec<u32>) -> Self {
        let mut m = Monomial::one(exps.len());
        for (slot, e) in m.exps.iter_mut().zip(&exps) {
            *slot = u8::try_from(*e).expect("exponent below 256");
        }
        m.degree = exps.iter().sum::<u32>() as u16;
        m
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[v] = 1;
        m.degree = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.exps[v] as u32
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.exps[..self.nvars()].iter().map(|&e| e as u32).collect()
    }

    pub fn degree(&self) -> u32 {
        self.degree as u32
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .fold(0u64, |acc, (i, _)| acc | (1u64 << i))
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.exps[i] > 0).collect()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(&other.exps) {
            *a += b;
        }
        out.degree += other.degree;
        out
    }

    /// `self / other`; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(&other.exps) {
            *a -= b;
        }
        out.degree -= other.degree;
        out
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        let mut degree = 0u16;
        for (a, b) in out.exps.iter_mut().zip(&other.exps) {
            *a = (*a).max(*b);
            degree += *a as u16;
        }
        out.degree = degree;
        out
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    /// Degree reverse lexicographic, ties broken from the last variable.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let n = self.nvars();
            for (a, b) in self.exps[..n].iter().rev().zip(other.exps[..n].iter().rev()) {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Terms sorted by decreasing monomial; no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, Coeff)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: vec![(Monomial::one(nvars), Coeff::one())],
        }
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Polynomial {
            nvars,
            terms: vec![(Monomial::var(nvars, v), Coeff::one())],
        }
    }

    /// Collects arbitrary terms, merging duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        Self::from_coeff_terms(nvars, terms.into_iter().map(|(m, c)| (m, Coeff::from(c))))
    }

    fn from_coeff_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut map: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars);
            let e = map.entry(m).or_insert_with(Coeff::zero);
            *e = e.add(&c);
        }
        Self::from_map(nvars, map)
    }

    fn from_map(nvars: usize, map: BTreeMap<Monomial, Coeff>) -> Self {
        Polynomial {
            nvars,
            terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// The same polynomial in a ring with `nvars` variables, variable `v`
    /// becoming `map[v]`. `map` must be injective.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.nvars);
        Self::from_coeff_terms(
            nvars,
            self.terms.iter().map(|(m, c)| {
                let mut exps = vec![0u32; nvars];
                for (v, &target) in map.iter().enumerate() {
                    exps[target] += m.exponent(v);
                }
                (Monomial::new(exps), c.clone())
            }),
        )
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self) -> Option<&Coeff> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn leading_term(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.first().cloned().into_iter().collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.recip();
                Polynomial {
                    nvars: self.nvars,
                    terms: self.terms.iter().map(|(m, c)| (*m, c.mul(&inv))).collect(),
                }
            }
        }
    }

    pub fn mul_term(&self, c: &Coeff, t: &Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.mul(t), a.mul(c))).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        Self::from_coeff_terms(self.nvars, self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        Self::from_coeff_terms(
            self.nvars,
            self.terms
                .iter()
                .cloned()
                .chain(other.terms.iter().map(|(m, c)| (*m, c.neg()))),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        Self::from_coeff_terms(
            self.nvars,
            self.terms
                .iter()
                .flat_map(|(a, x)| other.terms.iter().map(move |(b, y)| (a.mul(b), x.mul(y)))),
        )
    }

    /// S-polynomial of two nonzero polynomials.
    pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
        let (lf, lg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
        let l = lf.lcm(lg);
        let a = f.mul_term(&f.leading_coefficient().unwrap().recip(), &l.div(lf));
        let b = g.mul_term(&g.leading_coefficient().unwrap().recip(), &l.div(lg));
        a.sub(&b)
    }

    /// Full reduction modulo nonzero divisors. Returns the remainder.
    pub fn reduce(&self, divisors: &[&Polynomial]) -> Polynomial {
        let heads: Vec<(u64, &Monomial)> = divisors
            .iter()
            .map(|g| {
                let lm = g.leading_monomial().expect("nonzero divisor");
                (lm.support_mask(), lm)
            })
            .collect();
        let mut work: BTreeMap<Monomial, Coeff> = self.terms.iter().cloned().collect();
        let mut rest = Vec::new();
        while let Some((m, c)) = work.pop_last() {
            let mask = m.support_mask();
            let hit = heads
                .iter()
                .position(|(gm, lm)| gm & !mask == 0 && lm.divides(&m));
            match hit {
                Some(k) => {
                    let g = divisors[k];
                    let q = m.div(heads[k].1);
                    let scale = c.div(g.leading_coefficient().unwrap());
                    for (gm, gc) in &g.terms[1..] {
                        let t = gm.mul(&q);
                        let e = work.entry(t).or_insert_with(Coeff::zero);
                        *e = e.sub(&scale.mul(gc));
                        if e.is_zero() {
                            work.remove(&t);
                        }
                    }
                }
                None => rest.push((m, c)),
            }
        }
        Polynomial {
            nvars: self.nvars,
            terms: rest,
        }
    }

    /// Multiplies through by the least common denominator and divides by
    /// the gcd of numerators, making the leading coefficient positive.
    pub fn integer_form(&self) -> Vec<(Monomial, BigInt)> {
        let lcm = self.terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(&c.denom()));
        let nums: Vec<BigInt> = self
            .terms
            .iter()
            .map(|(_, c)| c.numer() * (&lcm / c.denom()))
            .collect();
        let g = nums.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let sign = if self.terms.first().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        self.terms
            .iter()
            .zip(nums)
            .map(|((m, _), x)| (*m, if g.is_zero() { x } else { &sign * x / &g }))
            .collect()
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        Rendered { poly: self, names }
    }
}

struct Rendered<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            let mut factors = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(a.to_string());
            }
            for (v, &e) in m.exps[..m.nvars()].iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.names[v].clone()),
                    _ => factors.push(format!("{}^{e}", self.names[v])),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}
