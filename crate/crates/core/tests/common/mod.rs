//! Shared by the acceptance targets of every crate in the workspace and by
//! the core integration tests.
#![allow(dead_code)]

pub mod criteria;
pub mod oracles;

use logjet_core::poly::{JetMode, JetMonomial, JetPoly, Rational, RingDescriptor};
use logjet_core::{AffineMonoid, Chart, LatticeVector, LogStructure};
use rand::Rng;

pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    let mut n = rng.gen_range(-5i64..=5);
    if n == 0 {
        n = 1;
    }
    Rational::new(n.into(), rng.gen_range(1i64..=3).into())
}

/// A nonzero polynomial in `k[x_1..x_n]` of total degree at most `max_deg`.
pub fn random_base_poly<R: Rng>(rng: &mut R, n: usize, max_deg: u32, max_terms: usize) -> JetPoly {
    let ring = RingDescriptor::base(n);
    loop {
        let mut f = JetPoly::zero(ring);
        for _ in 0..rng.gen_range(1..=max_terms) {
            let deg = rng.gen_range(0..=max_deg);
            let mut e = vec![0i32; n];
            for _ in 0..deg {
                e[rng.gen_range(0..n)] += 1;
            }
            f = &f + &JetPoly::term(ring, rational(rng), JetMonomial::from_parts(e, Vec::new()));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

/// A random element of `k[x^{±1}][u]` of order `m`.
pub fn random_log_element<R: Rng>(rng: &mut R, n: usize, m: usize, max_terms: usize) -> JetPoly {
    let ring = RingDescriptor::new(n, m, JetMode::Log);
    let mut f = JetPoly::zero(ring);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let base: Vec<i32> = (0..n).map(|_| rng.gen_range(-2..=3)).collect();
        let jets: Vec<u32> = (0..n * m).map(|_| if rng.gen_bool(0.3) { rng.gen_range(1..=2) } else { 0 }).collect();
        f = &f + &JetPoly::term(ring, rational(rng), JetMonomial::from_parts(base, jets));
    }
    f
}

/// A chart as data, so the same description can go through the library or
/// through a chart file.
#[derive(Debug, Clone)]
pub struct ChartSpec {
    pub name: &'static str,
    pub rank: usize,
    pub generators: Vec<Vec<i64>>,
    pub equations: Vec<String>,
    pub log_structure: LogStructure,
}

impl ChartSpec {
    pub fn orthant(name: &'static str, n: usize, equations: &[&str]) -> Self {
        ChartSpec {
            name,
            rank: n,
            generators: (0..n).map(|i| LatticeVector::unit(n, i).into_inner()).collect(),
            equations: equations.iter().map(|s| s.to_string()).collect(),
            log_structure: LogStructure::Standard,
        }
    }

    pub fn affine(name: &'static str, n: usize, equations: &[&str]) -> Self {
        ChartSpec {
            log_structure: LogStructure::Trivial,
            ..Self::orthant(name, n, equations)
        }
    }

    pub fn chart(&self) -> Chart {
        let monoid = AffineMonoid::new(
            self.rank,
            self.generators.iter().map(|g| LatticeVector::new(g.clone())).collect(),
        )
        .expect("valid monoid");
        let eqs: Vec<&str> = self.equations.iter().map(String::as_str).collect();
        Chart::from_strings(monoid, &eqs, self.log_structure).expect("valid chart")
    }
}

/// Integer description `(coefficient, exponents)` of a base polynomial, as
/// the oracles take it.
pub fn integer_terms(f: &JetPoly) -> Vec<(i64, Vec<u32>)> {
    f.terms()
        .map(|(m, c)| {
            assert!(c.is_integer(), "oracle needs integer coefficients");
            let c: i64 = c.to_integer().try_into().expect("small coefficient");
            (c, m.base_exponents().iter().map(|&e| u32::try_from(e).expect("polynomial")).collect())
        })
        .collect()
}
