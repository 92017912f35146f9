//! Point counting over `F_p`. The count is exact; the search substitutes
//! variables that some generator expresses linearly, branches only over
//! roots of univariate generators, and stops as soon as every generator
//! vanishes identically (the remaining variables are then free).
//!
//! A zero set of dimension `d` has about `c * p^d` points for a small
//! constant `c`, so `round(log_p(count))` estimates `d`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Certificate, DimResult, Dimension, DimensionError, IdealPresentation, Method};

pub const DEFAULT_PRIMES: [u64; 3] = [101, 103, 107];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FpConfig {
    pub max_variables: usize,
    /// Branching levels evaluated in parallel.
    pub parallel_depth: usize,
}

impl Default for FpConfig {
    fn default() -> Self {
        FpConfig {
            max_variables: 8,
            parallel_depth: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCount {
    pub prime: u64,
    pub count: u128,
    pub estimate: Dimension,
}

/// Dimension estimate from point counts over each prime; the majority
/// estimate wins and disagreement marks the result unreliable.
pub fn fp_dimension_estimate(
    ideal: &IdealPresentation,
    primes: &[u64],
    cfg: &FpConfig,
) -> Result<DimResult, DimensionError> {
    if primes.is_empty() {
        return Err(DimensionError::NoPrimes);
    }
    let counts = primes
        .par_iter()
        .map(|&p| {
            let count = count_points(ideal, p, cfg)?;
            Ok(PrimeCount {
                prime: p,
                count,
                estimate: estimate(count, p),
            })
        })
        .collect::<Result<Vec<_>, DimensionError>>()?;
    let mut tally: BTreeMap<Dimension, usize> = BTreeMap::new();
    for c in &counts {
        *tally.entry(c.estimate).or_default() += 1;
    }
    // Most votes; ties go to the smaller estimate.
    let (dimension, _) = tally
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(d, n)| (*d, *n))
        .expect("at least one prime");
    Ok(DimResult {
        dimension,
        method: Method::FpCount,
        certificate: Certificate::PointCounts {
            reliable: tally.len() == 1,
            counts,
        },
    })
}

fn estimate(count: u128, p: u64) -> Dimension {
    if count == 0 {
        return Dimension::Empty;
    }
    let d = (count as f64).ln() / (p as f64).ln();
    Dimension::Finite(d.round().max(0.0) as usize)
}

/// Number of `F_p`-points of the zero set.
pub fn count_points(ideal: &IdealPresentation, p: u64, cfg: &FpConfig) -> Result<u128, DimensionError> {
    let n = ideal.nvars();
    if n > cfg.max_variables || n > 64 {
        return Err(DimensionError::TooManyVariables {
            count: n,
            max: cfg.max_variables.min(64),
        });
    }
    if !is_prime(p) {
        return Err(DimensionError::NotPrime(p));
    }
    if p >= 1 << 31 {
        return Err(DimensionError::BadPrime {
            prime: p,
            reason: "larger than 2^31".into(),
        });
    }
    if let Some(order) = ideal.jet_order {
        if p <= order as u64 {
            return Err(DimensionError::PrimeTooSmall { prime: p, order });
        }
    }
    let polys = ideal
        .generators
        .iter()
        .map(|g| reduce_mod(g, p))
        .collect::<Result<Vec<_>, _>>()?;
    let free = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let ctx = Ctx { p, cfg: *cfg };
    Ok(ctx.count(polys, free, 0))
}

fn reduce_mod(g: &super::Polynomial, p: u64) -> Result<FpPoly, DimensionError> {
    let big_p = BigInt::from(p);
    let mut terms = BTreeMap::new();
    for (m, c) in g.terms() {
        let den = c.denom().mod_floor(&big_p);
        if den.is_zero() {
            return Err(DimensionError::BadPrime {
                prime: p,
                reason: format!("divides the coefficient denominator {}", c.denom()),
            });
        }
        let num = c.numer().mod_floor(&big_p).to_u64().unwrap();
        let den = den.to_u64().unwrap();
        let v = num * inverse(den, p) % p;
        if v != 0 {
            terms.insert(m.exponents().to_vec(), v);
        }
    }
    if let Some((_, lead)) = g.integer_form().first() {
        if lead.mod_floor(&big_p).is_zero() {
            return Err(DimensionError::BadPrime {
                prime: p,
                reason: format!("divides the leading coefficient {lead} of a cleared generator"),
            });
        }
    }
    Ok(FpPoly { terms })
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inverse(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Polynomial over `F_p`, exponent vector to nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
struct FpPoly {
    terms: BTreeMap<Vec<u32>, u64>,
}

impl FpPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|e| *e == 0)
    }

    fn support_mask(&self) -> u64 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().enumerate().filter(|(_, x)| **x > 0).map(|(i, _)| i))
            .fold(0, |acc, i| acc | 1 << i)
    }

    fn add_term(&mut self, e: Vec<u32>, c: u64, p: u64) {
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                if c % p != 0 {
                    slot.insert(c % p);
                }
            }
            Entry::Occupied(mut slot) => {
                let s = (*slot.get() + c) % p;
                if s == 0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = s;
                }
            }
        }
    }

    fn mul(&self, other: &FpPoly, p: u64) -> FpPoly {
        let mut out = FpPoly { terms: BTreeMap::new() };
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(s, t)| s + t).collect();
                out.add_term(e, x * y % p, p);
            }
        }
        out
    }

    /// Replaces `x_v` by `value`, which must not involve `x_v`.
    fn substitute(&self, v: usize, value: &FpPoly, p: u64) -> FpPoly {
        let mut powers: Vec<FpPoly> = Vec::new();
        let mut out = FpPoly { terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let k = e[v] as usize;
            let mut rest = e.clone();
            rest[v] = 0;
            if k == 0 {
                out.add_term(rest, *c, p);
                continue;
            }
            while powers.len() < k {
                let next = match powers.last() {
                    None => value.clone(),
                    Some(last) => last.mul(value, p),
                };
                powers.push(next);
            }
            for (f, d) in &powers[k - 1].terms {
                let e2: Vec<u32> = rest.iter().zip(f).map(|(a, b)| a + b).collect();
                out.add_term(e2, c * d % p, p);
            }
        }
        out
    }

    fn constant(n: usize, c: u64) -> FpPoly {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(vec![0; n], c);
        }
        FpPoly { terms }
    }

    /// If `self = c * x_v + rest` with `rest` free of `x_v`, returns `(c, rest)`.
    fn linear_in(&self, v: usize) -> Option<(u64, FpPoly)> {
        let mut coeff = None;
        let mut rest = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[v] == 0 {
                rest.insert(e.clone(), *c);
            } else if e[v] == 1 && e.iter().enumerate().all(|(i, x)| i == v || *x == 0) {
                coeff = Some(*c);
            } else {
                return None;
            }
        }
        coeff.map(|c| (c, FpPoly { terms: rest }))
    }

    fn eval_univariate(&self, v: usize, a: u64, p: u64) -> u64 {
        self.terms
            .iter()
            .fold(0, |acc, (e, c)| (acc + c * pow_mod(a, e[v] as u64, p)) % p)
    }
}

struct Ctx {
    p: u64,
    cfg: FpConfig,
}

impl Ctx {
    fn count(&self, polys: Vec<FpPoly>, free: u64, depth: usize) -> u128 {
        let p = self.p;
        let polys: Vec<FpPoly> = polys.into_iter().filter(|f| !f.is_zero()).collect();
        if polys.iter().any(|f| f.is_nonzero_constant()) {
            return 0;
        }
        if polys.is_empty() {
            return (p as u128).pow(free.count_ones());
        }
        let n = polys[0].terms.keys().next().unwrap().len();

        // A generator linear in some variable with constant coefficient
        // determines that variable.
        for f in &polys {
            let mask = f.support_mask();
            for v in (0..n).filter(|v| mask & (1 << v) != 0) {
                if let Some((c, rest)) = f.linear_in(v) {
                    let scale = (p - inverse(c, p)) % p;
                    let value = FpPoly {
                        terms: rest.terms.into_iter().map(|(e, x)| (e, x * scale % p)).collect(),
                    };
                    let next = polys.iter().map(|g| g.substitute(v, &value, p)).collect();
                    return self.count(next, free & !(1 << v), depth);
                }
            }
        }

        // Univariate generator: branch over its roots only.
        let univariate = polys.iter().find_map(|f| {
            let mask = f.support_mask();
            (mask.count_ones() == 1).then(|| (f, mask.trailing_zeros() as usize))
        });
        let (v, values): (usize, Vec<u64>) = match univariate {
            Some((f, v)) => (v, (0..p).filter(|&a| f.eval_univariate(v, a, p) == 0).collect()),
            None => {
                let mut occurrences = vec![0usize; n];
                for f in &polys {
                    let mask = f.support_mask();
                    for (v, o) in occurrences.iter_mut().enumerate() {
                        if mask & (1 << v) != 0 {
                            *o += 1;
                        }
                    }
                }
                let v = (0..n).max_by(|a, b| occurrences[*a].cmp(&occurrences[*b]).then(b.cmp(a))).unwrap();
                (v, (0..p).collect())
            }
        };
        let branch = |a: &u64| {
            let value = FpPoly::constant(n, *a);
            let next = polys.iter().map(|g| g.substitute(v, &value, p)).collect();
            self.count(next, free & !(1 << v), depth + 1)
        };
        if depth < self.cfg.parallel_depth {
            values.par_iter().map(branch).sum()
        } else {
            values.iter().map(branch).sum()
        }
    }
}
