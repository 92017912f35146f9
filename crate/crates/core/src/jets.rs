//! The jet derivation `d` in ordinary and log modes, the truncated power
//! series substitution that it must agree with, and jet ideals of charts.
//!
//! Ordinary mode: `d x_i^(j) = x_i^(j+1)` with `x_i^(m) ↦ 0`, extended to
//! Laurent polynomials by `d(x_i^-1) = -x_i^-2 x_i^(1)`.
//!
//! Log mode, with `u[i,j]` standing for `x_i^(j) / x_i`:
//! `d(x^a) = x^a Σ a_i u[i,1]` and `d u[i,j] = u[i,j+1] - u[i,1] u[i,j]`,
//! where `u[i,m+1] = 0`.
//!
//! Jet ideals are generated by `d^j f` (not `d^j f / j!`); the substitution
//! oracle returns the coefficients of `t^j / j!` to match.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::chart::{Chart, LogStructure};
use crate::monoid::AffineMonoid;
use crate::poly::{integer, JetMode, JetMonomial, JetPoly, Rational, RingDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("expected a polynomial in a {expected} ring, got {found}")]
    ModeMismatch { expected: JetMode, found: RingDescriptor },
    #[error("substitution needs a base polynomial (no jet variables)")]
    NotBase,
    #[error("leading term of x{0} is not invertible")]
    NonInvertibleLeadingTerm(usize),
    #[error("log jets need a chart with the standard log structure")]
    TrivialLogStructure,
    #[error("not a refinement: {0}")]
    NotARefinement(String),
    #[error(transparent)]
    Chart(#[from] crate::chart::ChartError),
    #[error("derivation of equation {equation} at order {order} disagrees with the substitution expansion")]
    OracleMismatch { equation: usize, order: usize },
}

/// Ordinary jet derivation in a ring with order `m = f.ring().m`.
pub fn derive_ordinary(f: &JetPoly) -> Result<JetPoly, JetError> {
    let ring = f.ring();
    if ring.mode != JetMode::Ordinary {
        return Err(JetError::ModeMismatch {
            expected: JetMode::Ordinary,
            found: ring,
        });
    }
    let mut out = JetPoly::zero(ring);
    for (mono, c) in f.terms() {
        let base = mono.base_exponents();
        let jets = mono.jet_exponents();
        if ring.m >= 1 {
            for (k, &a) in base.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let mut b = base.to_vec();
                b[k] -= 1;
                let mut jj = jets.to_vec();
                jj[ring.jet_slot(k + 1, 1)] += 1;
                out.add_term(JetMonomial::from_parts(b, jj), c * integer(a as i64));
            }
        }
        for (slot, &e) in jets.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let (i, j) = ring.jet_of_slot(slot);
            if j == ring.m {
                continue;
            }
            let mut jj = jets.to_vec();
            jj[slot] -= 1;
            jj[ring.jet_slot(i, j + 1)] += 1;
            out.add_term(JetMonomial::from_parts(base.to_vec(), jj), c * integer(e as i64));
        }
    }
    Ok(out)
}

/// Log jet derivation on `k[P][u]`.
pub fn derive_log(f: &JetPoly) -> Result<JetPoly, JetError> {
    let ring = f.ring();
    if ring.mode != JetMode::Log {
        return Err(JetError::ModeMismatch {
            expected: JetMode::Log,
            found: ring,
        });
    }
    let mut out = JetPoly::zero(ring);
    if ring.m == 0 {
        return Ok(out);
    }
    for (mono, c) in f.terms() {
        let base = mono.base_exponents();
        let jets = mono.jet_exponents();
        // x^a ↦ x^a Σ a_i u[i,1]
        for (k, &a) in base.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut jj = jets.to_vec();
            jj[ring.jet_slot(k + 1, 1)] += 1;
            out.add_term(JetMonomial::from_parts(base.to_vec(), jj), c * integer(a as i64));
        }
        // u[i,j] ↦ u[i,j+1] - u[i,1] u[i,j]
        for (slot, &e) in jets.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let (i, j) = ring.jet_of_slot(slot);
            let coeff = c * integer(e as i64);
            if j < ring.m {
                let mut jj = jets.to_vec();
                jj[slot] -= 1;
                jj[ring.jet_slot(i, j + 1)] += 1;
                out.add_term(JetMonomial::from_parts(base.to_vec(), jj), coeff.clone());
            }
            // u^e ↦ e u^(e-1) (-u[i,1] u[i,j]) = -e u[i,1] u^e
            let mut jj = jets.to_vec();
            jj[ring.jet_slot(i, 1)] += 1;
            out.add_term(JetMonomial::from_parts(base.to_vec(), jj), -coeff);
        }
    }
    Ok(out)
}

/// Dispatches on the ring's mode.
pub fn derive(f: &JetPoly) -> JetPoly {
    match f.ring().mode {
        JetMode::Ordinary => derive_ordinary(f),
        JetMode::Log => derive_log(f),
    }
    .expect("mode matches dispatch")
}

/// `[f, d f, ..., d^m f]` for `f` lifted into the order-`m` ring of `mode`.
pub fn iterated_derivatives(f: &JetPoly, m: usize, mode: JetMode) -> Vec<JetPoly> {
    let ring = RingDescriptor::new(f.ring().n, m, mode);
    let mut current = if f.is_base() {
        f.with_mode(mode).lift(ring)
    } else {
        assert_eq!(f.ring().mode, mode);
        f.lift(ring)
    };
    let mut out = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let next = if j < m { Some(derive(&current)) } else { None };
        out.push(current);
        match next {
            Some(n) => current = n,
            None => break,
        }
    }
    out
}

/// Truncated power series `Σ_k c_k t^k` modulo `t^{m+1}`.
#[derive(Clone)]
struct Series {
    coeffs: Vec<JetPoly>,
}

impl Series {
    fn mul(&self, other: &Series) -> Series {
        let len = self.coeffs.len();
        let ring = self.coeffs[0].ring();
        let mut coeffs = vec![JetPoly::zero(ring); len];
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate().take(len - a) {
                if !cb.is_zero() {
                    coeffs[a + b] = &coeffs[a + b] + &(ca * cb);
                }
            }
        }
        Series { coeffs }
    }

    fn constant(ring: RingDescriptor, len: usize, c: JetPoly) -> Series {
        let mut coeffs = vec![JetPoly::zero(ring); len];
        coeffs[0] = c;
        Series { coeffs }
    }

    fn pow(&self, e: u32) -> Series {
        let ring = self.coeffs[0].ring();
        let mut acc = Series::constant(ring, self.coeffs.len(), JetPoly::one(ring));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

fn factorial(k: usize) -> Rational {
    Rational::from_integer((1..=k).fold(BigInt::one(), |acc, x| acc * BigInt::from(x)))
}

/// Expands `f(x(t))` for the universal jet, where in ordinary mode
/// `x_i(t) = Σ_j x_i^(j) t^j/j!` and in log mode
/// `x_i(t) = x_i (1 + Σ_{j>0} u[i,j] t^j/j!)`, and returns the coefficients
/// `c_0..c_m` of `t^j/j!`. Negative powers are expanded as geometric series.
pub fn expand_by_substitution(f: &JetPoly, m: usize, mode: JetMode) -> Result<Vec<JetPoly>, JetError> {
    if !f.is_base() {
        return Err(JetError::NotBase);
    }
    let n = f.ring().n;
    let ring = RingDescriptor::new(n, m, mode);
    let len = m + 1;
    let mut direct = Vec::with_capacity(n);
    let mut inverse = Vec::with_capacity(n);
    for i in 1..=n {
        let xi = JetPoly::var(ring, i);
        let mut coeffs = vec![xi.clone()];
        for j in 1..=m {
            let jet = match mode {
                JetMode::Ordinary => JetPoly::jet_var(ring, i, j),
                JetMode::Log => &xi * &JetPoly::jet_var(ring, i, j),
            };
            coeffs.push(jet.scale(&(Rational::one() / factorial(j))));
        }
        let series = Series { coeffs };
        // x_i(t)^{-1} = x_i^{-1} Σ_k (-s)^k with s = x_i(t)/x_i - 1.
        let mut inv_x = JetPoly::zero(ring);
        inv_x.add_term(
            JetMonomial::from_parts(
                {
                    let mut b = vec![0; n];
                    b[i - 1] = -1;
                    b
                },
                vec![0; ring.jet_count()],
            ),
            Rational::one(),
        );
        let mut neg_s = series.clone();
        neg_s.coeffs[0] = JetPoly::zero(ring);
        for c in neg_s.coeffs.iter_mut() {
            *c = -&(&*c * &inv_x);
        }
        let mut geom = Series::constant(ring, len, JetPoly::one(ring));
        let mut power = geom.clone();
        for _ in 1..len {
            power = power.mul(&neg_s);
            for (g, p) in geom.coeffs.iter_mut().zip(&power.coeffs) {
                *g = &*g + p;
            }
        }
        let inv_series = Series::constant(ring, len, inv_x).mul(&geom);
        direct.push(series);
        inverse.push(inv_series);
    }
    let mut total = Series::constant(ring, len, JetPoly::zero(ring));
    for (mono, c) in f.terms() {
        let mut t = Series::constant(ring, len, JetPoly::constant(ring, c.clone()));
        for (k, &e) in mono.base_exponents().iter().enumerate() {
            if e > 0 {
                t = t.mul(&direct[k].pow(e as u32));
            } else if e < 0 {
                t = t.mul(&inverse[k].pow((-e) as u32));
            }
        }
        for (a, b) in total.coeffs.iter_mut().zip(&t.coeffs) {
            *a = &*a + b;
        }
    }
    Ok(total
        .coeffs
        .into_iter()
        .enumerate()
        .map(|(j, c)| c.scale(&factorial(j)))
        .collect())
}

/// Replaces `u[i,j]` by `x_i^(j) x_i^-1`, landing in the ordinary Laurent
/// ring of the same order.
pub fn specialize_log_to_ordinary(g: &JetPoly) -> Result<JetPoly, JetError> {
    let ring = g.ring();
    if ring.mode != JetMode::Log {
        return Err(JetError::ModeMismatch {
            expected: JetMode::Log,
            found: ring,
        });
    }
    let target = ring.with_mode(JetMode::Ordinary);
    let mut out = JetPoly::zero(target);
    for (mono, c) in g.terms() {
        let mut base = mono.base_exponents().to_vec();
        let jets = mono.jet_exponents().to_vec();
        for (slot, &e) in jets.iter().enumerate() {
            let (i, _) = ring.jet_of_slot(slot);
            base[i - 1] -= e as i32;
        }
        out.add_term(JetMonomial::from_parts(base, jets), c.clone());
    }
    Ok(out)
}

/// One generator `d^order f_equation` of a jet ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetGenerator {
    pub equation: usize,
    pub order: usize,
    pub poly: JetPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetIdeal {
    pub ring: RingDescriptor,
    pub generators: Vec<JetGenerator>,
    pub source: Chart,
}

impl JetIdeal {
    pub fn polys(&self) -> impl Iterator<Item = &JetPoly> {
        self.generators.iter().map(|g| &g.poly)
    }
}

/// How often [`jet_ideal`] re-derives generators through the substitution
/// oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verification {
    Always,
    /// Check every `n`-th equation.
    Every(usize),
    Never,
}

impl Default for Verification {
    fn default() -> Self {
        if cfg!(debug_assertions) {
            Verification::Always
        } else {
            Verification::Every(4)
        }
    }
}

/// Generators `d^j f_i`, `0 <= j <= m`, of `J_m(X)` (ordinary) or of the
/// log jet scheme `J_m(X)` inside `Spec k[P][u]` (log).
pub fn jet_ideal(chart: &Chart, m: usize, mode: JetMode) -> Result<JetIdeal, JetError> {
    jet_ideal_with(chart, m, mode, Verification::default())
}

pub fn jet_ideal_with(chart: &Chart, m: usize, mode: JetMode, verify: Verification) -> Result<JetIdeal, JetError> {
    if mode == JetMode::Log && chart.log_structure() == LogStructure::Trivial {
        return Err(JetError::TrivialLogStructure);
    }
    let ring = RingDescriptor::new(chart.ambient_rank(), m, mode);
    let mut generators = Vec::with_capacity(chart.equations().len() * (m + 1));
    for (i, f) in chart.equations().iter().enumerate() {
        let derivs = iterated_derivatives(f, m, mode);
        let check = match verify {
            Verification::Always => true,
            Verification::Every(k) => i % k.max(1) == 0,
            Verification::Never => false,
        };
        if check {
            let oracle = expand_by_substitution(f, m, mode)?;
            if let Some(order) = (0..=m).find(|&j| oracle[j] != derivs[j]) {
                return Err(JetError::OracleMismatch { equation: i, order });
            }
        }
        generators.extend(derivs.into_iter().enumerate().map(|(order, poly)| JetGenerator {
            equation: i,
            order,
            poly,
        }));
    }
    Ok(JetIdeal {
        ring,
        generators,
        source: chart.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementReport {
    pub holds: bool,
    pub generators_compared: usize,
    /// `(equation, order, over P, over Q)` for the first differing generator.
    pub first_discrepancy: Option<(usize, usize, String, String)>,
}

/// For `P ⊂ Q` with the same group, rebuilds the chart over `Q` with the
/// same basis monomials and equations and compares the log jet generators
/// term by term.
pub fn refinement_pullback_check(chart: &Chart, q: &AffineMonoid, m: usize) -> Result<RefinementReport, JetError> {
    let p = chart.monoid();
    if q.rank() != p.rank() {
        return Err(JetError::NotARefinement(format!(
            "ambient ranks differ ({} vs {})",
            p.rank(),
            q.rank()
        )));
    }
    if let Some(g) = p.generators().iter().find(|g| !q.contains(g)) {
        return Err(JetError::NotARefinement(format!("generator {g} of P is not in Q")));
    }
    let refined = Chart::with_basis(
        q.clone(),
        chart.basis().to_vec(),
        chart.equations().to_vec(),
        LogStructure::Standard,
    )?;
    let over_p = jet_ideal(chart, m, JetMode::Log)?;
    let over_q = jet_ideal(&refined, m, JetMode::Log)?;
    let first_discrepancy = over_p
        .generators
        .iter()
        .zip(&over_q.generators)
        .find(|(a, b)| a.poly != b.poly)
        .map(|(a, b)| (a.equation, a.order, a.poly.to_string(), b.poly.to_string()));
    let holds = first_discrepancy.is_none() && over_p.generators.len() == over_q.generators.len();
    Ok(RefinementReport {
        holds,
        generators_compared: over_p.generators.len(),
        first_discrepancy,
    })
}
