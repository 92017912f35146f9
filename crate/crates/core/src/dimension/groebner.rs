//! Buchberger's algorithm with the Gebauer–Möller pair criteria. Pairs are
//! selected by smallest sugar degree, then smallest lcm (the normal
//! strategy on homogeneous input).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::int::Int;
use super::poly::{Monomial, Polynomial};
use crate::poly::Rational;
use super::{Budget, DimensionError, IdealPresentation};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerStats {
    pub pairs_reduced: usize,
    pub pairs_discarded: usize,
    pub max_degree: u32,
}

/// A reduced Gröbner basis in degrevlex, monic, sorted by increasing
/// leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub variables: Vec<String>,
    pub polys: Vec<Polynomial>,
    pub stats: GroebnerStats,
}

impl GroebnerBasis {
    pub fn is_unit_ideal(&self) -> bool {
        self.polys.iter().any(|p| p.is_unit())
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.polys.iter().filter_map(|p| p.leading_monomial())
    }

    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let divisors: Vec<&Polynomial> = self.polys.iter().collect();
        f.reduce(&divisors)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn render(&self) -> Vec<String> {
        self.polys.iter().map(|p| p.display(&self.variables).to_string()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    sugar: u32,
    lcm: Monomial,
    i: usize,
    j: usize,
}

/// Primitive integer polynomial with positive leading coefficient. The
/// run works fraction-free: normalizing rationals after every operation
/// costs far more than the occasional content division.
#[derive(Debug, Clone)]
struct IPoly {
    terms: Vec<(Monomial, Int)>,
}

impl IPoly {
    fn from_poly(p: &Polynomial) -> IPoly {
        IPoly {
            terms: p.integer_form().into_iter().map(|(m, c)| (m, Int::from(c))).collect(),
        }
    }

    fn to_poly(&self, nvars: usize) -> Polynomial {
        let lc = self.lc().to_big();
        Polynomial::from_terms(
            nvars,
            self.terms
                .iter()
                .map(|(m, c)| (*m, Rational::new(c.to_big(), lc.clone()))),
        )
    }

    /// Sorts descending, drops zeros and divides out the content.
    fn primitive(mut terms: Vec<(Monomial, Int)>) -> IPoly {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut g = Int::zero();
        for (_, c) in &terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if terms.first().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            g = g.neg();
        }
        if !g.is_one() && !g.is_zero() {
            for (_, c) in terms.iter_mut() {
                *c = c.div_exact(&g);
            }
        }
        IPoly { terms }
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &Int {
        &self.terms[0].1
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    fn s_polynomial(f: &IPoly, g: &IPoly) -> BTreeMap<Monomial, Int> {
        let l = f.lm().lcm(g.lm());
        let gg = f.lc().gcd(g.lc());
        let (a, b) = (g.lc().div_exact(&gg), f.lc().div_exact(&gg));
        let (qf, qg) = (l.div(f.lm()), l.div(g.lm()));
        let mut work: BTreeMap<Monomial, Int> = BTreeMap::new();
        for (m, c) in &f.terms[1..] {
            work.insert(m.mul(&qf), c.mul(&a));
        }
        for (m, c) in &g.terms[1..] {
            let t = m.mul(&qg);
            let e = work.entry(t).or_insert_with(Int::zero);
            *e = e.sub(&c.mul(&b));
            if e.is_zero() {
                work.remove(&t);
            }
        }
        work
    }

    fn reduce(mut work: BTreeMap<Monomial, Int>, divisors: &[&IPoly]) -> IPoly {
        let heads: Vec<(u64, &Monomial)> = divisors.iter().map(|g| (g.lm().support_mask(), g.lm())).collect();
        let mut rest: Vec<(Monomial, Int)> = Vec::new();
        let mut steps = 0usize;
        while let Some((m, c)) = work.pop_last() {
            let mask = m.support_mask();
            let Some(k) = heads.iter().position(|(gm, lm)| gm & !mask == 0 && lm.divides(&m)) else {
                rest.push((m, c));
                continue;
            };
            let g = divisors[k];
            let q = m.div(g.lm());
            let gg = g.lc().gcd(&c);
            let (scale_f, scale_g) = (g.lc().div_exact(&gg), c.div_exact(&gg));
            if !scale_f.is_one() {
                for v in work.values_mut() {
                    *v = v.mul(&scale_f);
                }
                for (_, v) in rest.iter_mut() {
                    *v = v.mul(&scale_f);
                }
            }
            for (gm, gc) in &g.terms[1..] {
                let t = gm.mul(&q);
                let e = work.entry(t).or_insert_with(Int::zero);
                *e = e.sub(&gc.mul(&scale_g));
                if e.is_zero() {
                    work.remove(&t);
                }
            }
            steps += 1;
            if steps % 100000000 == 0 {
                remove_content(&mut work, &mut rest);
            }
        }
        IPoly::primitive(rest)
    }
}

fn remove_content(work: &mut BTreeMap<Monomial, Int>, rest: &mut [(Monomial, Int)]) {
    if work.values().chain(rest.iter().map(|(_, c)| c)).all(|c| c.bits() < 64) {
        return;
    }
    let mut g = Int::zero();
    for c in work.values().chain(rest.iter().map(|(_, c)| c)) {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    for v in work.values_mut() {
        *v = v.div_exact(&g);
    }
    for (_, v) in rest.iter_mut() {
        *v = v.div_exact(&g);
    }
}

pub fn groebner_basis(ideal: &IdealPresentation, budget: &Budget) -> Result<GroebnerBasis, DimensionError> {
    let nvars = ideal.variables.len();
    let mut stats = GroebnerStats::default();
    let finish = |polys: Vec<Polynomial>, stats| GroebnerBasis {
        variables: ideal.variables.clone(),
        polys,
        stats,
    };
    let unit = |stats| Ok(finish(vec![Polynomial::one(nvars)], stats));

    let mut input: Vec<IPoly> = ideal
        .generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(IPoly::from_poly)
        .collect();
    if input.iter().any(|g| g.is_unit()) {
        return unit(stats);
    }
    input.sort_by(|a, b| a.lm().cmp(b.lm()));

    let mut polys: Vec<IPoly> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: BTreeSet<Pair> = BTreeSet::new();

    let mut pending = input.into_iter();
    loop {
        let (work, h_sugar) = if let Some(g) = pending.next() {
            let d = g.degree();
            (g.terms.into_iter().collect::<BTreeMap<_, _>>(), d)
        } else if let Some(pair) = pairs.pop_first() {
            stats.pairs_reduced += 1;
            if stats.pairs_reduced > budget.max_pairs {
                return Err(DimensionError::ResourceLimit {
                    budget: "S-pairs",
                    limit: budget.max_pairs,
                });
            }
            (IPoly::s_polynomial(&polys[pair.i], &polys[pair.j]), pair.sugar)
        } else {
            break;
        };
        let divisors: Vec<&IPoly> = (0..polys.len()).filter(|&k| active[k]).map(|k| &polys[k]).collect();
        let h = IPoly::reduce(work, &divisors);
        if h.is_zero() {
            continue;
        }
        if h.is_unit() {
            return unit(stats);
        }
        let deg = h.degree();
        stats.max_degree = stats.max_degree.max(deg);
        if deg as usize > budget.max_degree {
            return Err(DimensionError::ResourceLimit {
                budget: "degree",
                limit: budget.max_degree,
            });
        }
        sugar.push(h_sugar.max(deg));
        update(&mut polys, &sugar, &mut active, &mut pairs, h, &mut stats);
    }

    Ok(finish(interreduce(polys, active, nvars), stats))
}

/// Gebauer–Möller update: adds `h` to the basis, discarding redundant pairs.
fn update(
    polys: &mut Vec<IPoly>,
    sugar: &[u32],
    active: &mut Vec<bool>,
    pairs: &mut BTreeSet<Pair>,
    h: IPoly,
    stats: &mut GroebnerStats,
) {
    let t = polys.len();
    let lh = *h.lm();
    let candidates: Vec<(usize, Monomial, bool)> = (0..t)
        .filter(|&k| active[k])
        .map(|k| {
            let lk = polys[k].lm();
            (k, lh.lcm(lk), lh.coprime(lk))
        })
        .collect();

    // Chain criterion among the new pairs: keep (h, g) unless another new
    // pair has an lcm strictly dividing it (equal lcms keep the first).
    let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
    for (a, (k, l, coprime)) in candidates.iter().enumerate() {
        let dominated = candidates
            .iter()
            .enumerate()
            .any(|(b, (_, l2, _))| b != a && l2.divides(l) && (l2 != l || b < a));
        if dominated {
            stats.pairs_discarded += 1;
        } else {
            kept.push((*k, *l, *coprime));
        }
    }

    // Old pairs (i, j) are dropped when lm(h) divides lcm(i, j) strictly
    // against both lcm(i, h) and lcm(j, h).
    let doomed: Vec<Pair> = pairs
        .iter()
        .filter(|p| {
            lh.divides(&p.lcm) && lh.lcm(polys[p.i].lm()) != p.lcm && lh.lcm(polys[p.j].lm()) != p.lcm
        })
        .cloned()
        .collect();
    stats.pairs_discarded += doomed.len();
    for p in doomed {
        pairs.remove(&p);
    }

    // Product criterion: coprime leading monomials reduce to zero.
    for (k, l, coprime) in kept {
        if coprime {
            stats.pairs_discarded += 1;
        } else {
            let lk = polys[k].lm();
            let s = (sugar[k] + l.degree() - lk.degree()).max(sugar[t] + l.degree() - lh.degree());
            pairs.insert(Pair {
                sugar: s,
                lcm: l,
                i: k,
                j: t,
            });
        }
    }

    for k in 0..t {
        if active[k] && lh.divides(polys[k].lm()) {
            active[k] = false;
        }
    }
    polys.push(h);
    active.push(true);
}

fn interreduce(polys: Vec<IPoly>, active: Vec<bool>, nvars: usize) -> Vec<Polynomial> {
    let mut basis: Vec<IPoly> = polys
        .into_iter()
        .zip(active)
        .filter_map(|(p, a)| a.then_some(p))
        .collect();
    // Minimal basis: no leading monomial divides another.
    basis.sort_by(|a, b| a.lm().cmp(b.lm()));
    let mut minimal: Vec<IPoly> = Vec::new();
    for p in basis {
        if !minimal.iter().any(|q| q.lm().divides(p.lm())) {
            minimal.push(p);
        }
    }
    (0..minimal.len())
        .map(|k| {
            let others: Vec<&IPoly> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, q)| q)
                .collect();
            // Leading monomials are pairwise non-dividing, so only the tail
            // can reduce; reducing the whole polynomial is equivalent.
            let work = minimal[k].terms.iter().cloned().collect();
            IPoly::reduce(work, &others).to_poly(nvars)
        })
        .collect()
}
