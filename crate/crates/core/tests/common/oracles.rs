//! Point counts of jet schemes of hypersurfaces over F_p, written without
//! any engine code.
//!
//! `arc_count` lifts arcs one t-adic digit at a time: a base point where
//! `f` is smooth contributes a fixed power of `p` (Hensel), a singular one
//! is recentred with `z -> a + t z` and recursed on. `brute_jet_count`
//! enumerates every truncated arc and is only usable for tiny inputs; the
//! two are checked against each other.

use std::collections::BTreeMap;

/// `Σ c · t^k · z^e` over F_p.
#[derive(Clone, Debug)]
pub struct TPoly {
    pub p: u64,
    pub n: usize,
    pub terms: BTreeMap<(u32, Vec<u32>), u64>,
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn binomial(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

impl TPoly {
    /// Integer polynomial `Σ c z^e` reduced mod `p`.
    pub fn from_integer(p: u64, n: usize, terms: &[(i64, Vec<u32>)]) -> Self {
        let mut out = TPoly {
            p,
            n,
            terms: BTreeMap::new(),
        };
        for (c, e) in terms {
            assert_eq!(e.len(), n);
            out.add((0, e.clone()), c.rem_euclid(p as i64) as u64);
        }
        out
    }

    fn add(&mut self, key: (u32, Vec<u32>), c: u64) {
        let p = self.p;
        let entry = self.terms.entry(key.clone()).or_insert(0);
        *entry = (*entry + c) % p;
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    fn value_at_t0(&self, a: &[u64]) -> u64 {
        let p = self.p;
        self.terms
            .iter()
            .filter(|((k, _), _)| *k == 0)
            .fold(0, |acc, ((_, e), c)| {
                let v = e
                    .iter()
                    .zip(a)
                    .fold(*c, |v, (&ei, &ai)| (v as u128 * pow_mod(ai, ei as u64, p) as u128 % p as u128) as u64);
                (acc + v) % p
            })
    }

    fn gradient_nonzero_at_t0(&self, a: &[u64]) -> bool {
        let p = self.p;
        (0..self.n).any(|i| {
            let mut d = 0u64;
            for ((k, e), c) in &self.terms {
                if *k != 0 || e[i] == 0 {
                    continue;
                }
                let mut v = (*c as u128 * (e[i] as u64 % p) as u128 % p as u128) as u64;
                for (j, (&ej, &aj)) in e.iter().zip(a).enumerate() {
                    let ex = if j == i { ej - 1 } else { ej };
                    v = (v as u128 * pow_mod(aj, ex as u64, p) as u128 % p as u128) as u64;
                }
                d = (d + v) % p;
            }
            d != 0
        })
    }

    /// `G(t, a + t z)`.
    fn recentre(&self, a: &[u64]) -> TPoly {
        let p = self.p;
        let mut out = TPoly {
            p,
            n: self.n,
            terms: BTreeMap::new(),
        };
        for ((k, e), c) in &self.terms {
            // Product over variables of Σ_j C(e_i, j) a_i^(e_i - j) t^j z_i^j.
            let mut partial: Vec<(u32, Vec<u32>, u64)> = vec![(*k, vec![0; self.n], *c)];
            for i in 0..self.n {
                let mut next = Vec::new();
                for (tk, ze, cc) in &partial {
                    for j in 0..=e[i] {
                        let coef = binomial(e[i], j) % p * pow_mod(a[i], (e[i] - j) as u64, p) % p;
                        if coef == 0 {
                            continue;
                        }
                        let mut ze2 = ze.clone();
                        ze2[i] = j;
                        next.push((tk + j, ze2, (*cc as u128 * coef as u128 % p as u128) as u64));
                    }
                }
                partial = next;
            }
            for (tk, ze, cc) in partial {
                out.add((tk, ze), cc);
            }
        }
        out
    }

    fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|(k, _)| *k).min()
    }

    fn divide_t(&self, v: u32) -> TPoly {
        TPoly {
            p: self.p,
            n: self.n,
            terms: self.terms.iter().map(|((k, e), c)| ((k - v, e.clone()), *c)).collect(),
        }
    }
}

fn pow_u128(p: u64, e: i64) -> u128 {
    assert!(e >= 0);
    (p as u128).pow(e as u32)
}

/// Number of `z ∈ (F_p[t]/t^L)^n` with `G(t, z) ≡ 0 mod t^e`.
fn count(g: &TPoly, e: i64, l: i64) -> u128 {
    let (p, n) = (g.p, g.n as i64);
    if e <= 0 {
        return pow_u128(p, n * l);
    }
    if l == 0 {
        return u128::from(g.terms.iter().all(|((k, z), _)| z.iter().any(|&x| x > 0) || *k as i64 >= e));
    }
    let mut total = 0u128;
    let mut a = vec![0u64; g.n];
    loop {
        total += contribution(g, e, l, &a);
        // Next point of F_p^n.
        let mut i = 0;
        loop {
            if i == g.n {
                return total;
            }
            a[i] += 1;
            if a[i] < p {
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

fn contribution(g: &TPoly, e: i64, l: i64, a: &[u64]) -> u128 {
    let (p, n) = (g.p, g.n as i64);
    if g.value_at_t0(a) != 0 {
        return 0;
    }
    if e == 1 {
        return pow_u128(p, n * (l - 1));
    }
    if g.gradient_nonzero_at_t0(a) && e <= l {
        return pow_u128(p, n * (l - 1) - (e - 1));
    }
    let h = g.recentre(a);
    match h.valuation() {
        None => pow_u128(p, n * (l - 1)),
        Some(v) if v as i64 >= e => pow_u128(p, n * (l - 1)),
        Some(v) => count(&h.divide_t(v), e - v as i64, l - 1),
    }
}

/// `#J_m(V(f))(F_p)`.
pub fn arc_count(f: &TPoly, m: usize) -> u128 {
    count(f, m as i64 + 1, m as i64 + 1)
}

/// `#{γ ∈ J_m(V(f))(F_p) : γ(0) = a}`.
pub fn arc_count_over(f: &TPoly, m: usize, a: &[u64]) -> u128 {
    contribution(f, m as i64 + 1, m as i64 + 1, a)
}

/// Enumerates all `p^(n(m+1))` truncated arcs.
pub fn brute_jet_count(f: &TPoly, m: usize) -> u128 {
    let (p, n) = (f.p, f.n);
    let len = m + 1;
    let total = (p as u128).pow((n * len) as u32);
    let mut hits = 0u128;
    for code in 0..total {
        let mut c = code;
        let arcs: Vec<Vec<u64>> = (0..n)
            .map(|_| {
                (0..len)
                    .map(|_| {
                        let d = (c % p as u128) as u64;
                        c /= p as u128;
                        d
                    })
                    .collect()
            })
            .collect();
        let mut value = vec![0u64; len];
        for ((k, e), coef) in &f.terms {
            let mut series = vec![0u64; len];
            if (*k as usize) < len {
                series[*k as usize] = *coef;
            }
            for (i, &ei) in e.iter().enumerate() {
                for _ in 0..ei {
                    series = mul_trunc(&series, &arcs[i], p);
                }
            }
            for (v, s) in value.iter_mut().zip(&series) {
                *v = (*v + s) % p;
            }
        }
        if value.iter().all(|&v| v == 0) {
            hits += 1;
        }
    }
    hits
}

fn mul_trunc(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len();
    let mut out = vec![0u64; len];
    for i in 0..len {
        for j in 0..len - i {
            out[i + j] = (out[i + j] + a[i] * b[j]) % p;
        }
    }
    out
}

/// `round(log_p count)`, `None` for zero.
pub fn log_estimate(count: u128, p: u64) -> Option<usize> {
    (count > 0).then(|| ((count as f64).ln() / (p as f64).ln()).round() as usize)
}
