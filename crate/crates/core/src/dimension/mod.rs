//! Krull dimensions of affine zero sets: exact via reduced Gröbner bases,
//! and an independent estimate by counting points over prime fields.

mod coeff;
mod fp;
mod groebner;
mod int;
mod poly;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use coeff::Coeff;
pub use fp::{count_points, fp_dimension_estimate, FpConfig, PrimeCount, DEFAULT_PRIMES};
pub use groebner::{groebner_basis, GroebnerBasis, GroebnerStats};
pub use poly::{Monomial, Polynomial};

use crate::poly::{parse_poly, JetMode, JetPoly, ParseError, RingDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimensionError {
    #[error("resource limit: {budget} budget of {limit} exceeded")]
    ResourceLimit { budget: &'static str, limit: usize },
    #[error("generator {index} has negative exponents but the presentation inverts nothing; refusing to clear denominators")]
    LaurentWithoutLocalization { index: usize },
    #[error("prime {prime} does not exceed the jet order {order}")]
    PrimeTooSmall { prime: u64, order: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {prime} is unusable: {reason}")]
    BadPrime { prime: u64, reason: String },
    #[error("{count} variables is too many for point counting (limit {max})")]
    TooManyVariables { count: usize, max: usize },
    #[error("no primes given")]
    NoPrimes,
    #[error("bad budget {0:?}: expected \"pairs,degree\"")]
    BadBudget(String),
    #[error("generator {index}: {source}")]
    Parse {
        index: usize,
        #[source]
        source: ParseError,
    },
}

/// Gröbner budgets. Exceeding either is an error, never a wrong answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_degree: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 50_000,
            max_degree: 40,
        }
    }
}

impl FromStr for Budget {
    type Err = DimensionError;

    /// `"pairs,degree"`, e.g. `"50000,40"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DimensionError::BadBudget(s.to_string());
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        Ok(Budget {
            max_pairs: a.trim().parse().map_err(|_| bad())?,
            max_degree: b.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Input to the engine: named variables (their order is the tie-break
/// order of degrevlex) and polynomial generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealPresentation {
    pub variables: Vec<String>,
    pub generators: Vec<Polynomial>,
    pub provenance: String,
    /// Jet order of the underlying construction, if any. Point counting
    /// needs primes above it.
    pub jet_order: Option<usize>,
    /// Whether some variable is a Rabinowitsch inverse.
    pub localized: bool,
    /// Normalizations applied to the input, in order.
    pub notes: Vec<String>,
}

impl IdealPresentation {
    pub fn new(variables: Vec<String>, generators: Vec<Polynomial>, provenance: impl Into<String>) -> Self {
        debug_assert!(generators.iter().all(|g| g.nvars() == variables.len()));
        IdealPresentation {
            variables,
            generators,
            provenance: provenance.into(),
            jet_order: None,
            localized: false,
            notes: Vec::new(),
        }
    }

    /// Converts jet polynomials. `names` lists base variables then jet
    /// variables in `(i, j)` order, as the ring lays them out; the declared
    /// order puts the highest jet order first and the base variables last,
    /// which keeps Buchberger runs on jet ideals several times smaller.
    /// Laurent generators are multiplied by the smallest monomial clearing
    /// their denominators, which is only allowed on localized presentations.
    pub fn from_jet_polys(
        names: Vec<String>,
        ring: RingDescriptor,
        polys: &[JetPoly],
        provenance: impl Into<String>,
        localized: bool,
    ) -> Result<Self, DimensionError> {
        assert_eq!(names.len(), ring.n + ring.jet_count());
        let nvars = names.len();
        let layout = declared_layout(ring);
        let mut declared = vec![String::new(); nvars];
        for (k, name) in names.iter().enumerate() {
            declared[layout[k]] = name.clone();
        }
        let mut notes = Vec::new();
        let mut generators = Vec::with_capacity(polys.len());
        for (index, f) in polys.iter().enumerate() {
            let floor = f.negative_base_floor();
            if floor.iter().any(|e| *e < 0) {
                if !localized {
                    return Err(DimensionError::LaurentWithoutLocalization { index });
                }
                let factor: Vec<String> = floor
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e < 0)
                    .map(|(i, e)| format!("{}^{}", names[i], -e))
                    .collect();
                notes.push(format!("generator {index} multiplied by {}", factor.join("*")));
            }
            let terms = f.terms().map(|(m, c)| {
                let mut exps = vec![0u32; nvars];
                for (k, (e, lo)) in m.base_exponents().iter().zip(&floor).enumerate() {
                    exps[layout[k]] = (e - lo) as u32;
                }
                for (slot, e) in m.jet_exponents().iter().enumerate() {
                    exps[layout[ring.n + slot]] = *e;
                }
                (Monomial::new(exps), c.clone())
            });
            generators.push(Polynomial::from_terms(nvars, terms));
        }
        Ok(IdealPresentation {
            variables: declared,
            generators,
            provenance: provenance.into(),
            jet_order: (ring.m > 0).then_some(ring.m),
            localized,
            notes,
        })
    }

    /// Parses generators over simple identifier variable names, e.g.
    /// `parse(&["x", "y"], &["x*y - 1"])`.
    pub fn parse(variables: &[&str], generators: &[&str]) -> Result<Self, DimensionError> {
        let ring = RingDescriptor::base(variables.len().max(1));
        let polys = generators
            .iter()
            .enumerate()
            .map(|(index, g)| {
                parse_poly(&rename_identifiers(g, variables), ring).map_err(|source| DimensionError::Parse { index, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut names: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        if names.is_empty() {
            names.push("_".into());
        }
        Self::from_jet_polys(names, ring, &polys, "parsed", false)
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn with_jet_order(mut self, m: usize) -> Self {
        self.jet_order = Some(m);
        self
    }

    /// Appends generators over the same variables.
    pub fn extend(&mut self, more: impl IntoIterator<Item = Polynomial>) {
        self.generators.extend(more);
    }

    /// Adds the generators of `other`, matching variables by name; names
    /// missing here are appended (declared last).
    pub fn merge(&mut self, other: &IdealPresentation) {
        let map: Vec<usize> = other
            .variables
            .iter()
            .map(|name| match self.variables.iter().position(|v| v == name) {
                Some(k) => k,
                None => {
                    self.variables.push(name.clone());
                    self.variables.len() - 1
                }
            })
            .collect();
        let nvars = self.variables.len();
        for g in &mut self.generators {
            if g.nvars() != nvars {
                *g = g.embed(nvars, &(0..g.nvars()).collect::<Vec<_>>());
            }
        }
        self.generators.extend(other.generators.iter().map(|g| g.embed(nvars, &map)));
        self.localized |= other.localized;
        self.jet_order = self.jet_order.max(other.jet_order);
        self.notes.extend(other.notes.iter().cloned());
    }

    pub fn render(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.display(&self.variables).to_string()).collect()
    }
}

/// Position in the declared order of each ring variable (base variables,
/// then jet slots).
fn declared_layout(ring: RingDescriptor) -> Vec<usize> {
    let (n, m) = (ring.n, ring.m);
    let mut layout = vec![0; n * (m + 1)];
    for i in 0..n {
        layout[i] = m * n + i;
        for j in 1..=m {
            layout[n + ring.jet_slot(i + 1, j)] = (m - j) * n + i;
        }
    }
    layout
}

/// Default variable names for a jet ring: `x1.. xn` then `x1(1)..` or `u[1,1]..`.
pub fn jet_variable_names(ring: RingDescriptor) -> Vec<String> {
    let base: Vec<String> = (1..=ring.n).map(|i| format!("x{i}")).collect();
    match ring.mode {
        JetMode::Ordinary => jetted_names(&base, ring.m),
        JetMode::Log => {
            let mut names = base;
            for i in 1..=ring.n {
                for j in 1..=ring.m {
                    names.push(format!("u[{i},{j}]"));
                }
            }
            names
        }
    }
}

/// `base` followed by `name(j)` for each base name and `1 <= j <= m`.
pub fn jetted_names(base: &[String], m: usize) -> Vec<String> {
    let mut names = base.to_vec();
    for b in base {
        for j in 1..=m {
            names.push(format!("{b}({j})"));
        }
    }
    names
}

fn rename_identifiers(text: &str, variables: &[&str]) -> String {
    let mut out = String::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_ascii_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    ident.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            match variables.iter().position(|v| *v == ident) {
                Some(k) => out.push_str(&format!("x{}", k + 1)),
                None => out.push_str(&format!("?{ident}")),
            }
        } else {
            out.push(c);
            chars.next();
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    Empty,
    Finite(usize),
}

impl Dimension {
    pub fn value(self) -> Option<usize> {
        match self {
            Dimension::Empty => None,
            Dimension::Finite(d) => Some(d),
        }
    }

    pub fn is_empty(self) -> bool {
        self == Dimension::Empty
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Empty => f.write_str("EMPTY"),
            Dimension::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for Dimension {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Dimension::Empty => s.serialize_str("EMPTY"),
            Dimension::Finite(d) => s.serialize_u64(*d as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Dimension {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(usize),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(k) => Ok(Dimension::Finite(k)),
            Raw::S(s) if s == "EMPTY" => Ok(Dimension::Empty),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad dimension {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Groebner,
    FpCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A largest set of variables containing the support of no leading
    /// monomial; empty for the unit ideal.
    IndependentSet { variables: Vec<String>, basis_size: usize },
    PointCounts { counts: Vec<PrimeCount>, reliable: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimResult {
    pub dimension: Dimension,
    pub method: Method,
    pub certificate: Certificate,
}

impl DimResult {
    /// False only for point-count estimates whose primes disagree.
    pub fn reliable(&self) -> bool {
        match &self.certificate {
            Certificate::PointCounts { reliable, .. } => *reliable,
            Certificate::IndependentSet { .. } => true,
        }
    }
}

/// Dimension of the zero set from a reduced Gröbner basis: the size of a
/// largest variable set containing no leading monomial's support.
pub fn krull_dim(gb: &GroebnerBasis) -> DimResult {
    let basis_size = gb.polys.len();
    if gb.is_unit_ideal() {
        return DimResult {
            dimension: Dimension::Empty,
            method: Method::Groebner,
            certificate: Certificate::IndependentSet {
                variables: Vec::new(),
                basis_size,
            },
        };
    }
    let nvars = gb.variables.len();
    let supports: Vec<Vec<usize>> = gb.leading_monomials().map(|m| m.support()).collect();
    let best = max_independent_set(nvars, &supports);
    DimResult {
        dimension: Dimension::Finite(best.len()),
        method: Method::Groebner,
        certificate: Certificate::IndependentSet {
            variables: best.iter().map(|&v| gb.variables[v].clone()).collect(),
            basis_size,
        },
    }
}

/// Largest subset of `0..nvars` containing no support entirely; among
/// those of maximal size, the lexicographically first.
fn max_independent_set(nvars: usize, supports: &[Vec<usize>]) -> Vec<usize> {
    struct Search<'a> {
        nvars: usize,
        supports: &'a [Vec<usize>],
        chosen: Vec<bool>,
        current: Vec<usize>,
        best: Vec<usize>,
    }
    impl Search<'_> {
        fn blocked(&self) -> bool {
            self.supports.iter().any(|s| s.iter().all(|&v| self.chosen[v]))
        }
        fn go(&mut self, v: usize) {
            if self.current.len() + (self.nvars - v) <= self.best.len() {
                return;
            }
            if v == self.nvars {
                self.best = self.current.clone();
                return;
            }
            self.chosen[v] = true;
            if !self.blocked() {
                self.current.push(v);
                self.go(v + 1);
                self.current.pop();
            }
            self.chosen[v] = false;
            self.go(v + 1);
        }
    }
    let mut s = Search {
        nvars,
        supports,
        chosen: vec![false; nvars],
        current: Vec::new(),
        best: Vec::new(),
    };
    // A constant leading monomial has empty support and blocks everything;
    // handled by the caller.
    s.go(0);
    s.best
}

/// Exact dimension by Gröbner basis.
pub fn groebner_dimension(ideal: &IdealPresentation, budget: &Budget) -> Result<DimResult, DimensionError> {
    Ok(krull_dim(&groebner_basis(ideal, budget)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(vars: &[&str], gens: &[&str]) -> Dimension {
        let ideal = IdealPresentation::parse(vars, gens).unwrap();
        groebner_dimension(&ideal, &Budget::default()).unwrap().dimension
    }

    #[test]
    fn unit_ideal_is_empty() {
        assert_eq!(dim(&["x"], &["1"]), Dimension::Empty);
    }

    #[test]
    fn no_generators_is_whole_space() {
        assert_eq!(dim(&["a", "b", "c"], &[]), Dimension::Finite(3));
    }

    #[test]
    fn fat_point_first_jets() {
        assert_eq!(dim(&["a0", "a1"], &["a0^2", "a0*a1"]), Dimension::Finite(1));
    }

    #[test]
    fn a1_surface_first_jets() {
        let vars = ["x1", "x2", "x3", "y1", "y2", "y3"];
        let gens = ["x1*x2 - x3^2", "x1*y2 + y1*x2 - 2*x3*y3"];
        assert_eq!(dim(&vars, &gens), Dimension::Finite(4));
    }

    #[test]
    fn certificate_names_variables() {
        let ideal = IdealPresentation::parse(&["x", "y"], &["x^2 - y^3"]).unwrap();
        let r = groebner_dimension(&ideal, &Budget::default()).unwrap();
        assert_eq!(r.dimension, Dimension::Finite(1));
        match r.certificate {
            Certificate::IndependentSet { variables, .. } => assert_eq!(variables, vec!["x".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn laurent_needs_localization() {
        let ring = RingDescriptor::base(2);
        let f = parse_poly("x1^-1*x2 - 1", ring).unwrap();
        let names = vec!["x1".to_string(), "x2".to_string()];
        assert_eq!(
            IdealPresentation::from_jet_polys(names.clone(), ring, std::slice::from_ref(&f), "t", false).unwrap_err(),
            DimensionError::LaurentWithoutLocalization { index: 0 }
        );
        let ok = IdealPresentation::from_jet_polys(names, ring, &[f], "t", true).unwrap();
        assert_eq!(ok.render(), vec!["-x1 + x2"]);
        assert_eq!(ok.notes.len(), 1);
    }

    #[test]
    fn budget_parsing() {
        assert_eq!(
            "100, 7".parse::<Budget>().unwrap(),
            Budget {
                max_pairs: 100,
                max_degree: 7
            }
        );
        assert!("100".parse::<Budget>().is_err());
    }

    #[test]
    fn dimension_serializes_as_number_or_empty() {
        assert_eq!(serde_json::to_string(&Dimension::Finite(3)).unwrap(), "3");
        assert_eq!(serde_json::to_string(&Dimension::Empty).unwrap(), "\"EMPTY\"");
        let back: Dimension = serde_json::from_str("\"EMPTY\"").unwrap();
        assert_eq!(back, Dimension::Empty);
    }
}
