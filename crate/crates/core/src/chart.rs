//! A chart: a fine saturated monoid `P`, a basis `e_1..e_n ∈ P` of
//! `P^gp = Z^n` defining the monomials `x_i = χ^{e_i}`, and equations in
//! `k[P]` written as Laurent polynomials in the `x_i`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{self, LatticeVector};
use crate::monoid::{AffineMonoid, MonoidError};
use crate::poly::{parse_poly, JetPoly, ParseError, RingDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LogStructure {
    /// Restriction of the toric log structure of `Spec k[P]`.
    #[default]
    Standard,
    /// Trivial log structure on affine space; only ordinary jets apply.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error("basis must have {expected} vectors, got {found}")]
    BasisSize { expected: usize, found: usize },
    #[error("basis vector {vector} is not an element of the monoid")]
    BasisNotInMonoid { vector: LatticeVector },
    #[error("basis vectors have determinant {det}, not +-1")]
    BasisNotUnimodular { det: i128 },
    #[error("equation {index}: {source}")]
    Parse {
        index: usize,
        #[source]
        source: ParseError,
    },
    #[error("equation {index} is not in the base ring {ring}")]
    NotBase { index: usize, ring: RingDescriptor },
    #[error("equation {index} is not in k[P]: exponent {exponent:?} maps to lattice point {point}, which is not in the monoid")]
    Support {
        index: usize,
        exponent: Vec<i32>,
        point: LatticeVector,
    },
    #[error("a trivial log structure needs the monoid to be N^n in basis coordinates")]
    TrivialNeedsOrthant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    monoid: AffineMonoid,
    basis: Vec<LatticeVector>,
    equations: Vec<JetPoly>,
    log_structure: LogStructure,
}

impl Chart {
    /// A chart using the first unimodular subset of generators as basis.
    pub fn new(monoid: AffineMonoid, equations: Vec<JetPoly>, log_structure: LogStructure) -> Result<Self, ChartError> {
        let basis = monoid.select_gp_basis()?;
        Self::with_basis(monoid, basis, equations, log_structure)
    }

    /// A chart with basis chosen by generator positions.
    pub fn with_basis_indices(
        monoid: AffineMonoid,
        indices: &[usize],
        equations: Vec<JetPoly>,
        log_structure: LogStructure,
    ) -> Result<Self, ChartError> {
        monoid.check_basis_indices(indices)?;
        let basis = indices.iter().map(|&i| monoid.generators()[i].clone()).collect();
        Self::with_basis(monoid, basis, equations, log_structure)
    }

    /// A chart with an explicit basis of monoid elements.
    pub fn with_basis(
        monoid: AffineMonoid,
        basis: Vec<LatticeVector>,
        equations: Vec<JetPoly>,
        log_structure: LogStructure,
    ) -> Result<Self, ChartError> {
        let n = monoid.rank();
        if basis.len() != n {
            return Err(ChartError::BasisSize {
                expected: n,
                found: basis.len(),
            });
        }
        for b in &basis {
            if b.rank() != n || !monoid.contains(b) {
                return Err(ChartError::BasisNotInMonoid { vector: b.clone() });
            }
        }
        let rows: Vec<&[i64]> = basis.iter().map(|b| b.entries()).collect();
        let det = lattice::determinant(&rows);
        if det.abs() != 1 {
            return Err(ChartError::BasisNotUnimodular { det });
        }
        let ring = RingDescriptor::base(n);
        for (index, f) in equations.iter().enumerate() {
            if f.ring() != ring || !f.is_base() {
                return Err(ChartError::NotBase { index, ring });
            }
            if let Some(exponent) = f.first_support_violation(&monoid, &basis) {
                let point = LatticeVector::new(crate::poly::lattice_point(&basis, &exponent));
                return Err(ChartError::Support { index, exponent, point });
            }
        }
        let chart = Chart {
            monoid,
            basis,
            equations,
            log_structure,
        };
        if log_structure == LogStructure::Trivial && !chart.is_orthant() {
            return Err(ChartError::TrivialNeedsOrthant);
        }
        Ok(chart)
    }

    /// Parses equations in the base ring of the monoid's rank.
    pub fn from_strings(
        monoid: AffineMonoid,
        equations: &[&str],
        log_structure: LogStructure,
    ) -> Result<Self, ChartError> {
        let ring = RingDescriptor::base(monoid.rank());
        let eqs = equations
            .iter()
            .enumerate()
            .map(|(index, s)| parse_poly(s, ring).map_err(|source| ChartError::Parse { index, source }))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(monoid, eqs, log_structure)
    }

    /// `N^n` with the standard log structure.
    pub fn orthant(n: usize, equations: &[&str]) -> Result<Self, ChartError> {
        Self::from_strings(AffineMonoid::orthant(n)?, equations, LogStructure::Standard)
    }

    /// `A^n` with the trivial log structure.
    pub fn affine(n: usize, equations: &[&str]) -> Result<Self, ChartError> {
        Self::from_strings(AffineMonoid::orthant(n)?, equations, LogStructure::Trivial)
    }

    pub fn monoid(&self) -> &AffineMonoid {
        &self.monoid
    }

    pub fn basis(&self) -> &[LatticeVector] {
        &self.basis
    }

    pub fn equations(&self) -> &[JetPoly] {
        &self.equations
    }

    pub fn log_structure(&self) -> LogStructure {
        self.log_structure
    }

    pub fn ambient_rank(&self) -> usize {
        self.monoid.rank()
    }

    /// Number of equations `c`.
    pub fn codim_claim(&self) -> usize {
        self.equations.len()
    }

    pub fn base_ring(&self) -> RingDescriptor {
        RingDescriptor::base(self.ambient_rank())
    }

    /// Coordinates of a lattice point in the chart basis, i.e. the exponent
    /// vector of `χ^v` as a Laurent monomial in the `x_i`.
    pub fn basis_coordinates(&self, v: &[i64]) -> Vec<i64> {
        lattice::coordinates(&self.basis, v).expect("chart basis is unimodular")
    }

    /// Monoid generators as exponent vectors in the chart variables.
    pub fn generators_in_basis(&self) -> Vec<Vec<i64>> {
        self.monoid
            .generators()
            .iter()
            .map(|g| self.basis_coordinates(g))
            .collect()
    }

    /// Whether `k[P] = k[x_1..x_n]`: every generator has nonnegative
    /// coordinates in the basis (so `P` is `N^n` plus redundant generators).
    pub fn is_orthant(&self) -> bool {
        self.generators_in_basis()
            .iter()
            .all(|g| g.iter().all(|&e| e >= 0))
    }
}
