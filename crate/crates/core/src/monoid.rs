//! Fine saturated affine monoids `P ⊂ Z^n` given by generators.
//!
//! A monoid is validated on construction: the generators must span `Z^n` as
//! a group and every lattice point of the cone inside a verification box must
//! be reachable as a nonnegative combination of generators. Faces of the cone
//! correspond to torus orbits of `Spec k[P]`; a face of rank `r` carries the
//! stratum index `n - r`.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{self, LatticeVector};

/// Largest ambient rank accepted for face enumeration.
pub const MAX_RANK: usize = 6;

/// Default bound on the coefficients tried by the membership search.
pub const DEFAULT_MEMBERSHIP_CAP: u32 = 20;

/// Upper bound on the number of lattice points examined by the saturation check.
const SATURATION_POINT_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("ambient rank must be positive")]
    ZeroRank,
    #[error("a monoid needs at least one generator")]
    NoGenerators,
    #[error("generator {index} has length {found}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("generators do not span Z^{rank} as a group ({detail})")]
    NotSpanning { rank: usize, detail: String },
    #[error("monoid is not saturated: {point} lies in the cone but is not a combination of generators with coefficients <= {cap}")]
    NotSaturated { point: LatticeVector, cap: u32 },
    #[error("ambient rank {rank} exceeds the supported maximum {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("no {rank} generators form a basis of Z^{rank}")]
    NoUnimodularSubset { rank: usize },
    #[error("basis index {index} out of range ({count} generators)")]
    BasisIndexOutOfRange { index: usize, count: usize },
    #[error("selected basis generators {indices:?} have determinant {det}, not +-1")]
    BasisNotUnimodular { indices: Vec<usize>, det: i128 },
}

/// Outcome of a bounded membership search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Coefficients of a representation, one per generator.
    Member(Vec<u32>),
    /// Some facet form is negative on the vector: it is not in the cone.
    OutsideCone,
    /// In the cone, but no representation with coefficients up to the cap.
    BoundedSearchExhausted,
}

/// A face of the monoid, identified by the generators it contains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub generator_indices: Vec<usize>,
    /// Facet covectors vanishing on the face (nonnegative on all generators).
    pub supporting_forms: Vec<Vec<i64>>,
    /// `n` minus the rank of the face.
    pub stratum_index: usize,
}

impl Face {
    pub fn contains_generator(&self, index: usize) -> bool {
        self.generator_indices.binary_search(&index).is_ok()
    }

    /// Whether a lattice point of the cone lies on this face.
    pub fn contains_point(&self, v: &[i64]) -> bool {
        self.supporting_forms
            .iter()
            .all(|form| v.iter().zip(form).map(|(a, b)| a * b).sum::<i64>() == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMonoid {
    rank: usize,
    generators: Vec<LatticeVector>,
    membership_cap: u32,
    facets: Vec<Vec<i64>>,
    saturation_radius: i64,
}

impl AffineMonoid {
    pub fn new(rank: usize, generators: Vec<LatticeVector>) -> Result<Self, MonoidError> {
        Self::with_membership_cap(rank, generators, DEFAULT_MEMBERSHIP_CAP)
    }

    pub fn with_membership_cap(
        rank: usize,
        generators: Vec<LatticeVector>,
        membership_cap: u32,
    ) -> Result<Self, MonoidError> {
        if rank == 0 {
            return Err(MonoidError::ZeroRank);
        }
        if rank > MAX_RANK {
            return Err(MonoidError::RankTooLarge {
                rank,
                max: MAX_RANK,
            });
        }
        if generators.is_empty() {
            return Err(MonoidError::NoGenerators);
        }
        for (index, g) in generators.iter().enumerate() {
            if g.rank() != rank {
                return Err(MonoidError::LengthMismatch {
                    index,
                    expected: rank,
                    found: g.rank(),
                });
            }
        }
        let rows: Vec<&[i64]> = generators.iter().map(|g| g.entries()).collect();
        match lattice::lattice_index(&rows, rank) {
            Some(1) => {}
            Some(index) => {
                return Err(MonoidError::NotSpanning {
                    rank,
                    detail: format!("subgroup of index {index}"),
                })
            }
            None => {
                return Err(MonoidError::NotSpanning {
                    rank,
                    detail: format!("rank {} < {rank}", lattice::rank(&rows)),
                })
            }
        }
        let facets = facet_forms(&generators, rank);
        let mut monoid = AffineMonoid {
            rank,
            generators,
            membership_cap: membership_cap.max(1),
            facets,
            saturation_radius: 0,
        };
        monoid.verify_saturation()?;
        Ok(monoid)
    }

    /// The positive orthant `N^n`.
    pub fn orthant(rank: usize) -> Result<Self, MonoidError> {
        Self::new(rank, (0..rank).map(|i| LatticeVector::unit(rank, i)).collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn membership_cap(&self) -> u32 {
        self.membership_cap
    }

    /// Primitive facet covectors of the cone; empty when `P` is a group.
    pub fn facet_forms(&self) -> &[Vec<i64>] {
        &self.facets
    }

    /// Half-width of the box `[-B, B]^n` in which saturation was verified.
    pub fn saturation_radius(&self) -> i64 {
        self.saturation_radius
    }

    pub fn is_sharp(&self) -> bool {
        self.units().is_empty()
    }

    pub fn is_group(&self) -> bool {
        self.facets.is_empty()
    }

    /// Whether `v` lies in the real cone spanned by the generators.
    pub fn cone_contains(&self, v: &[i64]) -> bool {
        self.facets
            .iter()
            .all(|f| v.iter().zip(f).map(|(a, b)| a * b).sum::<i64>() >= 0)
    }

    /// Bounded search for a representation of `v` as a nonnegative
    /// combination of generators with every coefficient at most the cap.
    pub fn membership(&self, v: &[i64]) -> Membership {
        assert_eq!(v.len(), self.rank, "vector length differs from ambient rank");
        if !self.cone_contains(v) {
            return Membership::OutsideCone;
        }
        let mut coeffs = vec![0u32; self.generators.len()];
        let mut dead = HashSet::new();
        if self.search(0, v.to_vec(), &mut coeffs, &mut dead) {
            Membership::Member(coeffs)
        } else {
            Membership::BoundedSearchExhausted
        }
    }

    /// `true` iff a representation with coefficients `<= membership_cap` exists.
    pub fn contains(&self, v: &[i64]) -> bool {
        matches!(self.membership(v), Membership::Member(_))
    }

    fn search(
        &self,
        i: usize,
        rest: Vec<i64>,
        coeffs: &mut [u32],
        dead: &mut HashSet<(usize, Vec<i64>)>,
    ) -> bool {
        if rest.iter().all(|x| *x == 0) {
            coeffs[i..].iter_mut().for_each(|c| *c = 0);
            return true;
        }
        if i == self.generators.len() || dead.contains(&(i, rest.clone())) {
            return false;
        }
        let g = &self.generators[i];
        let mut current = rest.clone();
        for c in 0..=self.membership_cap {
            if self.cone_contains(&current) {
                coeffs[i] = c;
                if self.search(i + 1, current.clone(), coeffs, dead) {
                    return true;
                }
            } else if self
                .facets
                .iter()
                .any(|f| current.iter().zip(f).map(|(a, b)| a * b).sum::<i64>() < 0 && g.dot(f) > 0)
            {
                // Subtracting more of g only pushes further out of the cone.
                break;
            }
            for (x, y) in current.iter_mut().zip(g.iter()) {
                *x -= y;
            }
        }
        coeffs[i] = 0;
        dead.insert((i, rest));
        false
    }

    fn verify_saturation(&mut self) -> Result<(), MonoidError> {
        let max_norm = self.generators.iter().map(|g| g.l1_norm()).max().unwrap_or(1).max(1);
        let mut radius = max_norm;
        while radius > 1 && ((2 * radius + 1) as u64).saturating_pow(self.rank as u32) > SATURATION_POINT_BUDGET {
            radius -= 1;
        }
        self.saturation_radius = radius;
        let side: Vec<i64> = (-radius..=radius).collect();
        for point in (0..self.rank).map(|_| side.iter().copied()).multi_cartesian_product() {
            if !self.cone_contains(&point) {
                continue;
            }
            if !self.contains(&point) {
                return Err(MonoidError::NotSaturated {
                    point: LatticeVector::new(point),
                    cap: self.membership_cap,
                });
            }
        }
        Ok(())
    }

    /// First (lexicographic in generator positions) `n`-subset of generators
    /// with determinant `±1`, returned as generator indices.
    pub fn select_gp_basis_indices(&self) -> Result<Vec<usize>, MonoidError> {
        (0..self.generators.len())
            .combinations(self.rank)
            .find(|idx| {
                let rows: Vec<&[i64]> = idx.iter().map(|&i| self.generators[i].entries()).collect();
                lattice::is_unimodular(&rows)
            })
            .ok_or(MonoidError::NoUnimodularSubset { rank: self.rank })
    }

    /// Generators `e_1..e_n` of `P` forming a basis of `P^gp = Z^n`.
    pub fn select_gp_basis(&self) -> Result<Vec<LatticeVector>, MonoidError> {
        Ok(self
            .select_gp_basis_indices()?
            .into_iter()
            .map(|i| self.generators[i].clone())
            .collect())
    }

    /// Validates user-chosen basis generator positions.
    pub fn check_basis_indices(&self, indices: &[usize]) -> Result<(), MonoidError> {
        for &index in indices {
            if index >= self.generators.len() {
                return Err(MonoidError::BasisIndexOutOfRange {
                    index,
                    count: self.generators.len(),
                });
            }
        }
        let rows: Vec<&[i64]> = indices.iter().map(|&i| self.generators[i].entries()).collect();
        let det = if rows.len() == self.rank {
            lattice::determinant(&rows)
        } else {
            0
        };
        if det.abs() != 1 {
            return Err(MonoidError::BasisNotUnimodular {
                indices: indices.to_vec(),
                det,
            });
        }
        Ok(())
    }

    /// The complete face lattice, ordered by stratum index and then by
    /// generator positions. Includes `P` itself and the minimal face.
    pub fn faces(&self) -> Result<Vec<Face>, MonoidError> {
        if self.rank > MAX_RANK {
            return Err(MonoidError::RankTooLarge {
                rank: self.rank,
                max: MAX_RANK,
            });
        }
        let zero_sets: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|f| {
                (0..self.generators.len())
                    .filter(|&i| self.generators[i].dot(f) == 0)
                    .collect()
            })
            .collect();
        let all: BTreeSet<usize> = (0..self.generators.len()).collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut queue = vec![all];
        while let Some(face) = queue.pop() {
            if !seen.insert(face.clone()) {
                continue;
            }
            for z in &zero_sets {
                let sub: BTreeSet<usize> = face.intersection(z).copied().collect();
                if !seen.contains(&sub) {
                    queue.push(sub);
                }
            }
        }
        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|set| {
                let generator_indices: Vec<usize> = set.into_iter().collect();
                let supporting_forms: Vec<Vec<i64>> = self
                    .facets
                    .iter()
                    .filter(|f| generator_indices.iter().all(|&i| self.generators[i].dot(f) == 0))
                    .cloned()
                    .collect();
                let rows: Vec<&[i64]> = generator_indices
                    .iter()
                    .map(|&i| self.generators[i].entries())
                    .collect();
                let r = if rows.is_empty() { 0 } else { lattice::rank(&rows) };
                Face {
                    generator_indices,
                    supporting_forms,
                    stratum_index: self.rank - r,
                }
            })
            .collect();
        faces.sort_by(|a, b| {
            a.stratum_index
                .cmp(&b.stratum_index)
                .then_with(|| a.generator_indices.cmp(&b.generator_indices))
        });
        Ok(faces)
    }

    /// Basis of the group of units `P^* = P ∩ -P`; empty when `P` is sharp.
    pub fn units(&self) -> Vec<LatticeVector> {
        let minimal: Vec<&[i64]> = self
            .generators
            .iter()
            .filter(|g| self.facets.iter().all(|f| g.dot(f) == 0))
            .map(|g| g.entries())
            .collect();
        lattice::lattice_basis(&minimal)
    }
}

/// Facet normals: primitive covectors through `n - 1` independent generators
/// that are nonnegative on every generator.
fn facet_forms(generators: &[LatticeVector], rank: usize) -> Vec<Vec<i64>> {
    if rank == 1 {
        let pos = generators.iter().any(|g| g[0] > 0);
        let neg = generators.iter().any(|g| g[0] < 0);
        return match (pos, neg) {
            (true, true) => vec![],
            (true, false) => vec![vec![1]],
            (false, true) => vec![vec![-1]],
            (false, false) => unreachable!("generators span Z"),
        };
    }
    let mut forms: BTreeSet<Vec<i64>> = BTreeSet::new();
    for subset in (0..generators.len()).combinations(rank - 1) {
        let rows: Vec<&[i64]> = subset.iter().map(|&i| generators[i].entries()).collect();
        let Some(normal) = lattice::normal_vector(&rows, rank) else {
            continue;
        };
        let values: Vec<i64> = generators.iter().map(|g| g.dot(&normal)).collect();
        if values.iter().all(|v| *v >= 0) && values.iter().any(|v| *v > 0) {
            forms.insert(normal);
        } else if values.iter().all(|v| *v <= 0) && values.iter().any(|v| *v < 0) {
            forms.insert(normal.iter().map(|x| -x).collect());
        }
    }
    forms.into_iter().collect()
}
