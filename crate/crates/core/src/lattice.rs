//! Integer vectors and the small amount of exact integer linear algebra the
//! monoid and strata code needs: determinants, ranks, lattice bases and
//! coordinates with respect to a lattice basis.

use std::fmt;
use std::ops::{Add, Deref, Index, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// An element of the ambient lattice `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(entries: Vec<i64>) -> Self {
        LatticeVector(entries)
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    /// The `i`-th standard basis vector of `Z^rank`.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Pairing with an integer covector.
    pub fn dot(&self, form: &[i64]) -> i64 {
        self.0.iter().zip(form).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Sum of absolute values of the entries.
    pub fn l1_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).sum()
    }
}

impl Deref for LatticeVector {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl Index<usize> for LatticeVector {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVector {
    fn from(v: [i64; N]) -> Self {
        LatticeVector(v.to_vec())
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;

    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.rank(), rhs.rank());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;

    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.rank(), rhs.rank());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;

    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Exact determinant of a square integer matrix given by rows (Bareiss).
pub fn determinant(rows: &[&[i64]]) -> i128 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "determinant of a non-square matrix");
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank over `Q` of a list of integer vectors of common length.
pub fn rank(vectors: &[&[i64]]) -> usize {
    echelon_rows(vectors).len()
}

/// Integer row echelon form of the vectors (zero rows dropped). Rows span the
/// same lattice as the input; leading entries are positive.
fn echelon_rows(vectors: &[&[i64]]) -> Vec<Vec<i128>> {
    let Some(width) = vectors.first().map(|v| v.len()) else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    let mut out = Vec::new();
    for col in 0..width {
        // Euclid on the column until at most one row has a nonzero entry.
        loop {
            let mut live: Vec<usize> = (0..rows.len()).filter(|&r| rows[r][col] != 0).collect();
            if live.len() <= 1 {
                if let Some(&r) = live.first() {
                    let mut row = rows.swap_remove(r);
                    if row[col] < 0 {
                        row.iter_mut().for_each(|x| *x = -*x);
                    }
                    out.push(row);
                }
                break;
            }
            live.sort_by_key(|&r| rows[r][col].abs());
            let pivot = live[0];
            for &r in &live[1..] {
                let q = Integer::div_floor(&rows[r][col], &rows[pivot][col]);
                for j in 0..width {
                    let t = rows[pivot][j];
                    rows[r][j] -= q * t;
                }
            }
        }
    }
    out
}

/// A basis (Hermite-style echelon rows) of the lattice generated by the vectors.
pub fn lattice_basis(vectors: &[&[i64]]) -> Vec<LatticeVector> {
    let mut rows = echelon_rows(vectors);
    // Reduce entries above each pivot into [0, pivot).
    let pivots: Vec<usize> = rows
        .iter()
        .map(|r| r.iter().position(|x| *x != 0).expect("nonzero echelon row"))
        .collect();
    for k in 0..rows.len() {
        let pc = pivots[k];
        for i in 0..k {
            let q = Integer::div_floor(&rows[i][pc], &rows[k][pc]);
            if q != 0 {
                for j in 0..rows[i].len() {
                    let t = rows[k][j];
                    rows[i][j] -= q * t;
                }
            }
        }
    }
    rows.into_iter()
        .map(|r| LatticeVector(r.into_iter().map(|x| x as i64).collect()))
        .collect()
}

/// Index of the lattice generated by `vectors` in `Z^n`, or `None` when the
/// vectors do not have full rank.
pub fn lattice_index(vectors: &[&[i64]], n: usize) -> Option<u128> {
    let rows = echelon_rows(vectors);
    if rows.len() != n {
        return None;
    }
    let pivots: Vec<i128> = rows
        .iter()
        .map(|r| *r.iter().find(|x| **x != 0).expect("nonzero echelon row"))
        .collect();
    Some(pivots.iter().map(|p| p.unsigned_abs()).product())
}

/// Coordinates of `v` with respect to linearly independent `basis` vectors,
/// if `v` lies in the lattice they generate.
pub fn coordinates(basis: &[LatticeVector], v: &[i64]) -> Option<Vec<i64>> {
    let k = basis.len();
    if k == 0 {
        return v.iter().all(|x| *x == 0).then(Vec::new);
    }
    let n = v.len();
    // Augmented system: columns are basis vectors, rows are coordinates.
    let mut a: Vec<Vec<Ratio<i128>>> = (0..n)
        .map(|i| {
            let mut row: Vec<Ratio<i128>> =
                basis.iter().map(|b| Ratio::from_integer(b[i] as i128)).collect();
            row.push(Ratio::from_integer(v[i] as i128));
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivot_cols = Vec::new();
    for col in 0..k {
        let Some(r) = (pivot_row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, r);
        let inv = a[pivot_row][col].recip();
        for j in col..=k {
            a[pivot_row][j] *= inv;
        }
        for i in 0..n {
            if i != pivot_row && !a[i][col].is_zero() {
                let factor = a[i][col];
                for j in col..=k {
                    let t = a[pivot_row][j] * factor;
                    a[i][j] -= t;
                }
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
    }
    if pivot_cols.len() != k {
        return None;
    }
    if a[pivot_row..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut out = vec![0i64; k];
    for (r, &c) in pivot_cols.iter().enumerate() {
        let x = a[r][k];
        if !x.denom().is_one() {
            return None;
        }
        out[c] = *x.numer() as i64;
    }
    Some(out)
}

/// Primitive integer normal to the hyperplane spanned by `n - 1` vectors in
/// `Z^n` (generalized cross product). `None` if they are dependent.
pub fn normal_vector(vectors: &[&[i64]], n: usize) -> Option<Vec<i64>> {
    assert_eq!(vectors.len() + 1, n);
    let mut normal = Vec::with_capacity(n);
    for skip in 0..n {
        let minor: Vec<Vec<i64>> = vectors
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip)
                    .map(|(_, x)| *x)
                    .collect()
            })
            .collect();
        let refs: Vec<&[i64]> = minor.iter().map(|r| r.as_slice()).collect();
        let d = determinant(&refs);
        normal.push(if skip % 2 == 0 { d } else { -d });
    }
    let g = normal.iter().fold(0i128, |g, x| g.gcd(x));
    if g.is_zero() {
        return None;
    }
    Some(normal.into_iter().map(|x| (x / g) as i64).collect())
}

/// Greatest common divisor of the entries, nonnegative.
pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x)).abs()
}

pub(crate) fn is_unimodular(rows: &[&[i64]]) -> bool {
    determinant(rows).abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn refs(v: &[Vec<i64>]) -> Vec<&[i64]> {
        v.iter().map(|r| r.as_slice()).collect()
    }

    #[test]
    fn determinant_small() {
        let m = vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(determinant(&refs(&m)), 0);
        let m = vec![vec![1, 0], vec![1, 2]];
        assert_eq!(determinant(&refs(&m)), 2);
        let m = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(determinant(&refs(&m)), -1);
    }

    #[test]
    fn index_and_rank() {
        let m = vec![vec![2, 0], vec![0, 1]];
        assert_eq!(lattice_index(&refs(&m), 2), Some(2));
        let m = vec![vec![1, 0], vec![1, 1], vec![1, 2]];
        assert_eq!(lattice_index(&refs(&m), 2), Some(1));
        assert_eq!(rank(&refs(&m)), 2);
        let m = vec![vec![1, 1], vec![2, 2]];
        assert_eq!(rank(&refs(&m)), 1);
        assert_eq!(lattice_index(&refs(&m), 2), None);
    }

    #[test]
    fn basis_of_unit_group() {
        let m = vec![vec![1, 0], vec![-1, 0]];
        assert_eq!(lattice_basis(&refs(&m)), vec![LatticeVector::from([1, 0])]);
        let m = vec![vec![2, 2], vec![3, 3]];
        assert_eq!(lattice_basis(&refs(&m)), vec![LatticeVector::from([1, 1])]);
    }

    #[test]
    fn coordinates_in_basis() {
        let b = vec![LatticeVector::from([1, 0]), LatticeVector::from([1, 1])];
        assert_eq!(coordinates(&b, &[1, 2]), Some(vec![-1, 2]));
        let b = vec![LatticeVector::from([2, 0])];
        assert_eq!(coordinates(&b, &[1, 0]), None);
        assert_eq!(coordinates(&b, &[4, 0]), Some(vec![2]));
        assert_eq!(coordinates(&b, &[4, 1]), None);
    }

    #[test]
    fn normals() {
        let v = vec![vec![1, 2]];
        assert_eq!(normal_vector(&refs(&v), 2), Some(vec![2, -1]));
        let v = vec![vec![1, 0, 0], vec![0, 1, 0]];
        assert_eq!(normal_vector(&refs(&v), 3), Some(vec![0, 0, 1]));
        let v = vec![vec![1, 1, 0], vec![2, 2, 0]];
        assert_eq!(normal_vector(&refs(&v), 3), None);
    }
}
