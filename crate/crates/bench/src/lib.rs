//! Charts and ideals shared by the benchmarks.

use logjet_core::strata::{chart_jet_presentation, StrataError};
use logjet_core::{AffineMonoid, Chart, IdealPresentation, JetMode, LatticeVector};

pub fn cusp() -> Chart {
    Chart::affine(2, &["x1^2 - x2^3"]).expect("cusp chart")
}

pub fn line() -> Chart {
    Chart::orthant(2, &["x1 + x2 - 1"]).expect("line chart")
}

/// Ordinary jets of the cusp, the standard stress case for the Gröbner engine.
pub fn cusp_jets(m: usize) -> Result<IdealPresentation, StrataError> {
    chart_jet_presentation(&cusp(), m, JetMode::Ordinary)
}

/// Cone over a square: four rays plus the apex direction, which the
/// rays alone only span up to index 2.
pub fn square_cone() -> AffineMonoid {
    let gens = [[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1], [0, 0, 1]]
        .iter()
        .map(|g| LatticeVector::new(g.to_vec()))
        .collect();
    AffineMonoid::new(3, gens).expect("square cone")
}
