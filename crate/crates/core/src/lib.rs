//! Exact computations with ordinary and logarithmic jet schemes of charts of
//! log varieties: affine monoids and their faces, jet derivations, strata,
//! Gröbner-basis dimensions, and the jet-dimension irreducibility criteria.

pub mod analyzer;
pub mod chart;
pub mod dimension;
pub mod jets;
pub mod lattice;
pub mod monoid;
pub mod poly;
pub mod strata;

pub use chart::{Chart, ChartError, LogStructure};
pub use lattice::LatticeVector;
pub use monoid::{AffineMonoid, Face, Membership, MonoidError};
pub use poly::{parse_poly, JetMode, JetMonomial, JetPoly, ParseError, PolyError, Rational, RingDescriptor};
pub use analyzer::{verdict, AnalysisConfig, AnalysisReport, AnalyzerError, Verdict};
pub use dimension::{Budget, Dimension, IdealPresentation};
pub use strata::{stratify, StratumPresentation};
