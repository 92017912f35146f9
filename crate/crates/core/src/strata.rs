//! Strata `X_l` of a chart: the intersections of `X` with the torus orbits
//! of `Spec k[P]`, each presented as a closed subscheme of an affine space
//! with one extra inverse variable `w`.
//!
//! Orthant charts keep the ambient coordinates `x_1..x_n`: the stratum of a
//! face `F` is cut out by the equations, the monomials `x^p` of generators
//! `p ∉ F`, and `w·x^{p_F} - 1` with `p_F` the sum of the generators of `F`.
//! Other charts have Laurent monomials that cannot be localized that way,
//! so their strata are written on the orbit torus itself, in coordinates
//! `z_1..z_r` on a basis of `F^gp`, with `w·z_1⋯z_r - 1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chart::Chart;
use crate::dimension::{jetted_names, Dimension, DimensionError, IdealPresentation};
use crate::jets::{iterated_derivatives, jet_ideal, JetError};
use crate::lattice;
use crate::monoid::{Face, MonoidError};
use crate::poly::{lattice_point, JetMode, JetMonomial, JetPoly, RingDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Jets(#[from] JetError),
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error("log jets over a stratum need an orthant chart (stratum of face {face:?} is in torus coordinates)")]
    NotAmbient { face: Vec<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinates {
    /// The chart variables `x_1..x_n`.
    Ambient,
    /// Coordinates `z_1..z_r` on the orbit torus of the face.
    Torus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumPresentation {
    pub face: Face,
    /// `l = n - rank F`.
    pub index: usize,
    pub coordinates: Coordinates,
    /// Coordinate names, then `w` when `localized`.
    pub variables: Vec<String>,
    /// Polynomials over `base(variables.len())`. The first
    /// `chart_equations` come from the chart equations, the localizing
    /// equation (if any) is last.
    pub equations: Vec<JetPoly>,
    pub chart_equations: usize,
    pub localized: bool,
    pub expected_codim: usize,
}

impl StratumPresentation {
    pub fn ring(&self) -> RingDescriptor {
        RingDescriptor::base(self.variables.len())
    }

    /// Number of coordinate variables (excluding `w`).
    pub fn coordinate_count(&self) -> usize {
        self.variables.len() - usize::from(self.localized)
    }

    /// The closed presentation itself.
    pub fn ideal(&self) -> Result<IdealPresentation, DimensionError> {
        IdealPresentation::from_jet_polys(
            self.variables.clone(),
            self.ring(),
            &self.equations,
            format!("stratum l={} face {:?}", self.index, self.face.generator_indices),
            self.localized,
        )
    }

    pub fn chart_polys(&self) -> &[JetPoly] {
        &self.equations[..self.chart_equations]
    }

    pub fn render(&self) -> Vec<String> {
        let names: Vec<&str> = self.variables.iter().map(String::as_str).collect();
        self.equations.iter().map(|f| rename(f, &names)).collect()
    }
}

fn rename(f: &JetPoly, names: &[&str]) -> String {
    // Variables of a base ring print as x1..xk; substitute longest first.
    let mut text = f.render();
    for k in (0..names.len()).rev() {
        text = text.replace(&format!("x{}", k + 1), &format!("\u{0}{k}\u{0}"));
    }
    for (k, name) in names.iter().enumerate() {
        text = text.replace(&format!("\u{0}{k}\u{0}"), name);
    }
    text
}

/// One presentation per face of `P`, ordered like `AffineMonoid::faces`.
pub fn stratify(chart: &Chart) -> Result<Vec<StratumPresentation>, StrataError> {
    let faces = chart.monoid().faces()?;
    let orthant = chart.is_orthant();
    Ok(faces
        .into_iter()
        .map(|face| {
            if orthant {
                ambient_stratum(chart, face)
            } else {
                torus_stratum(chart, face)
            }
        })
        .collect())
}

/// `X ⊂ A^n` itself, for charts with the trivial log structure.
pub fn unstratified(chart: &Chart) -> StratumPresentation {
    let n = chart.ambient_rank();
    let all: Vec<usize> = (0..chart.monoid().generators().len()).collect();
    StratumPresentation {
        face: Face {
            generator_indices: all,
            supporting_forms: Vec::new(),
            stratum_index: 0,
        },
        index: 0,
        coordinates: Coordinates::Ambient,
        variables: (1..=n).map(|i| format!("x{i}")).collect(),
        equations: chart.equations().to_vec(),
        chart_equations: chart.equations().len(),
        localized: false,
        expected_codim: 0,
    }
}

fn ambient_stratum(chart: &Chart, face: Face) -> StratumPresentation {
    let n = chart.ambient_rank();
    let ring = RingDescriptor::base(n + 1);
    let gens = chart.generators_in_basis();
    let embed = |f: &JetPoly| {
        JetPoly::from_terms(
            ring,
            f.terms().map(|(m, c)| {
                let mut base = m.base_exponents().to_vec();
                base.push(0);
                (JetMonomial::from_parts(base, Vec::new()), c.clone())
            }),
        )
    };
    let mut equations: Vec<JetPoly> = chart.equations().iter().map(embed).collect();
    let chart_equations = equations.len();
    let mut p_face = vec![0i32; n + 1];
    for (k, g) in gens.iter().enumerate() {
        let exps: Vec<i32> = g.iter().map(|&e| e as i32).chain([0]).collect();
        if face.contains_generator(k) {
            p_face.iter_mut().zip(&exps).for_each(|(a, b)| *a += b);
        } else {
            equations.push(JetPoly::base_monomial(ring, &exps));
        }
    }
    p_face[n] = 1;
    equations.push(JetPoly::base_monomial(ring, &p_face) - JetPoly::one(ring));
    let mut variables: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    variables.push("w".into());
    StratumPresentation {
        index: face.stratum_index,
        expected_codim: face.stratum_index,
        face,
        coordinates: Coordinates::Ambient,
        variables,
        equations,
        chart_equations,
        localized: true,
    }
}

fn torus_stratum(chart: &Chart, face: Face) -> StratumPresentation {
    let gens = chart.monoid().generators();
    let rows: Vec<&[i64]> = face.generator_indices.iter().map(|&k| gens[k].entries()).collect();
    let basis = lattice::lattice_basis(&rows);
    let r = basis.len();
    let ring = RingDescriptor::base(r + 1);
    let mut equations = Vec::new();
    for f in chart.equations() {
        let restricted = JetPoly::from_terms(
            ring,
            f.terms().filter_map(|(m, c)| {
                let v = lattice_point(chart.basis(), m.base_exponents());
                if !face.contains_point(&v) {
                    return None;
                }
                let z = lattice::coordinates(&basis, &v).expect("face points lie in the face group");
                let base: Vec<i32> = z.iter().map(|&e| e as i32).chain([0]).collect();
                Some((JetMonomial::from_parts(base, Vec::new()), c.clone()))
            }),
        );
        if restricted.is_zero() {
            continue;
        }
        // Every z_k is a unit on the torus.
        let floor: Vec<i32> = restricted.negative_base_floor().iter().map(|e| -e).collect();
        equations.push(restricted.shift_base(&floor));
    }
    let chart_equations = equations.len();
    equations.push(JetPoly::base_monomial(ring, &vec![1i32; r + 1]) - JetPoly::one(ring));
    let mut variables: Vec<String> = (1..=r).map(|i| format!("z{i}")).collect();
    variables.push("w".into());
    StratumPresentation {
        index: face.stratum_index,
        expected_codim: face.stratum_index,
        face,
        coordinates: Coordinates::Torus,
        variables,
        equations,
        chart_equations,
        localized: true,
    }
}

/// Ordinary jet ideal of the closed presentation, `w` jetted like any
/// other variable.
pub fn stratum_jet_presentation(s: &StratumPresentation, m: usize) -> Result<IdealPresentation, DimensionError> {
    jets_of(s, m, &[], format!("J_{m} of stratum l={}", s.index))
}

/// Ordinary jets of the presentation of `s`, plus `extra` constraints on
/// its base variables only (not differentiated).
pub(crate) fn jets_of(
    s: &StratumPresentation,
    m: usize,
    extra: &[JetPoly],
    provenance: String,
) -> Result<IdealPresentation, DimensionError> {
    let (names, localized) = (&s.variables, s.localized);
    let ring = RingDescriptor::new(names.len(), m, JetMode::Ordinary);
    let polys: Vec<JetPoly> = s
        .equations
        .iter()
        .flat_map(|f| iterated_derivatives(f, m, JetMode::Ordinary))
        .chain(extra.iter().map(|g| g.lift(ring)))
        .filter(|g| !g.is_zero())
        .collect();
    Ok(IdealPresentation::from_jet_polys(jetted_names(names, m), ring, &polys, provenance, localized)?.with_jet_order(m))
}

/// The jet ideal of the whole chart in `mode`. Needs polynomial equations
/// (an orthant chart), since nothing is inverted.
pub fn chart_jet_presentation(chart: &Chart, m: usize, mode: JetMode) -> Result<IdealPresentation, StrataError> {
    let ideal = jet_ideal(chart, m, mode)?;
    let polys: Vec<JetPoly> = ideal.polys().filter(|g| !g.is_zero()).cloned().collect();
    let names = crate::dimension::jet_variable_names(ideal.ring);
    let label = match mode {
        JetMode::Ordinary => format!("J_{m} of X"),
        JetMode::Log => format!("log J_{m} of X"),
    };
    let out = IdealPresentation::from_jet_polys(names, ideal.ring, &polys, label, false)?;
    Ok(if m > 0 { out.with_jet_order(m) } else { out })
}

/// Log jets of the chart whose base point lies on the stratum: the log jet
/// ideal plus the stratum's base equations (including the localization).
pub fn log_jets_over_stratum(chart: &Chart, s: &StratumPresentation, m: usize) -> Result<IdealPresentation, StrataError> {
    if s.coordinates != Coordinates::Ambient || !s.localized {
        return Err(StrataError::NotAmbient {
            face: s.face.generator_indices.clone(),
        });
    }
    let mut out = chart_jet_presentation(chart, m, JetMode::Log)?;
    out.merge(&s.ideal()?);
    out.provenance = format!("log J_{m} over stratum l={}", s.index);
    Ok(out.with_jet_order(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StratumStatus {
    Pass,
    Empty,
    /// Codimension in `X` below `l`.
    Fail,
    /// Codimension in `X` above `l`: not proper, but no reducibility follows.
    Excess,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionRow {
    pub index: usize,
    pub faces: usize,
    pub dimension: Dimension,
    pub codim: Option<i64>,
    pub status: StratumStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub dim_x: usize,
    pub rows: Vec<AssumptionRow>,
    pub open_part_nonempty: bool,
}

impl AssumptionReport {
    pub fn holds(&self) -> bool {
        self.rows
            .iter()
            .all(|r| matches!(r.status, StratumStatus::Pass | StratumStatus::Empty))
    }

    /// The first stratum whose codimension is too small.
    pub fn first_failure(&self) -> Option<&AssumptionRow> {
        self.rows.iter().find(|r| r.status == StratumStatus::Fail)
    }

    /// Assumption failure that makes the log jet schemes reducible.
    pub fn forces_reducible(&self) -> bool {
        self.open_part_nonempty && self.first_failure().is_some()
    }
}

/// Largest dimension among the strata of each index.
pub fn dimensions_by_index(strata: &[StratumPresentation], dims: &[Dimension]) -> BTreeMap<usize, (usize, Dimension)> {
    assert_eq!(strata.len(), dims.len());
    let mut out: BTreeMap<usize, (usize, Dimension)> = BTreeMap::new();
    for (s, &d) in strata.iter().zip(dims) {
        let e = out.entry(s.index).or_insert((0, Dimension::Empty));
        e.0 += 1;
        e.1 = e.1.max(d);
    }
    out
}

/// Compares `codim(X_l, X)` with `l` for each index. `dims` holds one
/// dimension per presentation of `stratify(chart)`.
pub fn check_assumption(chart: &Chart, dim_x: usize, strata: &[StratumPresentation], dims: &[Dimension]) -> AssumptionReport {
    debug_assert!(strata.iter().all(|s| s.index <= chart.ambient_rank()));
    let rows: Vec<AssumptionRow> = dimensions_by_index(strata, dims)
        .into_iter()
        .map(|(index, (faces, dimension))| {
            let codim = dimension.value().map(|d| dim_x as i64 - d as i64);
            let status = match codim {
                None => StratumStatus::Empty,
                Some(c) if c == index as i64 => StratumStatus::Pass,
                Some(c) if c < index as i64 => StratumStatus::Fail,
                Some(_) => StratumStatus::Excess,
            };
            AssumptionRow {
                index,
                faces,
                dimension,
                codim,
                status,
            }
        })
        .collect();
    let open_part_nonempty = rows.iter().any(|r| r.index == 0 && !r.dimension.is_empty());
    AssumptionReport {
        dim_x,
        rows,
        open_part_nonempty,
    }
}

/// `c x c` minors of the Jacobian of the chart equations of `s` in its
/// coordinate variables.
pub fn jacobian_minors(s: &StratumPresentation) -> Vec<JetPoly> {
    let eqs = s.chart_polys();
    let c = eqs.len();
    let k = s.coordinate_count();
    let ring = s.ring();
    if c == 0 {
        return vec![JetPoly::one(ring)];
    }
    let matrix: Vec<Vec<JetPoly>> = eqs.iter().map(|f| (1..=k).map(|i| f.partial_base(i)).collect()).collect();
    let mut minors = Vec::new();
    for cols in itertools::Itertools::combinations(0..k, c) {
        let sub: Vec<Vec<JetPoly>> = matrix.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
        let d = determinant(&sub, ring);
        if !d.is_zero() && !minors.contains(&d) {
            minors.push(d);
        }
    }
    minors
}

fn determinant(a: &[Vec<JetPoly>], ring: RingDescriptor) -> JetPoly {
    match a.len() {
        0 => JetPoly::one(ring),
        1 => a[0][0].clone(),
        n => {
            let mut total = JetPoly::zero(ring);
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<JetPoly>> = a[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &a[0][j] * &determinant(&minor, ring);
                total = if j % 2 == 0 { total + term } else { total - term };
            }
            total
        }
    }
}
