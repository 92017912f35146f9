//! The jet-dimension criteria for a chart: complete-intersection and
//! stratum-codimension checks, the inequalities
//! `dim J_m(X_l) + m·l < d(m+1)` for `l > 0`, the open-part check through
//! jets over the singular locus, and log canonical threshold estimates.
//!
//! A finite run can only find obstructions. Irreducibility of every log
//! jet scheme is needed for canonicity, so the positive verdict is always
//! "no obstruction up to order M".

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::chart::{Chart, LogStructure};
use crate::dimension::{
    fp_dimension_estimate, groebner_dimension, Budget, DimResult, Dimension, DimensionError, FpConfig, IdealPresentation,
    Method, DEFAULT_PRIMES,
};
use crate::poly::{integer, Rational};
use crate::strata::{
    check_assumption, jacobian_minors, jets_of, stratify, unstratified, AssumptionReport,
    StrataError, StratumPresentation, StratumStatus,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyzerError {
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error("preconditions of the inequalities fail: {0}")]
    Preconditions(String),
    #[error("max order must be at least 1")]
    ZeroOrder,
    #[error("X is empty: the equations have no common zero on the chart")]
    EmptyChart,
    #[error("not a complete intersection: dim X = {dim}, but n - c = {ambient} - {equations} = {expected}")]
    NotCompleteIntersection {
        dim: usize,
        ambient: usize,
        equations: usize,
        expected: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodPreference {
    #[default]
    Groebner,
    Fp,
    /// Gröbner, confirmed by point counts where the variable count allows.
    Both,
}

impl FromStr for MethodPreference {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "groebner" => Ok(Self::Groebner),
            "fp" => Ok(Self::Fp),
            "both" => Ok(Self::Both),
            _ => Err(format!("unknown method {s:?} (expected groebner, fp or both)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub max_order: usize,
    pub method: MethodPreference,
    pub budget: Budget,
    pub fp: FpConfig,
    pub primes: Vec<u64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            max_order: 3,
            method: MethodPreference::Groebner,
            budget: Budget::default(),
            fp: FpConfig::default(),
            primes: DEFAULT_PRIMES.to_vec(),
        }
    }
}

impl AnalysisConfig {
    pub fn with_max_order(max_order: usize) -> Self {
        AnalysisConfig {
            max_order,
            ..Self::default()
        }
    }

    /// Dimension of `ideal` by the preferred method.
    pub fn dimension(&self, ideal: &IdealPresentation) -> Result<(DimResult, Option<String>), DimensionError> {
        match self.method {
            MethodPreference::Groebner => Ok((groebner_dimension(ideal, &self.budget)?, None)),
            MethodPreference::Fp => {
                let r = fp_dimension_estimate(ideal, &self.primes, &self.fp)?;
                let note = (!r.reliable()).then(|| "point counts disagree across primes".to_string());
                Ok((r, note))
            }
            MethodPreference::Both => {
                let exact = groebner_dimension(ideal, &self.budget)?;
                let note = match fp_dimension_estimate(ideal, &self.primes, &self.fp) {
                    Ok(fp) if fp.dimension == exact.dimension => Some("confirmed by point counts".to_string()),
                    Ok(fp) => Some(format!("point counts suggest {}", fp.dimension)),
                    Err(e) => Some(format!("no point-count check: {e}")),
                };
                Ok((exact, note))
            }
        }
    }
}

/// Exact rational serialized as `"p/q"` (or `"p"` for integers).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fraction(pub Rational);

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Rational::from_str(&text)
            .map(Fraction)
            .map_err(|_| serde::de::Error::custom(format!("bad rational {text:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    /// `dim J_m(X_l) + m·l` against `d(m+1)`, for `l > 0`.
    Stratum,
    /// Jets of `X_0` through its singular points against `d(m+1)`.
    OpenPart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RowStatus {
    Strict,
    Violated,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub kind: RowKind,
    pub index: usize,
    pub order: usize,
    /// `dim J_m(X_l)` (largest over the faces of index `l`), or the
    /// dimension of jets over the singular locus for the open part.
    pub jet_dim: Option<Dimension>,
    /// `jet_dim + m·l`.
    pub total: Option<Dimension>,
    pub threshold: usize,
    pub status: RowStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LctConvention {
    /// `d + c - dim J_m(X_l)/(m+1)`.
    Stratum,
    /// `dim Y - dim J_m(X)/(m+1)` for `X ⊂ Y = A^n` with trivial log structure.
    Ambient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LctEstimate {
    /// Stratum index, or 0 for `X` itself under the ambient convention.
    pub index: usize,
    pub order: usize,
    pub jet_dim: Option<Dimension>,
    /// `None` for an empty stratum (no constraint, `+inf`) or an unknown
    /// dimension.
    pub value: Option<Fraction>,
    pub convention: LctConvention,
    /// Smallest value over the computed orders for this index.
    pub best: bool,
    /// Which of `2..=6` divide `m + 1`.
    pub divisors: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Stratum,
    OpenPart,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NoObstructionUpToM { max_order: usize },
    Reducible { index: usize, order: usize, witness: WitnessKind },
    AssumptionFail { index: usize, codim: i64 },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::NoObstructionUpToM { .. } => "NO_OBSTRUCTION_UP_TO_M",
            Verdict::Reducible { .. } => "REDUCIBLE",
            Verdict::AssumptionFail { .. } => "ASSUMPTION_FAIL",
            Verdict::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }

    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::NoObstructionUpToM { .. } => 0,
            Verdict::Reducible { .. } => 10,
            Verdict::AssumptionFail { .. } => 20,
            Verdict::Inconclusive { .. } => 30,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NoObstructionUpToM { max_order } => write!(
                f,
                "NO_OBSTRUCTION_UP_TO_M (M={max_order}): all inequalities strict; canonicity needs every m, not only m <= {max_order}"
            ),
            Verdict::Reducible { index, order, witness } => {
                let what = match witness {
                    WitnessKind::Stratum => "stratum",
                    WitnessKind::OpenPart => "jets over the singular locus of the open part",
                };
                write!(f, "REDUCIBLE (l={index}, m={order}) via {what}: a jet scheme is reducible, so NOT canonical")
            }
            Verdict::AssumptionFail { index, codim } => write!(
                f,
                "ASSUMPTION_FAIL (l={index}, codim {codim}): the log jet schemes are reducible, so NOT canonical"
            ),
            Verdict::Inconclusive { reason } => write!(f, "INCONCLUSIVE: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub ambient_rank: usize,
    pub log_structure: LogStructure,
    pub dim_x: usize,
    pub codim: usize,
    pub max_order: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub assumption: Option<AssumptionReport>,
    pub rows: Vec<Row>,
    pub lct: Vec<LctEstimate>,
    pub verdict: Verdict,
}

/// `d + c - dim/(m+1)` or `n - dim/(m+1)`; `None` for an empty stratum.
pub fn estimate_lct(constant: usize, jet_dim: Dimension, m: usize) -> Option<Rational> {
    jet_dim
        .value()
        .map(|dim| integer(constant as i64) - Rational::new((dim as i64).into(), ((m + 1) as i64).into()))
}

/// The base presentation of `X_0` (the open stratum, or `X` itself for a
/// trivial log structure) together with the Jacobian minors of its chart
/// equations: the singular locus of `X_0`.
pub fn jacobian_singular_locus(chart: &Chart) -> Result<IdealPresentation, AnalyzerError> {
    let open = open_part(chart)?;
    let mut ideal = open.ideal()?;
    let minors = jacobian_minors(&open);
    let extra = IdealPresentation::from_jet_polys(open.variables.clone(), open.ring(), &minors, "jacobian minors", open.localized)?;
    ideal.merge(&extra);
    ideal.provenance = "singular locus of the open part".into();
    Ok(ideal)
}

fn open_part(chart: &Chart) -> Result<StratumPresentation, AnalyzerError> {
    match chart.log_structure() {
        LogStructure::Trivial => Ok(unstratified(chart)),
        LogStructure::Standard => Ok(stratify(chart)?
            .into_iter()
            .find(|s| s.index == 0)
            .expect("P is a face of itself")),
    }
}

/// Jets of `X_0` whose base point is singular.
fn open_part_jets(open: &StratumPresentation, m: usize) -> Result<IdealPresentation, DimensionError> {
    jets_of(open, m, &jacobian_minors(open), format!("J_{m} of the open part over its singular locus"))
}

struct Prepared {
    strata: Vec<StratumPresentation>,
    stratum_dims: Vec<Dimension>,
    open: StratumPresentation,
    dim_x: usize,
}

enum Preparation {
    Ready(Prepared, Option<AssumptionReport>),
    Stop(Verdict, usize, Option<AssumptionReport>),
}

fn prepare(chart: &Chart, cfg: &AnalysisConfig) -> Result<Preparation, AnalyzerError> {
    let n = chart.ambient_rank();
    let c = chart.codim_claim();
    let open = open_part(chart)?;
    let strata = match chart.log_structure() {
        LogStructure::Standard => stratify(chart)?,
        LogStructure::Trivial => vec![open.clone()],
    };
    let dims: Vec<Result<Dimension, DimensionError>> = strata
        .par_iter()
        .map(|s| Ok(cfg.dimension(&s.ideal()?)?.0.dimension))
        .collect();
    let mut stratum_dims = Vec::with_capacity(dims.len());
    for d in dims {
        match d {
            Ok(d) => stratum_dims.push(d),
            Err(e @ DimensionError::ResourceLimit { .. }) | Err(e @ DimensionError::TooManyVariables { .. }) => {
                let reason = format!("dimension of a stratum unavailable: {e}");
                return Ok(Preparation::Stop(Verdict::Inconclusive { reason }, 0, None));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let dim_x = match stratum_dims.iter().max().and_then(|d| d.value()) {
        Some(d) => d,
        None => return Err(AnalyzerError::EmptyChart),
    };
    if dim_x as i64 != n as i64 - c as i64 {
        return Err(AnalyzerError::NotCompleteIntersection {
            dim: dim_x,
            ambient: n,
            equations: c,
            expected: n as i64 - c as i64,
        });
    }
    let assumption = (chart.log_structure() == LogStructure::Standard)
        .then(|| check_assumption(chart, dim_x, &strata, &stratum_dims));
    if let Some(report) = &assumption {
        if report.forces_reducible() {
            let row = report.first_failure().expect("a failing stratum");
            let verdict = Verdict::AssumptionFail {
                index: row.index,
                codim: row.codim.expect("failing strata are nonempty"),
            };
            return Ok(Preparation::Stop(verdict, dim_x, assumption));
        }
        if !report.holds() {
            let bad = report
                .rows
                .iter()
                .find(|r| !matches!(r.status, StratumStatus::Pass | StratumStatus::Empty))
                .expect("some stratum fails");
            let reason = format!(
                "stratum l={} has codimension {:?} in X, so the criteria do not apply",
                bad.index, bad.codim
            );
            return Ok(Preparation::Stop(Verdict::Inconclusive { reason }, dim_x, assumption));
        }
    }
    Ok(Preparation::Ready(
        Prepared {
            strata,
            stratum_dims,
            open,
            dim_x,
        },
        assumption,
    ))
}

enum Task<'a> {
    Stratum(&'a StratumPresentation, usize),
    Open(usize),
    Whole(usize),
}

type Outcome = Result<(DimResult, Option<String>), DimensionError>;

fn run_task(task: &Task<'_>, prep: &Prepared, cfg: &AnalysisConfig) -> Outcome {
    let ideal = match *task {
        Task::Stratum(s, m) => crate::strata::stratum_jet_presentation(s, m)?,
        Task::Open(m) => open_part_jets(&prep.open, m)?,
        Task::Whole(m) => jets_of(&prep.open, m, &[], format!("J_{m} of X"))?,
    };
    cfg.dimension(&ideal)
}

fn row_from(kind: RowKind, index: usize, m: usize, d: usize, outcome: Result<(Dimension, Option<Method>, Option<String>), String>) -> Row {
    let threshold = d * (m + 1);
    match outcome {
        Ok((dim, method, note)) => {
            let total = match dim {
                Dimension::Empty => Dimension::Empty,
                Dimension::Finite(k) => Dimension::Finite(k + m * index),
            };
            let status = match total {
                Dimension::Finite(t) if t >= threshold => RowStatus::Violated,
                _ => RowStatus::Strict,
            };
            Row {
                kind,
                index,
                order: m,
                jet_dim: Some(dim),
                total: Some(total),
                threshold,
                status,
                method,
                note,
            }
        }
        Err(note) => Row {
            kind,
            index,
            order: m,
            jet_dim: None,
            total: None,
            threshold,
            status: RowStatus::Unknown,
            method: None,
            note: Some(note),
        },
    }
}

/// A dimension with the method that produced it and an optional note.
type Measured = (Dimension, Option<Method>, Option<String>);

fn compute_rows(chart: &Chart, prep: &Prepared, cfg: &AnalysisConfig, orders: &[usize]) -> Result<(Vec<Row>, Vec<LctEstimate>), AnalyzerError> {
    let trivial = chart.log_structure() == LogStructure::Trivial;
    let mut tasks = Vec::new();
    for &m in orders {
        for (s, d) in prep.strata.iter().zip(&prep.stratum_dims) {
            if s.index > 0 && !d.is_empty() {
                tasks.push(Task::Stratum(s, m));
            }
        }
        tasks.push(Task::Open(m));
        if trivial {
            tasks.push(Task::Whole(m));
        }
    }
    let outcomes: Vec<Outcome> = tasks.par_iter().map(|t| run_task(t, prep, cfg)).collect();
    let mut flat = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        flat.push(match outcome {
            Ok((r, note)) => {
                let note = match (r.reliable(), note) {
                    (false, None) => Some("unreliable point-count estimate".to_string()),
                    (_, note) => note,
                };
                Ok((r.dimension, Some(r.method), note, r.reliable()))
            }
            Err(e @ (DimensionError::ResourceLimit { .. } | DimensionError::TooManyVariables { .. })) => Err(e.to_string()),
            Err(e) => return Err(e.into()),
        });
    }

    let d = prep.dim_x;
    let c = chart.codim_claim();
    let mut rows = Vec::new();
    let mut lct = Vec::new();
    for &m in orders {
        // Largest dimension over faces of the same index; unknown wins.
        let mut by_index: std::collections::BTreeMap<usize, Result<Measured, String>> = Default::default();
        let mut open = None;
        let mut whole = None;
        for (task, outcome) in tasks.iter().zip(&flat) {
            let outcome = outcome.clone().and_then(|(dim, method, note, reliable)| {
                if reliable {
                    Ok((dim, method, note))
                } else {
                    Err(note.unwrap_or_default())
                }
            });
            match *task {
                Task::Stratum(s, mm) if mm == m => {
                    let e = by_index.entry(s.index).or_insert(Ok((Dimension::Empty, None, None)));
                    *e = match (e.clone(), outcome) {
                        (Err(a), _) => Err(a),
                        (_, Err(b)) => Err(b),
                        (Ok(a), Ok(b)) => Ok(if b.0 > a.0 { b } else { a }),
                    };
                }
                Task::Open(mm) if mm == m => open = Some(outcome),
                Task::Whole(mm) if mm == m => whole = Some(outcome),
                _ => {}
            }
        }
        for (index, outcome) in by_index {
            let row = row_from(RowKind::Stratum, index, m, d, outcome);
            lct.push(lct_entry(index, m, row.jet_dim, d + c, LctConvention::Stratum));
            rows.push(row);
        }
        rows.push(row_from(RowKind::OpenPart, 0, m, d, open.expect("open task per order")));
        if let Some(whole) = whole {
            let jet_dim = whole.ok().map(|(dim, _, _)| dim);
            lct.push(lct_entry(0, m, jet_dim, chart.ambient_rank(), LctConvention::Ambient));
        }
    }
    mark_best(&mut lct);
    rows.sort_by_key(|r| (r.order, r.kind == RowKind::OpenPart, r.index));
    Ok((rows, lct))
}

fn lct_entry(index: usize, m: usize, jet_dim: Option<Dimension>, constant: usize, convention: LctConvention) -> LctEstimate {
    LctEstimate {
        index,
        order: m,
        jet_dim,
        value: jet_dim.and_then(|dim| estimate_lct(constant, dim, m)).map(Fraction),
        convention,
        best: false,
        divisors: (2..=6).filter(|k| (m + 1) % k == 0).collect(),
    }
}

fn mark_best(lct: &mut [LctEstimate]) {
    let keys: Vec<(usize, LctConvention)> = lct.iter().map(|e| (e.index, e.convention)).collect();
    for key in keys {
        let best = lct
            .iter()
            .enumerate()
            .filter(|(_, e)| (e.index, e.convention) == key && e.value.is_some())
            .min_by(|a, b| a.1.value.cmp(&b.1.value).then(a.0.cmp(&b.0)))
            .map(|(k, _)| k);
        if let Some(k) = best {
            lct[k].best = true;
        }
    }
}

/// Inequality rows at a single order `m`. Requires the complete
/// intersection and stratum-codimension checks to pass.
pub fn irreducibility_report(chart: &Chart, m: usize, cfg: &AnalysisConfig) -> Result<Vec<Row>, AnalyzerError> {
    match prepare(chart, cfg)? {
        Preparation::Ready(prep, _) => Ok(compute_rows(chart, &prep, cfg, &[m])?.0),
        Preparation::Stop(verdict, _, _) => Err(AnalyzerError::Preconditions(verdict.to_string())),
    }
}

/// Runs every check for `m = 1..=M` and decides.
pub fn verdict(chart: &Chart, cfg: &AnalysisConfig) -> Result<AnalysisReport, AnalyzerError> {
    if cfg.max_order == 0 {
        return Err(AnalyzerError::ZeroOrder);
    }
    let mut report = AnalysisReport {
        ambient_rank: chart.ambient_rank(),
        log_structure: chart.log_structure(),
        dim_x: 0,
        codim: chart.codim_claim(),
        max_order: cfg.max_order,
        assumption: None,
        rows: Vec::new(),
        lct: Vec::new(),
        verdict: Verdict::Inconclusive { reason: String::new() },
    };
    let (prep, assumption) = match prepare(chart, cfg)? {
        Preparation::Ready(prep, assumption) => (prep, assumption),
        Preparation::Stop(verdict, dim_x, assumption) => {
            report.dim_x = dim_x;
            report.assumption = assumption;
            report.verdict = verdict;
            return Ok(report);
        }
    };
    report.dim_x = prep.dim_x;
    report.assumption = assumption;
    let orders: Vec<usize> = (1..=cfg.max_order).collect();
    let (rows, lct) = compute_rows(chart, &prep, cfg, &orders)?;
    report.verdict = decide(&rows, cfg.max_order);
    report.rows = rows;
    report.lct = lct;
    Ok(report)
}

fn decide(rows: &[Row], max_order: usize) -> Verdict {
    if let Some(r) = rows.iter().find(|r| r.status == RowStatus::Violated) {
        return Verdict::Reducible {
            index: r.index,
            order: r.order,
            witness: match r.kind {
                RowKind::Stratum => WitnessKind::Stratum,
                RowKind::OpenPart => WitnessKind::OpenPart,
            },
        };
    }
    if let Some(r) = rows.iter().find(|r| r.status == RowStatus::Unknown) {
        return Verdict::Inconclusive {
            reason: format!(
                "row (l={}, m={}) unknown: {}",
                r.index,
                r.order,
                r.note.as_deref().unwrap_or("dimension unavailable")
            ),
        };
    }
    Verdict::NoObstructionUpToM { max_order }
}

impl AnalysisReport {
    /// The lowest estimate per index, if any.
    pub fn best_lct(&self, index: usize, convention: LctConvention) -> Option<&LctEstimate> {
        self.lct
            .iter()
            .find(|e| e.best && e.index == index && e.convention == convention)
    }

    pub fn witness_row(&self) -> Option<&Row> {
        match self.verdict {
            Verdict::Reducible { index, order, witness } => self.rows.iter().find(|r| {
                r.index == index
                    && r.order == order
                    && matches!(
                        (r.kind, witness),
                        (RowKind::Stratum, WitnessKind::Stratum) | (RowKind::OpenPart, WitnessKind::OpenPart)
                    )
            }),
            _ => None,
        }
    }
}

/// A stratum with its dimension or the reason it is unknown.
pub type StratumDimension = (StratumPresentation, Result<Dimension, String>);

/// Per-index stratum dimensions, for display.
pub fn stratum_summary(chart: &Chart, cfg: &AnalysisConfig) -> Result<Vec<StratumDimension>, AnalyzerError> {
    let strata = match chart.log_structure() {
        LogStructure::Standard => stratify(chart)?,
        LogStructure::Trivial => vec![unstratified(chart)],
    };
    let dims: Vec<Result<Dimension, String>> = strata
        .par_iter()
        .map(|s| {
            let ideal = s.ideal().map_err(|e| e.to_string())?;
            cfg.dimension(&ideal).map(|(r, _)| r.dimension).map_err(|e| e.to_string())
        })
        .collect();
    Ok(strata.into_iter().zip(dims).collect())
}
