//! Chart files: JSON with a `"format": "logjet-chart/1"` header and
//! equations in the polynomial grammar of `logjet-core`.

use std::path::{Path, PathBuf};

use logjet_core::dimension::Budget;
use logjet_core::{AffineMonoid, Chart, ChartError, LatticeVector, LogStructure, MonoidError, ParseError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CHART_FORMAT: &str = "logjet-chart/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartFile {
    pub format: String,
    pub ambient_rank: usize,
    pub monoid_generators: Vec<Vec<i64>>,
    /// Generator positions used as the basis `x_1..x_n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<usize>>,
    #[serde(default)]
    pub equations: Vec<String>,
    #[serde(default)]
    pub log_structure: LogStructure,
    /// Default `--max-order` for `analyze`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    /// Default Gröbner budget, `"pairs,degree"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<String>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}, column {column}: {message}")]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: field `format`: expected {CHART_FORMAT:?}, found {found:?}")]
    Header { path: PathBuf, found: String },
    #[error("{path}: field `{field}`: {source}")]
    Parse {
        path: PathBuf,
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("{path}: field `{field}`: {source}")]
    Monoid {
        path: PathBuf,
        field: String,
        #[source]
        source: MonoidError,
    },
    #[error("{path}: field `{field}`: {message}")]
    Invalid {
        path: PathBuf,
        field: String,
        message: String,
    },
}

impl ChartFile {
    pub fn new(ambient_rank: usize, monoid_generators: Vec<Vec<i64>>, equations: &[&str]) -> Self {
        ChartFile {
            format: CHART_FORMAT.into(),
            ambient_rank,
            monoid_generators,
            basis: None,
            equations: equations.iter().map(|s| s.to_string()).collect(),
            log_structure: LogStructure::Standard,
            max_order: None,
            budget: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chart files serialize")
    }

    /// Parses and validates. `path` only labels errors.
    pub fn parse(text: &str, path: &Path) -> Result<(ChartFile, Chart), LoadError> {
        let file: ChartFile = serde_json::from_str(text).map_err(|e| LoadError::Json {
            path: path.into(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let chart = file.to_chart(path)?;
        Ok((file, chart))
    }

    pub fn budget(&self, path: &Path) -> Result<Option<Budget>, LoadError> {
        self.budget
            .as_deref()
            .map(|b| {
                b.parse().map_err(|e: logjet_core::dimension::DimensionError| LoadError::Invalid {
                    path: path.into(),
                    field: "budget".into(),
                    message: e.to_string(),
                })
            })
            .transpose()
    }

    pub fn monoid(&self, path: &Path) -> Result<AffineMonoid, LoadError> {
        if self.format != CHART_FORMAT {
            return Err(LoadError::Header {
                path: path.into(),
                found: self.format.clone(),
            });
        }
        for (k, g) in self.monoid_generators.iter().enumerate() {
            if g.len() != self.ambient_rank {
                return Err(LoadError::Invalid {
                    path: path.into(),
                    field: format!("monoid_generators[{k}]"),
                    message: format!("has length {}, but ambient_rank is {}", g.len(), self.ambient_rank),
                });
            }
        }
        let gens = self.monoid_generators.iter().cloned().map(LatticeVector::new).collect();
        AffineMonoid::new(self.ambient_rank, gens).map_err(|source| LoadError::Monoid {
            path: path.into(),
            field: "monoid_generators".into(),
            source,
        })
    }

    pub fn to_chart(&self, path: &Path) -> Result<Chart, LoadError> {
        let monoid = self.monoid(path)?;
        let ring = logjet_core::RingDescriptor::base(self.ambient_rank);
        let mut equations = Vec::with_capacity(self.equations.len());
        for (k, text) in self.equations.iter().enumerate() {
            let f = logjet_core::parse_poly(text, ring).map_err(|source| LoadError::Parse {
                path: path.into(),
                field: format!("equations[{k}]"),
                source,
            })?;
            equations.push(f);
        }
        let built = match &self.basis {
            Some(indices) => Chart::with_basis_indices(monoid, indices, equations, self.log_structure),
            None => Chart::new(monoid, equations, self.log_structure),
        };
        built.map_err(|e| self.chart_error(e, path))
    }

    fn chart_error(&self, e: ChartError, path: &Path) -> LoadError {
        let invalid = |field: String, message: String| LoadError::Invalid {
            path: path.into(),
            field,
            message,
        };
        match e {
            ChartError::Monoid(source) => LoadError::Monoid {
                path: path.into(),
                field: if self.basis.is_some() { "basis" } else { "monoid_generators" }.into(),
                source,
            },
            ChartError::Parse { index, source } => LoadError::Parse {
                path: path.into(),
                field: format!("equations[{index}]"),
                source,
            },
            ChartError::Support { index, .. } | ChartError::NotBase { index, .. } => {
                invalid(format!("equations[{index}]"), e.to_string())
            }
            ChartError::TrivialNeedsOrthant => invalid("log_structure".into(), e.to_string()),
            ChartError::BasisSize { .. } | ChartError::BasisNotInMonoid { .. } | ChartError::BasisNotUnimodular { .. } => {
                invalid("basis".into(), e.to_string())
            }
        }
    }
}

/// Reads and validates a chart file.
pub fn load_chart(path: &Path) -> Result<(ChartFile, Chart), LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.into(),
        source,
    })?;
    ChartFile::parse(&text, path)
}

/// Reads a file holding at least `format`, `ambient_rank` and
/// `monoid_generators` (a chart file works).
pub fn load_monoid(path: &Path) -> Result<AffineMonoid, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.into(),
        source,
    })?;
    let file: ChartFile = serde_json::from_str(&text).map_err(|e| LoadError::Json {
        path: path.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.monoid(path)
}
