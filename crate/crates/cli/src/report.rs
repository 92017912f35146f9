//! Table and JSON renderings. Tables are fixed-width and contain nothing
//! run-dependent, so identical inputs give identical bytes.

use std::fmt::Write;

use logjet_core::analyzer::{AnalysisReport, LctConvention, Row, RowKind};
use logjet_core::strata::AssumptionReport;
use logjet_core::Dimension;
use serde::{Deserialize, Serialize};

pub const REPORT_FORMAT: &str = "logjet-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Serialize, Deserialize)]
struct ReportFile {
    format: String,
    report: AnalysisReport,
}

/// Renders an analysis report.
pub fn emit_report(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Json => {
            let file = ReportFile {
                format: REPORT_FORMAT.into(),
                report: report.clone(),
            };
            serde_json::to_string_pretty(&file).expect("reports serialize") + "\n"
        }
        Format::Table => report_table(report, false),
    }
}

/// Inverse of the JSON rendering.
pub fn parse_report(text: &str) -> Result<AnalysisReport, String> {
    let file: ReportFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if file.format != REPORT_FORMAT {
        return Err(format!("expected format {REPORT_FORMAT:?}, found {:?}", file.format));
    }
    Ok(file.report)
}

fn opt_dim(d: Option<Dimension>) -> String {
    d.map_or_else(|| "?".to_string(), |d| d.to_string())
}

/// Left-aligned columns separated by two spaces, trailing spaces trimmed.
pub fn columns(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let mut s = String::from("  ");
        for (cell, w) in cells.iter().zip(&widths) {
            s.push_str(cell);
            s.push_str(&" ".repeat(w - cell.chars().count() + 2));
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(header.to_vec(), &mut out);
    for row in rows {
        line(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

pub fn assumption_table(a: &AssumptionReport) -> String {
    let rows: Vec<Vec<String>> = a
        .rows
        .iter()
        .map(|r| {
            vec![
                r.index.to_string(),
                r.faces.to_string(),
                r.dimension.to_string(),
                r.codim.map_or("-".into(), |c| c.to_string()),
                serde_json::to_value(r.status).unwrap().as_str().unwrap().to_string(),
            ]
        })
        .collect();
    columns(&["l", "faces", "dim X_l", "codim", "status"], &rows)
}

fn row_cells(r: &Row, verbose: bool) -> Vec<String> {
    let mut cells = vec![
        match r.kind {
            RowKind::Stratum => "stratum".to_string(),
            RowKind::OpenPart => "open part".to_string(),
        },
        r.index.to_string(),
        r.order.to_string(),
        opt_dim(r.jet_dim),
        opt_dim(r.total),
        r.threshold.to_string(),
        serde_json::to_value(r.status).unwrap().as_str().unwrap().to_string(),
    ];
    if verbose {
        cells.push(r.note.clone().unwrap_or_default());
    }
    cells
}

pub fn report_table(report: &AnalysisReport, verbose: bool) -> String {
    let mut out = String::new();
    let log = match report.log_structure {
        logjet_core::LogStructure::Standard => "standard",
        logjet_core::LogStructure::Trivial => "trivial",
    };
    writeln!(
        out,
        "chart: n = {}, log structure {log}, dim X = {}, c = {}, M = {}",
        report.ambient_rank, report.dim_x, report.codim, report.max_order
    )
    .unwrap();
    if let Some(a) = &report.assumption {
        out.push_str("\nstrata (codim of X_l in X should be l)\n");
        out.push_str(&assumption_table(a));
    }
    if !report.rows.is_empty() {
        out.push_str("\ninequalities (total = dim + m*l must stay below threshold = d(m+1))\n");
        let mut header = vec!["kind", "l", "m", "dim", "total", "threshold", "status"];
        if verbose {
            header.push("note");
        }
        let rows: Vec<Vec<String>> = report.rows.iter().map(|r| row_cells(r, verbose)).collect();
        out.push_str(&columns(&header, &rows));
    }
    if !report.lct.is_empty() {
        out.push_str("\nlct estimates (order-m upper bounds; * marks the smallest)\n");
        let rows: Vec<Vec<String>> = report
            .lct
            .iter()
            .map(|e| {
                vec![
                    match e.convention {
                        LctConvention::Stratum => "d+c-dim/(m+1)".to_string(),
                        LctConvention::Ambient => "n-dim/(m+1)".to_string(),
                    },
                    e.index.to_string(),
                    e.order.to_string(),
                    opt_dim(e.jet_dim),
                    match (&e.value, e.jet_dim) {
                        (Some(v), _) => v.to_string(),
                        (None, Some(Dimension::Empty)) => "inf".to_string(),
                        (None, _) => "?".to_string(),
                    },
                    if e.best { "*".into() } else { String::new() },
                    e.divisors.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","),
                ]
            })
            .collect();
        out.push_str(&columns(&["convention", "l", "m", "dim", "value", "best", "m+1 div by"], &rows));
    }
    writeln!(out, "\nverdict: {}", report.verdict).unwrap();
    out
}
