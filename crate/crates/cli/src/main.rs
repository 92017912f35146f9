use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use logjet_cli::report::{assumption_table, columns, report_table};
use logjet_cli::{emit_report, load_chart, load_monoid, Format};
use logjet_core::analyzer::{stratum_summary, verdict, AnalysisConfig, AnalyzerError, MethodPreference};
use logjet_core::dimension::{Budget, DimResult, Dimension, DimensionError, IdealPresentation};
use logjet_core::jets::{jet_ideal, refinement_pullback_check};
use logjet_core::strata::{chart_jet_presentation, check_assumption, stratify, stratum_jet_presentation, StrataError};
use logjet_core::{Chart, JetMode, LogStructure};
use serde_json::json;

/// Ordinary and log jet schemes of toric charts: strata, exact jet
/// dimensions and the jet-dimension criteria for canonical singularities.
///
/// Exit codes: 0 no obstruction (or success), 10 reducible, 20 assumption
/// failure, 30 inconclusive, 1 usage or input error.
#[derive(Debug, Parser)]
#[command(name = "logjet", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Print notes, presentations and certificates.
    #[arg(long, short, global = true)]
    verbose: bool,
    /// Gröbner budget "pairs,degree".
    #[arg(long, global = true, env = "LOGJET_BUDGET")]
    budget: Option<Budget>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the jet ideal generators d^j f_i.
    Jets {
        #[arg(long)]
        order: usize,
        /// Log jets instead of ordinary jets.
        #[arg(long)]
        log: bool,
        file: PathBuf,
    },
    /// List the strata with their presentations and dimensions.
    Strata { file: PathBuf },
    /// Dimension of the jet scheme of X, or of a stratum's jets.
    Dim {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        stratum: Option<usize>,
        #[arg(long, default_value = "groebner")]
        method: MethodPreference,
        /// Log jets of X (ignored with --stratum).
        #[arg(long)]
        log: bool,
        file: PathBuf,
    },
    /// Compare log jet ideals over P and over a refinement Q.
    CheckRefinement {
        file: PathBuf,
        q_file: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// Run every criterion up to order M.
    Analyze {
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long, default_value = "groebner")]
        method: MethodPreference,
        file: PathBuf,
    },
}

/// An error whose exit code is not 1.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
struct Coded {
    code: u8,
    message: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            match e.downcast_ref::<Coded>() {
                Some(c) => ExitCode::from(c.code),
                None => ExitCode::from(1),
            }
        }
    }
}

/// The error chain, skipping causes already quoted by their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    let mut last = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !last.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
        last = text;
    }
    out
}

fn budget_for(cli: &Cli, file_budget: Option<Budget>) -> Budget {
    cli.budget.or(file_budget).unwrap_or_default()
}

fn dimension_error(e: DimensionError) -> anyhow::Error {
    match e {
        DimensionError::ResourceLimit { .. } | DimensionError::TooManyVariables { .. } => Coded {
            code: 30,
            message: format!("inconclusive: {e}"),
        }
        .into(),
        e => e.into(),
    }
}

fn strata_error(e: StrataError) -> anyhow::Error {
    match e {
        StrataError::Dimension(d) => dimension_error(d),
        e => e.into(),
    }
}

fn run(cli: &Cli) -> Result<(String, u8)> {
    match &cli.command {
        Command::Jets { order, log, file } => {
            let (_, chart) = load_chart(file)?;
            jets(cli, &chart, *order, *log)
        }
        Command::Strata { file } => {
            let (spec, chart) = load_chart(file)?;
            let cfg = AnalysisConfig {
                budget: budget_for(cli, spec.budget(file)?),
                ..AnalysisConfig::default()
            };
            strata(cli, &chart, &cfg)
        }
        Command::Dim {
            order,
            stratum,
            method,
            log,
            file,
        } => {
            let (spec, chart) = load_chart(file)?;
            let cfg = AnalysisConfig {
                budget: budget_for(cli, spec.budget(file)?),
                method: *method,
                ..AnalysisConfig::default()
            };
            dim(cli, &chart, &cfg, *order, *stratum, *log)
        }
        Command::CheckRefinement { file, q_file, order } => {
            let (_, chart) = load_chart(file)?;
            let q = load_monoid(q_file)?;
            let report = refinement_pullback_check(&chart, &q, *order)?;
            let code = if report.holds { 0 } else { 10 };
            let text = match cli.format {
                Format::Json => pretty(&json!({
                    "format": "logjet-refinement/1",
                    "order": order,
                    "holds": report.holds,
                    "generators_compared": report.generators_compared,
                    "first_discrepancy": report.first_discrepancy,
                })),
                Format::Table => {
                    let mut out = format!(
                        "refinement pullback at m = {order}: {} ({} generators compared)\n",
                        if report.holds { "HOLDS" } else { "FAILS" },
                        report.generators_compared
                    );
                    if let Some((eq, j, p, q)) = &report.first_discrepancy {
                        out.push_str(&format!("  first difference: equation {eq}, order {j}\n    over P: {p}\n    over Q: {q}\n"));
                    }
                    out
                }
            };
            Ok((text, code))
        }
        Command::Analyze { max_order, method, file } => {
            let (spec, chart) = load_chart(file)?;
            let cfg = AnalysisConfig {
                max_order: max_order.or(spec.max_order).unwrap_or(3),
                method: *method,
                budget: budget_for(cli, spec.budget(file)?),
                ..AnalysisConfig::default()
            };
            let report = verdict(&chart, &cfg).map_err(|e| match e {
                AnalyzerError::Dimension(d) => dimension_error(d),
                AnalyzerError::Strata(s) => strata_error(s),
                e => e.into(),
            })?;
            let text = match (cli.format, cli.verbose) {
                (Format::Table, true) => report_table(&report, true),
                (format, _) => emit_report(&report, format),
            };
            Ok((text, report.verdict.exit_code() as u8))
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn jets(cli: &Cli, chart: &Chart, m: usize, log: bool) -> Result<(String, u8)> {
    let mode = if log { JetMode::Log } else { JetMode::Ordinary };
    let ideal = jet_ideal(chart, m, mode)?;
    let text = match cli.format {
        Format::Json => pretty(&json!({
            "format": "logjet-jets/1",
            "mode": mode.to_string(),
            "order": m,
            "generators": ideal.generators.iter().map(|g| json!({
                "equation": g.equation,
                "order": g.order,
                "poly": g.poly.render(),
            })).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let rows: Vec<Vec<String>> = ideal
                .generators
                .iter()
                .map(|g| vec![g.equation.to_string(), g.order.to_string(), g.poly.render()])
                .collect();
            format!("{mode} jets of order {m} in {}\n{}", ideal.ring, columns(&["eq", "j", "d^j f"], &rows))
        }
    };
    Ok((text, 0))
}

fn strata(cli: &Cli, chart: &Chart, cfg: &AnalysisConfig) -> Result<(String, u8)> {
    let summary = stratum_summary(chart, cfg)?;
    let dims: Option<Vec<Dimension>> = summary.iter().map(|(_, d)| d.as_ref().ok().copied()).collect();
    let assumption = match (&dims, chart.log_structure()) {
        (Some(dims), LogStructure::Standard) => {
            let strata: Vec<_> = summary.iter().map(|(s, _)| s.clone()).collect();
            dims.iter()
                .max()
                .and_then(|d| d.value())
                .map(|dim_x| check_assumption(chart, dim_x, &strata, dims))
        }
        _ => None,
    };
    let text = match cli.format {
        Format::Json => pretty(&json!({
            "format": "logjet-strata/1",
            "strata": summary.iter().map(|(s, d)| json!({
                "index": s.index,
                "face": s.face.generator_indices,
                "coordinates": s.coordinates,
                "variables": s.variables,
                "equations": s.render(),
                "dimension": match d { Ok(d) => json!(d), Err(e) => json!({ "unknown": e }) },
            })).collect::<Vec<_>>(),
            "assumption": assumption,
        })),
        Format::Table => {
            let rows: Vec<Vec<String>> = summary
                .iter()
                .map(|(s, d)| {
                    vec![
                        s.index.to_string(),
                        format!("{:?}", s.face.generator_indices),
                        d.as_ref().map_or_else(|_| "?".to_string(), |d| d.to_string()),
                        s.render().join(", "),
                    ]
                })
                .collect();
            let mut out = format!("{} strata\n{}", summary.len(), columns(&["l", "face", "dim", "equations"], &rows));
            if cli.verbose {
                for (s, d) in &summary {
                    if let Err(e) = d {
                        out.push_str(&format!("  face {:?}: {e}\n", s.face.generator_indices));
                    }
                }
            }
            if let Some(a) = &assumption {
                out.push_str(&format!("\nassumption (dim X = {})\n{}", a.dim_x, assumption_table(a)));
                out.push_str(&format!("holds: {}\n", a.holds()));
            }
            out
        }
    };
    Ok((text, 0))
}

fn dim(cli: &Cli, chart: &Chart, cfg: &AnalysisConfig, m: usize, stratum: Option<usize>, log: bool) -> Result<(String, u8)> {
    let ideals: Vec<(String, IdealPresentation)> = match stratum {
        None => {
            let mode = if log { JetMode::Log } else { JetMode::Ordinary };
            let ideal = chart_jet_presentation(chart, m, mode).map_err(strata_error)?;
            vec![("X".to_string(), ideal)]
        }
        Some(l) => {
            if chart.log_structure() == LogStructure::Trivial {
                anyhow::bail!("a chart with the trivial log structure has no strata");
            }
            let strata = stratify(chart)?;
            let picked: Vec<_> = strata.iter().filter(|s| s.index == l).collect();
            if picked.is_empty() {
                anyhow::bail!("no face has stratum index {l} (ambient rank {})", chart.ambient_rank());
            }
            picked
                .iter()
                .map(|s| Ok((format!("face {:?}", s.face.generator_indices), stratum_jet_presentation(s, m)?)))
                .collect::<Result<_, DimensionError>>()
                .map_err(dimension_error)?
        }
    };
    let mut results: Vec<(String, IdealPresentation, DimResult, Option<String>)> = Vec::new();
    for (label, ideal) in ideals {
        let (r, note) = cfg.dimension(&ideal).map_err(dimension_error).with_context(|| label.clone())?;
        results.push((label, ideal, r, note));
    }
    let overall = results.iter().map(|(_, _, r, _)| r.dimension).max().unwrap_or(Dimension::Empty);
    let reliable = results.iter().all(|(_, _, r, _)| r.reliable());
    let target = match (stratum, log) {
        (Some(l), _) => format!("J_{m}(X_{l})"),
        (None, true) => format!("log J_{m}(X)"),
        (None, false) => format!("J_{m}(X)"),
    };
    let text = match cli.format {
        Format::Json => pretty(&json!({
            "format": "logjet-dim/1",
            "target": target,
            "order": m,
            "dimension": overall,
            "reliable": reliable,
            "parts": results.iter().map(|(label, ideal, r, note)| json!({
                "part": label,
                "variables": ideal.nvars(),
                "dimension": r.dimension,
                "method": r.method,
                "certificate": r.certificate,
                "note": note,
            })).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let mut out = String::new();
            for (label, ideal, r, note) in &results {
                out.push_str(&format!(
                    "  {label}: dim {} ({} variables, {:?})\n",
                    r.dimension,
                    ideal.nvars(),
                    r.method
                ));
                if cli.verbose {
                    for g in ideal.render() {
                        out.push_str(&format!("    {g}\n"));
                    }
                    out.push_str(&format!("    certificate: {}\n", serde_json::to_string(&r.certificate)?));
                    for n in ideal.notes.iter().chain(note) {
                        out.push_str(&format!("    note: {n}\n"));
                    }
                }
            }
            let flag = if reliable { "" } else { " (UNRELIABLE)" };
            format!("dim {target} = {overall}{flag}\n{out}")
        }
    };
    Ok((text, if reliable { 0 } else { 30 }))
}
