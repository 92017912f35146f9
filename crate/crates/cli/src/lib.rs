//! Chart-file loading and report rendering for the `logjet` binary.

pub mod chart_file;
pub mod report;

pub use chart_file::{load_chart, load_monoid, ChartFile, LoadError, CHART_FORMAT};
pub use report::{emit_report, parse_report, Format, REPORT_FORMAT};
