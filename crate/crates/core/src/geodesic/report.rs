use std::io::Write;

use super::AnalysisReport;
use crate::format::{format_exact, format_sig, DEFAULT_PRECISION};
use crate::Result;

pub const REPORT_COLUMNS: [&str; 11] = [
    "manifold",
    "index",
    "length",
    "tube_radius",
    "vol_parent",
    "vol_drilled",
    "bridgeman_bound",
    "violation",
    "bound_tight",
    "bound_coarse",
    "consistent",
];

/// Writes one CSV row per record at the default precision.
pub fn emit_report<W: Write>(report: &AnalysisReport, sink: W) -> Result<()> {
    emit_report_with(report, sink, DEFAULT_PRECISION)
}

/// Input columns are written exactly; computed columns carry `digits`
/// significant digits. Unevaluated cells are left empty.
pub fn emit_report_with<W: Write>(report: &AnalysisReport, sink: W, digits: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(REPORT_COLUMNS)?;
    let exact = |v: Option<f64>| v.map(format_exact).unwrap_or_default();
    let computed = |v: Option<f64>| v.map(|x| format_sig(x, digits)).unwrap_or_default();
    let flag = |v: Option<bool>| v.map(|b| b.to_string()).unwrap_or_default();
    for row in &report.rows {
        let r = &row.record;
        w.write_record([
            r.manifold.clone(),
            r.index.to_string(),
            format_exact(r.length),
            exact(r.tube_radius),
            format_exact(r.vol_parent),
            exact(r.vol_drilled),
            computed(row.bridgeman_bound),
            flag(row.violation),
            computed(row.bound_tight),
            computed(row.bound_coarse),
            flag(row.consistent),
        ])?;
    }
    w.flush()?;
    Ok(())
}
