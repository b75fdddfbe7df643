use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use super::{AnalysisReport, RecordAnalysis};
use crate::bounds::{bridgeman_bound, coarse_factor};
use crate::format::format_sig;
use crate::{Error, Result};

pub const PLOT_WIDTH: u32 = 960;
pub const PLOT_HEIGHT: u32 = 640;

const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 80.0;
const Y_TICKS: usize = 6;
const MAX_X_TICKS: usize = 20;
const DRILLED_COLOR: &str = "#1f5fa8";
const BOUND_COLOR: &str = "#c0392b";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotStyle {
    /// Drilled volume and `vol_parent + π l` against index.
    Linear,
    /// `log10` of the drilled volume and of the coarse drilling bound.
    Log10,
}

impl FromStr for PlotStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(PlotStyle::Linear),
            "log10" => Ok(PlotStyle::Log10),
            other => Err(Error::Precondition(format!(
                "unknown plot style '{other}'; expected linear or log10"
            ))),
        }
    }
}

impl PlotStyle {
    fn labels(self) -> (&'static str, &'static str, &'static str) {
        match self {
            PlotStyle::Linear => ("Vol(M_γ)", "Vol(M)+πl(γ)", "volume"),
            PlotStyle::Log10 => (
                "log10 Vol(M_γ)",
                "log10 coth^(5/2)R coth^(1/2)2R Vol(M)",
                "log10 volume",
            ),
        }
    }

    fn series(self, row: &RecordAnalysis) -> Result<(f64, f64)> {
        let r = &row.record;
        let missing = |what: &str| Error::Plot(format!("{} #{} has no {}", r.manifold, r.index, what));
        let drilled = r.vol_drilled.ok_or_else(|| missing("vol_drilled"))?;
        match self {
            PlotStyle::Linear => Ok((drilled, bridgeman_bound(r.vol_parent, r.length))),
            PlotStyle::Log10 => {
                let radius = r.tube_radius.ok_or_else(|| missing("tube_radius"))?;
                let bound = row
                    .bound_coarse
                    .unwrap_or_else(|| coarse_factor(radius) * r.vol_parent);
                Ok((drilled.log10(), bound.log10()))
            }
        }
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn map(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

fn px(v: f64) -> String {
    format!("{:.2}", v)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Writes a standalone SVG scatter plot with one circle (drilled volume) and
/// one square (bound) per record, ordered by index.
pub fn emit_plot<W: Write>(report: &AnalysisReport, mut sink: W, style: PlotStyle) -> Result<()> {
    if report.rows.is_empty() {
        return Err(Error::Plot("report has no records".into()));
    }
    let mut rows: Vec<&RecordAnalysis> = report.rows.iter().collect();
    rows.sort_by_key(|r| r.record.index);
    let points = rows
        .iter()
        .map(|r| Ok((r.record.index, style.series(r)?)))
        .collect::<Result<Vec<_>>>()?;
    if let Some((i, _)) = points.iter().find(|(_, (a, b))| !a.is_finite() || !b.is_finite()) {
        return Err(Error::Plot(format!("non-finite value at index {i}")));
    }

    let (mut y_lo, mut y_hi) = points
        .iter()
        .flat_map(|(_, (a, b))| [*a, *b])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if y_hi - y_lo < 1e-12 {
        y_lo -= 1.0;
        y_hi += 1.0;
    }
    let pad = 0.05 * (y_hi - y_lo);
    let w = PLOT_WIDTH as f64;
    let h = PLOT_HEIGHT as f64;
    let x_axis = Axis {
        lo: points[0].0 as f64 - 0.5,
        hi: points[points.len() - 1].0 as f64 + 0.5,
        px_lo: LEFT,
        px_hi: w - RIGHT,
    };
    let y_axis = Axis {
        lo: y_lo - pad,
        hi: y_hi + pad,
        px_lo: h - BOTTOM,
        px_hi: TOP,
    };
    let (drilled_label, bound_label, y_label) = style.labels();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PLOT_WIDTH}" height="{PLOT_HEIGHT}" viewBox="0 0 {PLOT_WIDTH} {PLOT_HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{PLOT_WIDTH}" height="{PLOT_HEIGHT}" fill="white"/>"#);
    let (x0, x1, y0, y1) = (LEFT, w - RIGHT, h - BOTTOM, TOP);
    let _ = writeln!(
        s,
        r#"<path class="axis" d="M{} {} L{} {} L{} {}" fill="none" stroke="black"/>"#,
        px(x0),
        px(y1),
        px(x0),
        px(y0),
        px(x1),
        px(y0)
    );

    for k in 0..Y_TICKS {
        let v = y_axis.lo + (y_axis.hi - y_axis.lo) * k as f64 / (Y_TICKS - 1) as f64;
        let y = px(y_axis.map(v));
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="black"/><text x="{}" y="{y}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            px(x0 - 5.0),
            px(x0),
            px(x0 - 8.0),
            format_sig(v, 4)
        );
    }
    let stride = points.len().div_ceil(MAX_X_TICKS);
    for (i, _) in points.iter().step_by(stride) {
        let x = px(x_axis.map(*i as f64));
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black"/><text x="{x}" y="{}" text-anchor="middle">{i}</text>"#,
            px(y0),
            px(y0 + 5.0),
            px(y0 + 20.0)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">geodesics ordered by length</text>"#,
        px((x0 + x1) / 2.0),
        px(h - 30.0)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">{}</text>"#,
        px((y0 + y1) / 2.0),
        px((y0 + y1) / 2.0),
        escape(y_label)
    );

    for (i, (drilled, bound)) in &points {
        let x = x_axis.map(*i as f64);
        let _ = writeln!(
            s,
            r#"<circle class="data-point" data-series="drilled" data-index="{i}" data-value="{}" cx="{}" cy="{}" r="4" fill="none" stroke="{DRILLED_COLOR}"/>"#,
            format_sig(*drilled, 12),
            px(x),
            px(y_axis.map(*drilled))
        );
        let _ = writeln!(
            s,
            r#"<rect class="data-point" data-series="bound" data-index="{i}" data-value="{}" x="{}" y="{}" width="8" height="8" fill="none" stroke="{BOUND_COLOR}"/>"#,
            format_sig(*bound, 12),
            px(x - 4.0),
            px(y_axis.map(*bound) - 4.0)
        );
    }

    let lx = x0 + 20.0;
    let ly = y1 + 10.0;
    let _ = writeln!(
        s,
        r##"<g class="legend"><rect x="{}" y="{}" width="360" height="48" fill="white" stroke="#888"/>"##,
        px(lx),
        px(ly)
    );
    let _ = writeln!(
        s,
        r#"<circle cx="{}" cy="{}" r="4" fill="none" stroke="{DRILLED_COLOR}"/><text x="{}" y="{}" dominant-baseline="middle">{}</text>"#,
        px(lx + 14.0),
        px(ly + 15.0),
        px(lx + 28.0),
        px(ly + 15.0),
        escape(drilled_label)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{}" y="{}" width="8" height="8" fill="none" stroke="{BOUND_COLOR}"/><text x="{}" y="{}" dominant-baseline="middle">{}</text></g>"#,
        px(lx + 10.0),
        px(ly + 29.0),
        px(lx + 28.0),
        px(ly + 33.0),
        escape(bound_label)
    );
    s.push_str("</svg>\n");
    sink.write_all(s.as_bytes())?;
    Ok(())
}
