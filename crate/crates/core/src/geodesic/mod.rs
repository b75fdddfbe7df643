//! Drilled-geodesic datasets: CSV ingestion, Bridgeman and bound checks,
//! report tables and SVG plots.

mod analysis;
mod parse;
mod plot;
mod report;

pub use analysis::{analyze, bound_consistency_check, bridgeman_check, AnalysisReport, RecordAnalysis};
pub use parse::{parse_records, INPUT_COLUMNS};
pub use plot::{emit_plot, PlotStyle, PLOT_HEIGHT, PLOT_WIDTH};
pub use report::{emit_report, emit_report_with, REPORT_COLUMNS};

/// One drilled geodesic of a parent manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicRecord {
    pub manifold: String,
    /// Position in the length ordering, starting at 1.
    pub index: u64,
    pub length: f64,
    pub tube_radius: Option<f64>,
    pub vol_parent: f64,
    pub vol_drilled: Option<f64>,
}

impl GeodesicRecord {
    pub fn new(manifold: impl Into<String>, index: u64, length: f64, vol_parent: f64) -> Self {
        GeodesicRecord {
            manifold: manifold.into(),
            index,
            length,
            tube_radius: None,
            vol_parent,
            vol_drilled: None,
        }
    }

    pub fn with_tube_radius(mut self, radius: f64) -> Self {
        self.tube_radius = Some(radius);
        self
    }

    pub fn with_vol_drilled(mut self, vol: f64) -> Self {
        self.vol_drilled = Some(vol);
        self
    }
}
