use super::GeodesicRecord;
use crate::bounds::{bridgeman_bound, drilled_volume_bound};
use crate::Result;

/// Computed columns for one record. Fields left `None` were not evaluated,
/// either because the check was not requested or an input was missing.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordAnalysis {
    pub record: GeodesicRecord,
    pub bridgeman_bound: Option<f64>,
    /// `vol_drilled > vol_parent + π l`, strictly.
    pub violation: Option<bool>,
    /// `vol_drilled − (vol_parent + π l)`.
    pub margin: Option<f64>,
    pub bound_tight: Option<f64>,
    pub bound_coarse: Option<f64>,
    pub tube_fits: Option<bool>,
    /// `vol_drilled ≤ bound_tight`.
    pub consistent: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnalysisReport {
    pub rows: Vec<RecordAnalysis>,
    pub notices: Vec<String>,
    pub violation_count: usize,
    /// Largest margin among violating records.
    pub max_violation_margin: Option<f64>,
    /// Largest margin over all checked records, violating or not.
    pub max_margin: Option<f64>,
    pub anomaly_count: usize,
}

impl AnalysisReport {
    pub fn violations(&self) -> impl Iterator<Item = &RecordAnalysis> {
        self.rows.iter().filter(|r| r.violation == Some(true))
    }

    pub fn anomalies(&self) -> impl Iterator<Item = &RecordAnalysis> {
        self.rows.iter().filter(|r| r.consistent == Some(false))
    }
}

/// Flags records whose drilled volume strictly exceeds `vol_parent + π l`.
pub fn bridgeman_check(records: &[GeodesicRecord]) -> AnalysisReport {
    build(records, true, false).expect("bridgeman check has no fallible step")
}

/// Flags records whose drilled volume exceeds the tight drilling bound.
pub fn bound_consistency_check(records: &[GeodesicRecord]) -> Result<AnalysisReport> {
    build(records, false, true)
}

/// Both checks in one report.
pub fn analyze(records: &[GeodesicRecord]) -> Result<AnalysisReport> {
    build(records, true, true)
}

fn build(records: &[GeodesicRecord], bridgeman: bool, consistency: bool) -> Result<AnalysisReport> {
    let mut report = AnalysisReport::default();
    for rec in records {
        let mut row = RecordAnalysis {
            record: rec.clone(),
            bridgeman_bound: None,
            violation: None,
            margin: None,
            bound_tight: None,
            bound_coarse: None,
            tube_fits: None,
            consistent: None,
        };
        if bridgeman {
            let bound = bridgeman_bound(rec.vol_parent, rec.length);
            row.bridgeman_bound = Some(bound);
            match rec.vol_drilled {
                Some(v) => {
                    let margin = v - bound;
                    let violated = v > bound;
                    row.margin = Some(margin);
                    row.violation = Some(violated);
                    report.max_margin = Some(report.max_margin.map_or(margin, |m: f64| m.max(margin)));
                    if violated {
                        report.violation_count += 1;
                        report.max_violation_margin =
                            Some(report.max_violation_margin.map_or(margin, |m: f64| m.max(margin)));
                    }
                }
                None => report
                    .notices
                    .push(format!("{} #{}: no drilled volume, Bridgeman check skipped", rec.manifold, rec.index)),
            }
        }
        if consistency {
            match rec.tube_radius {
                Some(radius) => {
                    let est = drilled_volume_bound(rec.vol_parent, rec.length, radius)?;
                    row.bound_tight = Some(est.bound_tight);
                    row.bound_coarse = Some(est.bound_coarse);
                    row.tube_fits = Some(est.tube_fits);
                    if let Some(w) = est.warning {
                        report.notices.push(format!("{} #{}: {}", rec.manifold, rec.index, w));
                    }
                    match rec.vol_drilled {
                        Some(v) => {
                            let ok = v <= est.bound_tight;
                            row.consistent = Some(ok);
                            if !ok {
                                report.anomaly_count += 1;
                            }
                        }
                        None => report.notices.push(format!(
                            "{} #{}: no drilled volume, consistency check skipped",
                            rec.manifold, rec.index
                        )),
                    }
                }
                None => report.notices.push(format!(
                    "{} #{}: no tube radius, consistency check skipped",
                    rec.manifold, rec.index
                )),
            }
        }
        report.rows.push(row);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rec(index: u64, vol_drilled: f64) -> GeodesicRecord {
        GeodesicRecord::new("t", index, 1.0, 2.0).with_vol_drilled(vol_drilled)
    }

    #[test]
    fn constructed_violation_flagged() {
        let b = 2.0 + PI;
        let report = bridgeman_check(&[rec(1, b + 0.01), rec(2, b - 0.01)]);
        assert_eq!(report.rows[0].violation, Some(true));
        assert_eq!(report.rows[1].violation, Some(false));
        assert_eq!(report.violation_count, 1);
        assert!((report.max_violation_margin.unwrap() - 0.01).abs() < 1e-12);
        assert!((report.max_margin.unwrap() - 0.01).abs() < 1e-12);
    }

    #[test]
    fn boundary_is_conforming() {
        let b = bridgeman_bound(2.0, 1.0);
        let report = bridgeman_check(&[rec(1, b)]);
        assert_eq!(report.rows[0].violation, Some(false));
        assert_eq!(report.violation_count, 0);
        assert_eq!(report.max_violation_margin, None);
    }

    #[test]
    fn missing_drilled_volume_skipped_with_notice() {
        let report = bridgeman_check(&[GeodesicRecord::new("t", 1, 1.0, 2.0)]);
        assert_eq!(report.rows[0].violation, None);
        assert_eq!(report.rows[0].bridgeman_bound, Some(2.0 + PI));
        assert_eq!(report.notices.len(), 1);
    }

    #[test]
    fn consistency_flags() {
        let base = GeodesicRecord::new("t", 1, 0.5, 0.943).with_tube_radius(0.6);
        let tight = drilled_volume_bound(0.943, 0.5, 0.6).unwrap().bound_tight;
        let ok = base.clone().with_vol_drilled(tight * 0.9);
        let mut bad = base.with_vol_drilled(tight * 1.1);
        bad.index = 2;
        let report = bound_consistency_check(&[ok, bad]).unwrap();
        assert_eq!(report.rows[0].consistent, Some(true));
        assert_eq!(report.rows[1].consistent, Some(false));
        assert_eq!(report.anomaly_count, 1);
        assert_eq!(report.anomalies().count(), 1);
        assert!(report.rows[0].violation.is_none());
    }

    #[test]
    fn oversized_tube_still_evaluated_with_warning() {
        let r = GeodesicRecord::new("t", 1, 5.0, 0.5).with_tube_radius(2.0).with_vol_drilled(1.0);
        let report = bound_consistency_check(&[r]).unwrap();
        assert_eq!(report.rows[0].tube_fits, Some(false));
        assert!(report.rows[0].consistent.is_some());
        assert_eq!(report.notices.len(), 1);
    }

    #[test]
    fn missing_radius_skipped() {
        let report = analyze(&[rec(1, 3.0)]).unwrap();
        assert!(report.rows[0].bound_tight.is_none());
        assert!(report.rows[0].violation.is_some());
        assert_eq!(report.notices.len(), 1);
    }
}
