//! Upper bounds on the volume of a drilled manifold and the arithmetic of
//! the minimum-volume corollary.

use crate::error::{Error, Result};
use crate::roots::bisect;
use crate::scalar::Real;

/// A reference constant together with what it stands for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NamedConstant {
    pub key: &'static str,
    pub value: f64,
    pub meaning: &'static str,
}

/// Lower bound on the volume of an orientable cusped hyperbolic 3-manifold.
pub const CUSPED_MIN_VOLUME: f64 = 2.0298;
/// Volume of the Weeks manifold, 0.9427…
pub const WEEKS_VOLUME: f64 = 0.9427;
/// The rounded Weeks volume used when solving for the radius bound.
pub const WEEKS_VOLUME_ROUNDED: f64 = 0.943;
/// Volume of the third smallest closed census manifold, 1.0149…
pub const VOL3_VOLUME: f64 = 1.0149;
/// Volume lower bound for the exceptional short-geodesic cases.
pub const EXCEPTIONAL_CASE_VOLUME: f64 = 1.01;
/// Claimed lower bound on the minimal volume.
pub const MIN_VOLUME_CLAIM: f64 = 0.32;
/// Claimed upper bound on the tube radius of the shortest geodesic.
pub const RADIUS_BOUND_CLAIM: f64 = 0.956;

pub const CASE2_RADIUS_UPPER: f64 = 1.0953 / 2.0;
pub const CASE2_RADIUS_LOWER: f64 = 1.0591 / 2.0;
pub const CASE2_LENGTH_LOWER: f64 = 1.059;
pub const CASE3_RADIUS: f64 = 0.8314 / 2.0;

/// Tube radius threshold `(ln 3)/2`.
pub fn ln3_half() -> f64 {
    3f64.ln() / 2.0
}

pub const CONSTANTS: &[NamedConstant] = &[
    NamedConstant {
        key: "cusped_volume",
        value: CUSPED_MIN_VOLUME,
        meaning: "minimum volume of an orientable cusped hyperbolic 3-manifold (lower bound)",
    },
    NamedConstant {
        key: "weeks_volume",
        value: WEEKS_VOLUME,
        meaning: "volume of the Weeks manifold",
    },
    NamedConstant {
        key: "weeks_volume_rounded",
        value: WEEKS_VOLUME_ROUNDED,
        meaning: "Weeks volume rounded up, used in the radius equation",
    },
    NamedConstant {
        key: "vol3_volume",
        value: VOL3_VOLUME,
        meaning: "volume of Vol3, third smallest closed census manifold",
    },
    NamedConstant {
        key: "exceptional_case_volume",
        value: EXCEPTIONAL_CASE_VOLUME,
        meaning: "volume lower bound in the exceptional short-geodesic cases",
    },
    NamedConstant {
        key: "case2_radius_upper",
        value: CASE2_RADIUS_UPPER,
        meaning: "1.0953/2",
    },
    NamedConstant {
        key: "case2_radius_lower",
        value: CASE2_RADIUS_LOWER,
        meaning: "1.0591/2",
    },
    NamedConstant {
        key: "case2_length_lower",
        value: CASE2_LENGTH_LOWER,
        meaning: "minimum geodesic length in case 2",
    },
    NamedConstant {
        key: "case3_radius",
        value: CASE3_RADIUS,
        meaning: "0.8314/2, tube radius in the Vol3 case",
    },
];

/// One alternative in the classification of shortest geodesics in closed
/// orientable hyperbolic 3-manifolds.
#[derive(Debug, Clone, PartialEq)]
pub struct GmtCase {
    pub id: u8,
    /// Strict lower bound on the tube radius (or the exact radius).
    pub radius_lower: Option<f64>,
    /// Strict upper bound on the tube radius (or the exact radius).
    pub radius_upper: Option<f64>,
    /// The radius is pinned to a single value rather than an interval.
    pub radius_exact: bool,
    pub length_lower: Option<f64>,
    /// Known lower bound on the manifold volume in this case.
    pub volume_lower: Option<f64>,
    pub note: &'static str,
}

pub fn gmt_cases() -> Vec<GmtCase> {
    vec![
        GmtCase {
            id: 1,
            radius_lower: Some(ln3_half()),
            radius_upper: None,
            radius_exact: false,
            length_lower: None,
            volume_lower: None,
            note: "R > (ln 3)/2",
        },
        GmtCase {
            id: 2,
            radius_lower: Some(CASE2_RADIUS_LOWER),
            radius_upper: Some(CASE2_RADIUS_UPPER),
            radius_exact: false,
            length_lower: Some(CASE2_LENGTH_LOWER),
            volume_lower: Some(EXCEPTIONAL_CASE_VOLUME),
            note: "1.0953/2 > R > 1.0591/2 and l > 1.059",
        },
        GmtCase {
            id: 3,
            radius_lower: Some(CASE3_RADIUS),
            radius_upper: Some(CASE3_RADIUS),
            radius_exact: true,
            length_lower: None,
            volume_lower: Some(VOL3_VOLUME),
            note: "R = 0.8314.../2 and M = Vol3, volume 1.0149...",
        },
    ]
}

/// `(coth R)^{5/2} (coth 2R)^{1/2}`.
pub fn coarse_factor<T: Real>(radius: T) -> T {
    let c = radius.coth();
    c * c * c.sqrt() * (radius + radius).coth().sqrt()
}

/// `coth R coth 2R`.
pub fn ricci_scale<T: Real>(radius: T) -> T {
    radius.coth() * (radius + radius).coth()
}

/// `π l sinh²R (coth R / coth 2R - 1)`, evaluated as `π l / (1 + coth² R)`.
pub fn drilling_increment<T: Real>(length: T, radius: T) -> T {
    let c = radius.coth();
    T::PI() * length / (T::one() + c * c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrillEstimate<T> {
    pub vol_parent: T,
    pub length: T,
    pub radius: T,
    pub bound_tight: T,
    pub bound_coarse: T,
    /// `π l sinh² R ≤ vol_parent`.
    pub tube_fits: bool,
    pub k: T,
    pub warning: Option<String>,
}

fn positive<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::parameter(name, v.as_f64(), "must be positive and finite"))
    }
}

/// Both upper bounds on the drilled volume for a geodesic of length `l`
/// with an embedded tube of radius `R` in a manifold of volume `vol_M`.
pub fn drilled_volume_bound<T: Real>(vol_parent: T, length: T, radius: T) -> Result<DrillEstimate<T>> {
    positive("vol", vol_parent)?;
    positive("length", length)?;
    positive("R", radius)?;
    let k = ricci_scale(radius);
    let bound_tight = k * k.sqrt() * (vol_parent + drilling_increment(length, radius));
    let bound_coarse = coarse_factor(radius) * vol_parent;
    let s = radius.sinh();
    let tube = T::PI() * length * s * s;
    let tube_fits = tube <= vol_parent;
    let warning = (!tube_fits).then(|| {
        format!(
            "tube volume {} exceeds parent volume {}; tight <= coarse is not guaranteed",
            tube.as_f64(),
            vol_parent.as_f64()
        )
    });
    Ok(DrillEstimate {
        vol_parent,
        length,
        radius,
        bound_tight,
        bound_coarse,
        tube_fits,
        k,
        warning,
    })
}

pub fn parent_volume_lower_bound<T: Real>(vol_drilled: T, radius: T) -> Result<T> {
    positive("vol_drilled", vol_drilled)?;
    positive("R", radius)?;
    Ok(vol_drilled / coarse_factor(radius))
}

pub const RADIUS_BRACKET: (f64, f64) = (1e-6, 50.0);
pub const RADIUS_TOLERANCE: f64 = 1e-12;

/// The `R₀` with `coarse_factor(R₀) · vol_M_max = vol_drilled_min`.
pub fn solve_radius_bound<T: Real>(vol_drilled_min: T, vol_parent_max: T) -> Result<T> {
    positive("vol_drilled_min", vol_drilled_min)?;
    positive("vol_parent_max", vol_parent_max)?;
    if !(vol_drilled_min > vol_parent_max) {
        return Err(Error::NoRoot(format!(
            "drilled volume {} must exceed parent volume {} for a finite radius",
            vol_drilled_min.as_f64(),
            vol_parent_max.as_f64()
        )));
    }
    bisect(
        |r| coarse_factor(r) * vol_parent_max - vol_drilled_min,
        T::lit(RADIUS_BRACKET.0),
        T::lit(RADIUS_BRACKET.1),
        T::lit(RADIUS_TOLERANCE),
    )
}

/// `vol_M + π l`.
pub fn bridgeman_bound<T: Real>(vol_parent: T, length: T) -> T {
    vol_parent + T::PI() * length
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinVolumeReport {
    pub cusped_volume: f64,
    pub weeks_volume: f64,
    pub weeks_volume_rounded: f64,
    pub radius_threshold: f64,
    pub coarse_factor: f64,
    pub lower_bound: f64,
    pub lower_bound_claim: f64,
    pub radius_bound: f64,
    pub radius_residual: f64,
    /// Radius bound with the unrounded Weeks volume, for comparison.
    pub radius_bound_weeks: f64,
    pub radius_bound_claim: f64,
    pub excluded_cases: Vec<u8>,
    pub retained_cases: Vec<u8>,
    pub cases: Vec<GmtCase>,
}

impl MinVolumeReport {
    pub fn lower_bound_holds(&self) -> bool {
        self.lower_bound > self.lower_bound_claim
    }

    pub fn radius_bound_holds(&self) -> bool {
        self.radius_bound < self.radius_bound_claim
    }
}

/// Minimum-volume corollary: cases whose volume exceeds the Weeks volume are
/// discarded, leaving `R > (ln 3)/2`; the drilled manifold is cusped, so its
/// volume exceeds the cusped minimum, and the coarse bound is inverted.
pub fn min_volume_corollary() -> Result<MinVolumeReport> {
    let cases = gmt_cases();
    let (excluded, retained): (Vec<&GmtCase>, Vec<&GmtCase>) = cases
        .iter()
        .partition(|c| c.volume_lower.map_or(false, |v| v > WEEKS_VOLUME));
    let threshold = retained
        .iter()
        .filter_map(|c| c.radius_lower)
        .fold(f64::INFINITY, f64::min);
    let factor = coarse_factor(threshold);
    let lower_bound = parent_volume_lower_bound(CUSPED_MIN_VOLUME, threshold)?;
    let radius_bound = solve_radius_bound(CUSPED_MIN_VOLUME, WEEKS_VOLUME_ROUNDED)?;
    let radius_bound_weeks = solve_radius_bound(CUSPED_MIN_VOLUME, WEEKS_VOLUME)?;
    Ok(MinVolumeReport {
        cusped_volume: CUSPED_MIN_VOLUME,
        weeks_volume: WEEKS_VOLUME,
        weeks_volume_rounded: WEEKS_VOLUME_ROUNDED,
        radius_threshold: threshold,
        coarse_factor: factor,
        lower_bound,
        lower_bound_claim: MIN_VOLUME_CLAIM,
        radius_bound,
        radius_residual: coarse_factor(radius_bound) * WEEKS_VOLUME_ROUNDED - CUSPED_MIN_VOLUME,
        radius_bound_weeks,
        radius_bound_claim: RADIUS_BOUND_CLAIM,
        excluded_cases: excluded.iter().map(|c| c.id).collect(),
        retained_cases: retained.iter().map(|c| c.id).collect(),
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_factors_at_ln3_half() {
        let r = ln3_half();
        assert_relative_eq!(r.coth(), 2.0, max_relative = 1e-15);
        assert_relative_eq!((2.0 * r).coth(), 1.25, max_relative = 1e-15);
        let est = drilled_volume_bound(0.943, 0.5, r).unwrap();
        let expected_coarse = 2f64.powf(2.5) * 1.25f64.sqrt() * 0.943;
        assert_relative_eq!(est.bound_coarse, expected_coarse, max_relative = 1e-14);
        assert!((est.bound_coarse - 5.964).abs() < 1e-3);
        let pi = std::f64::consts::PI;
        let expected_tight =
            (2.0f64 * 1.25).powf(1.5) * (0.943 + pi * 0.5 * (1.0 / 3.0) * (2.0 / 1.25 - 1.0));
        assert_relative_eq!(est.bound_tight, expected_tight, max_relative = 1e-13);
        assert!(est.tube_fits);
        assert!(est.bound_tight <= est.bound_coarse);
        assert!(est.warning.is_none());
    }

    #[test]
    fn deep_tubes_barely_change_volume() {
        let est = drilled_volume_bound(1.7_f64, 0.3, 40.0).unwrap();
        assert_relative_eq!(est.bound_coarse, 1.7, max_relative = 1e-14);
        assert_relative_eq!(est.bound_tight, 1.7 + 0.3 * std::f64::consts::PI / 2.0, max_relative = 1e-14);
        assert!(!est.tube_fits);
        assert!(est.warning.is_some());
        assert_relative_eq!(parent_volume_lower_bound(2.0_f64, 60.0).unwrap(), 2.0);
    }

    #[test]
    fn rejects_non_positive_inputs() {
        assert!(drilled_volume_bound(0.0_f64, 1.0, 1.0).is_err());
        assert!(drilled_volume_bound(1.0_f64, -1.0, 1.0).is_err());
        assert!(drilled_volume_bound(1.0_f64, 1.0, 0.0).is_err());
        assert!(parent_volume_lower_bound(-1.0_f64, 1.0).is_err());
        assert!(matches!(solve_radius_bound(0.9_f64, 0.943), Err(Error::NoRoot(_))));
    }

    #[test]
    fn corollary_lower_bound() {
        let v = parent_volume_lower_bound(2.0298_f64, ln3_half()).unwrap();
        let exact = 2.0298 / (2f64.powf(2.5) * 1.25f64.sqrt());
        assert!((v - exact).abs() < 1e-12);
        assert!(v > 0.32 && v < 0.321);
    }

    #[test]
    fn radius_bound() {
        let r0 = solve_radius_bound(2.0298_f64, 0.943).unwrap();
        assert!(r0 > 0.955 && r0 < 0.956, "{r0}");
        assert!((coarse_factor(r0) * 0.943 - 2.0298).abs() < 1e-9);
        let r2 = solve_radius_bound(2.0 * 0.943_f64, 0.943).unwrap();
        assert!((coarse_factor(r2) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn cases_and_report() {
        let cases = gmt_cases();
        assert_eq!(cases.len(), 3);
        assert!((cases[0].radius_lower.unwrap() - 0.5493).abs() < 1e-4);
        assert_eq!(cases[2].volume_lower, Some(1.0149));
        let rep = min_volume_corollary().unwrap();
        assert_eq!(rep.excluded_cases, vec![2, 3]);
        assert_eq!(rep.retained_cases, vec![1]);
        assert!(rep.lower_bound_holds());
        assert!(rep.radius_bound_holds());
        assert!(rep.radius_bound_weeks < rep.radius_bound);
    }

    #[test]
    fn bridgeman() {
        assert_eq!(bridgeman_bound(0.9427_f64, 0.0), 0.9427);
        assert_relative_eq!(bridgeman_bound(0.9427_f64, 1.0), 0.9427 + std::f64::consts::PI);
    }

    #[test]
    fn single_precision_bounds() {
        let est = drilled_volume_bound(0.943_f32, 0.5, 0.549_306_1).unwrap();
        assert!((est.bound_coarse - 5.9643).abs() < 1e-3);
        let r0 = solve_radius_bound(2.0298_f32, 0.943).unwrap();
        assert!(r0 > 0.955 && r0 < 0.956);
    }
}
