//! Rotationally symmetric tube metrics `dr² + f(r)² dθ² + g(r)² dλ²`.
//!
//! A [`WarpingPair`] carries the two warping profiles together with their
//! first and second derivatives, always supplied in closed form by the
//! constructor. Curvatures and volumes are pure functions of the pair.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::scalar::{Jet, Real};

/// Depth below the junction at which improper integrals over `(-∞, R]` are cut.
pub const DEFAULT_TRUNCATION_DEPTH: f64 = 40.0;

/// A warping profile `r ↦ (h(r), h'(r), h''(r))`.
pub type Profile<T> = Arc<dyn Fn(T) -> Jet<T> + Send + Sync>;

/// Interval of admissible radii; `None` marks an infinite end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain<T> {
    pub lower: Option<T>,
    pub upper: Option<T>,
}

impl<T: Real> Domain<T> {
    pub fn new(lower: Option<T>, upper: Option<T>) -> Self {
        Self { lower, upper }
    }

    pub fn contains(&self, r: T) -> bool {
        r.is_finite()
            && self.lower.map_or(true, |lo| r >= lo)
            && self.upper.map_or(true, |hi| r <= hi)
    }

    /// True if `[r - margin, r + margin]` lies in the domain.
    pub fn contains_with_margin(&self, r: T, margin: T) -> bool {
        self.contains(r - margin) && self.contains(r + margin)
    }

    pub(crate) fn check(&self, r: T) -> Result<()> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(self.violation(r))
        }
    }

    pub(crate) fn violation(&self, r: T) -> Error {
        Error::OutOfDomain {
            r: r.as_f64(),
            lo: self.lower.map_or(f64::NEG_INFINITY, Real::as_f64),
            hi: self.upper.map_or(f64::INFINITY, Real::as_f64),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionalCurvatures<T> {
    pub r_theta: T,
    pub r_lambda: T,
    pub theta_lambda: T,
}

impl<T: Real> SectionalCurvatures<T> {
    pub fn uniform(k: T) -> Self {
        Self {
            r_theta: k,
            r_lambda: k,
            theta_lambda: k,
        }
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.r_theta, self.r_lambda, self.theta_lambda]
    }

    pub fn ricci(&self) -> RicciDiagonal<T> {
        RicciDiagonal {
            ric_1: self.r_theta + self.r_lambda,
            ric_2: self.r_theta + self.theta_lambda,
            ric_3: self.r_lambda + self.theta_lambda,
        }
    }
}

/// Ricci eigenvalues in the orthonormal frame `(∂_r, ∂_θ/f, ∂_λ/g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciDiagonal<T> {
    pub ric_1: T,
    pub ric_2: T,
    pub ric_3: T,
}

impl<T: Real> RicciDiagonal<T> {
    pub fn as_array(&self) -> [T; 3] {
        [self.ric_1, self.ric_2, self.ric_3]
    }

    pub fn min(&self) -> T {
        self.ric_1.min(self.ric_2).min(self.ric_3)
    }
}

/// The pair `(f, g)` defining a tube metric.
#[derive(Clone)]
pub struct WarpingPair<T> {
    name: String,
    f: Profile<T>,
    g: Profile<T>,
    domain: Domain<T>,
    axis: bool,
    axis_curvature: Option<SectionalCurvatures<T>>,
    tail_decay: Option<T>,
    sample_window: (T, T),
    feature_scale: Option<T>,
}

impl<T: Real> fmt::Debug for WarpingPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WarpingPair")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("axis", &self.axis)
            .finish_non_exhaustive()
    }
}

impl<T: Real> WarpingPair<T> {
    /// A user-supplied pair. Curvature at zeros of `f` or `g` is rejected.
    pub fn custom(name: impl Into<String>, f: Profile<T>, g: Profile<T>, domain: Domain<T>) -> Self {
        let lo = domain.lower.unwrap_or_else(|| domain.upper.unwrap_or(T::zero()) - T::lit(4.0));
        let hi = domain.upper.unwrap_or(lo + T::lit(4.0));
        Self {
            name: name.into(),
            f,
            g,
            domain,
            axis: false,
            axis_curvature: None,
            tail_decay: None,
            sample_window: (lo, hi),
            feature_scale: None,
        }
    }

    /// Window that random sampling (e.g. oracle validation) draws radii from.
    pub fn with_sample_window(mut self, lo: T, hi: T) -> Self {
        self.sample_window = (lo, hi);
        self
    }

    /// Declares `f g ≤ f(r₀) g(r₀) e^{rate (r - r₀)}` for `r ≤ r₀` near the lower end.
    pub fn with_tail_decay(mut self, rate: T) -> Self {
        self.tail_decay = Some(rate);
        self
    }

    /// Length scale of the finest feature of the profiles, if any.
    pub fn with_feature_scale(mut self, scale: T) -> Self {
        self.feature_scale = Some(scale);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Domain<T> {
        self.domain
    }

    pub fn has_axis(&self) -> bool {
        self.axis
    }

    pub fn tail_decay(&self) -> Option<T> {
        self.tail_decay
    }

    pub fn sample_window(&self) -> (T, T) {
        self.sample_window
    }

    pub fn feature_scale(&self) -> Option<T> {
        self.feature_scale
    }

    /// `(f, f', f'')` at `r`, without a domain check.
    pub fn f(&self, r: T) -> Jet<T> {
        (self.f)(r)
    }

    /// `(g, g', g'')` at `r`, without a domain check.
    pub fn g(&self, r: T) -> Jet<T> {
        (self.g)(r)
    }

    pub fn jets(&self, r: T) -> Result<(Jet<T>, Jet<T>)> {
        self.domain.check(r)?;
        Ok((self.f(r), self.g(r)))
    }

    /// `sinh² r dθ² + cosh² r dλ²`: the hyperbolic tube around a geodesic.
    pub fn hyperbolic_tube() -> Self {
        Self {
            name: "hyperbolic".into(),
            f: Arc::new(|r: T| Jet::new(r.sinh(), r.cosh(), r.sinh())),
            g: Arc::new(|r: T| Jet::new(r.cosh(), r.sinh(), r.cosh())),
            domain: Domain::new(Some(T::zero()), None),
            axis: true,
            axis_curvature: Some(SectionalCurvatures::uniform(-T::one())),
            tail_decay: None,
            sample_window: (T::lit(0.01), T::lit(5.0)),
            feature_scale: None,
        }
    }

    /// Flat cylindrical coordinates `f(r) = r`, `g(r) = 1`.
    pub fn euclidean_cylinder() -> Self {
        Self {
            name: "euclidean".into(),
            f: Arc::new(|r: T| Jet::new(r, T::one(), T::zero())),
            g: Arc::new(|_| Jet::constant(T::one())),
            domain: Domain::new(Some(T::zero()), None),
            axis: true,
            axis_curvature: Some(SectionalCurvatures::uniform(T::zero())),
            tail_decay: None,
            sample_window: (T::lit(0.01), T::lit(5.0)),
            feature_scale: None,
        }
    }

    /// Exponential continuation of the tube past its boundary at radius `R`:
    /// `f(r) = sinh R e^{coth R (r-R)}`, `g(r) = cosh R e^{tanh R (r-R)}` on
    /// `(-∞, R]`, matching `(sinh, cosh)` to first order at `R`.
    pub fn kerckhoff_extension(radius: T) -> Result<Self> {
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(Error::parameter(
                "R",
                radius.as_f64(),
                "tube radius must be positive",
            ));
        }
        let (s, c) = (radius.sinh(), radius.cosh());
        let (cth, th) = (radius.coth(), radius.tanh());
        let f = move |r: T| {
            let e = s * (cth * (r - radius)).exp();
            Jet::new(e, cth * e, cth * cth * e)
        };
        let g = move |r: T| {
            let e = c * (th * (r - radius)).exp();
            Jet::new(e, th * e, th * th * e)
        };
        Ok(Self {
            name: format!("kerckhoff(R={})", radius),
            f: Arc::new(f),
            g: Arc::new(g),
            domain: Domain::new(None, Some(radius)),
            axis: false,
            axis_curvature: None,
            tail_decay: Some(cth + th),
            sample_window: (radius - T::lit(4.0), radius),
            feature_scale: None,
        })
    }
}

/// Closed-form sectional curvatures of the coordinate planes at `r`:
/// `K_θλ = -f'g'/(fg)`, `K_rθ = -f''/f`, `K_rλ = -g''/g`.
pub fn sectional_curvatures<T: Real>(w: &WarpingPair<T>, r: T) -> Result<SectionalCurvatures<T>> {
    let (f, g) = w.jets(r)?;
    if f.value == T::zero() || g.value == T::zero() {
        return match w.axis_curvature {
            Some(k) if r == T::zero() => Ok(k),
            _ => Err(Error::SingularAxis { r: r.as_f64() }),
        };
    }
    Ok(SectionalCurvatures {
        r_theta: -f.d2 / f.value,
        r_lambda: -g.d2 / g.value,
        theta_lambda: -(f.d1 * g.d1) / (f.value * g.value),
    })
}

pub fn ricci_diagonal<T: Real>(w: &WarpingPair<T>, r: T) -> Result<RicciDiagonal<T>> {
    Ok(sectional_curvatures(w, r)?.ricci())
}

/// `½ max(-ric₁, -ric₂, -ric₃)` at `r`: the smallest `k` with `Ric ≥ -2k` there.
pub fn ricci_bound_at<T: Real>(w: &WarpingPair<T>, r: T) -> Result<T> {
    let ric = ricci_diagonal(w, r)?;
    Ok(-ric.min() * T::lit(0.5))
}

/// Smallest `k` with `Ric ≥ -2k` at every point of a uniform `grid_n` grid
/// on `[lo, hi]`.
pub fn ricci_lower_bound_constant<T: Real>(
    w: &WarpingPair<T>,
    lo: T,
    hi: T,
    grid_n: usize,
) -> Result<T> {
    Ok(ricci_lower_bound_scan(w, lo, hi, grid_n)?.0)
}

/// Like [`ricci_lower_bound_constant`], also returning the grid maximizer.
pub(crate) fn ricci_lower_bound_scan<T: Real>(
    w: &WarpingPair<T>,
    lo: T,
    hi: T,
    grid_n: usize,
) -> Result<(T, T)> {
    if !(lo < hi) {
        return Err(Error::EmptyInterval {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    if grid_n < 2 {
        return Err(Error::parameter(
            "grid_n",
            grid_n as f64,
            "at least two grid points are required",
        ));
    }
    let step = (hi - lo) / T::from_usize(grid_n - 1).unwrap();
    let mut best = (T::neg_infinity(), lo);
    for i in 0..grid_n {
        let r = if i + 1 == grid_n {
            hi
        } else {
            lo + step * T::from_usize(i).unwrap()
        };
        let k = ricci_bound_at(w, r)?;
        if k > best.0 {
            best = (k, r);
        }
    }
    Ok(best)
}

/// Tube radius `R`, core length `l` and rotational holonomy `φ` of an
/// embedded tube around a closed geodesic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeParams<T> {
    radius: T,
    length: T,
    holonomy: T,
}

impl<T: Real> TubeParams<T> {
    pub fn new(radius: T, length: T, holonomy: T) -> Result<Self> {
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(Error::parameter("R", radius.as_f64(), "must be positive"));
        }
        if !(length > T::zero() && length.is_finite()) {
            return Err(Error::parameter("l", length.as_f64(), "must be positive"));
        }
        if !(holonomy >= T::zero() && holonomy < T::TAU()) {
            return Err(Error::parameter(
                "phi",
                holonomy.as_f64(),
                "holonomy angle must lie in [0, 2π)",
            ));
        }
        Ok(Self {
            radius,
            length,
            holonomy,
        })
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn holonomy(&self) -> T {
        self.holonomy
    }
}

/// `π l sinh² R`, the volume of the hyperbolic tube.
pub fn tube_volume<T: Real>(p: &TubeParams<T>) -> T {
    let s = p.radius.sinh();
    T::PI() * p.length * s * s
}

/// Volume of the exponentially extended tube over `(-∞, R]`:
/// `2π l sinh R cosh R / (coth R + tanh R)`.
pub fn extended_tube_volume<T: Real>(p: &TubeParams<T>) -> T {
    let r = p.radius;
    T::TAU() * p.length * r.sinh() * r.cosh() / (r.coth() + r.tanh())
}

/// Lower end of a volume integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowerLimit<T> {
    At(T),
    /// `-∞`, cut at `r_hi - depth`.
    Truncated { depth: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate<T> {
    pub value: T,
    pub abs_error: T,
    /// Where the integral actually started.
    pub lower: T,
    /// Analytic bound on the omitted tail, when the pair declares its decay.
    pub truncation_bound: Option<T>,
}

/// `2π l ∫ f g dr` over `[r_lo, r_hi]` by adaptive quadrature.
pub fn warped_volume_quadrature<T: Real>(
    w: &WarpingPair<T>,
    lower: LowerLimit<T>,
    r_hi: T,
    length: T,
) -> Result<VolumeEstimate<T>> {
    let (r_lo, truncated) = match lower {
        LowerLimit::At(r) => (r, false),
        LowerLimit::Truncated { depth } => {
            if !(depth > T::zero()) {
                return Err(Error::parameter(
                    "depth",
                    depth.as_f64(),
                    "truncation depth must be positive",
                ));
            }
            (r_hi - depth, true)
        }
    };
    w.domain.check(r_hi)?;
    if !truncated {
        w.domain.check(r_lo)?;
    } else if w.domain.lower.map_or(false, |lo| r_lo < lo) {
        return Err(w.domain.violation(r_lo));
    }
    if r_lo > r_hi {
        return Err(Error::EmptyInterval {
            lo: r_lo.as_f64(),
            hi: r_hi.as_f64(),
        });
    }
    let opts = QuadratureOptions::default().with_initial_panels(8);
    let q = integrate(|r| w.f(r).value * w.g(r).value, r_lo, r_hi, &opts)?;
    let scale = T::TAU() * length;
    let value = scale * q.value;
    let abs_error = scale * q.abs_error;
    let contract = T::lit(1e-10) * value.abs();
    if abs_error > contract && abs_error > opts.abs_tol {
        return Err(Error::NonConvergent {
            lo: r_lo.as_f64(),
            hi: r_hi.as_f64(),
            error_estimate: abs_error.as_f64(),
            panels: q.panels,
            target: contract.as_f64(),
        });
    }
    let truncation_bound = match (truncated, w.tail_decay) {
        (true, Some(rate)) => Some(scale * w.f(r_lo).value * w.g(r_lo).value / rate),
        _ => None,
    };
    Ok(VolumeEstimate {
        value,
        abs_error,
        lower: r_lo,
        truncation_bound,
    })
}
