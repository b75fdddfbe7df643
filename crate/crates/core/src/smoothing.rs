//! C∞ smoothing of a first-order junction between two profiles.
//!
//! Given `b` and `c` with `b(R) = c(R)` and `b'(R) = c'(R)`, the junction
//! first blends `b''` into `c''` over `[R-ε, R]`, then integrates twice,
//! correcting the slope mismatch with a ramp of width `ι(ε)` and the value
//! mismatch with a ramp of width `ω(ε)`:
//!
//! ```text
//! η'  = b''(1 - φ_ε) + c'' φ_ε            η  = b'(R-ε) + ∫_{R-ε}^r η'
//! ι   = |c'(R) - η(R)|^{1/2}              κ' = η + (c'(R) - η(R)) φ_ι
//! κ   = b(R-ι) + ∫_{R-ι}^r κ'             ω  = |c(R) - κ(R)|^{1/3}
//! a_ε = κ + (c(R) - κ(R)) φ_ω             δ  = max{ε, ι, ω}
//! ```
//!
//! The double integrals are rewritten as single integrals of `(c''-b'')φ_ε`
//! and `(s - (R-ε))(c''-b'')φ_ε`, each memoized on a knot table.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::quadrature::{CumulativeIntegral, QuadratureOptions};
use crate::scalar::{Jet, Real};
use crate::warped::{ricci_bound_at, ricci_lower_bound_scan, Domain, Profile, WarpingPair};
use crate::roots::golden_section_max;

/// Extent of the smoothed pair's domain beyond the junction radius.
pub const SMOOTHED_MARGIN: f64 = 1.0;

/// Grid size used for `k_ε` when none is given.
pub const DEFAULT_K_GRID: usize = 4096;

const LOG_UNDERFLOW: f64 = -700.0;

/// `e^{-1/x²} e^{-1/(1-x)²}` on `(0, 1)`, zero elsewhere.
pub fn bump_alpha<T: Real>(x: T) -> T {
    if !(x > T::zero() && x < T::one()) {
        return T::zero();
    }
    let y = T::one() - x;
    let log = -(x * x).recip() - (y * y).recip();
    if log < T::lit(LOG_UNDERFLOW) {
        T::zero()
    } else {
        log.exp()
    }
}

fn bump_alpha_d1<T: Real>(x: T) -> T {
    let a = bump_alpha(x);
    if a == T::zero() {
        return T::zero();
    }
    let two = T::lit(2.0);
    let y = T::one() - x;
    a * (two / (x * x * x) - two / (y * y * y))
}

/// Normalized ramp `β(x) = ∫₀ˣ α / ∫₀¹ α` with its derivatives and primitive.
#[derive(Debug, Clone)]
pub struct Ramp<T> {
    norm: T,
    primitive: CumulativeIntegral<T>,
    moment: CumulativeIntegral<T>,
}

fn moment_integrand<T: Real>(t: T) -> T {
    t * bump_alpha(t)
}

impl<T: Real> Ramp<T> {
    pub fn new() -> Result<Self> {
        let opts = QuadratureOptions {
            abs_tol: T::epsilon() * T::lit(1e-4),
            ..QuadratureOptions::default()
        }
        .with_initial_panels(32);
        let primitive = legendre_table(&bump_alpha, T::zero(), T::one(), &opts)?;
        let moment = legendre_table(&moment_integrand, T::zero(), T::one(), &opts)?;
        Ok(Self {
            norm: primitive.total(),
            primitive,
            moment,
        })
    }

    /// `∫₀¹ α`.
    pub fn norm(&self) -> T {
        self.norm
    }

    pub fn value(&self, x: T) -> T {
        if x <= T::zero() {
            T::zero()
        } else if x >= T::one() {
            T::one()
        } else {
            self.primitive.eval(&bump_alpha, x) / self.norm
        }
    }

    pub fn d1(&self, x: T) -> T {
        bump_alpha(x) / self.norm
    }

    pub fn d2(&self, x: T) -> T {
        bump_alpha_d1(x) / self.norm
    }

    /// `∫₀ˣ β`.
    pub fn primitive(&self, x: T) -> T {
        if x <= T::zero() {
            T::zero()
        } else if x >= T::one() {
            T::one() - self.moment.total() / self.norm + (x - T::one())
        } else {
            x * self.value(x) - self.moment.eval(&moment_integrand, x) / self.norm
        }
    }
}

/// Adaptive panel layout with Gauss–Legendre panel sums, so that partial
/// sweeps from a knot agree with the stored sums at the next knot.
fn legendre_table<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    opts: &QuadratureOptions<T>,
) -> Result<CumulativeIntegral<T>> {
    CumulativeIntegral::build(f, a, b, opts).map(|t| t.resum_legendre(f))
}

fn shared_ramp() -> &'static Ramp<f64> {
    static RAMP: OnceLock<Ramp<f64>> = OnceLock::new();
    RAMP.get_or_init(|| Ramp::new().expect("bump integral converges"))
}

/// `β(x)` in double precision.
pub fn ramp_beta(x: f64) -> f64 {
    shared_ramp().value(x)
}

/// `φ_ε(r) = β((r - R)/ε + 1)`, identically zero for `ε = 0`.
pub fn step_phi(eps: f64, radius: f64, r: f64) -> f64 {
    step_with(shared_ramp(), eps, radius, r)
}

fn step_with<T: Real>(ramp: &Ramp<T>, width: T, radius: T, r: T) -> T {
    if width > T::zero() {
        ramp.value((r - radius) / width + T::one())
    } else {
        T::zero()
    }
}

/// Two profiles meeting to first order at `radius`.
#[derive(Clone)]
pub struct JunctionInput<T> {
    b: Profile<T>,
    c: Profile<T>,
    radius: T,
    margin: Option<T>,
}

impl<T: Real> JunctionInput<T> {
    pub fn new(b: Profile<T>, c: Profile<T>, radius: T) -> Result<Self> {
        if !radius.is_finite() {
            return Err(Error::parameter("R", radius.as_f64(), "must be finite"));
        }
        let (bj, cj) = (b(radius), c(radius));
        let tol = |x: T| T::lit(1e-12).max(T::lit(16.0) * T::epsilon() * (x.abs() + T::one()));
        if !((bj.value - cj.value).abs() < tol(cj.value)) {
            return Err(Error::Precondition(format!(
                "b(R) = {} differs from c(R) = {}",
                bj.value.as_f64(),
                cj.value.as_f64()
            )));
        }
        if !((bj.d1 - cj.d1).abs() < tol(cj.d1)) {
            return Err(Error::Precondition(format!(
                "b'(R) = {} differs from c'(R) = {}",
                bj.d1.as_f64(),
                cj.d1.as_f64()
            )));
        }
        Ok(Self {
            b,
            c,
            radius,
            margin: None,
        })
    }

    /// Limits the collar width `δ(ε)` to stay below `margin`.
    pub fn with_margin(mut self, margin: T) -> Self {
        self.margin = Some(margin);
        self
    }

    pub fn radius(&self) -> T {
        self.radius
    }
}

/// The smoothed profile `a_ε` together with its intermediate stages.
#[derive(Clone)]
pub struct SmoothedJunction<T> {
    input: JunctionInput<T>,
    ramp: Arc<Ramp<T>>,
    eps: T,
    iota: T,
    omega: T,
    delta: T,
    slope_gap: T,
    value_gap: T,
    first: Option<CumulativeIntegral<T>>,
    second: Option<CumulativeIntegral<T>>,
}

impl<T: Real> std::fmt::Debug for SmoothedJunction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothedJunction")
            .field("radius", &self.input.radius)
            .field("eps", &self.eps)
            .field("iota", &self.iota)
            .field("omega", &self.omega)
            .field("delta", &self.delta)
            .finish_non_exhaustive()
    }
}

pub fn smooth_junction<T: Real>(input: &JunctionInput<T>, eps: T) -> Result<SmoothedJunction<T>> {
    smooth_junction_with(input, eps, Arc::new(Ramp::new()?))
}

pub fn smooth_junction_with<T: Real>(
    input: &JunctionInput<T>,
    eps: T,
    ramp: Arc<Ramp<T>>,
) -> Result<SmoothedJunction<T>> {
    if !(eps > T::zero() && eps.is_finite()) {
        return Err(Error::parameter("eps", eps.as_f64(), "must be positive"));
    }
    let mut s = SmoothedJunction {
        input: input.clone(),
        ramp,
        eps,
        iota: T::zero(),
        omega: T::zero(),
        delta: eps,
        slope_gap: T::zero(),
        value_gap: T::zero(),
        first: None,
        second: None,
    };
    let radius = input.radius;
    let start = radius - eps;
    let scale = (input.c)(radius).d2.abs() + (input.b)(radius).d2.abs();
    let opts = QuadratureOptions {
        abs_tol: T::epsilon() * scale * radius.abs().max(eps),
        ..QuadratureOptions::default()
    }
    .with_initial_panels(16);
    if scale > T::zero() {
        let first = legendre_table(&|t| s.blend_gap(t), start, radius, &opts)?;
        let second = legendre_table(&|t| (t - start) * s.blend_gap(t), start, radius, &opts)?;
        s.first = Some(first);
        s.second = Some(second);
    }

    let c_at = (input.c)(radius);
    s.slope_gap = c_at.d1 - s.eta(radius);
    s.iota = s.slope_gap.abs().sqrt();
    let kappa_end = s.kappa(radius);
    s.value_gap = c_at.value - kappa_end;
    s.omega = s.value_gap.abs().cbrt();
    s.delta = eps.max(s.iota).max(s.omega);

    if let Some(limit) = input.margin {
        if !(s.delta < limit) {
            return Err(Error::Width {
                delta: s.delta.as_f64(),
                limit: limit.as_f64(),
            });
        }
    }
    Ok(s)
}

impl<T: Real> SmoothedJunction<T> {
    pub fn radius(&self) -> T {
        self.input.radius
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn iota(&self) -> T {
        self.iota
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    /// `c'(R) - η_ε(R)`.
    pub fn slope_gap(&self) -> T {
        self.slope_gap
    }

    /// `c(R) - κ_ε(R)`.
    pub fn value_gap(&self) -> T {
        self.value_gap
    }

    pub fn b(&self, r: T) -> Jet<T> {
        (self.input.b)(r)
    }

    pub fn c(&self, r: T) -> Jet<T> {
        (self.input.c)(r)
    }

    /// Number of knots in the memoized running integrals.
    pub fn knot_count(&self) -> usize {
        self.first.as_ref().map_or(0, |t| t.knot_count())
            + self.second.as_ref().map_or(0, |t| t.knot_count())
    }

    fn phi(&self, width: T, r: T) -> T {
        step_with(&self.ramp, width, self.input.radius, r)
    }

    fn blend_gap(&self, r: T) -> T {
        (self.c(r).d2 - self.b(r).d2) * self.phi(self.eps, r)
    }

    /// `∫_{R-ε}^r (c'' - b'') φ_ε`.
    fn first_integral(&self, r: T) -> T {
        let radius = self.input.radius;
        let Some(table) = &self.first else {
            return T::zero();
        };
        if r <= radius {
            table.eval(&|t| self.blend_gap(t), r)
        } else {
            let (b0, c0, b1, c1) = (self.b(radius), self.c(radius), self.b(r), self.c(r));
            table.total() + (c1.d1 - c0.d1) - (b1.d1 - b0.d1)
        }
    }

    /// `∫_{R-ε}^r ∫_{R-ε}^t (c'' - b'') φ_ε`.
    fn second_integral(&self, r: T) -> T {
        let radius = self.input.radius;
        let start = radius - self.eps;
        let (Some(first), Some(second)) = (&self.first, &self.second) else {
            return T::zero();
        };
        if r <= start {
            return T::zero();
        }
        if r <= radius {
            let f = |t| self.blend_gap(t);
            let g = |t| (t - start) * self.blend_gap(t);
            (r - start) * first.eval(&f, r) - second.eval(&g, r)
        } else {
            let at_end = self.eps * first.total() - second.total();
            let dr = r - radius;
            let (b0, c0, b1, c1) = (self.b(radius), self.c(radius), self.b(r), self.c(r));
            at_end
                + first.total() * dr
                + (c1.value - c0.value - c0.d1 * dr)
                - (b1.value - b0.value - b0.d1 * dr)
        }
    }

    pub fn eta_prime(&self, r: T) -> T {
        let phi = self.phi(self.eps, r);
        self.b(r).d2 * (T::one() - phi) + self.c(r).d2 * phi
    }

    pub fn eta(&self, r: T) -> T {
        self.b(r).d1 + self.first_integral(r)
    }

    pub fn kappa_prime(&self, r: T) -> T {
        self.eta(r) + self.slope_gap * self.phi(self.iota, r)
    }

    /// `κ_ε`, anchored at `R - max(ε, ι)` where it coincides with `b`.
    pub fn kappa(&self, r: T) -> T {
        let bump = if self.iota > T::zero() {
            let x = (r - self.input.radius) / self.iota + T::one();
            self.slope_gap * self.iota * self.ramp.primitive(x)
        } else {
            T::zero()
        };
        self.b(r).value + self.second_integral(r) + bump
    }

    fn kappa_second(&self, r: T) -> T {
        let bump = if self.iota > T::zero() {
            let x = (r - self.input.radius) / self.iota + T::one();
            self.slope_gap * self.ramp.d1(x) / self.iota
        } else {
            T::zero()
        };
        self.eta_prime(r) + bump
    }

    /// `(a_ε, a_ε', a_ε'')` at `r`.
    pub fn jet(&self, r: T) -> Jet<T> {
        let radius = self.input.radius;
        if r >= radius {
            return self.c(r);
        }
        let (k0, k1, k2) = (self.kappa(r), self.kappa_prime(r), self.kappa_second(r));
        if self.omega > T::zero() {
            let w = self.omega;
            let x = (r - radius) / w + T::one();
            let gap = self.value_gap;
            Jet::new(
                k0 + gap * self.ramp.value(x),
                k1 + gap * self.ramp.d1(x) / w,
                k2 + gap * self.ramp.d2(x) / (w * w),
            )
        } else {
            Jet::new(k0, k1, k2)
        }
    }

    pub fn value(&self, r: T) -> T {
        self.jet(r).value
    }

    /// Grid infimum and supremum of `a_ε''` over `[R - δ, R]`.
    pub fn second_derivative_envelope(&self, grid_n: usize) -> Result<(T, T)> {
        if grid_n < 16 {
            return Err(Error::parameter(
                "grid_n",
                grid_n as f64,
                "at least 16 grid points are required",
            ));
        }
        let radius = self.input.radius;
        let lo = radius - self.delta;
        let step = self.delta / T::from_usize(grid_n - 1).unwrap();
        let mut inf = T::infinity();
        let mut sup = T::neg_infinity();
        for i in 0..grid_n {
            let r = if i + 1 == grid_n {
                radius
            } else {
                lo + step * T::from_usize(i).unwrap()
            };
            let d2 = self.jet(r).d2;
            inf = inf.min(d2);
            sup = sup.max(d2);
        }
        Ok((inf, sup))
    }
}

pub fn second_derivative_envelope<T: Real>(s: &SmoothedJunction<T>, grid_n: usize) -> Result<(T, T)> {
    s.second_derivative_envelope(grid_n)
}

/// Smoothed tube metric: the exponential extension blended into
/// `(sinh, cosh)` across a collar below `R`.
#[derive(Clone, Debug)]
pub struct SmoothedWarpingFamily<T: Real> {
    radius: T,
    eps: T,
    f: Arc<SmoothedJunction<T>>,
    g: Arc<SmoothedJunction<T>>,
    pair: WarpingPair<T>,
}

/// `k_ε` with the location of the maximizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciConstant<T> {
    pub k: T,
    pub argmax: T,
    pub grid_k: T,
    pub lo: T,
    pub hi: T,
}

/// Suprema of `h''/h` for the smoothed profiles over the collar and over the
/// whole sampled window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureRatioSups<T> {
    pub f_collar: T,
    pub f_window: T,
    pub g_collar: T,
    pub g_window: T,
}

pub fn smoothed_metric<T: Real>(radius: T, eps: T) -> Result<SmoothedWarpingFamily<T>> {
    smoothed_metric_with(radius, eps, Arc::new(Ramp::new()?))
}

pub fn smoothed_metric_with<T: Real>(
    radius: T,
    eps: T,
    ramp: Arc<Ramp<T>>,
) -> Result<SmoothedWarpingFamily<T>> {
    let ext = WarpingPair::kerckhoff_extension(radius)?;
    let hyp = WarpingPair::<T>::hyperbolic_tube();
    let (ef, eg, hf, hg) = (ext.clone(), ext, hyp.clone(), hyp);
    let f_input = JunctionInput::new(
        Arc::new(move |r| ef.f(r)),
        Arc::new(move |r| hf.f(r)),
        radius,
    )?
    .with_margin(radius);
    let g_input = JunctionInput::new(
        Arc::new(move |r| eg.g(r)),
        Arc::new(move |r| hg.g(r)),
        radius,
    )?
    .with_margin(radius);
    let f = Arc::new(smooth_junction_with(&f_input, eps, ramp.clone())?);
    let g = Arc::new(smooth_junction_with(&g_input, eps, ramp)?);

    let delta = f.delta().max(g.delta());
    let scale = [f.eps, f.iota, f.omega, g.iota, g.omega]
        .into_iter()
        .filter(|w| *w > T::zero())
        .fold(T::infinity(), T::min);
    let (fj, gj) = (f.clone(), g.clone());
    let pair = WarpingPair::custom(
        format!("smoothed(R={}, eps={})", radius, eps),
        Arc::new(move |r| fj.jet(r)) as Profile<T>,
        Arc::new(move |r| gj.jet(r)) as Profile<T>,
        Domain::new(None, Some(radius + T::lit(SMOOTHED_MARGIN))),
    )
    .with_tail_decay(radius.coth() + radius.tanh())
    .with_sample_window(radius - T::lit(2.0) * delta, radius + delta)
    .with_feature_scale(scale);

    Ok(SmoothedWarpingFamily {
        radius,
        eps,
        f,
        g,
        pair,
    })
}

impl<T: Real> SmoothedWarpingFamily<T> {
    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn pair(&self) -> &WarpingPair<T> {
        &self.pair
    }

    pub fn f_junction(&self) -> &SmoothedJunction<T> {
        &self.f
    }

    pub fn g_junction(&self) -> &SmoothedJunction<T> {
        &self.g
    }

    /// Collar width: the larger of the two junction widths.
    pub fn delta(&self) -> T {
        self.f.delta().max(self.g.delta())
    }

    /// Interval `[R - δ - 1, R + margin]` scanned for `k_ε`.
    pub fn scan_interval(&self) -> (T, T) {
        (
            self.radius - self.delta() - T::one(),
            self.radius + T::lit(SMOOTHED_MARGIN),
        )
    }

    /// Grid scan of `½ max(-Ric)` refined by golden-section search around
    /// the grid maximizer. The collar `[R - δ, R]` gets its own grid of
    /// `grid_n` points so that narrow collars are resolved.
    pub fn ricci_constant(&self, grid_n: usize) -> Result<RicciConstant<T>> {
        let (lo, hi) = self.scan_interval();
        let (wide_k, wide_at) = ricci_lower_bound_scan(&self.pair, lo, hi, grid_n)?;
        let collar_lo = self.radius - self.delta();
        let (collar_k, collar_at) = if collar_lo < self.radius {
            ricci_lower_bound_scan(&self.pair, collar_lo, self.radius, grid_n)?
        } else {
            (T::neg_infinity(), self.radius)
        };
        let n = T::from_usize(grid_n - 1).unwrap();
        let (grid_k, at, step) = if collar_k > wide_k {
            (collar_k, collar_at, (self.radius - collar_lo) / n)
        } else {
            (wide_k, wide_at, (hi - lo) / n)
        };
        let a = (at - step).max(lo);
        let b = (at + step).min(hi);
        let objective = |r: T| ricci_bound_at(&self.pair, r).unwrap_or(T::neg_infinity());
        let (r_ref, k_ref) = golden_section_max(objective, a, b, step * T::lit(1e-6));
        let (k, argmax) = if k_ref > grid_k { (k_ref, r_ref) } else { (grid_k, at) };
        Ok(RicciConstant {
            k,
            argmax,
            grid_k,
            lo,
            hi,
        })
    }

    pub fn curvature_ratio_sups(&self, grid_n: usize) -> CurvatureRatioSups<T> {
        let (lo, hi) = self.scan_interval();
        let collar_lo = self.radius - self.delta();
        let n = grid_n.max(2);
        let step = (hi - lo) / T::from_usize(n - 1).unwrap();
        let mut out = CurvatureRatioSups {
            f_collar: T::neg_infinity(),
            f_window: T::neg_infinity(),
            g_collar: T::neg_infinity(),
            g_window: T::neg_infinity(),
        };
        for i in 0..n {
            let r = lo + step * T::from_usize(i).unwrap();
            let (f, g) = (self.f.jet(r), self.g.jet(r));
            let (rf, rg) = (f.d2 / f.value, g.d2 / g.value);
            out.f_window = out.f_window.max(rf);
            out.g_window = out.g_window.max(rg);
            if r >= collar_lo && r <= self.radius {
                out.f_collar = out.f_collar.max(rf);
                out.g_collar = out.g_collar.max(rg);
            }
        }
        out
    }
}

/// `k_ε` for the smoothed tube metric at radius `R`.
pub fn k_eps<T: Real>(radius: T, eps: T, grid_n: usize) -> Result<T> {
    Ok(smoothed_metric(radius, eps)?.ricci_constant(grid_n)?.k)
}

/// `coth R coth 2R = (1 + coth² R)/2`, the limit of `k_ε`.
pub fn k_limit<T: Real>(radius: T) -> T {
    radius.coth() * (radius + radius).coth()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn kerckhoff_sinh(radius: f64) -> JunctionInput<f64> {
        let ext = WarpingPair::kerckhoff_extension(radius).unwrap();
        let hyp = WarpingPair::<f64>::hyperbolic_tube();
        JunctionInput::new(
            Arc::new(move |r| ext.f(r)),
            Arc::new(move |r| hyp.f(r)),
            radius,
        )
        .unwrap()
    }

    #[test]
    fn alpha_values() {
        assert_relative_eq!(bump_alpha(0.5_f64), (-8.0_f64).exp(), max_relative = 1e-15);
        assert_eq!(bump_alpha(0.0_f64), 0.0);
        assert_eq!(bump_alpha(1.0_f64), 0.0);
        assert_eq!(bump_alpha(-2.0_f64), 0.0);
        assert_eq!(bump_alpha(0.01_f64), 0.0);
        for x in [0.1, 0.23, 0.4, 0.49] {
            assert_relative_eq!(bump_alpha(x), bump_alpha(1.0 - x), max_relative = 1e-12);
        }
        assert!(bump_alpha(1e-3_f64).is_finite());
    }

    #[test]
    fn beta_values() {
        assert_eq!(ramp_beta(0.0), 0.0);
        assert_eq!(ramp_beta(1.0), 1.0);
        assert_eq!(ramp_beta(-3.0), 0.0);
        assert_eq!(ramp_beta(7.0), 1.0);
        assert!((ramp_beta(0.5) - 0.5).abs() < 1e-14);
        let mut prev = 0.0;
        for i in 0..=400 {
            let b = ramp_beta(i as f64 / 400.0);
            assert!(b >= prev);
            prev = b;
        }
    }

    #[test]
    fn ramp_primitive_continuation() {
        let ramp = Ramp::<f64>::new().unwrap();
        assert!((ramp.primitive(1.0) - 0.5).abs() < 1e-14);
        assert!((ramp.primitive(2.5) - 2.0).abs() < 1e-14);
        assert_eq!(ramp.primitive(-1.0), 0.0);
    }

    #[test]
    fn phi_values() {
        for eps in [0.3, 1e-2, 1e-5] {
            assert_eq!(step_phi(eps, 0.8, 0.8), 1.0);
            assert_eq!(step_phi(eps, 0.8, 0.8 - eps), 0.0);
            // (r - R)/ε loses about ulp(R)/ε to cancellation
            let tol = 1e-12_f64.max(1e-14 / eps);
            assert!((step_phi(eps, 0.8, 0.8 - eps / 2.0) - 0.5).abs() < tol);
        }
        for r in [-1.0, 0.8, 3.0] {
            assert_eq!(step_phi(0.0, 0.8, r), 0.0);
        }
    }

    #[test]
    fn identical_profiles_are_untouched() {
        let hyp = WarpingPair::<f64>::hyperbolic_tube();
        let (h1, h2) = (hyp.clone(), hyp.clone());
        let input = JunctionInput::new(Arc::new(move |r| h1.f(r)), Arc::new(move |r| h2.f(r)), 0.8)
            .unwrap();
        let s = smooth_junction(&input, 1e-2).unwrap();
        assert_eq!(s.iota(), 0.0);
        assert_eq!(s.omega(), 0.0);
        assert_eq!(s.delta(), 1e-2);
        for r in [-1.0, 0.5, 0.795, 0.8, 1.3] {
            assert_eq!(s.jet(r), hyp.f(r));
        }
        let (lo, hi) = s.second_derivative_envelope(64).unwrap();
        assert_eq!(lo, (0.8 - 1e-2_f64).sinh());
        assert_eq!(hi, 0.8_f64.sinh());
    }

    #[test]
    fn mismatched_profiles_are_rejected() {
        let input = JunctionInput::<f64>::new(
            Arc::new(|r: f64| Jet::new(r.sinh(), r.cosh(), r.sinh())),
            Arc::new(|r: f64| Jet::new(r.cosh(), r.sinh(), r.cosh())),
            0.8,
        );
        assert!(matches!(input, Err(Error::Precondition(_))));
        let input = kerckhoff_sinh(0.8);
        assert!(smooth_junction(&input, 0.0).is_err());
        assert!(matches!(
            smooth_junction(&input.clone().with_margin(0.01), 1e-2),
            Err(Error::Width { .. })
        ));
    }

    #[test]
    fn matches_outside_collar() {
        let input = kerckhoff_sinh(0.8);
        let s = smooth_junction(&input, 1e-2).unwrap();
        let d = s.delta();
        assert!((s.value(0.8 - d - 0.1) - s.b(0.8 - d - 0.1).value).abs() < 1e-10);
        assert!((s.value(0.9) - 0.9_f64.sinh()).abs() < 1e-10);
        assert_eq!(s.delta(), s.eps().max(s.iota()).max(s.omega()));
    }

    #[test]
    fn left_formula_meets_c_at_radius() {
        let s = smooth_junction(&kerckhoff_sinh(0.8), 1e-2).unwrap();
        let r = 0.8 - 1e-12;
        let (a, c) = (s.jet(r), s.c(0.8));
        assert!((a.value - c.value).abs() < 1e-11);
        assert!((a.d1 - c.d1).abs() < 1e-10);
        assert!((a.d2 - c.d2).abs() < 1e-8);
        assert!((s.kappa_prime(0.8) - c.d1).abs() < 1e-13);
    }

    #[test]
    fn stage_functions() {
        let s = smooth_junction(&kerckhoff_sinh(0.8), 1e-2).unwrap();
        let below = 0.8 - 2e-2;
        assert_eq!(s.eta_prime(below), s.b(below).d2);
        assert_eq!(s.eta(below), s.b(below).d1);
        assert_eq!(s.eta_prime(0.9), s.c(0.9).d2);
        // η differs from c' above R by the constant slope gap
        let gap = s.c(0.9).d1 - s.eta(0.9);
        assert!((gap - s.slope_gap()).abs() < 1e-13);
        assert!((s.kappa_prime(0.9) - s.c(0.9).d1).abs() < 1e-13);
    }

    #[test]
    fn widths_shrink_with_eps() {
        let mut prev = f64::INFINITY;
        for eps in [1e-1, 1e-2, 1e-3] {
            let fam = smoothed_metric(0.8_f64, eps).unwrap();
            assert!(fam.delta() < prev);
            prev = fam.delta();
        }
    }

    #[test]
    fn smoothed_family_outside_collar() {
        let fam = smoothed_metric(0.8_f64, 1e-3).unwrap();
        let (f, g) = fam.pair().jets(1.0).unwrap();
        assert!((f.value - 1f64.sinh()).abs() < 1e-10);
        assert!((g.value - 1f64.cosh()).abs() < 1e-10);
        assert!(smoothed_metric(0.05_f64, 0.1).is_err());
    }

    #[test]
    fn algebraic_identity_for_limit() {
        for radius in [0.1_f64, 0.8, 2.5] {
            let c = radius.coth();
            assert!((k_limit(radius) - (1.0 + c * c) / 2.0).abs() < 1e-14 * k_limit(radius));
        }
    }
}
