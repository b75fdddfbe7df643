//! Adaptive Gauss–Kronrod quadrature and memoized running integrals.
//!
//! [`integrate`] bisects the panel with the largest error estimate until the
//! summed G7/K15 estimate meets the tolerance. [`CumulativeIntegral`] keeps
//! the converged panel edges as a knot grid so that `∫_a^x f` can be
//! evaluated for many `x` with one binary search and one short Gauss–Legendre
//! sweep.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const LEGENDRE_POINTS: usize = 20;

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_panels: usize,
    pub initial_panels: usize,
}

impl<T: Real> Default for QuadratureOptions<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::quadrature_tolerance(),
            rel_tol: T::epsilon() * T::lit(64.0),
            max_panels: 4096,
            initial_panels: 1,
        }
    }
}

impl<T: Real> QuadratureOptions<T> {
    pub fn with_initial_panels(mut self, n: usize) -> Self {
        self.initial_panels = n.max(1);
        self
    }
}

/// Result of a definite integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub abs_error: T,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
}

fn kronrod_panel<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> Panel<T> {
    let half = T::lit(0.5);
    let center = half * (lo + hi);
    let half_len = half * (hi - lo);
    let f_center = f(center);

    let mut gauss = f_center * T::lit(WG[3]);
    let mut kronrod = f_center * T::lit(WGK[7]);
    let mut res_abs = kronrod.abs();
    let mut samples = [(T::zero(), T::zero()); 7];

    for (j, node) in XGK.iter().take(7).enumerate() {
        let dx = half_len * T::lit(*node);
        let (f1, f2) = (f(center - dx), f(center + dx));
        samples[j] = (f1, f2);
        kronrod = kronrod + T::lit(WGK[j]) * (f1 + f2);
        res_abs = res_abs + T::lit(WGK[j]) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = kronrod * half;
    let mut res_asc = T::lit(WGK[7]) * (f_center - mean).abs();
    for (j, (f1, f2)) in samples.iter().enumerate() {
        res_asc = res_asc + T::lit(WGK[j]) * ((*f1 - mean).abs() + (*f2 - mean).abs());
    }

    let abs_half = half_len.abs();
    let value = kronrod * half_len;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let mut error = ((kronrod - gauss) * half_len).abs();
    if res_asc != T::zero() && error != T::zero() {
        let scale = (T::lit(200.0) * error / res_asc).powf(T::lit(1.5));
        error = if scale < T::one() { res_asc * scale } else { res_asc };
    }
    let floor = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) && floor > error {
        error = floor;
    }

    Panel {
        lo,
        hi,
        value,
        error,
    }
}

fn adaptive_panels<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    opts: &QuadratureOptions<T>,
) -> Result<(Vec<Panel<T>>, T, T)> {
    let n0 = opts.initial_panels.max(1);
    let width = (b - a) / T::from_usize(n0).unwrap();
    let mut panels: Vec<Panel<T>> = (0..n0)
        .map(|i| {
            let lo = a + width * T::from_usize(i).unwrap();
            let hi = if i + 1 == n0 { b } else { lo + width };
            kronrod_panel(f, lo, hi)
        })
        .collect();

    loop {
        let total = panels.iter().fold(T::zero(), |s, p| s + p.value);
        let error = panels.iter().fold(T::zero(), |s, p| s + p.error);
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if error <= target {
            panels.sort_by(|p, q| p.lo.partial_cmp(&q.lo).unwrap());
            return Ok((panels, total, error));
        }
        if panels.len() >= opts.max_panels || !error.is_finite() {
            return Err(Error::NonConvergent {
                lo: a.as_f64(),
                hi: b.as_f64(),
                error_estimate: error.as_f64(),
                panels: panels.len(),
                target: target.as_f64(),
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, p)| {
                if p.error > be {
                    (i, p.error)
                } else {
                    (bi, be)
                }
            });
        let p = panels.swap_remove(worst);
        let mid = T::lit(0.5) * (p.lo + p.hi);
        if mid <= p.lo || mid >= p.hi {
            // panel is at the resolution limit of the scalar type
            return Err(Error::NonConvergent {
                lo: a.as_f64(),
                hi: b.as_f64(),
                error_estimate: error.as_f64(),
                panels: panels.len() + 1,
                target: target.as_f64(),
            });
        }
        panels.push(kronrod_panel(f, p.lo, mid));
        panels.push(kronrod_panel(f, mid, p.hi));
    }
}

/// Integrates `f` over `[a, b]` (either orientation).
pub fn integrate<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    opts: &QuadratureOptions<T>,
) -> Result<Quadrature<T>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::EmptyInterval {
            lo: a.as_f64(),
            hi: b.as_f64(),
        });
    }
    if a == b {
        return Ok(Quadrature {
            value: T::zero(),
            abs_error: T::zero(),
            panels: 0,
        });
    }
    let (lo, hi, sign) = if a < b {
        (a, b, T::one())
    } else {
        (b, a, -T::one())
    };
    let (panels, value, error) = adaptive_panels(&f, lo, hi, opts)?;
    Ok(Quadrature {
        value: sign * value,
        abs_error: error,
        panels: panels.len(),
    })
}

fn legendre_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = LEGENDRE_POINTS;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        rule
    })
}

/// Fixed 20-point Gauss–Legendre sum over `[a, b]`.
pub fn gauss_legendre<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> T {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    legendre_rule().iter().fold(T::zero(), |acc, (x, w)| {
        acc + T::lit(*w) * f(center + half_len * T::lit(*x))
    }) * half_len
}

/// Running integral `x ↦ ∫_a^x f` on `[a, b]`, memoized on the converged
/// panel edges of an adaptive pass. Outside `[a, b]` the value is clamped to
/// the endpoint values; callers handle any continuation themselves.
#[derive(Debug, Clone)]
pub struct CumulativeIntegral<T> {
    knots: Vec<T>,
    cumulative: Vec<T>,
    abs_error: T,
}

impl<T: Real> CumulativeIntegral<T> {
    pub fn build<F: Fn(T) -> T>(f: &F, a: T, b: T, opts: &QuadratureOptions<T>) -> Result<Self> {
        if !(a < b) {
            return Err(Error::EmptyInterval {
                lo: a.as_f64(),
                hi: b.as_f64(),
            });
        }
        let (panels, _, abs_error) = adaptive_panels(f, a, b, opts)?;
        let mut knots = Vec::with_capacity(panels.len() + 1);
        let mut cumulative = Vec::with_capacity(panels.len() + 1);
        let mut acc = T::zero();
        knots.push(a);
        cumulative.push(acc);
        for p in &panels {
            acc = acc + p.value;
            knots.push(p.hi);
            cumulative.push(acc);
        }
        Ok(Self {
            knots,
            cumulative,
            abs_error,
        })
    }

    /// Replaces the Kronrod panel sums with 20-point Gauss–Legendre sums, the
    /// rule [`eval`](Self::eval) uses for partial panels. The running integral
    /// is then continuous across knots up to rounding.
    pub fn resum_legendre<F: Fn(T) -> T>(mut self, f: &F) -> Self {
        let mut acc = T::zero();
        for i in 1..self.knots.len() {
            acc = acc + gauss_legendre(f, self.knots[i - 1], self.knots[i]);
            self.cumulative[i] = acc;
        }
        self
    }

    pub fn lower(&self) -> T {
        self.knots[0]
    }

    pub fn upper(&self) -> T {
        *self.knots.last().unwrap()
    }

    pub fn total(&self) -> T {
        *self.cumulative.last().unwrap()
    }

    pub fn abs_error(&self) -> T {
        self.abs_error
    }

    pub fn knot_count(&self) -> usize {
        self.knots.len()
    }

    /// `∫_a^x f`; `f` must be the integrand the table was built from.
    pub fn eval<F: Fn(T) -> T>(&self, f: &F, x: T) -> T {
        if x <= self.lower() {
            return T::zero();
        }
        if x >= self.upper() {
            return self.total();
        }
        let k = match self
            .knots
            .binary_search_by(|k| k.partial_cmp(&x).unwrap())
        {
            Ok(i) => return self.cumulative[i],
            Err(i) => i - 1,
        };
        self.cumulative[k] + gauss_legendre(f, self.knots[k], x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let w: f64 = legendre_rule().iter().map(|(_, w)| w).sum();
        assert!((w - 2.0).abs() < 1e-14);
        let v = gauss_legendre(&|x: f64| x.powi(10), 0.0, 1.0);
        assert!((v - 1.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn integrates_exponential() {
        let q = integrate(|x: f64| x.exp(), 0.0, 2.0, &QuadratureOptions::default()).unwrap();
        assert!((q.value - (2f64.exp() - 1.0)).abs() < 1e-13);
        assert!(q.abs_error < 1e-12);
    }

    #[test]
    fn reversed_and_degenerate_limits() {
        let opts = QuadratureOptions::default();
        let fwd = integrate(|x: f64| x.sin(), 0.0, 1.0, &opts).unwrap().value;
        let back = integrate(|x: f64| x.sin(), 1.0, 0.0, &opts).unwrap().value;
        assert_eq!(fwd, -back);
        assert_eq!(integrate(|x: f64| x, 3.0, 3.0, &opts).unwrap().value, 0.0);
    }

    #[test]
    fn non_convergence_is_reported() {
        let opts = QuadratureOptions {
            max_panels: 8,
            ..QuadratureOptions::default()
        };
        let err = integrate(|x: f64| 1.0 / x.sqrt(), 1e-300, 1.0, &opts).unwrap_err();
        assert!(matches!(err, Error::NonConvergent { panels: 8, .. }));
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let f = |x: f64| x.cos();
        let table = CumulativeIntegral::build(&f, 0.0, 3.0, &QuadratureOptions::default()).unwrap();
        for i in 0..=60 {
            let x = 3.0 * i as f64 / 60.0;
            assert!((table.eval(&f, x) - x.sin()).abs() < 1e-14, "x = {x}");
        }
        assert_eq!(table.eval(&f, -1.0), 0.0);
        assert_eq!(table.eval(&f, 5.0), table.total());
    }

    #[test]
    fn works_in_single_precision() {
        let q = integrate(|x: f32| x * x, 0.0, 3.0, &QuadratureOptions::default()).unwrap();
        assert!((q.value - 9.0).abs() < 1e-5);
    }
}
