//! Finite-difference Riemann tensor of `diag(1, A(r), B(r))`.
//!
//! Only the metric *values* are sampled; derivatives come from centered
//! difference stencils in `r`. Connection and curvature are then assembled
//! with the general index formulas, so the result is independent of the
//! closed forms in [`crate::warped`].

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::warped::{sectional_curvatures, Domain, WarpingPair};

pub const DEFAULT_STEP: f64 = 1e-4;

/// `Γ^k_{ij}` stored as `[k][i][j]`, coordinates ordered `(r, θ, λ)`.
pub type Christoffel<T> = [[[T; 3]; 3]; 3];

/// Fully covariant `R_{abcd}`.
pub type Riemann<T> = [[[[T; 3]; 3]; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    /// Three-point centered differences, error `O(h²)`.
    SecondOrder,
    /// Five-point centered differences, error `O(h⁴)`.
    #[default]
    FourthOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    RTheta,
    RLambda,
    ThetaLambda,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::RTheta, Plane::RLambda, Plane::ThetaLambda];

    pub fn indices(self) -> (usize, usize) {
        match self {
            Plane::RTheta => (0, 1),
            Plane::RLambda => (0, 2),
            Plane::ThetaLambda => (1, 2),
        }
    }
}

type Component<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Diagonal metric `dr² + A(r) dθ² + B(r) dλ²` known only through values.
#[derive(Clone)]
pub struct DiagonalMetric<T> {
    theta: Component<T>,
    lambda: Component<T>,
    domain: Domain<T>,
    step: T,
    stencil: Stencil,
}

impl<T: Real> DiagonalMetric<T> {
    pub fn new(theta: Component<T>, lambda: Component<T>, domain: Domain<T>) -> Self {
        Self {
            theta,
            lambda,
            domain,
            step: T::lit(DEFAULT_STEP),
            stencil: Stencil::default(),
        }
    }

    /// `A = f²`, `B = g²`; the derivative channels of the pair are ignored.
    pub fn from_pair(w: &WarpingPair<T>) -> Self {
        let (wf, wg) = (w.clone(), w.clone());
        Self::new(
            Arc::new(move |r| {
                let v = wf.f(r).value;
                v * v
            }),
            Arc::new(move |r| {
                let v = wg.g(r).value;
                v * v
            }),
            w.domain(),
        )
    }

    pub fn with_step(mut self, step: T) -> Self {
        self.step = step;
        self
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn stencil(&self) -> Stencil {
        self.stencil
    }

    /// Warns when roundoff in the difference quotients dominates truncation.
    pub fn step_warning(&self) -> Option<String> {
        let floor = T::epsilon().powf(T::lit(0.25)) * T::lit(1e-2);
        if self.step < floor {
            Some(format!(
                "step {:e} is below {:e}; second differences are roundoff dominated",
                self.step.as_f64(),
                floor.as_f64()
            ))
        } else {
            None
        }
    }

    fn component(&self, a: usize, r: T) -> T {
        match a {
            0 => T::one(),
            1 => (self.theta)(r),
            _ => (self.lambda)(r),
        }
    }

    /// Value, first and second `r`-derivative of each diagonal component.
    pub fn metric_jet(&self, r: T) -> Result<[[T; 3]; 3]> {
        let h = self.step;
        let two = T::lit(2.0);
        if !self.domain.contains_with_margin(r, two * h) {
            return Err(self.domain.violation(r));
        }
        let mut out = [[T::zero(); 3]; 3];
        out[0][0] = T::one();
        for (a, slot) in out.iter_mut().enumerate().skip(1) {
            let at = |k: i32| self.component(a, r + h * T::lit(k as f64));
            let v0 = at(0);
            if !(v0 > T::zero()) {
                return Err(Error::SingularAxis { r: r.as_f64() });
            }
            let (d1, d2) = match self.stencil {
                Stencil::SecondOrder => {
                    let (p, m) = (at(1), at(-1));
                    ((p - m) / (two * h), (p - two * v0 + m) / (h * h))
                }
                Stencil::FourthOrder => {
                    let (p1, m1, p2, m2) = (at(1), at(-1), at(2), at(-2));
                    let twelve = T::lit(12.0);
                    (
                        (m2 - p2 + T::lit(8.0) * (p1 - m1)) / (twelve * h),
                        (-(p2 + m2) + T::lit(16.0) * (p1 + m1) - T::lit(30.0) * v0)
                            / (twelve * h * h),
                    )
                }
            };
            *slot = [v0, d1, d2];
        }
        Ok(out)
    }
}

fn connection<T: Real>(jet: &[[T; 3]; 3]) -> (Christoffel<T>, Christoffel<T>) {
    let half = T::lit(0.5);
    // ∂_i g_{ab}, with only ∂_r non-zero and only a == b entries present
    let dg = |order: usize, i: usize, a: usize, b: usize| {
        if i == 0 && a == b {
            jet[a][order]
        } else {
            T::zero()
        }
    };
    let mut gamma = [[[T::zero(); 3]; 3]; 3];
    let mut dgamma = [[[T::zero(); 3]; 3]; 3];
    for k in 0..3 {
        let (gk, gk1) = (jet[k][0], jet[k][1]);
        for i in 0..3 {
            for j in 0..3 {
                let s1 = dg(1, i, k, j) + dg(1, j, k, i) - dg(1, k, i, j);
                let s2 = dg(2, i, k, j) + dg(2, j, k, i) - dg(2, k, i, j);
                gamma[k][i][j] = half * s1 / gk;
                dgamma[k][i][j] = half * (s2 / gk - gk1 * s1 / (gk * gk));
            }
        }
    }
    (gamma, dgamma)
}

pub fn christoffel_fd<T: Real>(m: &DiagonalMetric<T>, r: T) -> Result<Christoffel<T>> {
    Ok(connection(&m.metric_jet(r)?).0)
}

/// `R_{ρσμν} = g_{ρρ}(∂_μ Γ^ρ_{νσ} - ∂_ν Γ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} - Γ^ρ_{νλ}Γ^λ_{μσ})`.
pub fn riemann_fd<T: Real>(m: &DiagonalMetric<T>, r: T) -> Result<Riemann<T>> {
    let jet = m.metric_jet(r)?;
    let (gamma, dgamma) = connection(&jet);
    let d = |mu: usize, rho: usize, a: usize, b: usize| {
        if mu == 0 {
            dgamma[rho][a][b]
        } else {
            T::zero()
        }
    };
    let mut out = [[[[T::zero(); 3]; 3]; 3]; 3];
    for rho in 0..3 {
        for sigma in 0..3 {
            for mu in 0..3 {
                for nu in 0..3 {
                    let mut v = d(mu, rho, nu, sigma) - d(nu, rho, mu, sigma);
                    for lam in 0..3 {
                        v = v + gamma[rho][mu][lam] * gamma[lam][nu][sigma]
                            - gamma[rho][nu][lam] * gamma[lam][mu][sigma];
                    }
                    out[rho][sigma][mu][nu] = jet[rho][0] * v;
                }
            }
        }
    }
    Ok(out)
}

/// Riemann components in the orthonormal frame `(∂_r, ∂_θ/√A, ∂_λ/√B)`.
pub fn frame_riemann_fd<T: Real>(m: &DiagonalMetric<T>, r: T) -> Result<Riemann<T>> {
    let jet = m.metric_jet(r)?;
    let mut out = riemann_fd(m, r)?;
    let norm = [T::one(), jet[1][0].sqrt(), jet[2][0].sqrt()];
    for (a, xa) in out.iter_mut().enumerate() {
        for (b, xb) in xa.iter_mut().enumerate() {
            for (c, xc) in xb.iter_mut().enumerate() {
                for (d, x) in xc.iter_mut().enumerate() {
                    *x = *x / (norm[a] * norm[b] * norm[c] * norm[d]);
                }
            }
        }
    }
    Ok(out)
}

pub fn sectional_fd<T: Real>(m: &DiagonalMetric<T>, r: T, plane: Plane) -> Result<T> {
    let (i, j) = plane.indices();
    let jet = m.metric_jet(r)?;
    let riem = riemann_fd(m, r)?;
    Ok(riem[i][j][i][j] / (jet[i][0] * jet[j][0]))
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions<T> {
    pub samples: usize,
    /// Relative tolerance where `|closed form| > near_zero`.
    pub tolerance: T,
    pub near_zero: T,
    /// Absolute tolerance where `|closed form| ≤ near_zero`.
    pub abs_tolerance: T,
    pub step: T,
    pub stencil: Stencil,
    pub seed: u64,
    /// Overrides the pair's own sampling window.
    pub window: Option<(T, T)>,
}

impl<T: Real> Default for ValidationOptions<T> {
    fn default() -> Self {
        Self {
            samples: 100,
            tolerance: T::lit(1e-5),
            near_zero: T::lit(1e-3),
            abs_tolerance: T::lit(1e-8),
            step: T::lit(DEFAULT_STEP),
            stencil: Stencil::default(),
            seed: 0x5eed_0001,
            window: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureSample<T> {
    pub r: T,
    /// `(K_rθ, K_rλ, K_θλ)` from the closed forms.
    pub closed: [T; 3],
    pub oracle: [T; 3],
    pub abs_err: [T; 3],
    pub rel_err: [T; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport<T> {
    pub pair: String,
    pub samples: Vec<CurvatureSample<T>>,
    pub max_relative_error: T,
    /// Largest absolute error over near-zero closed-form values.
    pub max_near_zero_error: T,
    /// Largest relative error per plane `(rθ, rλ, θλ)`.
    pub max_relative_by_plane: [T; 3],
    pub tolerance: T,
    pub pass: bool,
    pub warnings: Vec<String>,
}

/// Compares the closed-form curvatures of `w` with the finite-difference
/// oracle at `samples` uniformly random radii.
pub fn validate_lemma_curvature<T: Real>(
    w: &WarpingPair<T>,
    samples: usize,
    tolerance: T,
) -> CurvatureReport<T> {
    validate_with(
        w,
        &ValidationOptions {
            samples,
            tolerance,
            ..ValidationOptions::default()
        },
    )
}

pub fn validate_with<T: Real>(w: &WarpingPair<T>, opts: &ValidationOptions<T>) -> CurvatureReport<T> {
    let metric = DiagonalMetric::from_pair(w)
        .with_step(opts.step)
        .with_stencil(opts.stencil);
    let margin = T::lit(2.0) * opts.step;
    let domain = w.domain();
    let (mut lo, mut hi) = opts.window.unwrap_or_else(|| w.sample_window());
    if let Some(d) = domain.lower {
        lo = lo.max(d + margin);
    }
    if let Some(d) = domain.upper {
        hi = hi.min(d - margin);
    }
    let mut warnings: Vec<String> = metric.step_warning().into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut rows = Vec::with_capacity(opts.samples);
    let (mut max_rel, mut max_abs) = (T::zero(), T::zero());
    let mut by_plane = [T::zero(); 3];
    let mut pass = hi > lo;
    if !(hi > lo) {
        warnings.push(format!(
            "empty sampling window [{}, {}]",
            lo.as_f64(),
            hi.as_f64()
        ));
    }

    for _ in 0..opts.samples {
        if !(hi > lo) {
            break;
        }
        let u: f64 = rng.gen();
        let r = lo + (hi - lo) * T::lit(u);
        let closed = match sectional_curvatures(w, r) {
            Ok(k) => k.as_array(),
            Err(e) => {
                warnings.push(format!("r = {}: {e}", r.as_f64()));
                pass = false;
                continue;
            }
        };
        let mut oracle = [T::zero(); 3];
        let mut failed = false;
        for (slot, plane) in oracle.iter_mut().zip(Plane::ALL) {
            match sectional_fd(&metric, r, plane) {
                Ok(v) => *slot = v,
                Err(e) => {
                    warnings.push(format!("r = {}: {e}", r.as_f64()));
                    failed = true;
                }
            }
        }
        if failed {
            pass = false;
            continue;
        }
        let mut abs_err = [T::zero(); 3];
        let mut rel_err = [T::zero(); 3];
        for i in 0..3 {
            abs_err[i] = (oracle[i] - closed[i]).abs();
            if closed[i].abs() > opts.near_zero {
                rel_err[i] = abs_err[i] / closed[i].abs();
                max_rel = max_rel.max(rel_err[i]);
                by_plane[i] = by_plane[i].max(rel_err[i]);
                if !(rel_err[i] <= opts.tolerance) {
                    pass = false;
                }
            } else {
                max_abs = max_abs.max(abs_err[i]);
                if !(abs_err[i] <= opts.abs_tolerance) {
                    pass = false;
                }
            }
        }
        rows.push(CurvatureSample {
            r,
            closed,
            oracle,
            abs_err,
            rel_err,
        });
    }

    CurvatureReport {
        pair: w.name().to_string(),
        samples: rows,
        max_relative_error: max_rel,
        max_near_zero_error: max_abs,
        max_relative_by_plane: by_plane,
        tolerance: opts.tolerance,
        pass,
        warnings,
    }
}
