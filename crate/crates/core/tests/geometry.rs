use approx::assert_relative_eq;
use drillbound::oracle::{frame_riemann_fd, riemann_fd, validate_with, DiagonalMetric, Stencil, ValidationOptions};
use drillbound::quadrature::{integrate, QuadratureOptions};
use drillbound::smoothing::{k_limit, smoothed_metric, SmoothedJunction, DEFAULT_K_GRID};
use drillbound::warped::{ricci_lower_bound_constant, sectional_curvatures, WarpingPair};
use drillbound::WarpingPair64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn library() -> Vec<WarpingPair64> {
    vec![
        WarpingPair::hyperbolic_tube(),
        WarpingPair::euclidean_cylinder(),
        WarpingPair::kerckhoff_extension(0.3).unwrap(),
        WarpingPair::kerckhoff_extension(0.8).unwrap(),
        WarpingPair::kerckhoff_extension(1.5).unwrap(),
    ]
}

fn sample_radii(w: &WarpingPair64, n: usize, seed: u64) -> Vec<f64> {
    let (lo, hi) = w.sample_window();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

#[test]
fn gauss_bonnet_on_hyperbolic_annuli() {
    let w = WarpingPair::hyperbolic_tube();
    let opts = QuadratureOptions::default();
    for (r0, r1) in [(0.1, 0.5), (0.3, 2.0), (1.0, 4.0), (0.05, 3.5)] {
        let area_term = integrate(
            |r| sectional_curvatures(&w, r).unwrap().r_theta * w.f(r).value,
            r0,
            r1,
            &opts,
        )
        .unwrap()
        .value
            * std::f64::consts::TAU;
        let boundary = |r: f64| {
            let f = w.f(r);
            (f.d1 / f.value) * std::f64::consts::TAU * f.value
        };
        let total = area_term + boundary(r1) - boundary(r0);
        assert!(total.abs() < 1e-6, "annulus [{r0}, {r1}]: {total:e}");
    }
}

#[test]
fn library_pairs_match_oracle() {
    for w in library().into_iter().filter(|w| w.name() != "euclidean") {
        let report = validate_with(&w, &ValidationOptions::default());
        assert!(report.pass, "{}: {:e}", w.name(), report.max_relative_error);
    }
    // Flat planes: the second-difference roundoff floor is about 2e-8 at h = 1e-4.
    let flat = validate_with(
        &WarpingPair::euclidean_cylinder(),
        &ValidationOptions {
            abs_tolerance: 1e-6,
            ..ValidationOptions::default()
        },
    );
    assert!(flat.pass, "{:e}", flat.max_near_zero_error);
}

#[test]
fn riemann_symmetries() {
    for w in library() {
        let m = DiagonalMetric::from_pair(&w);
        for r in sample_radii(&w, 50, 7) {
            let rm = riemann_fd(&m, r).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            let v = rm[i][j][k][l];
                            assert!((v + rm[j][i][k][l]).abs() < 1e-6, "{} antisym at {r}", w.name());
                            assert!((v + rm[i][j][l][k]).abs() < 1e-6);
                            assert!((v - rm[k][l][i][j]).abs() < 1e-6, "{} pair sym at {r}", w.name());
                            let bianchi = v + rm[i][k][l][j] + rm[i][l][j][k];
                            assert!(bianchi.abs() < 1e-6, "{} bianchi at {r}", w.name());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn off_diagonal_frame_curvature_vanishes() {
    for w in library() {
        let m = DiagonalMetric::from_pair(&w);
        for r in sample_radii(&w, 50, 11) {
            let rm = frame_riemann_fd(&m, r).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        if j != k {
                            assert!(rm[i][k][i][j].abs() < 1e-5, "{} R({i}{k}{i}{j}) at {r}", w.name());
                        }
                    }
                }
            }
        }
    }
}

fn per_sample_error(w: &WarpingPair64, step: f64, stencil: Stencil) -> (Vec<f64>, f64) {
    let report = validate_with(
        w,
        &ValidationOptions {
            step,
            stencil,
            ..ValidationOptions::default()
        },
    );
    let errs = report
        .samples
        .iter()
        .map(|s| s.abs_err.iter().cloned().fold(0.0, f64::max))
        .collect();
    (errs, report.max_relative_error)
}

#[test]
fn halving_step_shows_second_order_convergence_near_axis() {
    let w = WarpingPair::hyperbolic_tube().with_sample_window(0.01, 0.3);
    let (coarse, _) = per_sample_error(&w, 1e-4, Stencil::SecondOrder);
    let (fine, _) = per_sample_error(&w, 5e-5, Stencil::SecondOrder);
    let improved = coarse.iter().zip(&fine).filter(|(c, f)| f < c).count();
    assert!(improved * 10 >= coarse.len() * 9, "{improved} of {}", coarse.len());
}

#[test]
fn halving_step_shrinks_error_on_smoothed_collar() {
    let fam = smoothed_metric(0.8, 1e-2).unwrap();
    let (_, coarse) = per_sample_error(fam.pair(), 1e-4, Stencil::SecondOrder);
    let (_, fine) = per_sample_error(fam.pair(), 5e-5, Stencil::SecondOrder);
    let ratio = coarse / fine;
    assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}");
}

#[test]
fn extension_ricci_constant_is_interval_independent() {
    for radius in [0.3f64, 0.8, 1.5] {
        let w = WarpingPair::kerckhoff_extension(radius).unwrap();
        let a = ricci_lower_bound_constant(&w, radius - 3.0, radius, 257).unwrap();
        let b = ricci_lower_bound_constant(&w, radius - 0.5, radius - 0.1, 65).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!((a - k_limit(radius)).abs() < 1e-12);
    }
}

fn collar_grid(j: &SmoothedJunction<f64>, lo: f64, n: usize) -> impl Iterator<Item = f64> + '_ {
    let hi = j.radius();
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

#[test]
fn uniform_c1_convergence() {
    for radius in [0.5, 0.8, 1.2] {
        let fams: Vec<_> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&e| smoothed_metric(radius, e).unwrap())
            .collect();
        let lo = radius - fams[0].delta();
        for pick in [0, 1] {
            let errs: Vec<(f64, f64)> = fams
                .iter()
                .map(|fam| {
                    let j = if pick == 0 { fam.f_junction() } else { fam.g_junction() };
                    collar_grid(j, lo, 2048).fold((0.0f64, 0.0f64), |(e0, e1), r| {
                        let a = j.jet(r);
                        let base = j.b(r);
                        (e0.max((a.value - base.value).abs()), e1.max((a.d1 - base.d1).abs()))
                    })
                })
                .collect();
            for w in errs.windows(2) {
                assert!(w[1].0 < w[0].0, "R={radius} value {errs:?}");
                assert!(w[1].1 < w[0].1, "R={radius} slope {errs:?}");
            }
        }
    }
}

#[test]
fn smoothed_derivatives_match_finite_differences() {
    let fam = smoothed_metric(0.8f64, 1e-2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-5;
    for j in [fam.f_junction(), fam.g_junction()] {
        let lo = j.radius() - j.delta();
        for _ in 0..100 {
            let r = rng.gen_range(lo..j.radius());
            let jet = j.jet(r);
            let d1 = (j.jet(r + h).value - j.jet(r - h).value) / (2.0 * h);
            let d2 = (j.jet(r + h).d1 - j.jet(r - h).d1) / (2.0 * h);
            assert!((d1 - jet.d1).abs() < 1e-5, "a' at {r}: {d1} vs {}", jet.d1);
            assert!((d2 - jet.d2).abs() < 1e-5, "a'' at {r}: {d2} vs {}", jet.d2);
        }
    }
}

/// Observed `k_ε` for the smoothed metric, recorded as regression values.
const K_EPS_OBSERVED: [(f64, f64, f64); 9] = [
    (0.5, 1e-1, 18.1429395068939),
    (0.5, 1e-2, 7.12992875861524),
    (0.5, 1e-3, 4.08025070821115),
    (0.8, 1e-1, 8.84841080426062),
    (0.8, 1e-2, 3.70150336271438),
    (0.8, 1e-3, 2.18440626149005),
    (1.2, 1e-1, 3.48885144809418),
    (1.2, 1e-2, 1.99306826189042),
    (1.2, 1e-3, 1.46609776527013),
];

#[test]
fn k_eps_regression_values() {
    for (radius, eps, k) in K_EPS_OBSERVED {
        let got = smoothed_metric(radius, eps).unwrap().ricci_constant(DEFAULT_K_GRID).unwrap().k;
        assert_relative_eq!(got, k, max_relative = 1e-9);
    }
}

#[test]
fn k_eps_gap_shrinks_and_vanishes_for_small_eps() {
    let radius = 0.8f64;
    let gaps: Vec<f64> = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7]
        .iter()
        .map(|&e| {
            let k = smoothed_metric(radius, e).unwrap().ricci_constant(DEFAULT_K_GRID).unwrap().k;
            (k - k_limit(radius)).abs()
        })
        .collect();
    for w in gaps.windows(2) {
        assert!(w[1] < w[0], "{gaps:?}");
    }
    assert!(gaps[5] < 0.05, "{gaps:?}");
}

#[test]
fn small_eps_second_derivatives_positive() {
    for radius in [0.5, 0.8, 1.2] {
        let fam = smoothed_metric(radius, 1e-6).unwrap();
        let (f_lo, _) = fam.f_junction().second_derivative_envelope(DEFAULT_K_GRID).unwrap();
        let (g_lo, _) = fam.g_junction().second_derivative_envelope(DEFAULT_K_GRID).unwrap();
        assert!(f_lo > 0.0 && g_lo > 0.0, "R={radius}: {f_lo} {g_lo}");
    }
}
