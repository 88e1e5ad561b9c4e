//! The grid operator checked against independent quadrature and against the
//! closed-form threshold density.

use std::f64::consts::FRAC_PI_2;

use pearle_core::appendix::{
    assess_positivity, candidate_density, inner_bracket, mu_from_g_constant, normalized_reference,
    second_derivative, sup_distance, Grid, GridFunction, MuSpec,
};
use pearle_core::density::s_density;

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let whole = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
    let left = (m - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + m)) + f(m));
    let right = (b - m) / 6.0 * (f(m) + 4.0 * f(0.5 * (m + b)) + f(b));
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(f, a, m, tol / 2.0, depth - 1)
            + adaptive_simpson(f, m, b, tol / 2.0, depth - 1)
    }
}

/// Bracket evaluated after the substitutions `z = sin φ` and `z = x sin φ`,
/// which remove the square-root endpoints.
fn bracket_by_quadrature<M: Fn(f64) -> f64>(mu: &M, x: f64) -> f64 {
    let first = adaptive_simpson(
        &|p: f64| p.cos().powi(2) * mu(p.sin()),
        0.0,
        FRAC_PI_2,
        1e-13,
        40,
    );
    let second = adaptive_simpson(
        &|p: f64| x * p.cos().powi(2) * mu(x * p.sin()),
        0.0,
        FRAC_PI_2,
        1e-13,
        40,
    );
    x * x * (first - second) / (1.0 - x * x)
}

fn max_relative_error<M: Fn(f64) -> f64>(n: usize, mu: M) -> f64 {
    let grid = Grid::with_points(n).unwrap();
    let b = inner_bracket(&GridFunction::from_fn(grid, &mu));
    b.iter()
        .filter(|(x, _)| (0.1..=0.9).contains(x))
        .map(|(x, v)| {
            let exact = bracket_by_quadrature(&mu, x);
            ((v - exact) / exact).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn quadrature_oracle_constant_mu() {
    // The substituted first integral of μ ≡ 1 is π/4.
    let q = adaptive_simpson(&|p: f64| p.cos().powi(2), 0.0, FRAC_PI_2, 1e-13, 40);
    assert!((q - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    for n in [50, 100, 200] {
        let e = max_relative_error(n, |_| 1.0);
        assert!(e < 1e-3, "n = {n}: {e}");
    }
}

#[test]
fn quadrature_oracle_g_constant_mu() {
    for n in [100, 200] {
        let e = max_relative_error(n, |z: f64| z * (1.0 - z * z).max(0.0).sqrt());
        assert!(e < 1e-3, "n = {n}: {e}");
    }
}

#[test]
fn constant_mu_reproduces_threshold_density() {
    let grid = Grid::with_points(10_000).unwrap();
    let h = candidate_density(&MuSpec::Constant, &grid, 100).unwrap();
    assert_eq!(h.len(), 9900);
    let reference = normalized_reference(h.grid()).unwrap();
    let d = sup_distance(&h, &reference, 0.0, 0.95);
    assert!(d <= 0.02, "sup distance {d}");
    // The closed-form S density normalized the same way gives the same curve.
    let closed = GridFunction::from_fn(*h.grid(), |s| s_density(s).unwrap())
        .normalized_by_mean()
        .unwrap();
    assert!(sup_distance(&closed, &reference, 0.0, 1.0) < 1e-12);
    let p = assess_positivity(&h);
    assert!(!p.has_negative);
}

#[test]
fn g_constant_changes_sign() {
    let grid = Grid::with_points(10_000).unwrap();
    let h = candidate_density(&MuSpec::GConstant, &grid, 100).unwrap();
    let p = assess_positivity(&h);
    assert!(p.has_negative && p.max > 0.0);
    // Frozen from this implementation at n = 10^4, trim 100.
    assert!(
        (p.negative_fraction - 0.6294).abs() < 0.005,
        "{}",
        p.negative_fraction
    );

    // The raw second derivative has negative mean, so normalization flips it.
    let mu = mu_from_g_constant(1.0, &grid).unwrap();
    let raw = second_derivative(&inner_bracket(&mu), 100).unwrap();
    assert!(raw.mean() < 0.0);
    let raw_p = assess_positivity(&raw);
    assert!((raw_p.negative_fraction - (1.0 - p.negative_fraction)).abs() < 1e-3);
}

fn coarse_vs_fine(spec: &MuSpec, n: usize, lo: f64, hi: f64) -> f64 {
    let coarse_grid = Grid::with_points(n).unwrap();
    let fine_grid = Grid::with_points(2 * n).unwrap();
    let coarse = candidate_density(spec, &coarse_grid, coarse_grid.default_trim()).unwrap();
    let fine = candidate_density(spec, &fine_grid, fine_grid.default_trim()).unwrap();
    let fx: Vec<(f64, f64)> = fine.iter().collect();
    coarse
        .iter()
        .filter(|(x, _)| (lo..=hi).contains(x))
        .map(|(x, v)| {
            let j = fx
                .partition_point(|(fxx, _)| *fxx <= x)
                .clamp(1, fx.len() - 1);
            let (x0, y0) = fx[j - 1];
            let (x1, y1) = fx[j];
            let interp = y0 + (x - x0) / (x1 - x0) * (y1 - y0);
            (v - interp).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn constant_case_is_stable_under_refinement() {
    let d = coarse_vs_fine(&MuSpec::Constant, 10_000, 0.0, 0.9);
    assert!(d < 0.005, "{d}");
}

#[test]
fn refinement_error_decays() {
    for spec in [MuSpec::Constant, MuSpec::GConstant] {
        let changes: Vec<f64> = [500, 1000, 2000]
            .into_iter()
            .map(|n| coarse_vs_fine(&spec, n, 0.1, 0.9))
            .collect();
        assert!(
            changes.windows(2).all(|w| w[1] < w[0]),
            "{spec:?}: {changes:?}"
        );
    }
}

#[test]
fn normalized_output_is_scale_invariant() {
    let grid = Grid::with_points(1000).unwrap();
    let base = candidate_density(&MuSpec::GConstant, &grid, 10).unwrap();
    // Larger c would trip the absolute symmetry tolerance on this grid.
    for c in [0.01, 0.25] {
        let mu = mu_from_g_constant(c, &grid).unwrap();
        let scaled = candidate_density(&MuSpec::Custom(mu), &grid, 10).unwrap();
        let d = sup_distance(&base, &scaled, 0.0, 1.0);
        assert!(d < 1e-6, "c = {c}: {d}");
    }
    let constant = candidate_density(&MuSpec::Constant, &grid, 10).unwrap();
    for alpha in [1e-3, 7.0, 1e3] {
        let mu = GridFunction::from_fn(grid, |_| alpha);
        let scaled = candidate_density(&MuSpec::Custom(mu), &grid, 10).unwrap();
        let d = sup_distance(&constant, &scaled, 0.0, 1.0);
        assert!(d < 1e-6, "alpha = {alpha}: {d}");
    }
}
