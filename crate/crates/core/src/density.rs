//! Closed-form distributions of the amplitude `R` and threshold `S`.
//!
//! With `S = cos(Rπ/2)` and `S = 2/√V - 1`, `V ~ Unif(1, 4)`:
//!
//! ```text
//! P(R ≤ r) = (4 / (1 + cos(rπ/2))² - 1) / 3
//! f_R(r)   = (4π/3) · sin(rπ/2) / (1 + cos(rπ/2))³
//! f_S(s)   = (8/3) · (1 + s)⁻³
//! ```

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

fn check_unit(what: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

fn amplitude_kernel(r: f64) -> f64 {
    let (sin, cos) = (r * FRAC_PI_2).sin_cos();
    sin / (1.0 + cos).powi(3)
}

/// Density of the amplitude `R` on `[0, 1]`; increasing from 0 to `4π/3`.
pub fn r_density(r: f64) -> Result<f64> {
    let r = check_unit("r", r)?;
    Ok(4.0 * PI / 3.0 * amplitude_kernel(r))
}

pub fn r_cdf(r: f64) -> Result<f64> {
    let r = check_unit("r", r)?;
    let c = 1.0 + (r * FRAC_PI_2).cos();
    Ok((4.0 / (c * c) - 1.0) / 3.0)
}

pub fn s_density(s: f64) -> Result<f64> {
    let s = check_unit("s", s)?;
    Ok(8.0 / 3.0 / (1.0 + s).powi(3))
}

pub fn s_cdf(s: f64) -> Result<f64> {
    let s = check_unit("s", s)?;
    Ok(4.0 / 3.0 * (1.0 - 1.0 / ((1.0 + s) * (1.0 + s))))
}

/// Radial density `3r²` of a point uniform in the unit ball.
pub fn uniform_ball_density(r: f64) -> f64 {
    3.0 * r * r
}

/// The published combined formula `(16/3) · sin(rπ/2) / (1 + cos(rπ/2))³`.
///
/// It is `4/π` times [`r_density`] and so integrates to `4/π`, not 1.
pub fn pearle_combined_density(r: f64) -> f64 {
    16.0 / 3.0 * amplitude_kernel(r)
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Composite Simpson rule on `[a, b]`; `intervals` is rounded up to even.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = (intervals.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let inner = (1..n).map(|i| {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        w * f(a + i as f64 * h)
    });
    h / 3.0 * compensated_sum(std::iter::once(f(a) + f(b)).chain(inner))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannBounds {
    pub lower: f64,
    pub upper: f64,
}

impl RiemannBounds {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Left and right Riemann sums of `f_R` over `n_intervals` equal cells.
///
/// `f_R` is increasing, so the left sum (right endpoint omitted) is a lower
/// bound on its integral and the right sum an upper bound.
pub fn riemann_bounds(n_intervals: usize) -> Result<RiemannBounds> {
    if n_intervals == 0 {
        return Err(Error::InvalidConfig(
            "n_intervals must be at least 1".into(),
        ));
    }
    let n = n_intervals as f64;
    let values: Vec<f64> = (0..=n_intervals)
        .map(|i| 4.0 * PI / 3.0 * amplitude_kernel(i as f64 / n))
        .collect();
    let lower = compensated_sum(values[..n_intervals].iter().map(|v| v / n));
    let upper = compensated_sum(values[1..].iter().map(|v| v / n));
    Ok(RiemannBounds { lower, upper })
}

/// A density tabulated on a regular grid over `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl DensityCurve {
    /// Evaluates `f` at the `n_intervals + 1` points `i / n_intervals`.
    pub fn tabulate<F: Fn(f64) -> f64>(n_intervals: usize, f: F) -> Self {
        let n = n_intervals.max(1);
        let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let values = grid.iter().map(|&r| f(r)).collect();
        Self { grid, values }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `samples` and
/// `cdf`. Returns `None` for an empty sample.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Option<f64> {
    if samples.is_empty() {
        return None;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    Some(d)
}

/// Large-sample critical value `sqrt(-ln(α/2) / 2) / √n` of the one-sample
/// KS statistic at level `alpha`.
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_density_values() {
        assert_eq!(r_density(0.0).unwrap(), 0.0);
        assert!((r_density(1.0).unwrap() - 4.0 * PI / 3.0).abs() < 1e-14);
        // (4π/3)·sin(π/4)/(1+cos(π/4))³ evaluated by hand to 10 digits.
        assert!((r_density(0.5).unwrap() - 0.595_376_308_4).abs() < 1e-9);
        assert!(r_density(1.01).is_err());
        assert!(r_density(-1e-9).is_err());
    }

    #[test]
    fn r_cdf_values() {
        assert_eq!(r_cdf(0.0).unwrap(), 0.0);
        assert!((r_cdf(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((r_cdf(2.0 / 3.0).unwrap() - 7.0 / 27.0).abs() < 1e-15);
        assert!(r_cdf(1.5).is_err());
    }

    #[test]
    fn s_density_values() {
        assert!((s_density(0.0).unwrap() - 8.0 / 3.0).abs() < 1e-15);
        assert!((s_density(1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(s_density(-0.5).is_err());
        assert!((simpson(|s| s_density(s).unwrap(), 0.0, 1.0, 1000) - 1.0).abs() < 1e-12);
        assert_eq!(s_cdf(0.0).unwrap(), 0.0);
        assert!((s_cdf(1.0).unwrap() - 1.0).abs() < 1e-15);
        // P(S ≤ 1/3) = P(V ≥ 9/4) = 7/12
        assert!((s_cdf(1.0 / 3.0).unwrap() - 7.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn ball_and_pearle_values() {
        assert_eq!(uniform_ball_density(0.0), 0.0);
        assert_eq!(uniform_ball_density(1.0), 3.0);
        assert_eq!(uniform_ball_density(0.5), 0.75);
        assert!((pearle_combined_density(1.0) - 16.0 / 3.0).abs() < 1e-14);
        let integral = simpson(pearle_combined_density, 0.0, 1.0, 1000);
        assert!((integral - 4.0 / PI).abs() < 1e-9);
    }

    #[test]
    fn pearle_ratio_is_constant() {
        for i in 1..=1000 {
            let r = i as f64 / 1000.0;
            let ratio = pearle_combined_density(r) / r_density(r).unwrap();
            assert!((ratio - 4.0 / PI).abs() < 1e-13, "r = {r}: {ratio}");
        }
    }

    #[test]
    fn riemann_bounds_printed_values() {
        let b = riemann_bounds(1000).unwrap();
        assert!((b.lower - 0.997_907_2).abs() < 1e-6, "{}", b.lower);
        assert!((b.upper - 1.002_096).abs() < 1e-6, "{}", b.upper);
        assert!(riemann_bounds(0).is_err());
    }

    #[test]
    fn riemann_bounds_fine_grid() {
        let b = riemann_bounds(1_000_000).unwrap();
        assert!(b.lower <= 1.0 && 1.0 <= b.upper);
        // Gap is (f(1) - f(0))/n.
        assert!((b.lower - 1.0).abs() < 2.2e-6);
        assert!((b.upper - 1.0).abs() < 2.2e-6);
    }

    #[test]
    fn ks_degenerate_sample() {
        let d = ks_statistic(&[0.5; 10], |x| x).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        assert_eq!(ks_statistic(&[], |x| x), None);
        assert!((ks_critical_value(100_000, 0.01) * (100_000f64).sqrt() - 1.6276).abs() < 1e-4);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(v), 2.0);
    }

    #[test]
    fn tabulate_grid() {
        let c = DensityCurve::tabulate(4, uniform_ball_density);
        assert_eq!(c.grid, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(c.values[4], 3.0);
        assert_eq!(c.len(), 5);
    }
}
