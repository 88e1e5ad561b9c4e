//! Grid evaluation of the operator mapping a generating function μ to a
//! candidate density `h` of the threshold `S`:
//!
//! ```text
//! h(x) = d²/dx² ( x²/(1-x²) · [ ∫₀¹ √(1-z²) μ(z) dz - ∫₀ˣ √(1-z²/x²) μ(z) dz ] )
//! ```
//!
//! μ must satisfy `μ(x) = μ(√(1-x²))`. A constant μ yields `h ∝ (1+s)⁻³`,
//! the threshold law of the simulated model. A constant pair-detection
//! probability `g` yields `μ(x) ∝ x√(1-x²)`, whose `h` changes sign.
//!
//! The bracket is evaluated column by column in `O(n)` memory. Both
//! integrals use the trapezoid rule on the full grid, with the kernel masked
//! to zero beyond the upper limit, plus the leading correction for the
//! square-root endpoint behaviour of `√(1-z²/x²)` at `z = x` and of
//! `√(1-z²)` at `z = 1`. Without that correction the rule is only
//! `O(h^{3/2})` accurate.

use rayon::prelude::*;

use crate::density::compensated_sum;
use crate::error::{Error, Result};

/// ζ(-1/2), coefficient of the `h^{3/2}` trapezoid error for a
/// square-root endpoint.
const ZETA_MINUS_HALF: f64 = -0.207_886_224_977_354_57;

/// Regular grid `z_i = eps + i·spacing`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    eps: f64,
    spacing: f64,
    len: usize,
}

impl Grid {
    pub const DEFAULT_POINTS: usize = 10_000;
    pub const DEFAULT_EPS: f64 = 1e-9;

    /// `n` points from `eps` to `1 - eps` inclusive.
    pub fn new(n: usize, eps: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::GridTooShort { len: n, needed: 3 });
        }
        if !(0.0..0.5).contains(&eps) {
            return Err(Error::Domain {
                what: "eps",
                value: eps,
                lo: 0.0,
                hi: 0.5,
            });
        }
        Ok(Self {
            eps,
            spacing: (1.0 - 2.0 * eps) / (n - 1) as f64,
            len: n,
        })
    }

    pub fn with_points(n: usize) -> Result<Self> {
        Self::new(n, Self::DEFAULT_EPS)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn point(&self, i: usize) -> f64 {
        self.eps + i as f64 * self.spacing
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.point(i))
    }

    /// The first `len` points of this grid.
    pub fn prefix(&self, len: usize) -> Self {
        Self {
            len: len.min(self.len),
            ..*self
        }
    }

    /// Right-endpoint trim used with this grid size: `n / 100`.
    pub fn default_trim(&self) -> usize {
        self.len / 100
    }

    /// Linear interpolation of `values` at `t`, clamped to the grid ends.
    fn interpolate(&self, values: &[f64], t: f64) -> f64 {
        let pos = ((t - self.eps) / self.spacing).clamp(0.0, (self.len - 1) as f64);
        let i = (pos.floor() as usize).min(self.len - 2);
        let frac = pos - i as f64;
        values[i] + frac * (values[i + 1] - values[i])
    }
}

/// Values of a real function at the points of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                values: values.len(),
                points: grid.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: Grid, f: F) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(x, value)` pairs in grid order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().zip(self.values.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.values.iter().copied()) / self.values.len() as f64
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Divides by the mean value so the result averages to 1.
    pub fn normalized_by_mean(&self) -> Result<Self> {
        let m = self.mean();
        if m == 0.0 || !m.is_finite() {
            return Err(Error::DegenerateNormalization(m));
        }
        Ok(self.scaled(1.0 / m))
    }
}

/// Generating function μ fed to [`candidate_density`].
#[derive(Debug, Clone, PartialEq)]
pub enum MuSpec {
    /// μ ≡ 1.
    Constant,
    /// μ derived from a constant pair-detection probability.
    GConstant,
    /// Tabulated μ; must be sampled on the evaluation grid and pass
    /// [`check_mu_symmetry`] at [`MuSpec::CUSTOM_SYMMETRY_TOLERANCE`].
    Custom(GridFunction),
}

impl MuSpec {
    pub const CUSTOM_SYMMETRY_TOLERANCE: f64 = 1e-6;

    pub fn evaluate(&self, grid: &Grid) -> Result<GridFunction> {
        match self {
            MuSpec::Constant => Ok(GridFunction::from_fn(*grid, |_| 1.0)),
            MuSpec::GConstant => mu_from_g_constant(1.0, grid),
            MuSpec::Custom(mu) => {
                if mu.grid() != grid {
                    return Err(Error::LengthMismatch {
                        values: mu.len(),
                        points: grid.len(),
                    });
                }
                let tol = Self::CUSTOM_SYMMETRY_TOLERANCE;
                let dev = mu_symmetry_deviation(mu);
                if dev > tol {
                    return Err(Error::AsymmetricMu {
                        max_deviation: dev,
                        tolerance: tol,
                    });
                }
                Ok(mu.clone())
            }
        }
    }
}

/// Largest `|μ(x) - μ(√(1-x²))|` over grid points with `x ≥ 1/√2`.
///
/// The map `x ↦ √(1-x²)` is an involution swapping `[0, 1/√2]` and
/// `[1/√2, 1]`, so one half covers every pair. Mirror points land in the
/// lower half and are linearly interpolated there; the upper half is avoided
/// because μ may have a square-root edge at 1.
pub fn mu_symmetry_deviation(mu: &GridFunction) -> f64 {
    let grid = mu.grid();
    mu.iter()
        .filter(|&(x, _)| x >= std::f64::consts::FRAC_1_SQRT_2)
        .map(|(x, v)| {
            let mirror = (1.0 - x * x).max(0.0).sqrt();
            (v - grid.interpolate(mu.values(), mirror)).abs()
        })
        .fold(0.0, f64::max)
}

pub fn check_mu_symmetry(mu: &GridFunction, tol: f64) -> bool {
    mu_symmetry_deviation(mu) <= tol
}

/// Closed form `2c·x·√(1-x²)` for μ when the pair-detection probability is
/// the constant `c`.
pub fn mu_from_g_constant(c: f64, grid: &Grid) -> Result<GridFunction> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain {
            what: "c",
            value: c,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(GridFunction::from_fn(*grid, |x| {
        2.0 * c * x * (1.0 - x * x).max(0.0).sqrt()
    }))
}

/// Truncated kernel `√(1 - z²/x²)` for `z ≤ x`, zero beyond.
#[inline]
pub fn kernel(z: f64, x: f64) -> f64 {
    if z > x {
        0.0
    } else {
        let q = z / x;
        (1.0 - q * q).max(0.0).sqrt()
    }
}

/// The bracketed quantity `x²/(1-x²) · [First - Second(x)]` at every grid
/// point.
pub fn inner_bracket(mu: &GridFunction) -> GridFunction {
    let grid = *mu.grid();
    let n = grid.len();
    let h = grid.spacing();
    let h32 = h * h.sqrt();
    let z: Vec<f64> = grid.points().collect();
    let m = mu.values();

    let first = {
        let interior = (1..n - 1).map(|i| h * (1.0 - z[i] * z[i]).max(0.0).sqrt() * m[i]);
        let ends = [
            0.5 * h * (1.0 - z[0] * z[0]).sqrt() * m[0],
            0.5 * h * (1.0 - z[n - 1] * z[n - 1]).max(0.0).sqrt() * m[n - 1],
        ];
        compensated_sum(ends.into_iter().chain(interior))
            - ZETA_MINUS_HALF * std::f64::consts::SQRT_2 * m[n - 1] * h32
    };

    let values = (0..n)
        .into_par_iter()
        .map(|j| {
            let x = z[j];
            let second = if j == 0 {
                0.0
            } else {
                // The kernel vanishes at i = j, so only cells below j contribute.
                let head = 0.5 * h * kernel(z[0], x) * m[0];
                let body = (1..j).map(|i| h * kernel(z[i], x) * m[i]);
                compensated_sum(std::iter::once(head).chain(body))
                    - ZETA_MINUS_HALF * m[j] * (2.0 / x).sqrt() * h32
            };
            x * x * (first - second) / (1.0 - x * x)
        })
        .collect();

    GridFunction { grid, values }
}

/// Forward second difference divided by the squared spacing.
///
/// Point `i` of the result uses values `i, i+1, i+2` of `f`; the result keeps
/// the first `n - max(trim, 2)` points.
pub fn second_derivative(f: &GridFunction, trim: usize) -> Result<GridFunction> {
    let n = f.len();
    if n < trim + 3 {
        return Err(Error::GridTooShort {
            len: n,
            needed: trim + 3,
        });
    }
    let keep = n - trim.max(2);
    let h2 = f.grid().spacing().powi(2);
    let v = f.values();
    let values = (0..keep)
        .map(|i| (v[i + 2] - 2.0 * v[i + 1] + v[i]) / h2)
        .collect();
    Ok(GridFunction {
        grid: f.grid().prefix(keep),
        values,
    })
}

/// Candidate density of `S` for the given μ, normalized to mean 1 over the
/// retained points.
///
/// Normalization divides by the mean even when it is negative, which flips
/// the sign of the whole curve; the sign structure is read off with
/// [`assess_positivity`].
pub fn candidate_density(mu_spec: &MuSpec, grid: &Grid, trim: usize) -> Result<GridFunction> {
    let mu = mu_spec.evaluate(grid)?;
    second_derivative(&inner_bracket(&mu), trim)?.normalized_by_mean()
}

/// `(1+s)⁻³` on `grid`, normalized to mean 1.
pub fn normalized_reference(grid: &Grid) -> Result<GridFunction> {
    GridFunction::from_fn(*grid, |s| (1.0 + s).powi(-3)).normalized_by_mean()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Positivity {
    pub min: f64,
    pub max: f64,
    pub has_negative: bool,
    pub negative_fraction: f64,
}

impl Positivity {
    pub fn of_values<I: IntoIterator<Item = f64>>(values: I) -> Self {
        let mut count = 0usize;
        let mut negative = 0usize;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            count += 1;
            negative += (v < 0.0) as usize;
            min = min.min(v);
            max = max.max(v);
        }
        if count == 0 {
            return Self {
                min: 0.0,
                max: 0.0,
                has_negative: false,
                negative_fraction: 0.0,
            };
        }
        Self {
            min,
            max,
            has_negative: negative > 0,
            negative_fraction: negative as f64 / count as f64,
        }
    }
}

pub fn assess_positivity(h: &GridFunction) -> Positivity {
    Positivity::of_values(h.values().iter().copied())
}

/// Largest `|f - g|` over shared points with `lo ≤ x ≤ hi`.
pub fn sup_distance(f: &GridFunction, g: &GridFunction, lo: f64, hi: f64) -> f64 {
    f.iter()
        .zip(g.values())
        .filter(|((x, _), _)| (lo..=hi).contains(x))
        .map(|((_, a), b)| (a - b).abs())
        .fold(0.0, f64::max)
}
