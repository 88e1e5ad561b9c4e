//! Two-dimensional picture of the detection regions.
//!
//! Points sit in the unit disk at a uniform polar angle `Θ` and radius `R`
//! drawn from the model's amplitude law. A point is seen by a measurement
//! along the x-axis when its angular deviation from the nearer of the two
//! axis directions is below `Rπ/2`; it then reports up on the right half
//! (`Θ < π/2` or `Θ > 3π/2`) and down on the left. The detection regions
//! are bounded by the polar curve `deviation = rπ/2`, two "mushrooms" facing
//! each other across the y-axis.
//!
//! This is a caricature of the 3D model, not a section or projection of it:
//! the undetected fraction here is `1 - E[R] ≈ 0.2326`, while a single
//! particle of the 3D model goes undetected with probability 1/3.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use pearle_core::model::sample_threshold;
use pearle_core::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Up,
    Down,
    Undetected,
}

impl Class {
    pub fn name(self) -> &'static str {
        match self {
            Class::Up => "up",
            Class::Down => "down",
            Class::Undetected => "undetected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaricaturePoint {
    pub x: f64,
    pub y: f64,
    pub class: Class,
}

/// Angular distance from `theta ∈ [0, 2π)` to the nearer of 0 and π.
fn deviation(theta: f64) -> f64 {
    if theta < FRAC_PI_2 {
        theta
    } else if theta > 3.0 * FRAC_PI_2 {
        TAU - theta
    } else {
        (theta - PI).abs()
    }
}

pub fn classify(theta: f64, radius: f64) -> Class {
    if deviation(theta) < radius * FRAC_PI_2 {
        if !(FRAC_PI_2..=3.0 * FRAC_PI_2).contains(&theta) {
            Class::Up
        } else {
            Class::Down
        }
    } else {
        Class::Undetected
    }
}

/// `count` points from stream 0 of `seed`; each point draws `Θ` first and
/// then its threshold.
pub fn sample_points(count: usize, seed: u64) -> Vec<CaricaturePoint> {
    let mut stream = rng::stream(seed, rng::SHARED_STREAM);
    (0..count)
        .map(|_| {
            let theta = TAU * rng::unit_uniform(&mut stream);
            let radius = sample_threshold(&mut stream).amplitude();
            let (sin, cos) = theta.sin_cos();
            CaricaturePoint {
                x: radius * cos,
                y: radius * sin,
                class: classify(theta, radius),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    pub series: &'static str,
    pub x: f64,
    pub y: f64,
    pub class: Class,
}

/// Mushroom outlines `(±r cos(rπ/2), ±r sin(rπ/2))` on a `resolution + 1`
/// point grid in `r`, followed by the right and left unit half-circles.
pub fn boundary(resolution: usize) -> Vec<BoundaryPoint> {
    let n = resolution.max(1);
    let branches: [(&str, f64, f64, Class); 4] = [
        ("mushroom_up_upper", 1.0, 1.0, Class::Up),
        ("mushroom_up_lower", 1.0, -1.0, Class::Up),
        ("mushroom_down_upper", -1.0, 1.0, Class::Down),
        ("mushroom_down_lower", -1.0, -1.0, Class::Down),
    ];
    let mut out = Vec::with_capacity(4 * (n + 1) + 2 * n);
    for (series, sx, sy, class) in branches {
        for i in 0..=n {
            let r = i as f64 / n as f64;
            let (sin, cos) = (r * FRAC_PI_2).sin_cos();
            out.push(BoundaryPoint {
                series,
                x: sx * r * cos,
                y: sy * r * sin,
                class,
            });
        }
    }
    for (series, sx, class) in [
        ("circle_up", 1.0, Class::Up),
        ("circle_down", -1.0, Class::Down),
    ] {
        for i in 0..n {
            let t = PI * i as f64 / (n - 1).max(1) as f64;
            out.push(BoundaryPoint {
                series,
                x: sx * t.sin(),
                y: t.cos(),
                class,
            });
        }
    }
    out
}
