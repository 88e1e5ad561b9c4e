//! Hidden-variable state of a particle pair and the local measurement rule.
//!
//! A pair carries a spin direction `u` on S² (particle 2 carries `-u`) and a
//! detection threshold `s = cos(rπ/2)`, where `r ∈ (0, 1]` is the amplitude.
//! The threshold is distributed as `s = 2/√V - 1` with `V ~ Unif(1, 4)`,
//! independently of `u`.
//!
//! Particle 1 measured along `a` sees `A = u·a`; it is detected iff
//! `|A| ≥ s` and then reports `sign(A)`. Particle 2 measured along `b` sees
//! `B = -u·b` under the same rule.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::unit_uniform;
use crate::vector::UnitVector3;

/// Detection threshold `s ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DetectionThreshold(f64);

impl DetectionThreshold {
    pub fn new(s: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&s) {
            Ok(Self(s))
        } else {
            Err(Error::Domain {
                what: "threshold s",
                value: s,
                lo: 0.0,
                hi: 1.0,
            })
        }
    }

    /// Threshold for a given `v ∈ [1, 4]`: `s = 2/√v - 1`.
    pub fn from_v(v: f64) -> Result<Self> {
        if !(1.0..=4.0).contains(&v) {
            return Err(Error::Domain {
                what: "v",
                value: v,
                lo: 1.0,
                hi: 4.0,
            });
        }
        // Clamp absorbs the last-ulp excursions at the two endpoints.
        Ok(Self((2.0 / v.sqrt() - 1.0).clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Amplitude `r = arccos(s)/(π/2)`.
    pub fn amplitude(self) -> f64 {
        self.0.acos() / FRAC_PI_2
    }
}

/// Converts a threshold value to the amplitude `r ∈ [0, 1]`.
pub fn threshold_to_amplitude(s: f64) -> Result<f64> {
    DetectionThreshold::new(s).map(DetectionThreshold::amplitude)
}

/// Hidden variable shared by both particles of a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HiddenPairState {
    pub u: UnitVector3,
    pub s: DetectionThreshold,
}

impl HiddenPairState {
    pub fn new(u: UnitVector3, s: DetectionThreshold) -> Self {
        Self { u, s }
    }

    /// The same threshold with the spin direction reversed.
    pub fn flipped(self) -> Self {
        Self { u: -self.u, ..self }
    }
}

/// Result of measuring one particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Up,
    Down,
    NoDetection,
}

impl Outcome {
    /// `+1`, `-1`, or `None` when the particle was not detected.
    pub fn value(self) -> Option<i8> {
        match self {
            Outcome::Up => Some(1),
            Outcome::Down => Some(-1),
            Outcome::NoDetection => None,
        }
    }

    pub fn is_detected(self) -> bool {
        self != Outcome::NoDetection
    }

    /// Applies the detection rule to a projection. `|projection| = s` counts
    /// as detected and `sign(0)` is taken as up.
    #[inline]
    pub fn from_projection(projection: f64, s: DetectionThreshold) -> Self {
        if projection.abs() >= s.0 {
            if projection >= 0.0 {
                Outcome::Up
            } else {
                Outcome::Down
            }
        } else {
            Outcome::NoDetection
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairResult {
    pub first: Outcome,
    pub second: Outcome,
}

impl PairResult {
    /// Product of the two outcomes when both particles were detected.
    pub fn product(self) -> Option<i8> {
        Some(self.first.value()? * self.second.value()?)
    }

    pub fn is_coincidence(self) -> bool {
        self.first.is_detected() && self.second.is_detected()
    }
}

/// Uniform point on S² by the trig method: `Z ~ Unif(-1, 1)`, then
/// `Θ ~ Unif(0, 2π)`, giving `(ρ cos Θ, ρ sin Θ, Z)` with `ρ = √(1 - Z²)`.
pub fn sample_unit_sphere<R: Rng + ?Sized>(rng: &mut R) -> UnitVector3 {
    let z = 2.0 * unit_uniform(rng) - 1.0;
    let theta = TAU * unit_uniform(rng);
    UnitVector3::from_height_azimuth(z, theta)
}

/// Threshold by inverse transform: `V = 1 + 3U`, `s = 2/√V - 1`.
pub fn sample_threshold<R: Rng + ?Sized>(rng: &mut R) -> DetectionThreshold {
    let v = 1.0 + 3.0 * unit_uniform(rng);
    DetectionThreshold::from_v(v).expect("v drawn inside [1, 4)")
}

/// Draws the direction first, then the threshold, from the same stream.
pub fn sample_pair_state<R: Rng + ?Sized>(rng: &mut R) -> HiddenPairState {
    let u = sample_unit_sphere(rng);
    let s = sample_threshold(rng);
    HiddenPairState { u, s }
}

/// `count` consecutive states from one stream.
pub fn sample_states<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<HiddenPairState> {
    (0..count).map(|_| sample_pair_state(rng)).collect()
}

pub fn measure_first(state: &HiddenPairState, a: &UnitVector3) -> Outcome {
    Outcome::from_projection(state.u.dot(a), state.s)
}

pub fn measure_second(state: &HiddenPairState, b: &UnitVector3) -> Outcome {
    Outcome::from_projection(-state.u.dot(b), state.s)
}

pub fn measure_pair(state: &HiddenPairState, a: &UnitVector3, b: &UnitVector3) -> PairResult {
    PairResult {
        first: measure_first(state, a),
        second: measure_second(state, b),
    }
}
