//! Seeded angle sweeps over the equatorial plane.
//!
//! The estimator only looks at coincidences (both particles detected); pairs
//! with a single detection or none are discarded, exactly as an experimenter
//! computing correlations on detected pairs would.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{measure_first, measure_pair, measure_second, sample_states, HiddenPairState};
use crate::rng;
use crate::vector::UnitVector3;

/// Which product of outcomes is averaged over coincidences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `out1 · out2`, the physical product of the two reported outcomes.
    /// Its expectation is `-a·b`.
    #[default]
    Outcomes,
    /// `sign(u·a) · sign(u·b)`, the product tracked against `cos θ`.
    /// Its expectation is `+a·b`; it is the negation of [`Convention::Outcomes`]
    /// pair by pair.
    Alignment,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Outcomes => "outcomes",
            Convention::Alignment => "alignment",
        }
    }

    fn sign(self) -> i64 {
        match self {
            Convention::Outcomes => 1,
            Convention::Alignment => -1,
        }
    }
}

/// Model prediction for settings at angle `angle_rad`.
pub fn singlet_target(angle_rad: f64, convention: Convention) -> f64 {
    match convention {
        Convention::Outcomes => -angle_rad.cos(),
        Convention::Alignment => angle_rad.cos(),
    }
}

/// Raw counts from measuring a batch of states at one pair of settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub n_pairs: usize,
    pub n_first: usize,
    pub n_second: usize,
    pub n_both: usize,
    /// Sum of `out1 · out2` over coincidences.
    pub product_sum: i64,
}

impl Tally {
    pub fn detection_rate(&self) -> f64 {
        self.n_both as f64 / self.n_pairs as f64
    }

    pub fn first_rate(&self) -> f64 {
        self.n_first as f64 / self.n_pairs as f64
    }

    pub fn second_rate(&self) -> f64 {
        self.n_second as f64 / self.n_pairs as f64
    }

    pub fn estimate(&self, convention: Convention) -> CorrelationEstimate {
        CorrelationEstimate {
            sum: convention.sign() * self.product_sum,
            n_detected: self.n_both,
        }
    }
}

/// Counts are accumulated in slice order, so the result does not depend on
/// how callers parallelize across settings.
pub fn tally(states: &[HiddenPairState], a: &UnitVector3, b: &UnitVector3) -> Tally {
    let mut t = Tally {
        n_pairs: states.len(),
        ..Tally::default()
    };
    for st in states {
        let r = measure_pair(st, a, b);
        let d1 = r.first.is_detected();
        let d2 = r.second.is_detected();
        t.n_first += d1 as usize;
        t.n_second += d2 as usize;
        if let Some(p) = r.product() {
            t.n_both += 1;
            t.product_sum += i64::from(p);
        }
    }
    t
}

/// Average of a ±1 product over detected coincidences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrelationEstimate {
    pub sum: i64,
    pub n_detected: usize,
}

impl CorrelationEstimate {
    /// `None` when no pair was detected.
    pub fn correlation(&self) -> Option<f64> {
        (self.n_detected > 0).then(|| self.sum as f64 / self.n_detected as f64)
    }

    /// `1/√n`, an upper bound on the standard error of a mean of ±1 values.
    pub fn stderr_bound(&self) -> Option<f64> {
        (self.n_detected > 0).then(|| 1.0 / (self.n_detected as f64).sqrt())
    }
}

pub fn estimate_correlation(
    states: &[HiddenPairState],
    a: &UnitVector3,
    b: &UnitVector3,
    convention: Convention,
) -> CorrelationEstimate {
    tally(states, a, b).estimate(convention)
}

/// Fraction of states with both particles detected.
pub fn estimate_detection_rate(
    states: &[HiddenPairState],
    a: &UnitVector3,
    b: &UnitVector3,
) -> f64 {
    tally(states, a, b).detection_rate()
}

/// States measured once against a fixed second setting `b`, keeping only
/// those whose second particle is detected.
///
/// A sweep over `a` then measures particle 1 on about two thirds of the
/// sample. Counts agree exactly with [`tally`].
#[derive(Debug, Clone)]
pub struct FixedSecond {
    n_pairs: usize,
    detected: Vec<(HiddenPairState, i8)>,
}

impl FixedSecond {
    pub fn new(states: &[HiddenPairState], b: &UnitVector3) -> Self {
        let detected = states
            .iter()
            .filter_map(|st| measure_second(st, b).value().map(|v| (*st, v)))
            .collect();
        Self {
            n_pairs: states.len(),
            detected,
        }
    }

    pub fn n_second(&self) -> usize {
        self.detected.len()
    }

    /// Coincidence count and `out1 · out2` sum at setting `a`.
    pub fn coincidences(&self, a: &UnitVector3) -> (usize, i64) {
        let mut n_both = 0usize;
        let mut sum = 0i64;
        for (st, second) in &self.detected {
            if let Some(first) = measure_first(st, a).value() {
                n_both += 1;
                sum += i64::from(first * second);
            }
        }
        (n_both, sum)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub pairs: usize,
    pub seed: u64,
    /// Direction of the fixed setting `b` in the equatorial plane.
    pub beta_deg: f64,
    /// Grid step for the setting `a`; must divide 360.
    pub step_deg: f64,
    pub convention: Convention,
    /// Draw a fresh sample per angle instead of sharing one across the sweep.
    pub fresh_per_angle: bool,
}

impl SweepConfig {
    /// One million pairs, `b` along the x-axis, 1° steps, shared sample.
    pub fn new(seed: u64) -> Self {
        Self {
            pairs: 1_000_000,
            seed,
            beta_deg: 0.0,
            step_deg: 1.0,
            convention: Convention::Outcomes,
            fresh_per_angle: false,
        }
    }

    /// Number of distinct grid angles in `[0, 360)`.
    pub fn angle_count(&self) -> Result<usize> {
        if self.pairs == 0 {
            return Err(Error::InvalidConfig("pairs must be at least 1".into()));
        }
        if !self.beta_deg.is_finite() {
            return Err(Error::InvalidConfig("beta_deg must be finite".into()));
        }
        let step = self.step_deg;
        if !(step.is_finite() && step > 0.0 && step <= 360.0) {
            return Err(Error::InvalidConfig(format!(
                "step_deg = {step} must lie in (0, 360]"
            )));
        }
        let k = 360.0 / step;
        if (k - k.round()).abs() > 1e-9 * k {
            return Err(Error::InvalidConfig(format!(
                "step_deg = {step} does not divide 360"
            )));
        }
        Ok(k.round() as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleRecord {
    pub angle_deg: f64,
    pub n_detected: usize,
    pub n_pairs: usize,
    pub correlation: Option<f64>,
    pub target: f64,
    pub detection_rate: f64,
    pub stderr_bound: Option<f64>,
}

impl AngleRecord {
    pub fn deviation(&self) -> Option<f64> {
        self.correlation.map(|c| (c - self.target).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: SweepConfig,
    /// Grid angles `0, step, …, 360`; the 360° record repeats the 0° one.
    pub records: Vec<AngleRecord>,
}

impl SweepResult {
    /// Largest `|correlation - target|` over angles with coincidences.
    pub fn max_abs_deviation(&self) -> f64 {
        self.records
            .iter()
            .filter_map(AngleRecord::deviation)
            .fold(0.0, f64::max)
    }

    pub fn record_at(&self, angle_deg: f64) -> Option<&AngleRecord> {
        self.records
            .iter()
            .find(|r| (r.angle_deg - angle_deg).abs() < 1e-9)
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    let k = config.angle_count()?;
    let b = UnitVector3::equatorial_deg(config.beta_deg);

    let shared = if config.fresh_per_angle {
        None
    } else {
        let mut stream = rng::stream(config.seed, rng::SHARED_STREAM);
        Some(sample_states(&mut stream, config.pairs))
    };

    let shared = shared.map(|states| FixedSecond::new(&states, &b));

    let record_for = |index: usize, prepared: &FixedSecond| {
        let angle_deg = index as f64 * config.step_deg;
        let a = UnitVector3::equatorial_deg(angle_deg);
        let (n_both, product_sum) = prepared.coincidences(&a);
        let est = Tally {
            n_pairs: prepared.n_pairs,
            n_both,
            product_sum,
            ..Tally::default()
        }
        .estimate(config.convention);
        AngleRecord {
            angle_deg,
            n_detected: n_both,
            n_pairs: prepared.n_pairs,
            correlation: est.correlation(),
            target: singlet_target(
                (angle_deg - config.beta_deg).to_radians(),
                config.convention,
            ),
            detection_rate: n_both as f64 / prepared.n_pairs as f64,
            stderr_bound: est.stderr_bound(),
        }
    };

    let mut records: Vec<AngleRecord> = (0..k)
        .into_par_iter()
        .map(|i| match &shared {
            Some(prepared) => record_for(i, prepared),
            None => {
                let states = sample_states(&mut rng::angle_stream(config.seed, i), config.pairs);
                record_for(i, &FixedSecond::new(&states, &b))
            }
        })
        .collect();

    let closing = AngleRecord {
        angle_deg: 360.0,
        ..records[0]
    };
    records.push(closing);

    Ok(SweepResult {
        config: config.clone(),
        records,
    })
}
