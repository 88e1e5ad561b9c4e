use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is outside its domain [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("vector ({x}, {y}, {z}) is not of unit length (norm {norm})")]
    NotUnit { x: f64, y: f64, z: f64, norm: f64 },

    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),

    #[error("grid needs at least {needed} points, got {len}")]
    GridTooShort { len: usize, needed: usize },

    #[error("grid function and grid disagree in length ({values} values for {points} points)")]
    LengthMismatch { values: usize, points: usize },

    #[error(
        "mu fails the symmetry requirement: max deviation {max_deviation:e} exceeds {tolerance:e}"
    )]
    AsymmetricMu { max_deviation: f64, tolerance: f64 },

    #[error("candidate density has mean {0}, cannot normalize")]
    DegenerateNormalization(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
