use std::ops::Neg;

use crate::error::{Error, Result};

/// Tolerance on `|v|² - 1` accepted by [`UnitVector3::new`].
pub const UNIT_NORM_TOLERANCE: f64 = 1e-12;

/// A point on the unit sphere S².
///
/// Used both for the hidden spin direction of a particle pair and for the
/// measurement settings chosen by the experimenter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    pub const X: Self = Self {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const Y: Self = Self {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const Z: Self = Self {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    /// Checked constructor; the components must already have unit norm.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm_sq = x * x + y * y + z * z;
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return Err(Error::NotUnit {
                x,
                y,
                z,
                norm: norm_sq.sqrt(),
            });
        }
        Ok(Self { x, y, z })
    }

    /// Rescales a nonzero finite vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotUnit { x, y, z, norm });
        }
        Self::new(x / norm, y / norm, z / norm)
    }

    /// Point in the equatorial (x, y) plane at `deg` degrees from the x-axis.
    ///
    /// The angle is reduced to a quadrant first and the remaining rotation by
    /// multiples of 90° is applied by swapping and negating components, so
    /// `equatorial_deg(d + 180)` is bitwise `-equatorial_deg(d)` and the
    /// axis directions come out exact.
    pub fn equatorial_deg(deg: f64) -> Self {
        let reduced = deg.rem_euclid(360.0);
        let quadrant = (reduced / 90.0).floor();
        let rem = reduced - 90.0 * quadrant;
        let (s, c) = rem.to_radians().sin_cos();
        let (x, y) = match quadrant as u8 {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        };
        Self { x, y, z: 0.0 }
    }

    /// Builds the point with height `z` and azimuth `theta` (radians), with
    /// cylindrical radius `sqrt(1 - z²)`.
    pub fn from_height_azimuth(z: f64, theta: f64) -> Self {
        let rho = (1.0 - z * z).max(0.0).sqrt();
        let (sin_t, cos_t) = theta.sin_cos();
        Self {
            x: rho * cos_t,
            y: rho * sin_t,
            z,
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

impl Neg for UnitVector3 {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}
