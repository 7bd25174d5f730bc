//! Receiver geometry and unit-modulus data symbols.

use num_complex::Complex;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::scalar::{unit_phasor, Scalar};

/// A receive position in the array's broadside plane: polar angle theta
/// measured from the array axis (strictly inside (0, 180) degrees so the
/// endfire singularities are excluded) and range from the reference element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position<T: Scalar> {
    theta_rad: T,
    range_m: T,
}

impl<T: Scalar> Position<T> {
    /// Builds a position from an angle in degrees and a range in meters.
    pub fn from_degrees(theta_deg: T, range_m: T) -> Result<Self> {
        Self::from_radians(theta_deg.to_radians(), range_m)
    }

    /// Builds a position from an angle in radians and a range in meters.
    pub fn from_radians(theta_rad: T, range_m: T) -> Result<Self> {
        if !theta_rad.is_finite() || !range_m.is_finite() {
            return Err(Error::Domain("position must be finite".to_string()));
        }
        if theta_rad <= T::zero() || theta_rad >= T::PI() {
            return Err(Error::Domain(format!(
                "theta must lie strictly between 0 and 180 degrees (got {} rad)",
                theta_rad
            )));
        }
        if range_m <= T::zero() {
            return Err(Error::Domain(format!("range must be positive (got {range_m} m)")));
        }
        Ok(Self { theta_rad, range_m })
    }

    pub fn theta_rad(&self) -> T {
        self.theta_rad
    }

    pub fn theta_deg(&self) -> T {
        self.theta_rad.to_degrees()
    }

    pub fn range_m(&self) -> T {
        self.range_m
    }

    /// cos(theta), the quantity the array geometry actually depends on.
    pub fn cos_theta(&self) -> T {
        self.theta_rad.cos()
    }

    /// Whether the range comfortably exceeds the array aperture, so the
    /// parallel-ray distance model R - n d cos(theta) applies.
    pub fn is_far_field(&self, cfg: &SystemConfig<T>) -> bool {
        self.range_m > T::lit(10.0) * cfg.aperture_m()
    }
}

/// A unit-modulus data symbol (constant-envelope constellation point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symbol<T: Scalar>(Complex<T>);

impl<T: Scalar> Symbol<T> {
    /// The symbol 1 + 0j.
    pub fn unit() -> Self {
        Self(Complex::new(T::one(), T::zero()))
    }

    /// e^{j phase} from a phase in radians.
    pub fn from_phase_rad(phase: T) -> Self {
        Self(Complex::new(phase.cos(), phase.sin()))
    }

    /// e^{j 2 pi cycles} from a phase in cycles.
    pub fn from_phase_cycles(cycles: T) -> Self {
        Self(unit_phasor(cycles))
    }

    /// Wraps a complex value without checking its modulus. Callers own the
    /// unit-modulus invariant.
    pub fn new_unchecked(value: Complex<T>) -> Self {
        Self(value)
    }

    pub fn value(&self) -> Complex<T> {
        self.0
    }
}
