//! Scalar abstraction for the numeric core.
//!
//! Everything physical in this crate is written against [`Scalar`] so the same
//! code instantiates at `f32` or `f64`. The crate root exports `f64` aliases,
//! which is what the experiment drivers and the CLI use. [`SimScalar`] extends
//! [`Scalar`] with the bounds the waveform / Monte-Carlo paths need (an FFT
//! implementation and Gaussian draws).
//!
//! Phase convention used across the crate: phases are carried in *cycles*
//! (dimensionless, one cycle = 2 pi radians) and reduced modulo one cycle
//! immediately before complex exponentiation, so kilometer-scale path lengths
//! at megahertz subcarrier offsets do not lose precision in the exponential.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::StandardNormal;

/// Real scalar the closed-form machinery is generic over.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum<Self>
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal; panics only if the target type cannot
    /// represent any finite value of this magnitude (never for f32/f64
    /// literals used in this crate).
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }

    /// Converts a count. Exact for every count used here (grid sizes and
    /// antenna counts are far below 2^24).
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Sum<Self>
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Scalar usable by the time-domain simulation paths: adds an FFT kernel and
/// a standard-normal draw.
pub trait SimScalar: Scalar + rustfft::FftNum {
    /// One standard-normal draw in this scalar type.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl SimScalar for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl SimScalar for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

/// `exp(j 2 pi cycles)` with the argument reduced modulo one cycle first.
pub fn unit_phasor<T: Scalar>(cycles: T) -> Complex<T> {
    let frac = cycles - cycles.floor();
    let angle = frac * two_pi::<T>();
    Complex::new(angle.cos(), angle.sin())
}

/// Fractional part in [0, 1), used to keep accumulated phases small.
pub fn frac_cycles<T: Scalar>(cycles: T) -> T {
    cycles - cycles.floor()
}

/// 2 pi in the scalar type.
pub fn two_pi<T: Scalar>() -> T {
    T::PI() + T::PI()
}

/// Decibels to linear power ratio.
pub fn db_to_linear<T: Scalar>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

/// Linear power ratio to decibels. Zero and negatives map to -inf.
pub fn linear_to_db<T: Scalar>(linear: T) -> T {
    if linear <= T::zero() {
        T::neg_infinity()
    } else {
        T::lit(10.0) * linear.log10()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_phasor_has_unit_modulus_at_large_arguments() {
        for &cycles in &[0.0f64, 0.25, 1.0e9 + 0.125, -3.75, 123_456.789] {
            let z = unit_phasor(cycles);
            assert_relative_eq!(z.norm(), 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn unit_phasor_reduces_modulo_one_cycle() {
        let a = unit_phasor(0.3f64);
        let b = unit_phasor(7.3f64);
        assert_relative_eq!(a.re, b.re, epsilon = 1e-12);
        assert_relative_eq!(a.im, b.im, epsilon = 1e-12);
    }

    #[test]
    fn quarter_cycle_is_the_imaginary_unit() {
        let z = unit_phasor(0.25f64);
        assert_relative_eq!(z.re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(z.im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn db_round_trip() {
        assert_relative_eq!(db_to_linear(10.0f64), 10.0, max_relative = 1e-14);
        assert_relative_eq!(linear_to_db(db_to_linear(-7.5f64)), -7.5, max_relative = 1e-12);
        assert_eq!(linear_to_db(0.0f64), f64::NEG_INFINITY);
    }

    #[test]
    fn generic_instantiates_at_f32() {
        let z = unit_phasor(0.5f32);
        assert_relative_eq!(z.re, -1.0f32, epsilon = 1e-6);
    }
}
