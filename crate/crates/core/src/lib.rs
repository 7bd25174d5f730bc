//! Simulation library for secure precise wireless transmission with
//! random-subcarrier OFDM directional modulation.
//!
//! A linear transmit array assigns each antenna its own randomly selected
//! OFDM subcarrier, which couples the radiated phase pattern to both angle
//! and range. A phase-alignment beamformer focuses the data symbol on one
//! (angle, range) cell while artificial noise fills the complementary
//! spatial directions, so every other cell sees a degraded channel. The
//! crate provides:
//!
//! - the array/subcarrier phase model and steering vectors ([`steering`]),
//! - random subcarrier assignments and per-block schedules ([`rscs`]),
//! - the beamformer and the artificial-noise projector ([`precoder`]),
//! - OFDM symbol synthesis, receive transforms, and noise ([`waveform`]),
//! - closed-form and simulated SINR, and SINR maps over angle and range
//!   ([`sinr`]),
//! - beam geometry, the instantaneous SINR distribution, and secrecy rates
//!   ([`analysis`]),
//! - seeded experiment drivers and self-checks ([`simkit`]),
//! - run configuration and CSV output helpers ([`config`], [`csvio`]).
//!
//! Everything numeric is generic over the scalar type through [`Scalar`] and
//! [`SimScalar`]; the `*64` aliases fix `f64` for everyday use. All
//! randomness flows from explicit seeds, so every result is reproducible
//! independent of thread count.

pub mod analysis;
pub mod config;
pub mod csvio;
pub mod error;
pub mod precoder;
pub mod rscs;
pub mod scalar;
pub mod simkit;
pub mod sinr;
pub mod steering;
pub mod types;
pub mod waveform;

pub use config::{ConfigError, FileConfig, RhoPolicy, SystemConfig, SPEED_OF_LIGHT_M_S};
pub use error::{Error, Result};
pub use scalar::{Scalar, SimScalar};
pub use types::{Position, Symbol};
pub use waveform::CombineMode;

/// `f64` run configuration.
pub type SystemConfig64 = config::SystemConfig<f64>;
/// `f64` observation point.
pub type Position64 = types::Position<f64>;
/// `f64` data symbol.
pub type Symbol64 = types::Symbol<f64>;
/// `f64` steering vector.
pub type SteeringVector64 = steering::SteeringVector<f64>;
/// `f64` phase-alignment beamformer.
pub type Beamformer64 = precoder::Beamformer<f64>;
/// `f64` artificial-noise projector.
pub type AnProjector64 = precoder::AnProjector<f64>;
/// `f64` SINR map over angle and range.
pub type SinrMap64 = sinr::SinrMap<f64>;
/// `f64` time-domain symbol.
pub type TimeSeries64 = waveform::TimeSeries<f64>;
/// `f64` instantaneous SINR distribution parameters.
pub type SinrDistributionParams64 = analysis::SinrDistributionParams<f64>;
/// `f64` secrecy-rate report row.
pub type SecrecyRateReport64 = analysis::SecrecyRateReport<f64>;
/// `f64` experiment description.
pub type ExperimentSpec64 = simkit::figures::ExperimentSpec<f64>;
