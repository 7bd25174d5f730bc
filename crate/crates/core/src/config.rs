//! System parameters, validation, and the on-disk configuration format.
//!
//! A [`SystemConfig`] describes one transmitter: carrier, occupied bandwidth,
//! subcarrier and antenna counts, element spacing, transmit power, receiver
//! noise, and the data/noise power split. Configurations are validated at
//! construction, so every function that takes a `&SystemConfig` may assume the
//! invariants hold.
//!
//! Unit conventions: frequencies in Hz, lengths in meters, powers in watts,
//! angles in degrees at external interfaces and radians internally. The
//! power split is stored as the squared amplitudes `beta1_sq`/`beta2_sq`
//! exactly as configured, so provenance output round-trips.

use std::fmt;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::scalar::Scalar;

/// Default propagation speed in m/s. The round 3e8 model value keeps the
/// default element spacing c/(2 f_c) exact in binary at a 3 GHz carrier.
pub const SPEED_OF_LIGHT_M_S: f64 = 3.0e8;

/// Propagation loss policy applied between transmitter and a receive
/// position; rho is the amplitude scale, rho^2 the power scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoPolicy {
    /// rho = 1 everywhere (the default; isolates array geometry effects).
    Unit,
    /// rho^2 = (r_ref / r)^2 inverse-square power falloff, referenced to the
    /// intended receiver's range.
    InverseSquare,
}

impl RhoPolicy {
    /// Parses the configuration-file key value.
    pub fn from_key(key: &str) -> Result<Self, ConfigError> {
        match key {
            "unit" => Ok(RhoPolicy::Unit),
            "inverse-square" => Ok(RhoPolicy::InverseSquare),
            other => Err(ConfigError::UnknownRhoPolicy(other.to_string())),
        }
    }

    /// The configuration-file key for this policy.
    pub fn key(&self) -> &'static str {
        match self {
            RhoPolicy::Unit => "unit",
            RhoPolicy::InverseSquare => "inverse-square",
        }
    }
}

impl fmt::Display for RhoPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Configuration errors. Validation reports the first violated invariant.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{field} must be finite")]
    NonFinite { field: &'static str },
    #[error("{field} must be positive (got {value})")]
    NonPositive { field: &'static str, value: f64 },
    #[error("n_subcarriers must be at least 1")]
    ZeroSubcarriers,
    #[error("n_subcarriers must be a power of two for the transform size (got {n}); opt in to other sizes explicitly")]
    NotPowerOfTwo { n: usize },
    #[error("n_antennas must be at least 1")]
    ZeroAntennas,
    #[error("n_antennas ({n_antennas}) must not exceed n_subcarriers ({n_subcarriers}): each antenna occupies its own subcarrier")]
    TooManyAntennas { n_antennas: usize, n_subcarriers: usize },
    #[error("power allocation must satisfy beta1_sq + beta2_sq = 1 (the data and noise branches split the transmit power); got sum {sum}")]
    PowerAllocation { sum: f64 },
    #[error("beta1_sq and beta2_sq must be non-negative (got {value})")]
    NegativePowerShare { value: f64 },
    #[error("narrowband model requires bandwidth_hz < carrier_hz/10 (total occupied band n_subcarriers*delta_f = bandwidth_hz); got bandwidth {bandwidth_hz} at carrier {carrier_hz}")]
    NotNarrowband { bandwidth_hz: f64, carrier_hz: f64 },
    #[error("unknown rho_policy {0:?}; expected \"unit\" or \"inverse-square\"")]
    UnknownRhoPolicy(String),
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("could not read config file {path}: {detail}")]
    Read { path: String, detail: String },
}

/// Validated system parameters.
///
/// Construct through [`SystemConfig::builder`] (or [`SystemConfig::baseline`]
/// for the reference desk-scale setup). All fields are private; accessors
/// return copies.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig<T: Scalar> {
    carrier_hz: T,
    bandwidth_hz: T,
    n_subcarriers: usize,
    n_antennas: usize,
    element_spacing_m: T,
    power_watts: T,
    noise_variance: T,
    beta1_sq: T,
    beta2_sq: T,
    rho_policy: RhoPolicy,
    propagation_speed_m_s: T,
    allow_non_power_of_two: bool,
}

impl<T: Scalar> SystemConfig<T> {
    /// Starts a builder with the reference defaults (see [`Self::baseline`]).
    pub fn builder() -> SystemConfigBuilder<T> {
        SystemConfigBuilder::new()
    }

    /// The reference desk-scale configuration: 3 GHz carrier, 5 MHz band,
    /// 1024 subcarriers, 8 antennas at half-wavelength spacing, 10 dB SNR
    /// (10 W over unit noise), even power split, unit rho.
    pub fn baseline() -> Self {
        SystemConfigBuilder::new().build().expect("baseline configuration is valid")
    }

    /// A builder pre-seeded with this configuration, for derived sweeps.
    pub fn to_builder(&self) -> SystemConfigBuilder<T> {
        SystemConfigBuilder {
            carrier_hz: self.carrier_hz,
            bandwidth_hz: self.bandwidth_hz,
            n_subcarriers: self.n_subcarriers,
            n_antennas: self.n_antennas,
            element_spacing_m: Some(self.element_spacing_m),
            power_watts: self.power_watts,
            noise_variance: self.noise_variance,
            beta1_sq: self.beta1_sq,
            beta2_sq: self.beta2_sq,
            rho_policy: self.rho_policy,
            propagation_speed_m_s: self.propagation_speed_m_s,
            allow_non_power_of_two: self.allow_non_power_of_two,
        }
    }

    pub fn carrier_hz(&self) -> T {
        self.carrier_hz
    }

    pub fn bandwidth_hz(&self) -> T {
        self.bandwidth_hz
    }

    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    pub fn element_spacing_m(&self) -> T {
        self.element_spacing_m
    }

    pub fn power_watts(&self) -> T {
        self.power_watts
    }

    pub fn noise_variance(&self) -> T {
        self.noise_variance
    }

    /// Squared amplitude share of the data branch.
    pub fn beta1_sq(&self) -> T {
        self.beta1_sq
    }

    /// Squared amplitude share of the noise branch.
    pub fn beta2_sq(&self) -> T {
        self.beta2_sq
    }

    /// Amplitude of the data branch, sqrt(beta1_sq).
    pub fn beta1(&self) -> T {
        self.beta1_sq.sqrt()
    }

    /// Amplitude of the noise branch, sqrt(beta2_sq).
    pub fn beta2(&self) -> T {
        self.beta2_sq.sqrt()
    }

    pub fn rho_policy(&self) -> RhoPolicy {
        self.rho_policy
    }

    pub fn propagation_speed_m_s(&self) -> T {
        self.propagation_speed_m_s
    }

    /// Subcarrier spacing, bandwidth / n_subcarriers. Exact division in the
    /// scalar type, never cached.
    pub fn delta_f_hz(&self) -> T {
        self.bandwidth_hz / T::from_count(self.n_subcarriers)
    }

    /// Symbol duration n_subcarriers / bandwidth (the reciprocal of the
    /// subcarrier spacing).
    pub fn symbol_duration_s(&self) -> T {
        T::from_count(self.n_subcarriers) / self.bandwidth_hz
    }

    /// Sample interval 1 / bandwidth.
    pub fn sample_interval_s(&self) -> T {
        T::one() / self.bandwidth_hz
    }

    /// Transmit power over noise variance as a linear ratio.
    pub fn snr_linear(&self) -> T {
        self.power_watts / self.noise_variance
    }

    /// carrier * spacing / propagation speed: the per-element phase slope in
    /// cycles per unit cos(theta). Exactly 1/2 at half-wavelength spacing.
    pub fn angle_phase_slope(&self) -> T {
        self.carrier_hz * self.element_spacing_m / self.propagation_speed_m_s
    }

    /// Physical aperture (n_antennas - 1) * spacing in meters.
    pub fn aperture_m(&self) -> T {
        T::from_count(self.n_antennas - 1) * self.element_spacing_m
    }

    /// Power scale rho^2 at range `r`, referenced to `r_ref` (the intended
    /// receiver's range). Unit policy returns 1 for every range.
    pub fn path_loss(&self, r: T, r_ref: T) -> crate::error::Result<T> {
        match self.rho_policy {
            RhoPolicy::Unit => Ok(T::one()),
            RhoPolicy::InverseSquare => {
                if r <= T::zero() || r_ref <= T::zero() {
                    return Err(crate::error::Error::Domain(format!(
                        "path loss needs positive ranges (r = {r}, r_ref = {r_ref})"
                    )));
                }
                Ok((r_ref / r) * (r_ref / r))
            }
        }
    }

    fn to_f64(v: T) -> f64 {
        num_traits::ToPrimitive::to_f64(&v).unwrap_or(f64::NAN)
    }
}

/// Builder for [`SystemConfig`]. Unset fields take the baseline defaults.
#[derive(Debug, Clone)]
pub struct SystemConfigBuilder<T: Scalar> {
    carrier_hz: T,
    bandwidth_hz: T,
    n_subcarriers: usize,
    n_antennas: usize,
    element_spacing_m: Option<T>,
    power_watts: T,
    noise_variance: T,
    beta1_sq: T,
    beta2_sq: T,
    rho_policy: RhoPolicy,
    propagation_speed_m_s: T,
    allow_non_power_of_two: bool,
}

impl<T: Scalar> Default for SystemConfigBuilder<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> SystemConfigBuilder<T> {
    pub fn new() -> Self {
        Self {
            carrier_hz: T::lit(3.0e9),
            bandwidth_hz: T::lit(5.0e6),
            n_subcarriers: 1024,
            n_antennas: 8,
            element_spacing_m: None,
            power_watts: T::lit(10.0),
            noise_variance: T::one(),
            beta1_sq: T::lit(0.5),
            beta2_sq: T::lit(0.5),
            rho_policy: RhoPolicy::Unit,
            propagation_speed_m_s: T::lit(SPEED_OF_LIGHT_M_S),
            allow_non_power_of_two: false,
        }
    }

    pub fn carrier_hz(mut self, v: T) -> Self {
        self.carrier_hz = v;
        self
    }

    pub fn bandwidth_hz(mut self, v: T) -> Self {
        self.bandwidth_hz = v;
        self
    }

    pub fn n_subcarriers(mut self, v: usize) -> Self {
        self.n_subcarriers = v;
        self
    }

    pub fn n_antennas(mut self, v: usize) -> Self {
        self.n_antennas = v;
        self
    }

    /// Element spacing in meters. Defaults to c / (2 carrier_hz) when unset.
    pub fn element_spacing_m(mut self, v: T) -> Self {
        self.element_spacing_m = Some(v);
        self
    }

    pub fn power_watts(mut self, v: T) -> Self {
        self.power_watts = v;
        self
    }

    pub fn noise_variance(mut self, v: T) -> Self {
        self.noise_variance = v;
        self
    }

    pub fn beta1_sq(mut self, v: T) -> Self {
        self.beta1_sq = v;
        self
    }

    pub fn beta2_sq(mut self, v: T) -> Self {
        self.beta2_sq = v;
        self
    }

    /// Sets both power shares from the data share: beta2_sq = 1 - beta1_sq.
    pub fn power_split(mut self, beta1_sq: T) -> Self {
        self.beta1_sq = beta1_sq;
        self.beta2_sq = T::one() - beta1_sq;
        self
    }

    pub fn rho_policy(mut self, v: RhoPolicy) -> Self {
        self.rho_policy = v;
        self
    }

    pub fn propagation_speed_m_s(mut self, v: T) -> Self {
        self.propagation_speed_m_s = v;
        self
    }

    /// Permit subcarrier counts that are not powers of two. Transforms still
    /// work; the power-of-two default exists for transform convenience.
    pub fn allow_non_power_of_two_bins(mut self, allow: bool) -> Self {
        self.allow_non_power_of_two = allow;
        self
    }

    /// Validates and produces the configuration. Reports the first violated
    /// invariant.
    pub fn build(self) -> Result<SystemConfig<T>, ConfigError> {
        let f = |v: T| SystemConfig::<T>::to_f64(v);
        let positive = |name: &'static str, v: T| -> Result<(), ConfigError> {
            if !v.is_finite() {
                Err(ConfigError::NonFinite { field: name })
            } else if v <= T::zero() {
                Err(ConfigError::NonPositive { field: name, value: f(v) })
            } else {
                Ok(())
            }
        };

        positive("carrier_hz", self.carrier_hz)?;
        positive("bandwidth_hz", self.bandwidth_hz)?;
        positive("propagation_speed_m_s", self.propagation_speed_m_s)?;
        if self.n_subcarriers == 0 {
            return Err(ConfigError::ZeroSubcarriers);
        }
        if !self.n_subcarriers.is_power_of_two() && !self.allow_non_power_of_two {
            return Err(ConfigError::NotPowerOfTwo { n: self.n_subcarriers });
        }
        if self.n_antennas == 0 {
            return Err(ConfigError::ZeroAntennas);
        }
        if self.n_antennas > self.n_subcarriers {
            return Err(ConfigError::TooManyAntennas {
                n_antennas: self.n_antennas,
                n_subcarriers: self.n_subcarriers,
            });
        }

        let element_spacing = match self.element_spacing_m {
            Some(d) => d,
            None => self.propagation_speed_m_s / (T::lit(2.0) * self.carrier_hz),
        };
        positive("element_spacing_m", element_spacing)?;
        positive("power_watts", self.power_watts)?;
        positive("noise_variance", self.noise_variance)?;

        for share in [self.beta1_sq, self.beta2_sq] {
            if !share.is_finite() {
                return Err(ConfigError::NonFinite { field: "beta1_sq/beta2_sq" });
            }
            if share < T::zero() {
                return Err(ConfigError::NegativePowerShare { value: f(share) });
            }
        }
        let sum = self.beta1_sq + self.beta2_sq;
        if (sum - T::one()).abs() > T::lit(1.0e-12) {
            return Err(ConfigError::PowerAllocation { sum: f(sum) });
        }

        // Narrowband assumption: the occupied band (n_subcarriers * delta_f,
        // which is bandwidth_hz exactly) must stay well below the carrier.
        if self.bandwidth_hz >= self.carrier_hz / T::lit(10.0) {
            return Err(ConfigError::NotNarrowband {
                bandwidth_hz: f(self.bandwidth_hz),
                carrier_hz: f(self.carrier_hz),
            });
        }

        Ok(SystemConfig {
            carrier_hz: self.carrier_hz,
            bandwidth_hz: self.bandwidth_hz,
            n_subcarriers: self.n_subcarriers,
            n_antennas: self.n_antennas,
            element_spacing_m: element_spacing,
            power_watts: self.power_watts,
            noise_variance: self.noise_variance,
            beta1_sq: self.beta1_sq,
            beta2_sq: self.beta2_sq,
            rho_policy: self.rho_policy,
            propagation_speed_m_s: self.propagation_speed_m_s,
            allow_non_power_of_two: self.allow_non_power_of_two,
        })
    }
}

/// Raw key-value content of a configuration file (TOML). Field names are the
/// on-disk keys; unknown keys are rejected.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub n_subcarriers: usize,
    pub n_antennas: usize,
    pub element_spacing_m: Option<f64>,
    pub power_watts: f64,
    pub noise_variance: f64,
    pub beta1_sq: f64,
    pub beta2_sq: f64,
    pub rho_policy: String,
    pub seed: u64,
}

impl FileConfig {
    /// Parses the TOML text of a configuration file.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    /// Reads and parses a configuration file.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// A builder carrying this file's values, ready for overrides.
    pub fn to_builder<T: Scalar>(&self) -> Result<SystemConfigBuilder<T>, ConfigError> {
        let mut b = SystemConfig::<T>::builder()
            .carrier_hz(T::lit(self.carrier_hz))
            .bandwidth_hz(T::lit(self.bandwidth_hz))
            .n_subcarriers(self.n_subcarriers)
            .n_antennas(self.n_antennas)
            .power_watts(T::lit(self.power_watts))
            .noise_variance(T::lit(self.noise_variance))
            .beta1_sq(T::lit(self.beta1_sq))
            .beta2_sq(T::lit(self.beta2_sq))
            .rho_policy(RhoPolicy::from_key(&self.rho_policy)?);
        if let Some(d) = self.element_spacing_m {
            b = b.element_spacing_m(T::lit(d));
        }
        Ok(b)
    }

    /// Validates into a [`SystemConfig`].
    pub fn to_system_config<T: Scalar>(&self) -> Result<SystemConfig<T>, ConfigError> {
        self.to_builder::<T>()?.build()
    }
}
