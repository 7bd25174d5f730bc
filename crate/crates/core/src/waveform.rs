//! Sample-level baseband OFDM chain: synthesize the superposed per-antenna
//! tones at a receive position, add receiver noise, transform to spectral
//! bins, and combine bins into the receive statistic.
//!
//! This is the ground-truth path every closed form is checked against. One
//! OFDM symbol is N samples at the occupied bandwidth B (no cyclic prefix:
//! the channel is pure delay and attenuation, so a prefix adds nothing).
//! Antenna n contributes the tone of its assigned subcarrier eta(n), carrying
//! the antenna's propagation phase -2 pi psi_n and its transmit coefficient:
//!
//! ```text
//! r[m] = rho * sum_n coeff_n * e^{-j 2 pi psi_n} * e^{+j 2 pi m eta(n) / N}
//! ```
//!
//! Spectral bins come from the unitary-free DFT y(q) = sum_m r[m] e^{-j2pi mq/N},
//! optionally divided by N (the default) so the useful bin carries exactly
//! rho times the coefficient and a per-sample noise variance of
//! N * noise_variance shows up as exactly noise_variance per bin.

use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::precoder::Beamformer;
use crate::rscs::SubcarrierSelection;
use crate::scalar::{frac_cycles, unit_phasor, Scalar, SimScalar};
use crate::steering::psi;
use crate::types::{Position, Symbol};

/// One OFDM symbol of baseband samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T: Scalar> {
    samples: Vec<Complex<T>>,
    sample_rate_hz: T,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn from_samples(samples: Vec<Complex<T>>, sample_rate_hz: T) -> Self {
        Self { samples, sample_rate_hz }
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> T {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Total sample energy sum |r[m]|^2.
    pub fn energy(&self) -> T {
        self.samples.iter().map(|c| c.norm_sqr()).sum()
    }

    /// CSV rendering with columns `index,re,im`.
    pub fn to_csv(&self, provenance: &str) -> String {
        render_complex_csv(provenance, &self.samples)
    }
}

/// How spectral bins are scaled relative to the plain DFT sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinNormalization {
    /// Bins divided by N: a unit-coefficient tone yields a unit bin.
    PerBin,
    /// Plain DFT sum: a unit-coefficient tone yields a bin of N.
    Raw,
}

/// Which bins enter the combined receive statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineMode {
    /// Only the bins of assigned subcarriers (a receiver that knows the
    /// assignment); noise enters through N_T bins.
    ActiveOnly,
    /// Every bin; noise enters through all N bins.
    AllBins,
}

/// Spectral bins of one symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumBins<T: Scalar> {
    bins: Vec<Complex<T>>,
    normalization: BinNormalization,
}

impl<T: Scalar> SpectrumBins<T> {
    pub fn bins(&self) -> &[Complex<T>] {
        &self.bins
    }

    pub fn bin(&self, q: usize) -> Complex<T> {
        self.bins[q]
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn normalization(&self) -> BinNormalization {
        self.normalization
    }

    /// CSV rendering with columns `index,re,im`.
    pub fn to_csv(&self, provenance: &str) -> String {
        render_complex_csv(provenance, &self.bins)
    }
}

fn render_complex_csv<T: Scalar>(provenance: &str, values: &[Complex<T>]) -> String {
    let mut out = String::new();
    out.push_str(provenance);
    out.push('\n');
    out.push_str("index,re,im\n");
    for (i, c) in values.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i, c.re, c.im));
    }
    out
}

/// Synthesizes the noiseless received samples at `pos` for arbitrary
/// per-antenna spectral coefficients. Phase is accumulated incrementally in
/// cycles and reduced every sample, so precision holds at large R * delta_f / c.
pub fn synthesize_from_coefficients<T: Scalar>(
    coeffs: &[Complex<T>],
    pos: &Position<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
    rho: T,
) -> Result<TimeSeries<T>> {
    if coeffs.len() != sel.n_antennas() {
        return Err(Error::Dimension(format!(
            "{} coefficients against {} antennas",
            coeffs.len(),
            sel.n_antennas()
        )));
    }
    let n = cfg.n_subcarriers();
    let zero = Complex::new(T::zero(), T::zero());
    let mut samples = vec![zero; n];
    let n_t = T::from_count(n);
    for (ant, &coeff) in coeffs.iter().enumerate() {
        let weighted = coeff.scale(rho);
        let step = T::from_count(sel.subcarrier_for_antenna(ant)) / n_t;
        let mut cycle = frac_cycles(-psi(ant, pos, sel, cfg));
        for s in samples.iter_mut() {
            *s = *s + weighted * unit_phasor(cycle);
            cycle = cycle + step;
            if cycle >= T::one() {
                cycle = cycle - T::one();
            }
        }
    }
    Ok(TimeSeries { samples, sample_rate_hz: cfg.bandwidth_hz() })
}

/// Receiver noise source: per-sample complex Gaussian of the given variance,
/// drawn from its own seeded stream.
#[derive(Debug, Clone, Copy)]
pub struct NoiseSpec<T: Scalar> {
    pub variance_per_sample: T,
    pub seed: u64,
}

/// The per-sample noise variance that makes each 1/N-normalized spectral bin
/// carry exactly `cfg.noise_variance()`: N * noise_variance. The configured
/// noise variance is per subchannel; spreading it over the whole band puts N
/// times as much in the time domain.
pub fn receiver_noise_variance_per_sample<T: Scalar>(cfg: &SystemConfig<T>) -> T {
    T::from_count(cfg.n_subcarriers()) * cfg.noise_variance()
}

/// Adds iid CN(0, variance) noise to every sample.
pub fn add_receiver_noise<T: SimScalar, R: Rng + ?Sized>(
    ts: &mut TimeSeries<T>,
    variance_per_sample: T,
    rng: &mut R,
) {
    let std = (variance_per_sample / T::lit(2.0)).sqrt();
    for s in &mut ts.samples {
        *s = *s + Complex::new(T::standard_normal(rng) * std, T::standard_normal(rng) * std);
    }
}

/// Synthesizes the received samples of one symbol under the phase-only
/// transmit chain: antenna m sends x with the beamformer phase phi_m at unit
/// amplitude. Optional receiver noise is drawn from `noise`'s seeded stream.
pub fn synthesize_received<T: SimScalar>(
    pos: &Position<T>,
    x: &Symbol<T>,
    bf: &Beamformer<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
    rho: T,
    noise: Option<NoiseSpec<T>>,
) -> Result<TimeSeries<T>> {
    if bf.n_antennas() != sel.n_antennas() {
        return Err(Error::Dimension(format!(
            "beamformer of length {} against {} antennas",
            bf.n_antennas(),
            sel.n_antennas()
        )));
    }
    let coeffs: Vec<Complex<T>> = bf.phasors().iter().map(|p| p * x.value()).collect();
    let mut ts = synthesize_from_coefficients(&coeffs, pos, sel, cfg, rho)?;
    if let Some(spec) = noise {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        add_receiver_noise(&mut ts, spec.variance_per_sample, &mut rng);
    }
    Ok(ts)
}

/// Reusable transform plans for one symbol length.
pub struct SpectrumTransform<T: SimScalar> {
    size: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: SimScalar> SpectrumTransform<T> {
    pub fn new(size: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// y(q) = sum_m r[m] e^{-j 2 pi m q / N}, scaled per `normalization`.
    pub fn forward(
        &self,
        ts: &TimeSeries<T>,
        normalization: BinNormalization,
    ) -> Result<SpectrumBins<T>> {
        if ts.len() != self.size {
            return Err(Error::Dimension(format!(
                "time series of length {} against transform size {}",
                ts.len(),
                self.size
            )));
        }
        let mut bins = ts.samples.clone();
        self.forward.process(&mut bins);
        if normalization == BinNormalization::PerBin {
            let scale = T::one() / T::from_count(self.size);
            for b in &mut bins {
                *b = b.scale(scale);
            }
        }
        Ok(SpectrumBins { bins, normalization })
    }

    /// Recovers the time samples the bins came from.
    pub fn inverse(&self, bins: &SpectrumBins<T>, sample_rate_hz: T) -> Result<TimeSeries<T>> {
        if bins.len() != self.size {
            return Err(Error::Dimension(format!(
                "bins of length {} against transform size {}",
                bins.len(),
                self.size
            )));
        }
        let mut samples = bins.bins.clone();
        self.inverse.process(&mut samples);
        // The unnormalized inverse returns N times the samples for Raw bins
        // and exactly the samples for PerBin bins.
        if bins.normalization == BinNormalization::Raw {
            let scale = T::one() / T::from_count(self.size);
            for s in &mut samples {
                *s = s.scale(scale);
            }
        }
        Ok(TimeSeries { samples, sample_rate_hz })
    }
}

/// One-shot forward transform.
pub fn dft<T: SimScalar>(ts: &TimeSeries<T>, normalization: BinNormalization) -> SpectrumBins<T> {
    SpectrumTransform::new(ts.len())
        .forward(ts, normalization)
        .expect("transform planned for the series' own length")
}

/// One-shot inverse transform.
pub fn idft<T: SimScalar>(bins: &SpectrumBins<T>, sample_rate_hz: T) -> TimeSeries<T> {
    SpectrumTransform::new(bins.len())
        .inverse(bins, sample_rate_hz)
        .expect("transform planned for the bins' own length")
}

/// Combines bins into the receive statistic: the sum over assigned bins, or
/// over all bins.
pub fn combine_bins<T: Scalar>(
    bins: &SpectrumBins<T>,
    sel: &SubcarrierSelection,
    mode: CombineMode,
) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    match mode {
        CombineMode::ActiveOnly => {
            for m in 0..sel.n_antennas() {
                acc = acc + bins.bins[sel.subcarrier_for_antenna(m)];
            }
        }
        CombineMode::AllBins => {
            for b in &bins.bins {
                acc = acc + *b;
            }
        }
    }
    acc
}
