//! Seeded experiment drivers, each sweeping one axis at desk scale: SINR
//! map studies against bandwidth, antenna count, or power split, and
//! Monte-Carlo secrecy-rate curves against SNR or power split averaged over
//! assignment draws.

use rayon::prelude::*;

use crate::analysis::{
    default_wiretap_grid, max_wiretap_coherence, secrecy_rate_from_eavesdropper_coherence,
    sidelobe_coherence_peaks, BeamPatternGeometry,
};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::rscs::SubcarrierSelection;
use crate::scalar::{db_to_linear, Scalar};
use crate::simkit::{derive_seed, CurvePoint};
use crate::sinr::{default_range_axis, default_theta_axis, sinr_map, SinrMap};
use crate::types::Position;
use crate::waveform::CombineMode;

/// Seed lane reserved for assignment draws inside the drivers.
const LANE_SELECTION: u64 = 11;

/// The one axis an experiment varies.
#[derive(Debug, Clone)]
pub enum SweepAxis<T: Scalar> {
    SnrDb(Vec<T>),
    Beta1Sq(Vec<T>),
    BandwidthHz(Vec<T>),
    AntennaCount(Vec<usize>),
}

impl<T: Scalar> SweepAxis<T> {
    fn is_empty(&self) -> bool {
        match self {
            SweepAxis::SnrDb(v) | SweepAxis::Beta1Sq(v) | SweepAxis::BandwidthHz(v) => {
                v.is_empty()
            }
            SweepAxis::AntennaCount(v) => v.is_empty(),
        }
    }
}

/// One experiment: a base configuration, the axis to sweep, the number of
/// Monte-Carlo assignment draws per point, and the master seed.
#[derive(Debug, Clone)]
pub struct ExperimentSpec<T: Scalar> {
    base: SystemConfig<T>,
    sweep: SweepAxis<T>,
    trials: usize,
    seed: u64,
}

impl<T: Scalar> ExperimentSpec<T> {
    pub fn new(base: SystemConfig<T>, sweep: SweepAxis<T>, trials: usize, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Domain("an experiment needs at least one trial".to_string()));
        }
        if sweep.is_empty() {
            return Err(Error::Domain("the sweep axis must be nonempty".to_string()));
        }
        Ok(Self { base, sweep, trials, seed })
    }

    pub fn base(&self) -> &SystemConfig<T> {
        &self.base
    }

    pub fn sweep(&self) -> &SweepAxis<T> {
        &self.sweep
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Width of the profile around its maximum at half the peak value, with the
/// crossings found by linear interpolation; absent when the profile never
/// falls below half power inside the sampled span.
fn half_power_width_from_profile<T: Scalar>(axis: &[T], values: &[T]) -> Option<T> {
    let mut peak = 0;
    for (k, v) in values.iter().enumerate() {
        if *v > values[peak] {
            peak = k;
        }
    }
    let half = values[peak] * T::lit(0.5);
    let mut right = None;
    for k in peak..values.len().saturating_sub(1) {
        if values[k] >= half && values[k + 1] < half {
            let frac = (values[k] - half) / (values[k] - values[k + 1]);
            right = Some(axis[k] + frac * (axis[k + 1] - axis[k]));
            break;
        }
    }
    let mut left = None;
    for k in (1..=peak).rev() {
        if values[k] >= half && values[k - 1] < half {
            let frac = (values[k] - half) / (values[k] - values[k - 1]);
            left = Some(axis[k] - frac * (axis[k] - axis[k - 1]));
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => Some(r - l),
        _ => None,
    }
}

fn angle_half_power_width<T: Scalar>(
    desired: &Position<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
) -> Result<Option<T>> {
    let geom = BeamPatternGeometry::new(desired, cfg);
    let est = geom.delta_theta_deg().unwrap_or_else(|| T::lit(45.0));
    let step = est / T::lit(400.0);
    let mut axis = Vec::new();
    for i in -600i64..=600 {
        let th = desired.theta_deg() + T::lit(i as f64) * step;
        if th >= T::zero() && th <= T::lit(180.0) {
            axis.push(th);
        }
    }
    let profile = sinr_map(desired, sel, cfg, &axis, &[desired.range_m()], CombineMode::ActiveOnly)?;
    Ok(half_power_width_from_profile(&axis, profile.values()))
}

fn range_half_power_width<T: Scalar>(
    desired: &Position<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
) -> Result<Option<T>> {
    let dr = BeamPatternGeometry::new(desired, cfg).delta_range_m();
    let step = dr / T::lit(200.0);
    let mut axis = Vec::new();
    for i in -300i64..=300 {
        let r = desired.range_m() + T::lit(i as f64) * step;
        if r > T::zero() {
            axis.push(r);
        }
    }
    let profile = sinr_map(desired, sel, cfg, &[desired.theta_deg()], &axis, CombineMode::ActiveOnly)?;
    Ok(half_power_width_from_profile(&axis, profile.values()))
}

/// One sweep value of a map study: the full map on the default axes plus
/// its peak and the half-power widths measured on fine local profiles.
#[derive(Debug, Clone)]
pub struct MapStudyEntry<T: Scalar> {
    pub bandwidth_hz: T,
    pub n_antennas: usize,
    pub beta1_sq: T,
    pub peak_theta_deg: T,
    pub peak_range_m: T,
    pub peak_sinr: T,
    pub angle_width_deg: Option<T>,
    pub range_width_m: Option<T>,
    pub map: SinrMap<T>,
}

/// A map per sweep value plus the summary table.
#[derive(Debug, Clone)]
pub struct MapStudy<T: Scalar> {
    pub entries: Vec<MapStudyEntry<T>>,
}

impl<T: Scalar> MapStudy<T> {
    /// Summary CSV: one row per sweep value with peak location, peak value,
    /// and half-power widths (empty when unmeasurable).
    pub fn summary_csv(&self, provenance: &str) -> String {
        let mut out = String::new();
        out.push_str(provenance);
        out.push('\n');
        out.push_str(
            "bandwidth_hz,n_antennas,beta1_sq,peak_theta_deg,peak_range_m,peak_sinr,\
angle_width_deg,range_width_m\n",
        );
        for e in &self.entries {
            let opt = |v: &Option<T>| v.map(|x| format!("{x}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                e.bandwidth_hz,
                e.n_antennas,
                e.beta1_sq,
                e.peak_theta_deg,
                e.peak_range_m,
                e.peak_sinr,
                opt(&e.angle_width_deg),
                opt(&e.range_width_m),
            ));
        }
        out
    }
}

fn study_entry<T: Scalar>(
    desired: &Position<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
) -> Result<MapStudyEntry<T>> {
    let map = sinr_map(
        desired,
        sel,
        cfg,
        &default_theta_axis(),
        &default_range_axis(),
        CombineMode::ActiveOnly,
    )?;
    let (peak_theta_deg, peak_range_m, peak_sinr) = map.peak();
    Ok(MapStudyEntry {
        bandwidth_hz: cfg.bandwidth_hz(),
        n_antennas: cfg.n_antennas(),
        beta1_sq: cfg.beta1_sq(),
        peak_theta_deg,
        peak_range_m,
        peak_sinr,
        angle_width_deg: angle_half_power_width(desired, sel, cfg)?,
        range_width_m: range_half_power_width(desired, sel, cfg)?,
        map,
    })
}

/// Map study over bandwidth or antenna count. A bandwidth sweep reuses one
/// assignment draw across all values so the range width scales purely with
/// bandwidth; an antenna sweep draws per value since the assignment length
/// changes.
pub fn run_beam_map_study<T: Scalar>(
    spec: &ExperimentSpec<T>,
    desired: &Position<T>,
) -> Result<MapStudy<T>> {
    let mut entries = Vec::new();
    match spec.sweep() {
        SweepAxis::BandwidthHz(values) => {
            let sel = SubcarrierSelection::draw_seeded(
                spec.base(),
                derive_seed(spec.seed(), LANE_SELECTION, 0),
            );
            for &b in values {
                let cfg = spec.base().to_builder().bandwidth_hz(b).build()?;
                entries.push(study_entry(desired, &sel, &cfg)?);
            }
        }
        SweepAxis::AntennaCount(values) => {
            for (i, &n_t) in values.iter().enumerate() {
                let cfg = spec.base().to_builder().n_antennas(n_t).build()?;
                let sel = SubcarrierSelection::draw_seeded(
                    &cfg,
                    derive_seed(spec.seed(), LANE_SELECTION, i as u64),
                );
                entries.push(study_entry(desired, &sel, &cfg)?);
            }
        }
        _ => {
            return Err(Error::Domain(
                "a beam map study sweeps bandwidth or antenna count".to_string(),
            ))
        }
    }
    Ok(MapStudy { entries })
}

/// Map study over the power split, one assignment shared across values.
pub fn run_power_split_map_study<T: Scalar>(
    spec: &ExperimentSpec<T>,
    desired: &Position<T>,
) -> Result<MapStudy<T>> {
    let values = match spec.sweep() {
        SweepAxis::Beta1Sq(v) => v,
        _ => {
            return Err(Error::Domain(
                "a power split study sweeps the data power share".to_string(),
            ))
        }
    };
    let sel = SubcarrierSelection::draw_seeded(
        spec.base(),
        derive_seed(spec.seed(), LANE_SELECTION, 0),
    );
    let mut entries = Vec::new();
    for &b1 in values {
        let cfg = spec.base().to_builder().power_split(b1).build()?;
        entries.push(study_entry(desired, &sel, &cfg)?);
    }
    Ok(MapStudy { entries })
}

/// Per-trial coherences, hoisted out of the sweep loops: the sidelobe-peak
/// coherence and, when requested, the wiretap-grid maximum. Neither depends
/// on noise power or power split, so one evaluation serves every sweep value.
fn trial_coherences<T: Scalar>(
    base: &SystemConfig<T>,
    desired: &Position<T>,
    trials: usize,
    seed: u64,
    empirical: bool,
) -> Result<Vec<(T, Option<T>)>> {
    let grid = if empirical { Some(default_wiretap_grid(desired, base)) } else { None };
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let sel =
                SubcarrierSelection::draw_seeded(base, derive_seed(seed, LANE_SELECTION, t as u64));
            let lam_theory = sidelobe_coherence_peaks(&sel, base).max();
            let lam_star = match &grid {
                Some(g) => Some(max_wiretap_coherence(desired, &sel, base, g)?),
                None => None,
            };
            Ok((lam_theory, lam_star))
        })
        .collect()
}

fn mean<T: Scalar>(xs: &[T]) -> T {
    xs.iter().copied().sum::<T>() / T::from_count(xs.len())
}

fn stderr_of_mean<T: Scalar>(xs: &[T], m: T) -> T {
    if xs.len() < 2 {
        return T::zero();
    }
    let var = xs.iter().map(|&x| (x - m) * (x - m)).sum::<T>() / T::from_count(xs.len() - 1);
    (var / T::from_count(xs.len())).sqrt()
}

fn secrecy_point<T: Scalar>(
    x: T,
    cfg: &SystemConfig<T>,
    lams: &[(T, Option<T>)],
    empirical: bool,
) -> Result<CurvePoint<T>> {
    let mut theory = Vec::with_capacity(lams.len());
    let mut numeric = Vec::with_capacity(lams.len());
    for (lam_theory, lam_star) in lams {
        theory.push(secrecy_rate_from_eavesdropper_coherence(*lam_theory, cfg)?);
        if let Some(l) = lam_star {
            numeric.push(secrecy_rate_from_eavesdropper_coherence(*l, cfg)?);
        }
    }
    let y_theory = mean(&theory);
    let (y_empirical, y_stderr) = if empirical {
        let m = mean(&numeric);
        (m, stderr_of_mean(&numeric, m))
    } else {
        (T::nan(), T::nan())
    };
    Ok(CurvePoint { x, y_theory, y_empirical, y_stderr })
}

/// Secrecy rate versus SNR: the closed-form rate and the wiretap-grid rate,
/// each averaged over `trials` assignment draws per point. With `empirical`
/// false the grid search is skipped and those columns are NaN.
pub fn run_secrecy_vs_snr<T: Scalar>(
    spec: &ExperimentSpec<T>,
    desired: &Position<T>,
    empirical: bool,
) -> Result<Vec<CurvePoint<T>>> {
    let snrs = match spec.sweep() {
        SweepAxis::SnrDb(v) => v,
        _ => return Err(Error::Domain("this experiment sweeps SNR".to_string())),
    };
    let lams = trial_coherences(spec.base(), desired, spec.trials(), spec.seed(), empirical)?;
    let p = spec.base().power_watts();
    let mut points = Vec::with_capacity(snrs.len());
    for &snr_db in snrs {
        let cfg = spec.base().to_builder().noise_variance(p / db_to_linear(snr_db)).build()?;
        points.push(secrecy_point(snr_db, &cfg, &lams, empirical)?);
    }
    Ok(points)
}

/// Secrecy curve over the power split plus its best split.
#[derive(Debug, Clone)]
pub struct PowerSplitStudy<T: Scalar> {
    pub points: Vec<CurvePoint<T>>,
    /// Data power share maximizing the averaged rate (the grid-searched one
    /// when available, otherwise the closed form).
    pub argmax_beta1_sq: T,
}

/// Secrecy rate versus the data power share at fixed SNR, averaged over
/// `trials` assignment draws per point.
pub fn run_secrecy_vs_power_split<T: Scalar>(
    spec: &ExperimentSpec<T>,
    desired: &Position<T>,
    empirical: bool,
) -> Result<PowerSplitStudy<T>> {
    let betas = match spec.sweep() {
        SweepAxis::Beta1Sq(v) => v,
        _ => return Err(Error::Domain("this experiment sweeps the data power share".to_string())),
    };
    let lams = trial_coherences(spec.base(), desired, spec.trials(), spec.seed(), empirical)?;
    let mut points = Vec::with_capacity(betas.len());
    for &b1 in betas {
        let cfg = spec.base().to_builder().power_split(b1).build()?;
        points.push(secrecy_point(b1, &cfg, &lams, empirical)?);
    }
    let mut argmax = points[0].x;
    let mut best = if empirical { points[0].y_empirical } else { points[0].y_theory };
    for pt in &points[1..] {
        let y = if empirical { pt.y_empirical } else { pt.y_theory };
        if y > best {
            best = y;
            argmax = pt.x;
        }
    }
    Ok(PowerSplitStudy { points, argmax_beta1_sq: argmax })
}
