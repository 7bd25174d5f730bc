//! Statistical and geometric analysis of what an unintended receiver sees:
//! the distribution of its instantaneous SINR under per-symbol reselection,
//! the null and sidelobe geometry of the averaged beam pattern, worst-case
//! coherence outside the protected neighborhood, and the resulting secrecy
//! rates in closed form and by numerical search.

use num_complex::Complex;

use crate::config::{RhoPolicy, SystemConfig};
use crate::error::{Error, Result};
use crate::rscs::SubcarrierSelection;
use crate::scalar::{linear_to_db, unit_phasor, Scalar};
use crate::simkit::{derive_seed, seeded_rng};
use crate::sinr::{sinr_desired, sinr_from_coherence, CoherenceField};
use crate::types::Position;
use rand::Rng;

/// Parameters of the instantaneous-SINR distribution at a position with
/// vanishing average coherence: `e` scales the useful term, `a` the shaped
/// noise, `b` the receiver noise. The density is
/// `2c (1 + c x)^(-3)` with `c = (a + b) / e`, supported on x >= 0.
///
/// `e = 0` is representable as the degenerate case with all probability
/// mass at zero: the samplers return zeros, while density, distribution,
/// and quadrature refuse it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrDistributionParams<T: Scalar> {
    e: T,
    a: T,
    b: T,
}

impl<T: Scalar> SinrDistributionParams<T> {
    pub fn new(e: T, a: T, b: T) -> Result<Self> {
        if !(e.is_finite() && a.is_finite() && b.is_finite()) {
            return Err(Error::Domain("distribution parameters must be finite".to_string()));
        }
        if e < T::zero() {
            return Err(Error::Domain(format!("useful-term scale must be nonnegative, got {e}")));
        }
        if a < T::zero() {
            return Err(Error::Domain(format!("shaped-noise scale must be nonnegative, got {a}")));
        }
        if b <= T::zero() {
            return Err(Error::Domain(format!("receiver-noise scale must be positive, got {b}")));
        }
        Ok(Self { e, a, b })
    }

    pub fn e(&self) -> T {
        self.e
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// Density rate constant c = (a + b) / e; meaningful only for e > 0.
    pub fn rate(&self) -> T {
        (self.a + self.b) / self.e
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.e > T::zero() {
            Ok(())
        } else {
            Err(Error::Domain(
                "the distribution is degenerate at zero useful-term scale".to_string(),
            ))
        }
    }
}

/// Density 2c (1 + c x)^(-3) for x >= 0, zero below.
pub fn sinr_pdf<T: Scalar>(x: T, p: &SinrDistributionParams<T>) -> Result<T> {
    p.require_nondegenerate()?;
    if x < T::zero() {
        return Ok(T::zero());
    }
    let c = p.rate();
    let base = T::one() + c * x;
    Ok(T::lit(2.0) * c / (base * base * base))
}

/// Distribution function 1 - (1 + c x)^(-2) for x >= 0, zero below.
pub fn sinr_cdf<T: Scalar>(x: T, p: &SinrDistributionParams<T>) -> Result<T> {
    p.require_nondegenerate()?;
    if x < T::zero() {
        return Ok(T::zero());
    }
    let c = p.rate();
    let base = T::one() + c * x;
    Ok(T::one() - T::one() / (base * base))
}

/// Mean of the distribution: e / (a + b).
pub fn sinr_mean<T: Scalar>(p: &SinrDistributionParams<T>) -> T {
    p.e / (p.a + p.b)
}

fn chi_square_2(u: f64) -> f64 {
    // Inverse-CDF draw of a two-degree chi-square: -2 ln(1 - u), u in [0, 1).
    -2.0 * (-u).ln_1p()
}

/// Samples the instantaneous SINR by its raw construction: chi-square(2)
/// draws for the useful, shaped-noise, and receiver-noise powers in that
/// order per sample, combined as e A / (a B + b L). Deterministic in `seed`;
/// all zeros in the degenerate e = 0 case.
pub fn sample_realtime_sinr<T: Scalar>(
    p: &SinrDistributionParams<T>,
    n: usize,
    seed: u64,
) -> Vec<T> {
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let alpha = chi_square_2(rng.gen::<f64>());
        let beta = chi_square_2(rng.gen::<f64>());
        let lambda = chi_square_2(rng.gen::<f64>());
        let num = p.e * T::lit(alpha);
        let den = p.a * T::lit(beta) + p.b * T::lit(lambda);
        out.push(num / den);
    }
    out
}

/// Samples the fitted density by inverse transform:
/// x = ((1 - u)^(-1/2) - 1) / c. Deterministic in `seed`; all zeros in the
/// degenerate e = 0 case.
pub fn sample_fitted_sinr<T: Scalar>(
    p: &SinrDistributionParams<T>,
    n: usize,
    seed: u64,
) -> Vec<T> {
    let mut rng = seeded_rng(seed);
    let inv_c = p.e() / (p.a() + p.b());
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let u = rng.gen::<f64>();
        let x = (1.0 - u).powf(-0.5) - 1.0;
        out.push(T::lit(x) * inv_c);
    }
    out
}

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `samples` and the fitted distribution function.
pub fn kolmogorov_distance<T: Scalar>(samples: &[T], p: &SinrDistributionParams<T>) -> Result<T> {
    if samples.is_empty() {
        return Err(Error::Domain("distance needs at least one sample".to_string()));
    }
    p.require_nondegenerate()?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("samples must be orderable"));
    let n = T::from_count(sorted.len());
    let mut d = T::zero();
    for (i, &x) in sorted.iter().enumerate() {
        let f = sinr_cdf(x, p)?;
        let lo = T::from_count(i) / n;
        let hi = T::from_count(i + 1) / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    Ok(d)
}

/// Integrates `x^moment` against the fitted density by composite Simpson
/// quadrature on the compactified variable x = t / (1 - t). Only moments 0
/// and 1 converge.
pub fn pdf_quadrature<T: Scalar>(
    p: &SinrDistributionParams<T>,
    moment: usize,
    panels: usize,
) -> Result<T> {
    p.require_nondegenerate()?;
    if moment > 1 {
        return Err(Error::Domain(format!(
            "moment {moment} of the fitted density diverges; only 0 and 1 are integrable"
        )));
    }
    if panels < 2 {
        return Err(Error::Domain("quadrature needs at least two panels".to_string()));
    }
    let n = panels + (panels & 1);
    let c = p.rate();
    let g = |t: T| -> T {
        if t <= T::zero() {
            if moment == 0 {
                T::lit(2.0) * c
            } else {
                T::zero()
            }
        } else if t >= T::one() {
            // Limit of the transformed integrand as x grows without bound.
            if moment == 0 {
                T::zero()
            } else {
                T::lit(2.0) / (c * c)
            }
        } else {
            let x = t / (T::one() - t);
            let xm = if moment == 0 { T::one() } else { x };
            let one_px = T::one() + x;
            let one_pcx = T::one() + c * x;
            T::lit(2.0) * c * xm * one_px * one_px / (one_pcx * one_pcx * one_pcx)
        }
    };
    let h = T::one() / T::from_count(n);
    let mut sum = g(T::zero()) + g(T::one());
    for i in 1..n {
        let w = if i % 2 == 1 { T::lit(4.0) } else { T::lit(2.0) };
        sum = sum + w * g(T::from_count(i) * h);
    }
    Ok(sum * h / T::lit(3.0))
}

/// First nulls and first sidelobes of the averaged beam pattern around an
/// aligned position, in both angle and range. A branch is absent when it
/// falls outside visible angles or at nonpositive range.
#[derive(Debug, Clone, Copy)]
pub struct BeamPatternGeometry<T: Scalar> {
    theta_null_below_deg: Option<T>,
    theta_null_above_deg: Option<T>,
    range_null_below_m: Option<T>,
    range_null_above_m: T,
    theta_sidelobe_below_deg: Option<T>,
    theta_sidelobe_above_deg: Option<T>,
    range_sidelobe_below_m: Option<T>,
    range_sidelobe_above_m: T,
    delta_theta_deg: Option<T>,
    delta_range_m: T,
}

impl<T: Scalar> BeamPatternGeometry<T> {
    /// The null offsets are 1 / (N_T kappa) in cos(theta) and c / B in
    /// range; the first sidelobes sit at 1.5 times those offsets.
    pub fn new(desired: &Position<T>, cfg: &SystemConfig<T>) -> Self {
        let n_t = T::from_count(cfg.n_antennas());
        let kappa = cfg.angle_phase_slope();
        let dcos_null = T::one() / (n_t * kappa);
        let dcos_side = T::lit(1.5) / (n_t * kappa);
        let dr_null = cfg.propagation_speed_m_s() / cfg.bandwidth_hz();
        let dr_side = T::lit(1.5) * dr_null;
        let cos_d = desired.cos_theta();
        let theta_d = desired.theta_deg();
        let r_d = desired.range_m();

        // Larger cosine means a smaller angle.
        let theta_at = |c: T| -> Option<T> {
            if (-T::one()..=T::one()).contains(&c) {
                Some(c.acos().to_degrees())
            } else {
                None
            }
        };
        let range_below = |d: T| -> Option<T> {
            let r = r_d - d;
            if r > T::zero() {
                Some(r)
            } else {
                None
            }
        };

        let theta_null_below_deg = theta_at(cos_d + dcos_null);
        let theta_null_above_deg = theta_at(cos_d - dcos_null);
        let delta_theta_deg = match (theta_null_below_deg, theta_null_above_deg) {
            (Some(lo), Some(hi)) => Some((lo - theta_d).abs().min((hi - theta_d).abs())),
            (Some(lo), None) => Some((lo - theta_d).abs()),
            (None, Some(hi)) => Some((hi - theta_d).abs()),
            (None, None) => None,
        };

        Self {
            theta_null_below_deg,
            theta_null_above_deg,
            range_null_below_m: range_below(dr_null),
            range_null_above_m: r_d + dr_null,
            theta_sidelobe_below_deg: theta_at(cos_d + dcos_side),
            theta_sidelobe_above_deg: theta_at(cos_d - dcos_side),
            range_sidelobe_below_m: range_below(dr_side),
            range_sidelobe_above_m: r_d + dr_side,
            delta_theta_deg,
            delta_range_m: dr_null,
        }
    }

    pub fn theta_null_below_deg(&self) -> Option<T> {
        self.theta_null_below_deg
    }

    pub fn theta_null_above_deg(&self) -> Option<T> {
        self.theta_null_above_deg
    }

    pub fn range_null_below_m(&self) -> Option<T> {
        self.range_null_below_m
    }

    pub fn range_null_above_m(&self) -> T {
        self.range_null_above_m
    }

    pub fn theta_sidelobe_below_deg(&self) -> Option<T> {
        self.theta_sidelobe_below_deg
    }

    pub fn theta_sidelobe_above_deg(&self) -> Option<T> {
        self.theta_sidelobe_above_deg
    }

    pub fn range_sidelobe_below_m(&self) -> Option<T> {
        self.range_sidelobe_below_m
    }

    pub fn range_sidelobe_above_m(&self) -> T {
        self.range_sidelobe_above_m
    }

    /// Angular half-width of the protected neighborhood: distance to the
    /// nearer angle null, absent when no null is visible.
    pub fn delta_theta_deg(&self) -> Option<T> {
        self.delta_theta_deg
    }

    /// Range half-width of the protected neighborhood: the null offset c/B.
    pub fn delta_range_m(&self) -> T {
        self.delta_range_m
    }
}

/// Coherence at the first sidelobes of the averaged pattern. The range
/// branch depends on the drawn assignment; the angle branch only on the
/// antenna count.
#[derive(Debug, Clone, Copy)]
pub struct CoherencePeaks<T: Scalar> {
    /// Coherence at the first range sidelobe: |sum_m e^(j 2 pi 1.5 eta(m)/N)|^2 / N_T^2.
    pub range_branch: T,
    /// Coherence at the first angle sidelobe: |sum_m e^(j 2 pi 1.5 m/N_T)|^2 / N_T^2.
    pub angle_branch: T,
}

impl<T: Scalar> CoherencePeaks<T> {
    pub fn max(&self) -> T {
        self.range_branch.max(self.angle_branch)
    }
}

/// Evaluates both sidelobe coherence peaks for one assignment. The selection
/// must index the same bin grid the configuration describes.
pub fn sidelobe_coherence_peaks<T: Scalar>(
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
) -> CoherencePeaks<T> {
    debug_assert_eq!(sel.n_subcarriers(), cfg.n_subcarriers());
    let n_t = sel.n_antennas();
    let inv_nt = T::one() / T::from_count(n_t);
    let range_step = T::lit(1.5) / T::from_count(cfg.n_subcarriers());
    let angle_step = T::lit(1.5) * inv_nt;
    let mut range_acc = Complex::new(T::zero(), T::zero());
    let mut angle_acc = Complex::new(T::zero(), T::zero());
    for m in 0..n_t {
        range_acc = range_acc
            + unit_phasor(range_step * T::from_count(sel.subcarrier_for_antenna(m)));
        angle_acc = angle_acc + unit_phasor(angle_step * T::from_count(m));
    }
    CoherencePeaks {
        range_branch: range_acc.norm_sqr() * inv_nt * inv_nt,
        angle_branch: angle_acc.norm_sqr() * inv_nt * inv_nt,
    }
}

/// Mean range-branch sidelobe coherence over independently drawn
/// assignments, for studies that average over the random selection.
pub fn mean_range_branch_coherence<T: Scalar>(
    cfg: &SystemConfig<T>,
    draws: usize,
    seed: u64,
) -> Result<T> {
    if draws == 0 {
        return Err(Error::Domain("averaging needs at least one draw".to_string()));
    }
    let mut acc = T::zero();
    for i in 0..draws {
        let sel = SubcarrierSelection::draw_seeded(cfg, derive_seed(seed, 7, i as u64));
        acc = acc + sidelobe_coherence_peaks(&sel, cfg).range_branch;
    }
    Ok(acc / T::from_count(draws))
}

/// Worst-case average SINR available outside the protected neighborhood,
/// evaluated at the larger sidelobe coherence peak (assigned-bins receiver,
/// unit propagation).
pub fn eavesdropper_sinr_bound<T: Scalar>(
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
) -> T {
    let lambda = sidelobe_coherence_peaks(sel, cfg).max();
    let p = cfg.power_watts();
    let num = p * cfg.beta1_sq() * lambda;
    let den = p * cfg.beta2_sq() * (T::one() - lambda) + cfg.noise_variance();
    num / den
}

fn require_unit_rho<T: Scalar>(cfg: &SystemConfig<T>) -> Result<()> {
    match cfg.rho_policy() {
        RhoPolicy::Unit => Ok(()),
        RhoPolicy::InverseSquare => Err(Error::Domain(
            "secrecy analysis assumes the unit propagation policy".to_string(),
        )),
    }
}

/// Secrecy rate when the strongest unintended receiver sees coherence
/// `lambda`: the aligned rate minus its rate, clamped at zero.
pub fn secrecy_rate_from_eavesdropper_coherence<T: Scalar>(
    lambda: T,
    cfg: &SystemConfig<T>,
) -> Result<T> {
    require_unit_rho(cfg)?;
    let sinr_d = sinr_desired(cfg);
    let sinr_e = sinr_from_coherence(lambda, cfg)?;
    Ok(((T::one() + sinr_d).log2() - (T::one() + sinr_e).log2()).max(T::zero()))
}

/// Header of the secrecy report CSV.
pub const SECRECY_CSV_HEADER: &str = "snr_db,beta1_sq,n_antennas,bandwidth_hz,sr_theoretical,\
sr_numerical,lambda_max1,lambda_max2,delta_theta_deg,delta_r_m";

/// Secrecy summary for one configuration and assignment. `lambda_max1` is
/// the range-branch sidelobe coherence, `lambda_max2` the angle branch.
#[derive(Debug, Clone, Copy)]
pub struct SecrecyRateReport<T: Scalar> {
    pub sr_theoretical: T,
    pub sr_numerical: Option<T>,
    pub lambda_max1: T,
    pub lambda_max2: T,
    pub delta_theta_deg: Option<T>,
    pub delta_range_m: T,
}

impl<T: Scalar> SecrecyRateReport<T> {
    /// One CSV row under `SECRECY_CSV_HEADER`; absent values render empty.
    pub fn csv_row(&self, cfg: &SystemConfig<T>) -> String {
        fn opt<V: core::fmt::Display>(v: &Option<V>) -> String {
            match v {
                Some(x) => format!("{x}"),
                None => String::new(),
            }
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            linear_to_db(cfg.snr_linear()),
            cfg.beta1_sq(),
            cfg.n_antennas(),
            cfg.bandwidth_hz(),
            self.sr_theoretical,
            opt(&self.sr_numerical),
            self.lambda_max1,
            self.lambda_max2,
            opt(&self.delta_theta_deg),
            self.delta_range_m,
        )
    }
}

/// Closed-form secrecy rate: aligned rate minus the rate at the larger
/// sidelobe coherence peak. Requires the unit propagation policy.
pub fn secrecy_rate_theoretical<T: Scalar>(
    desired: &Position<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
) -> Result<SecrecyRateReport<T>> {
    require_unit_rho(cfg)?;
    let peaks = sidelobe_coherence_peaks(sel, cfg);
    let geom = BeamPatternGeometry::new(desired, cfg);
    let sr = secrecy_rate_from_eavesdropper_coherence(peaks.max(), cfg)?;
    Ok(SecrecyRateReport {
        sr_theoretical: sr,
        sr_numerical: None,
        lambda_max1: peaks.range_branch,
        lambda_max2: peaks.angle_branch,
        delta_theta_deg: geom.delta_theta_deg(),
        delta_range_m: geom.delta_range_m(),
    })
}

/// Search grid for the strongest unintended receiver.
#[derive(Debug, Clone)]
pub struct WiretapGrid<T: Scalar> {
    theta_deg: Vec<T>,
    range_m: Vec<T>,
}

impl<T: Scalar> WiretapGrid<T> {
    pub fn new(theta_deg: Vec<T>, range_m: Vec<T>) -> Result<Self> {
        if theta_deg.is_empty() || range_m.is_empty() {
            return Err(Error::EmptyRegion("wiretap grid axes must be nonempty".to_string()));
        }
        Ok(Self { theta_deg, range_m })
    }

    pub fn theta_deg(&self) -> &[T] {
        &self.theta_deg
    }

    pub fn range_m(&self) -> &[T] {
        &self.range_m
    }
}

fn stepped_axis<T: Scalar>(lo: T, hi: T, step: T) -> Vec<T> {
    let mut axis = Vec::new();
    let mut i = 0usize;
    loop {
        let x = lo + step * T::from_count(i);
        if x >= hi {
            break;
        }
        axis.push(x);
        i += 1;
    }
    axis.push(hi);
    axis
}

/// Grid covering all visible angles and ten null widths of range around the
/// aligned position, sampled finely enough to resolve the first sidelobes.
/// Ranges are floored at ten apertures (at least one meter) to stay in the
/// far field.
pub fn default_wiretap_grid<T: Scalar>(
    desired: &Position<T>,
    cfg: &SystemConfig<T>,
) -> WiretapGrid<T> {
    let geom = BeamPatternGeometry::new(desired, cfg);
    let mut theta_step = T::lit(0.25);
    if let Some(dth) = geom.delta_theta_deg() {
        if dth > T::zero() {
            theta_step = theta_step.min(dth / T::lit(8.0));
        }
    }
    let dr = geom.delta_range_m();
    let range_step = (dr / T::lit(10.0)).min(T::lit(2.0));
    let floor = (T::lit(10.0) * cfg.aperture_m()).max(T::one());
    let span = T::lit(10.0) * dr;
    let r_lo = (desired.range_m() - span).max(floor);
    let r_hi = desired.range_m() + span;
    WiretapGrid {
        theta_deg: stepped_axis(T::zero(), T::lit(180.0), theta_step),
        range_m: stepped_axis(r_lo, r_hi, range_step),
    }
}

/// Largest coherence over grid points lying outside the protected
/// neighborhood, which a point leaves only when it is at least one null
/// width away in angle and in range simultaneously.
pub fn max_wiretap_coherence<T: Scalar>(
    desired: &Position<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
    grid: &WiretapGrid<T>,
) -> Result<T> {
    let geom = BeamPatternGeometry::new(desired, cfg);
    let dth = geom.delta_theta_deg().unwrap_or(T::zero());
    let dr = geom.delta_range_m();
    let field = CoherenceField::new(desired, sel, cfg);
    let lambdas = field.eval_grid(grid.theta_deg(), grid.range_m());
    let n_r = grid.range_m().len();
    let mut best: Option<T> = None;
    for (i, &th) in grid.theta_deg().iter().enumerate() {
        if (th - desired.theta_deg()).abs() < dth {
            continue;
        }
        for (j, &r) in grid.range_m().iter().enumerate() {
            if (r - desired.range_m()).abs() < dr {
                continue;
            }
            let v = lambdas[i * n_r + j];
            best = Some(match best {
                Some(b) => b.max(v),
                None => v,
            });
        }
    }
    best.ok_or_else(|| {
        Error::EmptyRegion("every grid point lies inside the protected neighborhood".to_string())
    })
}

/// Secrecy rate with the eavesdropper coherence taken from a grid search
/// instead of the sidelobe formula. The closed-form fields are filled in as
/// well for side-by-side reporting.
pub fn secrecy_rate_numerical<T: Scalar>(
    desired: &Position<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
    grid: &WiretapGrid<T>,
) -> Result<SecrecyRateReport<T>> {
    let mut report = secrecy_rate_theoretical(desired, sel, cfg)?;
    let lambda_star = max_wiretap_coherence(desired, sel, cfg, grid)?;
    report.sr_numerical =
        Some(secrecy_rate_from_eavesdropper_coherence(lambda_star, cfg)?);
    Ok(report)
}
