//! End-to-end self-checks: cheap identities on the precoder and steering
//! model, closed form versus simulation, null depths, and the instantaneous
//! SINR distribution checked against its fitted density.

use crate::analysis::{
    default_wiretap_grid, kolmogorov_distance, pdf_quadrature, sample_fitted_sinr,
    sample_realtime_sinr, secrecy_rate_numerical, sinr_mean, SinrDistributionParams,
};
use crate::config::SystemConfig;
use crate::error::Result;
use crate::precoder::{null_space_projector, phase_alignment};
use crate::rscs::{ScheduleMode, SelectionSchedule, SubcarrierSelection};
use crate::scalar::{Scalar, SimScalar};
use crate::simkit::{derive_seed, CheckStatus, ValidationReport};
use crate::sinr::{
    default_range_axis, default_theta_axis, empirical_sinr, sinr_desired, sinr_from_coherence,
    sinr_general, sinr_map,
};
use crate::steering::{coherence, steering_vector};
use crate::types::Position;
use crate::waveform::{BinNormalization, CombineMode, SpectrumTransform, TimeSeries};
use num_complex::Complex;

fn bounded_check<T: Scalar>(
    report: &mut ValidationReport,
    name: &str,
    measured: T,
    bound: T,
    unit: &str,
) {
    let status = if measured <= bound { CheckStatus::Passed } else { CheckStatus::Failed };
    report.push(name, status, format!("{measured:.3e} {unit} (bound {bound:.0e})"));
}

/// Checks sampled instantaneous SINR values against the fitted density:
/// the fitted sampler must match its own distribution, the density must
/// integrate to one with the right mean, and the raw construction's mean
/// offset is measured and reported.
pub fn validate_sinr_distribution<T: Scalar>(
    params: &SinrDistributionParams<T>,
    n: usize,
    seed: u64,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    let fitted = sample_fitted_sinr(params, n, derive_seed(seed, 31, 0));
    let raw = sample_realtime_sinr(params, n, derive_seed(seed, 31, 1));

    if params.e() == T::zero() {
        let all_zero = fitted.iter().chain(raw.iter()).all(|&x| x == T::zero());
        report.push(
            "degenerate_scale",
            CheckStatus::Recorded,
            "zero scale collapses the distribution; density checks skipped",
        );
        report.push(
            "degenerate_samples_are_zero",
            if all_zero { CheckStatus::Passed } else { CheckStatus::Failed },
            format!("{n} samples from each sampler"),
        );
        return report;
    }

    match kolmogorov_distance(&fitted, params) {
        Ok(d) => bounded_check(&mut report, "fitted_sampler_distance", d, T::lit(0.01), "KS"),
        Err(e) => report.push("fitted_sampler_distance", CheckStatus::Failed, e.to_string()),
    }
    match pdf_quadrature(params, 0, 4096) {
        Ok(mass) => bounded_check(
            &mut report,
            "density_mass",
            (mass - T::one()).abs(),
            T::lit(1e-8),
            "from unit mass",
        ),
        Err(e) => report.push("density_mass", CheckStatus::Failed, e.to_string()),
    }
    let mean = sinr_mean(params);
    match pdf_quadrature(params, 1, 4096) {
        Ok(m1) => bounded_check(
            &mut report,
            "density_mean",
            ((m1 - mean) / mean).abs(),
            T::lit(1e-6),
            "relative",
        ),
        Err(e) => report.push("density_mean", CheckStatus::Failed, e.to_string()),
    }

    let raw_mean = raw.iter().copied().sum::<T>() / T::from_count(raw.len());
    report.push(
        "raw_construction_mean",
        CheckStatus::Recorded,
        format!("sample mean {raw_mean:.4} against closed form {mean:.4}"),
    );
    match kolmogorov_distance(&raw, params) {
        Ok(d) => report.push(
            "raw_construction_distance",
            CheckStatus::Recorded,
            format!("{d:.3e} KS against the fitted density"),
        ),
        Err(e) => report.push("raw_construction_distance", CheckStatus::Failed, e.to_string()),
    }
    report
}

/// Runs the full self-check suite at the reference configuration: precoder
/// identities, closed-form and simulated SINR agreement, map peak and null
/// placement, secrecy-rate consistency, transform round trip, and the
/// distribution checks.
pub fn run_validation<T: SimScalar>(seed: u64) -> Result<ValidationReport> {
    let cfg = SystemConfig::<T>::baseline();
    let desired = Position::from_degrees(T::lit(60.0), T::lit(500.0))?;
    let sel = SubcarrierSelection::draw_seeded(&cfg, derive_seed(seed, 33, 0));
    let mut report = ValidationReport::new();

    // Projector identities.
    let proj = null_space_projector(&desired, &sel, &cfg);
    let a_d = steering_vector(&desired, &sel, &cfg);
    bounded_check(&mut report, "projector_idempotent", proj.idempotency_defect(), T::lit(1e-10), "defect");
    bounded_check(&mut report, "projector_hermitian", proj.hermitian_defect(), T::lit(1e-10), "defect");
    bounded_check(&mut report, "projector_null_space", proj.null_defect(&a_d)?, T::lit(1e-10), "defect");
    let n_t = T::from_count(cfg.n_antennas());
    bounded_check(
        &mut report,
        "projector_trace",
        (proj.trace_re() - (n_t - T::one())).abs(),
        T::lit(1e-9),
        "from antenna count minus one",
    );

    // Steering model.
    let worst_modulus = a_d
        .elements()
        .iter()
        .map(|e| (e.norm_sqr() - T::one()).abs())
        .fold(T::zero(), T::max);
    bounded_check(&mut report, "steering_unit_modulus", worst_modulus, T::lit(1e-12), "defect");
    bounded_check(&mut report, "steering_energy", (a_d.norm_sq() - n_t).abs(), T::lit(1e-9), "from antenna count");

    let bf = phase_alignment(&desired, &sel, &cfg);
    bounded_check(
        &mut report,
        "aligned_gain_energy",
        (bf.gain_to(&a_d)?.norm_sqr() - n_t).abs(),
        T::lit(1e-9),
        "from antenna count",
    );

    // Closed form at the aligned position, and against the coherence form
    // somewhere off the beam.
    let target = sinr_desired(&cfg);
    let on_peak = sinr_general(&desired, &bf, &proj, &sel, &cfg, CombineMode::ActiveOnly)?;
    bounded_check(&mut report, "closed_form_peak", ((on_peak - target) / target).abs(), T::lit(1e-10), "relative");
    let off = Position::from_degrees(T::lit(70.0), T::lit(430.0))?;
    let a_e = steering_vector(&off, &sel, &cfg);
    let general = sinr_general(&off, &bf, &proj, &sel, &cfg, CombineMode::ActiveOnly)?;
    let via_coherence = sinr_from_coherence(coherence(&a_e, &a_d)?, &cfg)?;
    bounded_check(
        &mut report,
        "closed_form_matches_coherence",
        ((general - via_coherence) / via_coherence).abs(),
        T::lit(1e-9),
        "relative",
    );

    // Map peak sits on the aligned position.
    let map = sinr_map(
        &desired,
        &sel,
        &cfg,
        &default_theta_axis(),
        &default_range_axis(),
        CombineMode::ActiveOnly,
    )?;
    let (pt, pr, pv) = map.peak();
    let on_target = pt == T::lit(60.0) && pr == T::lit(500.0);
    report.push(
        "map_peak_location",
        if on_target && ((pv - target) / target).abs() < T::lit(1e-9) {
            CheckStatus::Passed
        } else {
            CheckStatus::Failed
        },
        format!("peak {pv:.4} at ({pt} deg, {pr} m)"),
    );

    // Null placement: the range null is exact for an evenly strided
    // assignment; the angle null holds up to the small per-element frequency
    // offsets, so its depth bound is looser.
    let uniform = SubcarrierSelection::uniform(&cfg);
    let a_u = steering_vector(&desired, &uniform, &cfg);
    let range_null = Position::from_degrees(
        T::lit(60.0),
        T::lit(500.0) + cfg.propagation_speed_m_s() / cfg.bandwidth_hz(),
    )?;
    let lam_range = coherence(&steering_vector(&range_null, &uniform, &cfg), &a_u)?;
    bounded_check(&mut report, "range_null_depth", lam_range, T::lit(1e-12), "coherence");
    let cos_null = desired.cos_theta() - T::one() / (n_t * cfg.angle_phase_slope());
    let angle_null = Position::from_radians(cos_null.acos(), T::lit(500.0))?;
    let lam_angle = coherence(&steering_vector(&angle_null, &sel, &cfg), &a_d)?;
    bounded_check(&mut report, "angle_null_depth", lam_angle, T::lit(1e-3), "coherence");

    // Simulated SINR through the full transmit and receive chain.
    let schedule = SelectionSchedule::new(&cfg, ScheduleMode::PerBlock { block_len: 64 }, derive_seed(seed, 33, 1))?;
    let sim = empirical_sinr(
        &desired,
        &desired,
        &schedule,
        &cfg,
        CombineMode::ActiveOnly,
        400,
        derive_seed(seed, 33, 2),
    )?;
    bounded_check(
        &mut report,
        "simulated_sinr",
        ((sim.sinr - target) / target).abs(),
        T::lit(0.1),
        "relative",
    );

    // Secrecy rate: the wiretap-grid search must stay at or below the
    // sidelobe closed form and within the same order.
    let secrecy = secrecy_rate_numerical(&desired, &sel, &cfg, &default_wiretap_grid(&desired, &cfg))?;
    let sr_num = secrecy.sr_numerical.expect("numerical rate was requested");
    let consistent =
        sr_num <= secrecy.sr_theoretical * (T::one() + T::lit(1e-9)) && sr_num >= secrecy.sr_theoretical * T::lit(0.25);
    report.push(
        "secrecy_rate_consistency",
        if consistent { CheckStatus::Passed } else { CheckStatus::Failed },
        format!("grid search {sr_num:.4} against closed form {:.4}", secrecy.sr_theoretical),
    );

    // Spectral round trip.
    let n = cfg.n_subcarriers();
    let samples: Vec<Complex<T>> = (0..n)
        .map(|q| Complex::from_polar(T::one(), T::from_count(q * 7 % n) / T::from_count(n)))
        .collect();
    let ts = TimeSeries::from_samples(samples, cfg.bandwidth_hz());
    let transform = SpectrumTransform::new(n);
    let back = transform.inverse(&transform.forward(&ts, BinNormalization::PerBin)?, cfg.bandwidth_hz())?;
    let worst = ts
        .samples()
        .iter()
        .zip(back.samples())
        .map(|(x, y)| (x - y).norm())
        .fold(T::zero(), T::max);
    bounded_check(&mut report, "spectral_round_trip", worst, T::lit(1e-9), "per sample");

    // Instantaneous SINR distribution at a representative operating point.
    let params = SinrDistributionParams::new(T::lit(2.0), T::one(), T::one())?;
    for check in validate_sinr_distribution(&params, 100_000, derive_seed(seed, 33, 3)).checks() {
        report.push(check.name.clone(), check.status, check.detail.clone());
    }
    Ok(report)
}
