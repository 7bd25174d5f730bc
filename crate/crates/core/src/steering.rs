//! Steering vectors whose element phases depend on both angle and range.
//!
//! Antenna m (counted from the reference element) transmits on its own
//! subcarrier, so the tone it contributes to a receive position carries a
//! phase with two parts: the subcarrier frequency offset times the
//! per-element propagation distance, and the carrier times the per-element
//! path difference. The combined per-antenna phase in cycles is
//!
//! ```text
//! psi_m = eta(m) * delta_f * (R - m d cos theta) / c - kappa * m * cos theta
//! ```
//!
//! with kappa = f_c d / c (exactly one half at half-wavelength spacing, but
//! always computed from the literal configuration values). Because psi_m
//! mixes the range R with the subcarrier assignment eta, two positions only
//! stay coherent when both their angle and their range line up.
//!
//! Sign convention: the stored steering-vector element for antenna m is
//! e^{+j 2 pi psi_m}. The factor a receive position applies to antenna m's
//! tone is the conjugate, e^{-j 2 pi psi_m}, so a received combination is the
//! Hermitian dot of the position's steering vector with the transmit
//! coefficients. This is what makes the phase-aligned beamformer cohere and
//! the noise projector null the physical channel literally.

use num_complex::Complex;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::rscs::SubcarrierSelection;
use crate::scalar::{unit_phasor, Scalar};
use crate::types::Position;

/// Per-antenna phase in cycles (unreduced; reduce only at the complex
/// exponential). Antenna index `m` counts from the reference element at 0.
pub fn psi<T: Scalar>(
    m: usize,
    pos: &Position<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
) -> T {
    let cos = pos.cos_theta();
    let m_t = T::from_count(m);
    let per_element_range = pos.range_m() - m_t * cfg.element_spacing_m() * cos;
    let eta = T::from_count(sel.subcarrier_for_antenna(m));
    eta * cfg.delta_f_hz() * per_element_range / cfg.propagation_speed_m_s()
        - cfg.angle_phase_slope() * m_t * cos
}

/// A steering vector: one unit-modulus element per antenna, tagged with the
/// position and subcarrier assignment that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector<T: Scalar> {
    elements: Vec<Complex<T>>,
    position: Position<T>,
    selection: SubcarrierSelection,
}

impl<T: Scalar> SteeringVector<T> {
    pub fn elements(&self) -> &[Complex<T>] {
        &self.elements
    }

    pub fn element(&self, m: usize) -> Complex<T> {
        self.elements[m]
    }

    pub fn n_antennas(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self) -> &Position<T> {
        &self.position
    }

    pub fn selection(&self) -> &SubcarrierSelection {
        &self.selection
    }

    /// Exact inner product sum_m conj(self_m) * rhs_m.
    pub fn hermitian_dot(&self, rhs: &SteeringVector<T>) -> Result<Complex<T>> {
        if self.n_antennas() != rhs.n_antennas() {
            return Err(Error::Dimension(format!(
                "steering vectors of length {} and {}",
                self.n_antennas(),
                rhs.n_antennas()
            )));
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (s, r) in self.elements.iter().zip(&rhs.elements) {
            acc = acc + s.conj() * r;
        }
        Ok(acc)
    }

    /// Squared norm; equals the antenna count up to rounding.
    pub fn norm_sq(&self) -> T {
        self.elements.iter().map(|e| e.norm_sqr()).sum()
    }
}

/// Builds the steering vector for `pos` under `sel`: element m is
/// e^{+j 2 pi psi_m}.
pub fn steering_vector<T: Scalar>(
    pos: &Position<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
) -> SteeringVector<T> {
    let elements = (0..sel.n_antennas()).map(|m| unit_phasor(psi(m, pos, sel, cfg))).collect();
    SteeringVector { elements, position: *pos, selection: sel.clone() }
}

/// Narrowband two-position correlation sum_m e^{-j 2 pi dphi_m} with
///
/// ```text
/// dphi_m = eta(m) * delta_f * (R_A - R_B) / c - kappa * (cos A - cos B) * m
/// ```
///
/// This drops the per-antenna frequency offset from the angle term (offsets
/// reach at most the bandwidth, far below the carrier), which is what makes
/// the null and sidelobe offsets exact roots-of-unity sums. For a pure range
/// offset (equal angles) it agrees with the exact Hermitian dot to rounding.
pub fn correlation<T: Scalar>(
    pos_a: &Position<T>,
    pos_b: &Position<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
) -> Complex<T> {
    let range_scale = (pos_a.range_m() - pos_b.range_m()) * cfg.delta_f_hz()
        / cfg.propagation_speed_m_s();
    let cos_diff = pos_a.cos_theta() - pos_b.cos_theta();
    let kappa = cfg.angle_phase_slope();
    let mut acc = Complex::new(T::zero(), T::zero());
    for m in 0..sel.n_antennas() {
        let eta = T::from_count(sel.subcarrier_for_antenna(m));
        let dphi = eta * range_scale - kappa * cos_diff * T::from_count(m);
        acc = acc + unit_phasor(-dphi);
    }
    acc
}

/// Normalized squared inner product |a_A^H a_B|^2 / N_T^2 in [0, 1]: the
/// fraction of full coherence two positions retain.
pub fn coherence<T: Scalar>(a: &SteeringVector<T>, b: &SteeringVector<T>) -> Result<T> {
    let n_t = T::from_count(a.n_antennas());
    Ok(a.hermitian_dot(b)?.norm_sqr() / (n_t * n_t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn baseline() -> SystemConfig<f64> {
        SystemConfig::<f64>::baseline()
    }

    fn uniform_sel(cfg: &SystemConfig<f64>) -> SubcarrierSelection {
        SubcarrierSelection::uniform(cfg)
    }

    #[test]
    fn reference_element_phase_has_no_angle_term() {
        let cfg = baseline();
        let pos = Position::from_degrees(60.0, 500.0).unwrap();
        // Antenna 0 on subcarrier 0: both phase terms vanish.
        let sel0 = SubcarrierSelection::new(vec![0, 1], 1024).unwrap();
        assert_eq!(psi(0, &pos, &sel0, &cfg), 0.0);
        // Antenna 0 on subcarrier k: only the range term survives.
        let selk = SubcarrierSelection::new(vec![7, 1], 1024).unwrap();
        let expect = 7.0 * cfg.delta_f_hz() * 500.0 / 3.0e8;
        assert_relative_eq!(psi(0, &pos, &selk, &cfg), expect, max_relative = 1e-15);
    }

    #[test]
    fn phase_matches_brute_substitution() {
        // theta = 60 deg, R = 500 m, antenna 1 on subcarrier 128:
        //   128 * 4882.8125 * (500 - 0.05 * 0.5) / 3e8 - 0.5 * 0.5
        let cfg = baseline();
        let pos = Position::from_degrees(60.0, 500.0).unwrap();
        let sel = uniform_sel(&cfg);
        assert_eq!(sel.subcarrier_for_antenna(1), 128);
        assert_relative_eq!(psi(1, &pos, &sel, &cfg), 0.7916145833333333, max_relative = 1e-12);
    }

    #[test]
    fn self_inner_product_is_antenna_count() {
        let cfg = baseline();
        let pos = Position::from_degrees(60.0, 500.0).unwrap();
        let a = steering_vector(&pos, &uniform_sel(&cfg), &cfg);
        let d = a.hermitian_dot(&a).unwrap();
        assert_relative_eq!(d.re, 8.0, max_relative = 1e-14);
        assert_relative_eq!(d.im, 0.0, epsilon = 1e-13);
        assert_relative_eq!(a.norm_sq(), 8.0, max_relative = 1e-14);
        assert_relative_eq!(coherence(&a, &a).unwrap(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn coincident_positions_correlate_fully() {
        let cfg = baseline();
        let pos = Position::from_degrees(60.0, 500.0).unwrap();
        let c = correlation(&pos, &pos, &uniform_sel(&cfg), &cfg);
        assert_eq!(c.re, 8.0);
        assert_eq!(c.im, 0.0);
    }

    #[test]
    fn angle_offset_of_two_over_ntx_nulls_any_selection() {
        // cos difference 2/N_T makes the angle phases step through the N_T-th
        // roots of unity, independent of the subcarrier assignment.
        let cfg = baseline();
        let d = Position::from_degrees(60.0, 500.0).unwrap();
        let e = Position::from_radians((0.75f64).acos(), 500.0).unwrap();
        for seed in [3u64, 4, 5] {
            let sel = SubcarrierSelection::draw_seeded(&cfg, seed);
            let c = correlation(&e, &d, &sel, &cfg);
            assert!(c.norm() < 1e-9 * 8.0, "|corr| = {} for seed {seed}", c.norm());
        }
    }

    #[test]
    fn range_offset_of_c_over_bandwidth_nulls_uniform_selection() {
        // Evenly strided subcarriers step the range phases through roots of
        // unity when the range offset is c/B.
        let cfg = baseline();
        let sel = uniform_sel(&cfg);
        let d = Position::from_degrees(60.0, 500.0).unwrap();
        let e = Position::from_degrees(60.0, 560.0).unwrap();
        let c = correlation(&e, &d, &sel, &cfg);
        assert!(c.norm() < 1e-9 * 8.0, "|corr| = {}", c.norm());
    }

    #[test]
    fn pure_range_offset_matches_exact_inner_product() {
        let cfg = baseline();
        let sel = SubcarrierSelection::draw_seeded(&cfg, 11);
        let d = Position::from_degrees(60.0, 500.0).unwrap();
        let e = Position::from_degrees(60.0, 533.25).unwrap();
        let approx_form = correlation(&e, &d, &sel, &cfg);
        let exact = steering_vector(&e, &sel, &cfg)
            .hermitian_dot(&steering_vector(&d, &sel, &cfg))
            .unwrap();
        assert_relative_eq!(approx_form.re, exact.re, epsilon = 1e-9);
        assert_relative_eq!(approx_form.im, exact.im, epsilon = 1e-9);
    }

    #[test]
    fn mismatched_lengths_error() {
        let cfg8 = baseline();
        let cfg4 = SystemConfig::<f64>::builder().n_antennas(4).build().unwrap();
        let pos = Position::from_degrees(60.0, 500.0).unwrap();
        let a = steering_vector(&pos, &uniform_sel(&cfg8), &cfg8);
        let b = steering_vector(&pos, &SubcarrierSelection::uniform(&cfg4), &cfg4);
        assert!(a.hermitian_dot(&b).is_err());
    }

    proptest! {
        #[test]
        fn elements_stay_unit_modulus(
            theta in 1.0f64..179.0,
            range in 1.0f64..5000.0,
            seed in any::<u64>(),
        ) {
            let cfg = baseline();
            let sel = SubcarrierSelection::draw_seeded(&cfg, seed);
            let pos = Position::from_degrees(theta, range).unwrap();
            let a = steering_vector(&pos, &sel, &cfg);
            for e in a.elements() {
                prop_assert!((e.norm() - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn correlation_is_bounded_and_conjugate_symmetric(
            ta in 1.0f64..179.0,
            ra in 1.0f64..5000.0,
            tb in 1.0f64..179.0,
            rb in 1.0f64..5000.0,
            seed in any::<u64>(),
        ) {
            let cfg = baseline();
            let sel = SubcarrierSelection::draw_seeded(&cfg, seed);
            let a = Position::from_degrees(ta, ra).unwrap();
            let b = Position::from_degrees(tb, rb).unwrap();
            let ab = correlation(&a, &b, &sel, &cfg);
            let ba = correlation(&b, &a, &sel, &cfg);
            prop_assert!(ab.norm() <= 8.0 * (1.0 + 1e-12));
            prop_assert!((ab - ba.conj()).norm() < 1e-10);
        }

        #[test]
        fn coherence_lies_in_unit_interval(
            ta in 1.0f64..179.0,
            ra in 1.0f64..5000.0,
            seed in any::<u64>(),
        ) {
            let cfg = baseline();
            let sel = SubcarrierSelection::draw_seeded(&cfg, seed);
            let d = Position::from_degrees(60.0, 500.0).unwrap();
            let e = Position::from_degrees(ta, ra).unwrap();
            let ad = steering_vector(&d, &sel, &cfg);
            let ae = steering_vector(&e, &sel, &cfg);
            let lam = coherence(&ae, &ad).unwrap();
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&lam));
        }
    }
}
