//! Transmit-side precoding: the phase-aligned beamformer for the confidential
//! message, the orthogonal-complement projector that keeps artificial noise
//! away from the intended receiver, and the per-antenna spectral codeword
//! combining both branches.

use ndarray::{Array1, Array2};
use num_complex::Complex;
use rand::Rng;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::rscs::SubcarrierSelection;
use crate::scalar::{unit_phasor, Scalar, SimScalar};
use crate::steering::{psi, steering_vector, SteeringVector};
use crate::types::{Position, Symbol};

/// Constant-envelope beamformer aligned to one position: v = a(desired)/sqrt(N_T),
/// so every antenna contribution adds coherently there.
#[derive(Debug, Clone)]
pub struct Beamformer<T: Scalar> {
    v: Vec<Complex<T>>,
    phase_cycles: Vec<T>,
    theta0: T,
    desired: Position<T>,
}

impl<T: Scalar> Beamformer<T> {
    /// Weight vector (norm 1).
    pub fn v(&self) -> &[Complex<T>] {
        &self.v
    }

    /// Per-antenna transmit phases in cycles (unreduced).
    pub fn phase_cycles(&self) -> &[T] {
        &self.phase_cycles
    }

    /// Unit phasors e^{j phi_m}; equals v scaled back to unit modulus.
    pub fn phasors(&self) -> Vec<Complex<T>> {
        self.phase_cycles.iter().map(|&c| unit_phasor(c)).collect()
    }

    /// Common phase constant (zero; all power quantities are invariant to it).
    pub fn theta0(&self) -> T {
        self.theta0
    }

    pub fn desired(&self) -> &Position<T> {
        &self.desired
    }

    pub fn n_antennas(&self) -> usize {
        self.v.len()
    }

    /// Received amplitude factor a^H(pos) v at the position whose steering
    /// vector is `a`. Exact inner product; equals sqrt(N_T) at the aligned
    /// position.
    pub fn gain_to(&self, a: &SteeringVector<T>) -> Result<Complex<T>> {
        if a.n_antennas() != self.v.len() {
            return Err(Error::Dimension(format!(
                "steering vector of length {} against beamformer of length {}",
                a.n_antennas(),
                self.v.len()
            )));
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (e, w) in a.elements().iter().zip(&self.v) {
            acc = acc + e.conj() * *w;
        }
        Ok(acc)
    }
}

/// Builds the phase-aligned beamformer for `desired`: antenna m transmits
/// with phase 2 pi psi_m(desired), canceling its own propagation phase there.
pub fn phase_alignment<T: Scalar>(
    desired: &Position<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
) -> Beamformer<T> {
    let n_t = sel.n_antennas();
    let inv_sqrt = T::one() / T::from_count(n_t).sqrt();
    let phase_cycles: Vec<T> = (0..n_t).map(|m| psi(m, desired, sel, cfg)).collect();
    let v = phase_cycles.iter().map(|&c| unit_phasor(c).scale(inv_sqrt)).collect();
    Beamformer { v, phase_cycles, theta0: T::zero(), desired: *desired }
}

/// Projector onto the orthogonal complement of the desired steering vector:
/// noise shaped by it reaches every position except the aligned one.
#[derive(Debug, Clone)]
pub struct AnProjector<T: Scalar> {
    t: Array2<Complex<T>>,
    sigma_w_sq: T,
}

impl<T: Scalar> AnProjector<T> {
    /// The projector matrix.
    pub fn matrix(&self) -> &Array2<Complex<T>> {
        &self.t
    }

    /// Variance of each raw noise source entering the projector.
    pub fn sigma_w_sq(&self) -> T {
        self.sigma_w_sq
    }

    pub fn n_antennas(&self) -> usize {
        self.t.nrows()
    }

    /// Projects a raw noise vector: returns T w.
    pub fn apply(&self, w: &Array1<Complex<T>>) -> Result<Array1<Complex<T>>> {
        if w.len() != self.t.nrows() {
            return Err(Error::Dimension(format!(
                "noise vector of length {} against projector of size {}",
                w.len(),
                self.t.nrows()
            )));
        }
        Ok(self.t.dot(w))
    }

    /// Re(a^H T a): the expected shaped-noise power seen by the position with
    /// steering vector `a` (per unit source variance). Real up to rounding
    /// because the projector is Hermitian.
    pub fn quadratic_form(&self, a: &SteeringVector<T>) -> Result<T> {
        if a.n_antennas() != self.t.nrows() {
            return Err(Error::Dimension(format!(
                "steering vector of length {} against projector of size {}",
                a.n_antennas(),
                self.t.nrows()
            )));
        }
        let av = Array1::from_iter(a.elements().iter().copied());
        let ta = self.t.dot(&av);
        let mut acc = T::zero();
        for (e, t) in a.elements().iter().zip(ta.iter()) {
            acc = acc + (e.conj() * *t).re;
        }
        Ok(acc)
    }

    /// Real part of the trace; equals N_T - 1 for a rank-(N_T - 1) projector.
    pub fn trace_re(&self) -> T {
        (0..self.t.nrows()).map(|i| self.t[(i, i)].re).sum()
    }

    /// Frobenius norm of T^2 - T (zero for an exact projector).
    pub fn idempotency_defect(&self) -> T {
        let sq = self.t.dot(&self.t);
        let mut acc = T::zero();
        for (s, t) in sq.iter().zip(self.t.iter()) {
            acc = acc + (*s - *t).norm_sqr();
        }
        acc.sqrt()
    }

    /// Frobenius norm of T - T^H (zero for an exact Hermitian matrix).
    pub fn hermitian_defect(&self) -> T {
        let n = self.t.nrows();
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + (self.t[(i, j)] - self.t[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Euclidean norm of T a (zero when `a` is the vector the projector was
    /// built from).
    pub fn null_defect(&self, a: &SteeringVector<T>) -> Result<T> {
        let av = Array1::from_iter(a.elements().iter().copied());
        if av.len() != self.t.nrows() {
            return Err(Error::Dimension(format!(
                "steering vector of length {} against projector of size {}",
                av.len(),
                self.t.nrows()
            )));
        }
        let ta = self.t.dot(&av);
        Ok(ta.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt())
    }
}

/// Builds T = I - a a^H / N_T from the steering vector of `desired`.
///
/// Idempotent Hermitian with eigenvalues {0 once, 1 with multiplicity
/// N_T - 1}; the zero eigenvector is a(desired) itself.
pub fn null_space_projector<T: Scalar>(
    desired: &Position<T>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
) -> AnProjector<T> {
    let a = steering_vector(desired, sel, cfg);
    let n_t = sel.n_antennas();
    let scale = T::one() / T::from_count(n_t);
    let t = Array2::from_shape_fn((n_t, n_t), |(i, j)| {
        let outer = a.element(i) * a.element(j).conj() * Complex::new(scale, T::zero());
        if i == j {
            Complex::new(T::one() - outer.re, -outer.im)
        } else {
            -outer
        }
    });
    AnProjector { t, sigma_w_sq: T::one() }
}

/// Draws a circularly symmetric complex Gaussian vector CN(0, sigma_sq I):
/// each component has independent real and imaginary parts of variance
/// sigma_sq / 2.
pub fn sample_noise_vector<T: SimScalar, R: Rng + ?Sized>(
    n: usize,
    sigma_sq: T,
    rng: &mut R,
) -> Array1<Complex<T>> {
    let std = (sigma_sq / T::lit(2.0)).sqrt();
    Array1::from_shape_fn(n, |_| {
        Complex::new(T::standard_normal(rng) * std, T::standard_normal(rng) * std)
    })
}

/// Per-antenna spectral coefficients of one symbol:
/// sqrt(P_S) (beta1 v_m x + beta2 an_m), where `an` is the already projected
/// noise vector T w.
pub fn per_antenna_coefficients<T: Scalar>(
    x: &Symbol<T>,
    bf: &Beamformer<T>,
    an: &Array1<Complex<T>>,
    cfg: &SystemConfig<T>,
) -> Result<Array1<Complex<T>>> {
    if an.len() != bf.n_antennas() {
        return Err(Error::Dimension(format!(
            "noise vector of length {} against beamformer of length {}",
            an.len(),
            bf.n_antennas()
        )));
    }
    let root_p = cfg.power_watts().sqrt();
    let b1 = cfg.beta1();
    let b2 = cfg.beta2();
    let xv = x.value();
    Ok(Array1::from_shape_fn(bf.n_antennas(), |m| {
        (bf.v()[m] * xv).scale(root_p * b1) + an[m].scale(root_p * b2)
    }))
}

/// One symbol's transmit codeword over the full subcarrier grid: column m
/// holds antenna m's coefficient in the row of its assigned subcarrier, zero
/// elsewhere; the selection matrix marks those rows.
#[derive(Debug, Clone)]
pub struct Codeword<T: Scalar> {
    s: Array2<Complex<T>>,
    e: Array2<Complex<T>>,
}

impl<T: Scalar> Codeword<T> {
    /// Spectral codeword, n_subcarriers x n_antennas.
    pub fn s(&self) -> &Array2<Complex<T>> {
        &self.s
    }

    /// Selection matrix of unit columns, n_subcarriers x n_antennas.
    pub fn e(&self) -> &Array2<Complex<T>> {
        &self.e
    }

    /// Squared Frobenius norm of the codeword (instantaneous transmit power).
    pub fn frobenius_sq(&self) -> T {
        self.s.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Assembles one symbol's codeword from the data symbol, beamformer, shaped
/// noise source, and assignment.
pub fn assemble_codeword<T: Scalar>(
    x: &Symbol<T>,
    bf: &Beamformer<T>,
    proj: &AnProjector<T>,
    w: &Array1<Complex<T>>,
    sel: &SubcarrierSelection,
    cfg: &SystemConfig<T>,
) -> Result<Codeword<T>> {
    if sel.n_antennas() != bf.n_antennas() {
        return Err(Error::Dimension(format!(
            "selection of {} antennas against beamformer of length {}",
            sel.n_antennas(),
            bf.n_antennas()
        )));
    }
    let an = proj.apply(w)?;
    let coeffs = per_antenna_coefficients(x, bf, &an, cfg)?;
    let n = sel.n_subcarriers();
    let n_t = sel.n_antennas();
    let zero = Complex::new(T::zero(), T::zero());
    let mut s = Array2::from_elem((n, n_t), zero);
    let mut e = Array2::from_elem((n, n_t), zero);
    for m in 0..n_t {
        let row = sel.subcarrier_for_antenna(m);
        s[(row, m)] = coeffs[m];
        e[(row, m)] = Complex::new(T::one(), T::zero());
    }
    Ok(Codeword { s, e })
}
