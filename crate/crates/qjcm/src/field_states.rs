//! Initial field and atom states.
//!
//! The field starts in a deformed coherent state: the eigenstate of the
//! deformed annihilation operator, whose photon-number weights follow the
//! deformed Poisson law |Q_n|² ∝ |z|^{2n} / {n}!. States are carried as
//! truncated, renormalized coefficient vectors.

use num_complex::Complex64;

use crate::deformed_algebra::{DeformationSpec, MAX_SERIES_TERMS};
use crate::error::{Error, Result};

/// Complex field amplitude z = |z| e^{iθ}, phase stored reduced to (-π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldAmplitude {
    magnitude: f64,
    phase: f64,
}

impl FieldAmplitude {
    pub fn new(magnitude: f64, phase: f64) -> Result<Self> {
        if !(magnitude >= 0.0) || !magnitude.is_finite() {
            return Err(Error::Invalid(format!("|z| must be nonnegative, got {magnitude}")));
        }
        if !phase.is_finite() {
            return Err(Error::Invalid(format!("phase must be finite, got {phase}")));
        }
        Ok(Self { magnitude, phase: reduce_phase(phase) })
    }

    /// Build from the intensity |z|² and phase.
    pub fn from_intensity(z_sq: f64, phase: f64) -> Result<Self> {
        if !(z_sq >= 0.0) {
            return Err(Error::Invalid(format!("|z|^2 must be nonnegative, got {z_sq}")));
        }
        Self::new(z_sq.sqrt(), phase)
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// |z|²
    pub fn intensity(&self) -> f64 {
        self.magnitude * self.magnitude
    }
}

fn reduce_phase(phase: f64) -> f64 {
    use std::f64::consts::PI;
    let r = phase.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Initial atomic state α e^{iφ}|e⟩ + β|g⟩ with α² + β² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomInit {
    alpha: f64,
    beta: f64,
    phi: f64,
}

impl AtomInit {
    pub fn new(alpha: f64, beta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return Err(Error::Invalid(format!(
                "alpha and beta must lie in [0, 1], got alpha={alpha}, beta={beta}"
            )));
        }
        let norm = alpha * alpha + beta * beta;
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!("alpha^2 + beta^2 = {norm}, must be 1")));
        }
        Ok(Self { alpha, beta, phi })
    }

    /// Atom fully excited.
    pub fn excited() -> Self {
        Self { alpha: 1.0, beta: 0.0, phi: 0.0 }
    }

    /// Atom fully de-excited.
    pub fn ground() -> Self {
        Self { alpha: 0.0, beta: 1.0, phi: 0.0 }
    }

    /// Build from the excited-state probability α².
    pub fn from_excited_probability(alpha_sq: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha_sq) {
            return Err(Error::Invalid(format!("alpha^2 must lie in [0, 1], got {alpha_sq}")));
        }
        Self::new(alpha_sq.sqrt(), (1.0 - alpha_sq).sqrt(), phi)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Truncated photon-number amplitudes Q_0..Q_{n_max} of the initial field.
#[derive(Debug, Clone)]
pub struct PhotonDistribution {
    coefficients: Vec<Complex64>,
    spec: DeformationSpec,
    amplitude: FieldAmplitude,
    tail_mass: f64,
}

impl PhotonDistribution {
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Q_n; zero beyond the truncation index.
    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.coefficients.get(n).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// |Q_n|²
    pub fn probability(&self, n: usize) -> f64 {
        self.coefficient(n).norm_sqr()
    }

    /// Largest retained photon number.
    pub fn n_max(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn spec(&self) -> &DeformationSpec {
        &self.spec
    }

    pub fn amplitude(&self) -> FieldAmplitude {
        self.amplitude
    }

    /// Probability discarded by the truncation, before renormalization.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Mean photon number of the truncated distribution.
    pub fn mean_photon_number(&self) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(n, q)| n as f64 * q.norm_sqr())
            .sum()
    }
}

/// Unnormalized weights p_n ∝ |z|^{2n}/{n}! summed until the geometric tail
/// bound falls below `rel_tol` times the running sum. Returns the weights and
/// the tail bound.
fn weight_profile(spec: &DeformationSpec, x: f64, rel_tol: f64) -> Result<(Vec<f64>, f64)> {
    let radius = spec.convergence_radius();
    if x >= radius {
        return Err(Error::Domain(format!(
            "|z|^2 = {x} outside the coherent-state convergence domain (requires |z|^2 < {radius})"
        )));
    }
    let mut weights = Vec::with_capacity(64);
    weights.push(1.0);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    if x == 0.0 {
        return Ok((weights, 0.0));
    }
    for n in 1..=MAX_SERIES_TERMS {
        term *= x / spec.deformed_number(n as u64);
        weights.push(term);
        sum += term;
        let next_ratio = x / spec.deformed_number(n as u64 + 1);
        if next_ratio < 1.0 {
            let tail = term * next_ratio / (1.0 - next_ratio);
            if tail <= rel_tol * sum {
                return Ok((weights, tail));
            }
        }
    }
    Err(Error::NonConvergence { max_terms: MAX_SERIES_TERMS })
}

/// Builds the deformed coherent state for `spec` as a truncated coefficient
/// vector, discarding at most `tail_tol` of the total probability and
/// renormalizing the remainder.
pub fn build_coherent_state(
    spec: &DeformationSpec,
    amplitude: FieldAmplitude,
    tail_tol: f64,
) -> Result<PhotonDistribution> {
    if !(tail_tol > 0.0) {
        return Err(Error::Invalid(format!("tail_tol must be positive, got {tail_tol}")));
    }
    let x = amplitude.intensity();
    // resolve the profile well below the requested truncation budget
    let (weights, tail_bound) = weight_profile(spec, x, (tail_tol * 1e-4).max(1e-18))?;
    let total: f64 = weights.iter().sum::<f64>() + tail_bound;

    // peel trailing weights while the discarded probability stays within budget
    let mut discarded = tail_bound;
    let mut n_keep = weights.len();
    while n_keep > 1 && discarded + weights[n_keep - 1] <= tail_tol * total {
        discarded += weights[n_keep - 1];
        n_keep -= 1;
    }
    let kept: f64 = weights[..n_keep].iter().sum();
    let theta = amplitude.phase();
    let coefficients = weights[..n_keep]
        .iter()
        .enumerate()
        .map(|(n, &w)| Complex64::from_polar((w / kept).sqrt(), n as f64 * theta))
        .collect();
    Ok(PhotonDistribution {
        coefficients,
        spec: *spec,
        amplitude,
        tail_mass: discarded / total,
    })
}

/// Mean photon number n̄ of the deformed Poisson distribution at intensity x,
/// summed to machine precision (no truncation step, so the result is smooth
/// in x and safe to difference).
fn mean_of_intensity(spec: &DeformationSpec, x: f64) -> Result<f64> {
    let (weights, _) = weight_profile(spec, x, 1e-17)?;
    let sum: f64 = weights.iter().sum();
    let first: f64 = weights.iter().enumerate().map(|(n, w)| n as f64 * w).sum();
    Ok(first / sum)
}

/// Width δn = |z| sqrt(∂n̄/∂|z|²) of the initial distribution.
///
/// The derivative is a central difference in x = |z|² with step
/// 1e-6·max(1, x), halved toward the convergence boundary with a one-sided
/// fallback when the boundary is too close.
pub fn distribution_width(
    spec: &DeformationSpec,
    amplitude: FieldAmplitude,
    tail_tol: f64,
) -> Result<f64> {
    if !(tail_tol > 0.0) {
        return Err(Error::Invalid(format!("tail_tol must be positive, got {tail_tol}")));
    }
    let x = amplitude.intensity();
    let radius = spec.convergence_radius();
    if x >= radius {
        return Err(Error::Domain(format!(
            "|z|^2 = {x} outside the coherent-state convergence domain (requires |z|^2 < {radius})"
        )));
    }
    let mut h = 1e-6 * x.max(1.0);
    while x + h >= radius && h > 1e-12 {
        h *= 0.5;
    }
    let derivative = if x + h < radius && x - h >= 0.0 {
        (mean_of_intensity(spec, x + h)? - mean_of_intensity(spec, x - h)?) / (2.0 * h)
    } else if x - h >= 0.0 {
        (mean_of_intensity(spec, x)? - mean_of_intensity(spec, x - h)?) / h
    } else {
        (mean_of_intensity(spec, x + h)? - mean_of_intensity(spec, x)?) / h
    };
    Ok(amplitude.magnitude() * derivative.max(0.0).sqrt())
}
