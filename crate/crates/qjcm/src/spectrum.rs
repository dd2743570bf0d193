//! Dressed-state spectrum of the generalized m-photon deformed model.
//!
//! The Hamiltonian splits into 2×2 blocks spanned by |e,n⟩ and |g,n+m⟩.
//! Each block carries a shifted detuning Δ_{n,m}, a generalized Rabi
//! frequency Ω_{n,m}, and a dressed pair of eigenvalues E_{±,n}.

use crate::deformed_algebra::DeformationSpec;
use crate::error::{Error, Result};

/// Physical parameters of the model: field frequency ω, atomic splitting ω0,
/// coupling g, photons per transition m, and the deformation.
///
/// The detuning Δ = ω0 − mω is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega: f64,
    omega0: f64,
    g: f64,
    m: u32,
    spec: DeformationSpec,
}

impl ModelParams {
    pub fn new(omega: f64, omega0: f64, g: f64, m: u32, spec: DeformationSpec) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::Invalid(format!("omega must be positive, got {omega}")));
        }
        if !omega0.is_finite() {
            return Err(Error::Invalid(format!("omega0 must be finite, got {omega0}")));
        }
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::Invalid(format!("g must be positive, got {g}")));
        }
        if m == 0 {
            return Err(Error::Invalid("m must be a positive integer".into()));
        }
        Ok(Self { omega, omega0, g, m, spec })
    }

    /// Build from the detuning Δ instead of ω0 (ω0 = Δ + mω).
    pub fn from_detuning(omega: f64, delta: f64, g: f64, m: u32, spec: DeformationSpec) -> Result<Self> {
        Self::new(omega, delta + m as f64 * omega, g, m, spec)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn spec(&self) -> &DeformationSpec {
        &self.spec
    }

    /// Δ = ω0 − mω
    pub fn detuning(&self) -> f64 {
        self.omega0 - self.m as f64 * self.omega
    }

    /// Π_{k=n+1..n+m} {k} — the coupled-product ratio {n+m}!/{n}!.
    pub fn bracket_product(&self, n: u64) -> f64 {
        (n + 1..=n + self.m as u64)
            .map(|k| self.spec.deformed_number(k))
            .product()
    }
}

/// Dressed doublet of the (|e,n⟩, |g,n+m⟩) subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedPair {
    pub e_plus: f64,
    pub e_minus: f64,
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub rabi: f64,
    pub delta_nm: f64,
}

/// Δ_{n,m} = Δ − ω({n+m} − {n} − m)
pub fn detuning_shift(params: &ModelParams, n: u64) -> f64 {
    let spec = params.spec();
    let m = params.m() as u64;
    let shift = spec.deformed_number(n + m) - spec.deformed_number(n) - m as f64;
    params.detuning() - params.omega() * shift
}

/// Continuous-in-x extension of Δ_{n,m}, for derivative-based analysis.
pub fn detuning_shift_real(params: &ModelParams, x: f64) -> f64 {
    let spec = params.spec();
    let m = params.m() as f64;
    let shift = spec.deformed_number_real(x + m) - spec.deformed_number_real(x) - m;
    params.detuning() - params.omega() * shift
}

/// Ω_{n,m} = √(Δ_{n,m}² + 4g² Π_{k=n+1..n+m} {k})
pub fn rabi_frequency(params: &ModelParams, n: u64) -> f64 {
    let d = detuning_shift(params, n);
    let g = params.g();
    (d * d + 4.0 * g * g * params.bracket_product(n)).sqrt()
}

/// Continuous-in-x generalized Rabi frequency with the product
/// Π_{k=n+1..n+m}{k} replaced by Π {x+k} of the real extension.
pub fn rabi_frequency_real(params: &ModelParams, x: f64) -> f64 {
    let d = detuning_shift_real(params, x);
    let g = params.g();
    let product: f64 = (1..=params.m() as u64)
        .map(|k| params.spec().deformed_number_real(x + k as f64))
        .product();
    (d * d + 4.0 * g * g * product).sqrt()
}

/// Eigenvalues and mixing amplitudes of the dressed doublet at index n.
///
/// E_{±,n} = (ω/2)({n+m} + {n}) ± Ω_{n,m}/2, with Ω the nonnegative root, so
/// e_plus ≥ e_minus unconditionally.
pub fn dressed_pair(params: &ModelParams, n: u64) -> DressedPair {
    let spec = params.spec();
    let m = params.m() as u64;
    let mean = 0.5 * params.omega() * (spec.deformed_number(n + m) + spec.deformed_number(n));
    let rabi = rabi_frequency(params, n);
    let delta_nm = detuning_shift(params, n);
    // tan(2θ) = 2g√Π / Δ_{n,m}; choose θ ∈ [0, π/2] so sinθ, cosθ ≥ 0 and
    // cos²θ − sin²θ = Δ_{n,m}/Ω
    let cos_theta = (0.5 * (1.0 + delta_nm / rabi)).max(0.0).sqrt();
    let sin_theta = (0.5 * (1.0 - delta_nm / rabi)).max(0.0).sqrt();
    DressedPair {
        e_plus: mean + 0.5 * rabi,
        e_minus: mean - 0.5 * rabi,
        cos_theta,
        sin_theta,
        rabi,
        delta_nm,
    }
}

/// Detuning Δ* at which the doublet gap is minimal, and the gap there.
///
/// The gap E_+ − E_− = Ω_{n,m} is minimized when Δ_{n,m} = 0, i.e. at
/// Δ* = ω({n+m} − {n} − m), where it equals 2g√(Π{k}).
pub fn min_gap(params: &ModelParams, n: u64) -> (f64, f64) {
    let spec = params.spec();
    let m = params.m() as u64;
    let delta_at_min =
        params.omega() * (spec.deformed_number(n + m) - spec.deformed_number(n) - m as f64);
    let gap = 2.0 * params.g() * params.bracket_product(n).sqrt();
    (delta_at_min, gap)
}
