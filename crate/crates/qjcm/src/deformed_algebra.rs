//! Deformed oscillator algebra.
//!
//! A deformation is fixed by a nonlinearity function f(n) acting on the number
//! operator. The deformed number bracket is {n} = n f²(n) and all derived
//! quantities (deformed factorials, the deformed exponential that normalizes
//! the coherent states) follow from it. Every variant also carries a smooth
//! continuous-in-n extension of {n}, which the revival analysis differentiates.

use crate::error::{Error, Result};

/// Hard cap on the number of terms any series summation may use.
pub const MAX_SERIES_TERMS: usize = 4096;

/// The supported nonlinearity families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeformationKind {
    /// f(n) = 1; the ordinary oscillator.
    Standard,
    /// f(n) = sqrt((1 - q^n) / (n (1 - q))).
    ArikCoon,
    /// f(n) = q^{-(n-1)}, 0 < q <= 1.
    PensonSolomon,
    /// f(n) = sqrt((q^{-n} - 1) / (n (1 - q))).
    Quesne,
    /// f(n) = sqrt(1 + k (n - 1)); Kerr-type intensity dependence.
    Kerr,
    /// Four-parameter family f(n) = sqrt(q^{-(mu + 2 lambda (n-1))} (1-p^n) / (n (1-p))).
    GeneralQ,
}

/// Selects and parameterizes the nonlinearity function.
///
/// Construct through the named constructors, which validate the per-variant
/// parameter constraints; fields not used by a variant are carried as 1.0/0.0
/// placeholders and ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationSpec {
    kind: DeformationKind,
    q: f64,
    k: f64,
    p: f64,
    lambda: f64,
    mu: f64,
}

impl DeformationSpec {
    pub fn standard() -> Self {
        Self { kind: DeformationKind::Standard, q: 1.0, k: 0.0, p: 1.0, lambda: 0.0, mu: 0.0 }
    }

    pub fn arik_coon(q: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidSpec(format!("arik_coon requires q > 0, got q={q}")));
        }
        Ok(Self { kind: DeformationKind::ArikCoon, q, k: 0.0, p: q, lambda: 0.0, mu: 0.0 })
    }

    pub fn penson_solomon(q: f64) -> Result<Self> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidSpec(format!(
                "penson_solomon requires 0 < q <= 1, got q={q}"
            )));
        }
        Ok(Self { kind: DeformationKind::PensonSolomon, q, k: 0.0, p: 1.0, lambda: 1.0, mu: 0.0 })
    }

    pub fn quesne(q: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidSpec(format!("quesne requires q > 0, got q={q}")));
        }
        Ok(Self { kind: DeformationKind::Quesne, q, k: 0.0, p: q, lambda: 0.5, mu: 1.0 })
    }

    pub fn kerr(k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidSpec(format!("kerr requires k > 0, got k={k}")));
        }
        Ok(Self { kind: DeformationKind::Kerr, q: 1.0, k, p: 1.0, lambda: 0.0, mu: 0.0 })
    }

    pub fn general_q(p: f64, q: f64, lambda: f64, mu: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidSpec(format!("general_q requires q > 0, got q={q}")));
        }
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::InvalidSpec(format!("general_q requires p > 0, got p={p}")));
        }
        if !(lambda >= 0.0) || !(mu >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "general_q requires lambda >= 0 and mu >= 0, got lambda={lambda}, mu={mu}"
            )));
        }
        Ok(Self { kind: DeformationKind::GeneralQ, q, k: 0.0, p, lambda, mu })
    }

    pub fn kind(&self) -> DeformationKind {
        self.kind
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn kerr_strength(&self) -> f64 {
        self.k
    }

    pub fn general_params(&self) -> (f64, f64, f64, f64) {
        (self.p, self.q, self.lambda, self.mu)
    }

    /// Nonlinearity function f(n) for n >= 1. By convention f(0) = 1; no
    /// physical quantity depends on it since the bracket {0} vanishes.
    pub fn f_value(&self, n: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        match self.kind {
            DeformationKind::Standard => 1.0,
            DeformationKind::PensonSolomon => self.q.powi(-((n as i32) - 1)),
            DeformationKind::Kerr => (1.0 + self.k * (n as f64 - 1.0)).sqrt(),
            _ => (self.deformed_number(n) / n as f64).sqrt(),
        }
    }

    /// Deformed number bracket {n} = n f²(n), with {0} = 0 exactly.
    pub fn deformed_number(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        self.deformed_number_real(n as f64)
    }

    /// Smooth continuous-in-n extension of the bracket, used for the
    /// derivative-based revival and critical-detuning analysis.
    pub fn deformed_number_real(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        match self.kind {
            DeformationKind::Standard => x,
            DeformationKind::ArikCoon => q_bracket(self.q, x),
            // {x} = x q^{-2(x-1)}
            DeformationKind::PensonSolomon => x * (-2.0 * (x - 1.0) * self.q.ln()).exp(),
            // {x} = (q^{-x} - 1)/(1 - q)
            DeformationKind::Quesne => {
                if self.q == 1.0 {
                    x
                } else {
                    -f64::exp_m1(-x * self.q.ln()) / f64::exp_m1(self.q.ln())
                }
            }
            DeformationKind::Kerr => x * (1.0 + self.k * (x - 1.0)),
            DeformationKind::GeneralQ => {
                let exponent = -(self.mu + 2.0 * self.lambda * (x - 1.0)) * self.q.ln();
                exponent.exp() * q_bracket(self.p, x)
            }
        }
    }

    /// ln({n}!) = sum of ln {k} for k = 1..n; ln({0}!) = 0.
    ///
    /// Kept in log space: the Penson-Solomon factorial overflows f64 well
    /// before n = 100.
    pub fn log_deformed_factorial(&self, n: u64) -> f64 {
        (1..=n).map(|k| self.deformed_number(k).ln()).sum()
    }

    /// Radius of convergence of the deformed exponential series in x = |z|².
    pub fn convergence_radius(&self) -> f64 {
        match self.kind {
            DeformationKind::Standard | DeformationKind::Kerr | DeformationKind::PensonSolomon => {
                f64::INFINITY
            }
            DeformationKind::ArikCoon => {
                if self.q < 1.0 {
                    1.0 / (1.0 - self.q)
                } else {
                    f64::INFINITY
                }
            }
            DeformationKind::Quesne => {
                if self.q > 1.0 {
                    1.0 / (self.q - 1.0)
                } else {
                    f64::INFINITY
                }
            }
            DeformationKind::GeneralQ => {
                // radius = lim {n}; the asymptotic per-term growth factor is
                // p q^{-2 lambda} for p > 1 and q^{-2 lambda} otherwise.
                let rho = self.p.max(1.0) * (-2.0 * self.lambda * self.q.ln()).exp();
                if rho > 1.0 {
                    f64::INFINITY
                } else if rho < 1.0 {
                    0.0
                } else if self.p < 1.0 {
                    (-self.mu * self.q.ln()).exp() / (1.0 - self.p)
                } else if self.p > 1.0 {
                    ((-self.mu + 2.0 * self.lambda) * self.q.ln()).exp() / (self.p - 1.0)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Deformed exponential exp_f(x) = sum over n of x^n / {n}!.
    ///
    /// The sum is truncated once the geometric tail bound drops below
    /// `tail_tol` times the running sum. Returns the value together with the
    /// index of the last included term.
    pub fn deformed_exp(&self, x: f64, tail_tol: f64) -> Result<DeformedExp> {
        if !(x >= 0.0) {
            return Err(Error::Invalid(format!("deformed_exp requires x >= 0, got {x}")));
        }
        if !(tail_tol > 0.0) {
            return Err(Error::Invalid(format!("tail_tol must be positive, got {tail_tol}")));
        }
        let radius = self.convergence_radius();
        if x >= radius {
            return Err(Error::Domain(format!(
                "deformed exponential diverges: x = {x} >= radius {radius}"
            )));
        }
        let mut term = 1.0_f64;
        let mut sum = 1.0_f64;
        for n in 1..=MAX_SERIES_TERMS {
            term *= x / self.deformed_number(n as u64);
            sum += term;
            // accept only once the remaining geometric tail is also controlled
            let next_ratio = x / self.deformed_number(n as u64 + 1);
            if next_ratio < 1.0 && term <= tail_tol * sum {
                return Ok(DeformedExp { value: sum, terms_used: n });
            }
        }
        Err(Error::NonConvergence { max_terms: MAX_SERIES_TERMS })
    }
}

/// Value of the deformed exponential and the truncation index used.
#[derive(Debug, Clone, Copy)]
pub struct DeformedExp {
    pub value: f64,
    pub terms_used: usize,
}

/// (1 - q^x)/(1 - q), evaluated stably for q near 1; equals x at q = 1.
fn q_bracket(q: f64, x: f64) -> f64 {
    if q == 1.0 {
        x
    } else {
        f64::exp_m1(x * q.ln()) / f64::exp_m1(q.ln())
    }
}
