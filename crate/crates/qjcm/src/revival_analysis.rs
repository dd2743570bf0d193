//! Collapse/revival timescales, critical detuning, and the second-order
//! expansion diagnostics behind the regular/irregular revival regimes.
//!
//! All estimators treat the two-photon Rabi frequency
//! Ω(x) = √(Δ_{x,2}² + 4g²{x+1}{x+2}) as a continuous function of the photon
//! number through the real extension of {n}.

use crate::error::{Error, Result};
use crate::field_states::{distribution_width, PhotonDistribution};
use crate::spectrum::{rabi_frequency_real, ModelParams};

/// Revival-structure summary of one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisReport {
    pub n_bar: f64,
    pub delta_n: f64,
    pub t_r_diff: f64,
    pub t_r_deriv: f64,
    pub t_c: f64,
    pub delta_c_over_omega: f64,
    pub omega2: f64,
    pub regularity_residual: f64,
}

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn require_two_photon(params: &ModelParams) -> Result<()> {
    if params.m() != 2 {
        return Err(Error::Invalid(format!(
            "revival analysis is defined for the two-photon case (m = 2), got m = {}",
            params.m()
        )));
    }
    Ok(())
}

/// dΩ/dx at x, central difference with step 1e-5.
fn rabi_slope(params: &ModelParams, x: f64) -> f64 {
    let h = 1e-5;
    (rabi_frequency_real(params, x + h) - rabi_frequency_real(params, x - h)) / (2.0 * h)
}

/// Revival time from the integer-difference form (2π phase slip between
/// adjacent doublets) and from the derivative form, both at the distribution
/// mean n̄.
pub fn revival_time(params: &ModelParams, dist: &PhotonDistribution) -> Result<(f64, f64)> {
    require_two_photon(params)?;
    if params.spec() != dist.spec() {
        return Err(Error::SpecMismatch);
    }
    let n_bar = dist.mean_photon_number();
    let diff = rabi_frequency_real(params, n_bar + 1.0) - rabi_frequency_real(params, n_bar);
    if diff.abs() < 1e-12 {
        return Err(Error::DegenerateFrequency);
    }
    let slope = rabi_slope(params, n_bar);
    if slope.abs() < 1e-12 {
        return Err(Error::DegenerateFrequency);
    }
    Ok((TWO_PI / diff.abs(), TWO_PI / slope.abs()))
}

/// t_c = t_r / (4π δn)
pub fn collapse_time(t_r: f64, delta_n: f64) -> Result<f64> {
    if !(t_r > 0.0) {
        return Err(Error::Invalid(format!("t_r must be positive, got {t_r}")));
    }
    if !(delta_n > 0.0) {
        return Err(Error::Invalid(format!("delta_n must be positive, got {delta_n}")));
    }
    Ok(t_r / (4.0 * std::f64::consts::PI * delta_n))
}

/// Detuning Δ_c making Ω(x) stationary at x = n̄.
///
/// Ω² is quadratic in Δ, so the stationarity condition dΩ²/dx = 0 at fixed
/// x = n̄ is linear in Δ:
///   Δ_c = ω(A(n̄) − 2) + (2g²/ω)·C₂'(n̄)/A'(n̄),
/// with A(x) = {x+2} − {x} and C₂(x) = {x+1}{x+2}. The result is certified
/// by re-evaluating |dΩ/dx| at n̄ under the returned detuning.
pub fn critical_detuning(params: &ModelParams, n_bar: f64) -> Result<f64> {
    require_two_photon(params)?;
    let spec = params.spec();
    let omega = params.omega();
    let g = params.g();
    let h = 1e-5;
    let a = |x: f64| spec.deformed_number_real(x + 2.0) - spec.deformed_number_real(x);
    let c2 = |x: f64| spec.deformed_number_real(x + 1.0) * spec.deformed_number_real(x + 2.0);
    let a_prime = (a(n_bar + h) - a(n_bar - h)) / (2.0 * h);
    let c2_prime = (c2(n_bar + h) - c2(n_bar - h)) / (2.0 * h);
    if a_prime.abs() < 1e-10 * a(n_bar).abs().max(1.0) {
        return Err(Error::Invalid(
            "critical detuning requires a genuinely deformed model: d({n+2}-{n})/dn vanishes (f(n) = 1)"
                .into(),
        ));
    }
    let delta_c = omega * (a(n_bar) - 2.0) + 2.0 * g * g / omega * c2_prime / a_prime;
    if delta_c.abs() > 50.0 * omega {
        return Err(Error::NoStationaryPoint(format!(
            "stationary detuning {delta_c} outside the scanned range [-50, 50] x omega"
        )));
    }
    // stationarity certificate
    let tuned = ModelParams::from_detuning(omega, delta_c, g, 2, *spec)?;
    let slope = rabi_slope(&tuned, n_bar);
    let scale = rabi_frequency_real(&tuned, n_bar);
    if slope.abs() >= 1e-8 * scale {
        return Err(Error::NoStationaryPoint(format!(
            "stationarity certificate failed: |dOmega/dx| = {} at Omega = {scale}",
            slope.abs()
        )));
    }
    Ok(delta_c)
}

/// Second-order expansion coefficient ½ Ω''(n̄) and the relative residual of
/// the quadratic model over x ∈ [n̄ − 2δn, n̄ + 2δn].
pub fn expansion_diagnostics(
    params: &ModelParams,
    n_bar: f64,
    delta_n: f64,
) -> Result<(f64, f64)> {
    require_two_photon(params)?;
    let h = 1e-3 * n_bar.max(1.0);
    let f = |x: f64| rabi_frequency_real(params, x);
    let omega2 = 0.5 * (f(n_bar + h) - 2.0 * f(n_bar) + f(n_bar - h)) / (h * h);
    let center = f(n_bar);
    let lo = (n_bar - 2.0 * delta_n).max(0.0);
    let hi = n_bar + 2.0 * delta_n;
    let samples = 400;
    let mut residual = 0.0_f64;
    for i in 0..=samples {
        let x = lo + (hi - lo) * i as f64 / samples as f64;
        let dev = (f(x) - center - (x - n_bar) * (x - n_bar) * omega2).abs() / center;
        residual = residual.max(dev);
    }
    Ok((omega2, residual))
}

/// Full report for a scenario: distribution statistics, both revival-time
/// estimators, the collapse time paired with the derivative estimator, the
/// critical detuning (NaN when undefined for the variant), and the quadratic
/// expansion diagnostics at the scenario's own detuning.
pub fn analyze(params: &ModelParams, dist: &PhotonDistribution, tail_tol: f64) -> Result<AnalysisReport> {
    require_two_photon(params)?;
    let n_bar = dist.mean_photon_number();
    let delta_n = distribution_width(params.spec(), dist.amplitude(), tail_tol)?;
    let (t_r_diff, t_r_deriv) = revival_time(params, dist)?;
    let t_c = collapse_time(t_r_deriv, delta_n)?;
    let delta_c_over_omega = match critical_detuning(params, n_bar) {
        Ok(dc) => dc / params.omega(),
        Err(Error::Invalid(_)) => f64::NAN,
        Err(e) => return Err(e),
    };
    let (omega2, regularity_residual) = expansion_diagnostics(params, n_bar, delta_n)?;
    Ok(AnalysisReport {
        n_bar,
        delta_n,
        t_r_diff,
        t_r_deriv,
        t_c,
        delta_c_over_omega,
        omega2,
        regularity_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformed_algebra::DeformationSpec;
    use crate::field_states::{build_coherent_state, FieldAmplitude};

    fn dist(spec: &DeformationSpec, z_sq: f64) -> PhotonDistribution {
        let amp = FieldAmplitude::from_intensity(z_sq, 0.0).unwrap();
        build_coherent_state(spec, amp, 1e-12).unwrap()
    }

    fn params(spec: DeformationSpec, delta: f64) -> ModelParams {
        ModelParams::from_detuning(1.0, delta, 0.1, 2, spec).unwrap()
    }

    #[test]
    fn nondeformed_revival_matches_closed_form() {
        let spec = DeformationSpec::standard();
        let p = params(spec, 0.0);
        let d = dist(&spec, 9.0);
        let (t_diff, t_deriv) = revival_time(&p, &d).unwrap();
        let n_bar = d.mean_photon_number();
        let closed = TWO_PI * ((n_bar + 1.0) * (n_bar + 2.0)).sqrt() / (0.1 * (2.0 * n_bar + 3.0));
        assert!((t_deriv - closed).abs() < 1e-6 * closed, "{t_deriv} vs {closed}");
        assert!((t_deriv - 31.3803).abs() < 1e-3 * 31.3803);
        // the two estimators agree within 2% for this smooth frequency
        assert!((t_diff - t_deriv).abs() < 0.02 * t_deriv);
    }

    #[test]
    fn collapse_time_examples() {
        let t_c = collapse_time(31.3803, 3.0).unwrap();
        assert!((t_c - 0.8323).abs() < 1e-3);
        let t_c = collapse_time(4.0 * std::f64::consts::PI, 1.0).unwrap();
        assert!((t_c - 1.0).abs() < 1e-15);
        assert!(collapse_time(-1.0, 1.0).is_err());
        assert!(collapse_time(1.0, 0.0).is_err());
    }

    #[test]
    fn critical_detuning_caption_values() {
        let p = params(DeformationSpec::arik_coon(0.9).unwrap(), 0.0);
        let d = dist(p.spec(), 5.0);
        let dc = critical_detuning(&p, d.mean_photon_number()).unwrap();
        assert!((dc - (-2.1737)).abs() < 1e-3 * 2.1737, "dc={dc}");

        let p = params(DeformationSpec::quesne(0.9).unwrap(), 0.0);
        let d = dist(p.spec(), 3.0);
        let dc = critical_detuning(&p, d.mean_photon_number()).unwrap();
        assert!((dc - 2.0177).abs() < 1e-3 * 2.0177, "dc={dc}");
    }

    #[test]
    fn critical_detuning_rejects_undeformed() {
        let p = params(DeformationSpec::standard(), 0.0);
        assert!(matches!(critical_detuning(&p, 9.0), Err(Error::Invalid(_))));
    }

    #[test]
    fn stationarity_certificate() {
        for (spec, z_sq) in [
            (DeformationSpec::arik_coon(0.9).unwrap(), 5.0),
            (DeformationSpec::arik_coon(1.1).unwrap(), 2.5),
            (DeformationSpec::quesne(1.1).unwrap(), 4.0),
            (DeformationSpec::penson_solomon(0.95).unwrap(), 2.5),
        ] {
            let p = params(spec, 0.0);
            let d = dist(&spec, z_sq);
            let n_bar = d.mean_photon_number();
            let dc = critical_detuning(&p, n_bar).unwrap();
            let tuned = ModelParams::from_detuning(1.0, dc, 0.1, 2, spec).unwrap();
            let slope = rabi_slope(&tuned, n_bar);
            assert!(slope.abs() < 1e-8 * rabi_frequency_real(&tuned, n_bar), "{spec:?}");
        }
    }

    #[test]
    fn scale_covariance() {
        let spec = DeformationSpec::arik_coon(0.9).unwrap();
        let d = dist(&spec, 5.0);
        let n_bar = d.mean_photon_number();
        let s = 3.0;
        let p1 = ModelParams::from_detuning(1.0, 0.2, 0.1, 2, spec).unwrap();
        let p2 = ModelParams::from_detuning(s, 0.2 * s, 0.1 * s, 2, spec).unwrap();
        let (a1, b1) = revival_time(&p1, &d).unwrap();
        let (a2, b2) = revival_time(&p2, &d).unwrap();
        assert!((a2 - a1 / s).abs() < 1e-9 * a1);
        assert!((b2 - b1 / s).abs() < 1e-9 * b1);
        let dc1 = critical_detuning(&p1, n_bar).unwrap();
        let dc2 = critical_detuning(&p2, n_bar).unwrap();
        assert!((dc2 - s * dc1).abs() < 1e-9 * dc1.abs());
    }

    #[test]
    fn flat_frequency_has_no_derivative_timescale() {
        // at the critical detuning the slope at n_bar vanishes; the
        // derivative estimator either refuses or blows up far beyond the
        // resonant timescale
        let spec = DeformationSpec::arik_coon(0.9).unwrap();
        let d = dist(&spec, 5.0);
        let n_bar = d.mean_photon_number();
        let dc = critical_detuning(&params(spec, 0.0), n_bar).unwrap();
        let tuned = ModelParams::from_detuning(1.0, dc, 0.1, 2, spec).unwrap();
        let (_, t_resonant) = revival_time(&params(spec, 0.0), &d).unwrap();
        match revival_time(&tuned, &d) {
            Err(Error::DegenerateFrequency) => {}
            Ok((_, t_deriv)) => assert!(t_deriv > 100.0 * t_resonant, "{t_deriv}"),
            Err(e) => panic!("unexpected error: {e}"),
        }
    }

    #[test]
    fn regularity_improves_at_critical_detuning() {
        let spec = DeformationSpec::arik_coon(0.9).unwrap();
        let d = dist(&spec, 5.0);
        let n_bar = d.mean_photon_number();
        let amp = d.amplitude();
        let delta_n = distribution_width(&spec, amp, 1e-12).unwrap();
        let dc = critical_detuning(&params(spec, 0.0), n_bar).unwrap();
        let (_, res_resonant) = expansion_diagnostics(&params(spec, 0.0), n_bar, delta_n).unwrap();
        let (_, res_tuned) =
            expansion_diagnostics(&params(spec, dc), n_bar, delta_n).unwrap();
        assert!(res_tuned < res_resonant, "{res_tuned} vs {res_resonant}");
    }

    #[test]
    fn analyze_assembles_consistently() {
        let spec = DeformationSpec::quesne(0.9).unwrap();
        let p = params(spec, 0.0);
        let d = dist(&spec, 9.0);
        let r = analyze(&p, &d, 1e-12).unwrap();
        assert!((r.t_c - r.t_r_deriv / (4.0 * std::f64::consts::PI * r.delta_n)).abs() < 1e-12);
        assert!(r.t_r_diff > 0.0 && r.t_r_deriv > 0.0);
        assert!(r.delta_c_over_omega.is_finite());
        // standard spec reports NaN for the undefined critical detuning
        let p = params(DeformationSpec::standard(), 0.0);
        let d = dist(&DeformationSpec::standard(), 9.0);
        let r = analyze(&p, &d, 1e-12).unwrap();
        assert!(r.delta_c_over_omega.is_nan());
    }

    #[test]
    fn rejects_single_photon_case() {
        let spec = DeformationSpec::arik_coon(0.9).unwrap();
        let p = ModelParams::from_detuning(1.0, 0.0, 0.1, 1, spec).unwrap();
        let d = dist(&spec, 5.0);
        assert!(revival_time(&p, &d).is_err());
        assert!(critical_detuning(&p, 5.0).is_err());
    }
}
