//! Flat `key = value` scenario configuration: everything needed to run one
//! simulation (deformation, model parameters, initial state, time grid,
//! tolerances).

use crate::deformed_algebra::{DeformationKind, DeformationSpec};
use crate::error::{Error, Result};
use crate::field_states::{build_coherent_state, AtomInit, FieldAmplitude, PhotonDistribution};
use crate::spectrum::ModelParams;

/// Atomic splitting, given either directly or through the scaled detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FreqSpec {
    Omega0(f64),
    DeltaOverOmega(f64),
}

/// One fully validated simulation scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub spec: DeformationSpec,
    pub omega: f64,
    pub freq: FreqSpec,
    pub g: f64,
    pub m: u32,
    pub alpha_sq: f64,
    pub phi: f64,
    pub z_sq: f64,
    pub theta: f64,
    pub gt_max: f64,
    pub n_points: usize,
    pub tail_tol: f64,
    pub oracle_tol: f64,
}

impl Scenario {
    pub fn omega0(&self) -> f64 {
        match self.freq {
            FreqSpec::Omega0(w0) => w0,
            FreqSpec::DeltaOverOmega(d) => (d + self.m as f64) * self.omega,
        }
    }

    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.omega, self.omega0(), self.g, self.m, self.spec)
    }

    pub fn atom(&self) -> Result<AtomInit> {
        AtomInit::from_excited_probability(self.alpha_sq, self.phi)
    }

    pub fn amplitude(&self) -> Result<FieldAmplitude> {
        FieldAmplitude::from_intensity(self.z_sq, self.theta)
    }

    pub fn distribution(&self) -> Result<PhotonDistribution> {
        build_coherent_state(&self.spec, self.amplitude()?, self.tail_tol)
    }

    /// Time grid in units of 1/ω, n_points samples over gt ∈ [0, gt_max].
    pub fn t_grid(&self) -> Vec<f64> {
        let t_max = self.gt_max / self.g;
        if self.n_points == 1 {
            return vec![0.0];
        }
        (0..self.n_points)
            .map(|i| t_max * i as f64 / (self.n_points - 1) as f64)
            .collect()
    }

    /// Canonical config rendering; parses back to an identical scenario.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        match self.spec.kind() {
            DeformationKind::Standard => s.push_str("kind = standard\n"),
            DeformationKind::ArikCoon => {
                s.push_str(&format!("kind = arik_coon\nq = {}\n", self.spec.q()))
            }
            DeformationKind::PensonSolomon => {
                s.push_str(&format!("kind = penson_solomon\nq = {}\n", self.spec.q()))
            }
            DeformationKind::Quesne => {
                s.push_str(&format!("kind = quesne\nq = {}\n", self.spec.q()))
            }
            DeformationKind::Kerr => {
                s.push_str(&format!("kind = kerr\nk = {}\n", self.spec.kerr_strength()))
            }
            DeformationKind::GeneralQ => {
                let (p, q, lambda, mu) = self.spec.general_params();
                s.push_str(&format!(
                    "kind = general_q\nq = {q}\np = {p}\nlambda = {lambda}\nmu = {mu}\n"
                ));
            }
        }
        s.push_str(&format!("omega = {}\n", self.omega));
        match self.freq {
            FreqSpec::Omega0(w0) => s.push_str(&format!("omega0 = {w0}\n")),
            FreqSpec::DeltaOverOmega(d) => s.push_str(&format!("delta_over_omega = {d}\n")),
        }
        s.push_str(&format!("g = {}\n", self.g));
        s.push_str(&format!("m = {}\n", self.m));
        s.push_str(&format!("alpha_sq = {}\n", self.alpha_sq));
        s.push_str(&format!("phi = {}\n", self.phi));
        s.push_str(&format!("z_sq = {}\n", self.z_sq));
        s.push_str(&format!("theta = {}\n", self.theta));
        s.push_str(&format!("gt_max = {}\n", self.gt_max));
        s.push_str(&format!("n_points = {}\n", self.n_points));
        s.push_str(&format!("tail_tol = {}\n", self.tail_tol));
        s.push_str(&format!("oracle_tol = {}\n", self.oracle_tol));
        s
    }
}

struct RawConfig {
    entries: Vec<(String, String, usize)>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(String, String, usize)> = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let eq = line.find('=').ok_or_else(|| {
                Error::Invalid(format!("line {line_no}: expected `key = value`, got `{line}`"))
            })?;
            let key = line[..eq].trim().to_string();
            let value = line[eq + 1..].trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(Error::Invalid(format!(
                    "line {line_no}: empty key or value in `{line}`"
                )));
            }
            if entries.iter().any(|(k, _, _)| *k == key) {
                return Err(Error::Invalid(format!("line {line_no}: duplicate key `{key}`")));
            }
            entries.push((key, value, line_no));
        }
        Ok(Self { entries })
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        let pos = self.entries.iter().position(|(k, _, _)| k == key)?;
        let (_, v, line) = self.entries.remove(pos);
        Some((v, line))
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<f64>().map(Some).map_err(|_| {
                Error::Invalid(format!("line {line}: `{key}` is not a number: `{v}`"))
            }),
        }
    }

    fn require_f64(&mut self, key: &str) -> Result<f64> {
        self.take_f64(key)?
            .ok_or_else(|| Error::Invalid(format!("missing required key `{key}`")))
    }
}

/// Parses and fully validates a scenario document. Unknown keys are hard
/// errors with their line number.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut raw = RawConfig::parse(text)?;

    let (kind, kind_line) = raw
        .take("kind")
        .ok_or_else(|| Error::Invalid("missing required key `kind`".into()))?;
    let spec = match kind.as_str() {
        "standard" => DeformationSpec::standard(),
        "arik_coon" => DeformationSpec::arik_coon(raw.require_f64("q")?)?,
        "penson_solomon" => DeformationSpec::penson_solomon(raw.require_f64("q")?)?,
        "quesne" => DeformationSpec::quesne(raw.require_f64("q")?)?,
        "kerr" => DeformationSpec::kerr(raw.require_f64("k")?)?,
        "general_q" => {
            let p = raw.require_f64("p")?;
            let q = raw.require_f64("q")?;
            let lambda = raw.require_f64("lambda")?;
            let mu = raw.require_f64("mu")?;
            DeformationSpec::general_q(p, q, lambda, mu)?
        }
        other => {
            return Err(Error::Invalid(format!(
                "line {kind_line}: unknown deformation kind `{other}`"
            )))
        }
    };

    let omega = raw.take_f64("omega")?.unwrap_or(1.0);
    let omega0 = raw.take_f64("omega0")?;
    let delta_over_omega = raw.take_f64("delta_over_omega")?;
    let freq = match (omega0, delta_over_omega) {
        (Some(w0), None) => FreqSpec::Omega0(w0),
        (None, Some(d)) => FreqSpec::DeltaOverOmega(d),
        (None, None) => {
            return Err(Error::Invalid(
                "exactly one of `omega0` / `delta_over_omega` is required; neither given".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(Error::Invalid(
                "exactly one of `omega0` / `delta_over_omega` is required; both given".into(),
            ))
        }
    };

    let g = raw.require_f64("g")?;
    let m = {
        let v = raw.require_f64("m")?;
        if v.fract() != 0.0 || v < 1.0 || v > u32::MAX as f64 {
            return Err(Error::Invalid(format!("`m` must be a positive integer, got {v}")));
        }
        v as u32
    };
    let alpha_sq = raw.require_f64("alpha_sq")?;
    let phi = raw.take_f64("phi")?.unwrap_or(0.0);
    let z_sq = raw.require_f64("z_sq")?;
    let theta = raw.take_f64("theta")?.unwrap_or(0.0);
    let gt_max = raw.take_f64("gt_max")?.unwrap_or(25.0);
    let n_points = {
        let v = raw.take_f64("n_points")?.unwrap_or(2000.0);
        if v.fract() != 0.0 || v < 1.0 || v > 1e9 {
            return Err(Error::Invalid(format!("`n_points` must be a positive integer, got {v}")));
        }
        v as usize
    };
    let tail_tol = raw.take_f64("tail_tol")?.unwrap_or(1e-12);
    let oracle_tol = raw.take_f64("oracle_tol")?.unwrap_or(1e-10);

    if let Some((key, _, line)) = raw.entries.first() {
        return Err(Error::Invalid(format!("line {line}: unknown key `{key}`")));
    }

    if !(gt_max > 0.0) {
        return Err(Error::Invalid(format!("`gt_max` must be positive, got {gt_max}")));
    }
    let scenario = Scenario {
        spec,
        omega,
        freq,
        g,
        m,
        alpha_sq,
        phi,
        z_sq,
        theta,
        gt_max,
        n_points,
        tail_tol,
        oracle_tol,
    };
    // surface module-level precondition violations at load time
    scenario.params()?;
    scenario.atom()?;
    let amp = scenario.amplitude()?;
    let radius = spec.convergence_radius();
    if amp.intensity() >= radius {
        return Err(Error::Invalid(format!(
            "{kind} with the given parameters requires z_sq < {radius}, got {z_sq}"
        )));
    }
    if !(tail_tol > 0.0 && oracle_tol > 0.0) {
        return Err(Error::Invalid("tolerances must be positive".into()));
    }
    Ok(scenario)
}
