//! The run configuration, read from TOML.
//!
//! ```toml
//! [medium]
//! n_atoms = 1000
//! volume = 1000.0
//! mass = 1.0
//! # hbar = 1.0
//! # c = 1.0
//!
//! [[channel]]
//! mu = 1.0
//! kappa = 1.0
//! gamma = 0.3
//!
//! [fcurve]
//! alpha = 0.5
//! tau = { from = 0.5005, to = 20.0, points = 200, spacing = "log" }
//! ```
//!
//! Channels come either from `[[channel]]` entries or from a `[potential]`
//! pole list, never both. Unknown keys are rejected.

use std::path::PathBuf;

use auxtherm_core::potentials::{extract_channels, ChannelOverride};
use auxtherm_core::{
    FieldChannel, KappaPolicy, Medium, PoleTerm, PotentialModel, Prefactor, QuadratureSpec,
};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub medium: Option<MediumConfig>,
    #[serde(default)]
    pub channel: Vec<ChannelConfig>,
    pub potential: Option<PotentialConfig>,
    pub fcurve: Option<FcurveConfig>,
    pub heatcap: Option<HeatcapConfig>,
    pub classical: Option<ClassicalConfig>,
    pub quadrature: Option<QuadratureConfig>,
    #[serde(default)]
    pub validate: ValidateConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    pub n_atoms: u64,
    pub volume: f64,
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub c: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub mu: f64,
    #[serde(default = "one")]
    pub kappa: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum KappaPolicyName {
    #[default]
    Unit,
    Uniform,
    Explicit,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    /// `[mu, C]` pairs of `v(r) = Σ C e^{−μr}/r`.
    pub poles: Vec<[f64; 2]>,
    #[serde(default)]
    pub kappa_policy: KappaPolicyName,
    /// Used by `kappa_policy = "uniform"`.
    pub kappa: Option<f64>,
    /// Used by `kappa_policy = "explicit"`.
    #[serde(default, rename = "override")]
    pub overrides: Vec<OverrideConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideConfig {
    pub mu: f64,
    pub gamma: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    pub from: f64,
    pub to: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

/// A grid given either as explicit values or as a range.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridConfig {
    List(Vec<f64>),
    Range(RangeConfig),
}

impl GridConfig {
    pub fn values(&self, key: &str) -> Result<Vec<f64>, CliError> {
        match self {
            GridConfig::List(v) if v.is_empty() => Err(config_error(format!("`{key}` is empty"))),
            GridConfig::List(v) => Ok(v.clone()),
            GridConfig::Range(r) => {
                if r.points < 2 {
                    return Err(config_error(format!(
                        "`{key}` range needs at least 2 points, got {}",
                        r.points
                    )));
                }
                if !(r.from.is_finite() && r.to.is_finite() && r.from < r.to) {
                    return Err(config_error(format!(
                        "`{key}` range needs from < to, got {} and {}",
                        r.from, r.to
                    )));
                }
                let last = (r.points - 1) as f64;
                let values = match r.spacing {
                    Spacing::Linear => (0..r.points)
                        .map(|i| r.from + (r.to - r.from) * i as f64 / last)
                        .collect(),
                    Spacing::Log => {
                        if r.from <= 0.0 {
                            return Err(config_error(format!(
                                "`{key}` log range needs from > 0, got {}",
                                r.from
                            )));
                        }
                        let ratio = (r.to / r.from).ln();
                        let mut v: Vec<f64> = (0..r.points)
                            .map(|i| r.from * (ratio * i as f64 / last).exp())
                            .collect();
                        v[r.points - 1] = r.to;
                        v
                    }
                };
                Ok(values)
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FcurveConfig {
    /// Defaults to the α of the single configured channel.
    pub alpha: Option<f64>,
    pub tau: GridConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatcapConfig {
    pub temperature: GridConfig,
    pub prefactor: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalConfig {
    pub temperature: f64,
    /// Mode cutoffs `M`; each run uses `k_j = 2πj/V^{1/3}`, `j = 1..=M`.
    pub modes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    /// Multiplies every Bessel value under test by `1 + 10⁻⁶`.
    #[serde(default)]
    pub inject_fault: bool,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub format: Option<String>,
}

fn config_error(msg: String) -> CliError {
    CliError::Core(auxtherm_core::Error::Config(msg))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if let Some(fmt) = &cfg.output.format {
            if fmt != "csv" {
                return Err(config_error(format!(
                    "unsupported output format `{fmt}` (only `csv`)"
                )));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn medium(&self) -> Result<Medium, CliError> {
        let m = self
            .medium
            .as_ref()
            .ok_or_else(|| config_error("missing [medium] section".into()))?;
        Ok(Medium::with_units(
            m.n_atoms, m.volume, m.mass, m.hbar, m.c,
        )?)
    }

    pub fn potential_model(&self) -> Result<Option<PotentialModel>, CliError> {
        let Some(p) = &self.potential else {
            return Ok(None);
        };
        let terms = p
            .poles
            .iter()
            .map(|&[mu, c]| PoleTerm::new(mu, c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(PotentialModel::new(terms)?))
    }

    fn kappa_policy(p: &PotentialConfig) -> Result<KappaPolicy, CliError> {
        match p.kappa_policy {
            KappaPolicyName::Unit => Ok(KappaPolicy::UnitKappa),
            KappaPolicyName::Uniform => p
                .kappa
                .map(KappaPolicy::UniformKappa)
                .ok_or_else(|| config_error("kappa_policy = \"uniform\" needs `kappa`".into())),
            KappaPolicyName::Explicit => Ok(KappaPolicy::Explicit(
                p.overrides
                    .iter()
                    .map(|o| ChannelOverride {
                        mu: o.mu,
                        gamma: o.gamma,
                        kappa: o.kappa,
                    })
                    .collect(),
            )),
        }
    }

    /// Field channels, sorted by `μ`.
    pub fn channels(&self) -> Result<Vec<FieldChannel>, CliError> {
        match (&self.potential, self.channel.is_empty()) {
            (Some(_), false) => Err(config_error(
                "give either [[channel]] entries or a [potential] section, not both".into(),
            )),
            (Some(p), true) => {
                let model = self.potential_model()?.expect("potential present");
                Ok(extract_channels(&model, &Self::kappa_policy(p)?)?)
            }
            (None, true) => Err(config_error(
                "no field channels: add [[channel]] entries or a [potential] section".into(),
            )),
            (None, false) => {
                let mut channels = self
                    .channel
                    .iter()
                    .map(|c| FieldChannel::new(c.mu, c.kappa, c.gamma))
                    .collect::<Result<Vec<_>, _>>()?;
                channels.sort_by(|a, b| a.mu.total_cmp(&b.mu));
                Ok(channels)
            }
        }
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec, CliError> {
        let d = QuadratureSpec::default();
        match &self.quadrature {
            None => Ok(d),
            Some(q) => Ok(QuadratureSpec::new(
                q.rel_tol.unwrap_or(d.rel_tol),
                q.abs_tol.unwrap_or(d.abs_tol),
                q.max_subdivisions.unwrap_or(d.max_subdivisions),
            )?),
        }
    }

    /// The command-line choice wins over `[heatcap] prefactor`.
    pub fn prefactor(&self, flag: Option<Prefactor>) -> Result<Prefactor, CliError> {
        if let Some(p) = flag {
            return Ok(p);
        }
        match self.heatcap.as_ref().and_then(|h| h.prefactor.as_deref()) {
            Some(name) => Ok(name.parse()?),
            None => Ok(Prefactor::default()),
        }
    }

    pub fn section<'a, T>(section: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
        section
            .as_ref()
            .ok_or_else(|| config_error(format!("missing [{name}] section")))
    }
}
