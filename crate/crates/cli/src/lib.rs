//! Commands behind the `auxtherm` binary.
//!
//! Each command turns a [`RunConfig`] into an [`Outputs`] value: a summary
//! for the terminal and a set of CSV files. Nothing touches the file system
//! until the whole computation has succeeded; [`write_outputs`] then puts
//! every file in place through a temporary file and a rename.

pub mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use auxtherm_core::classical::{classical_energy, critical_temperature, default_k_grid};
use auxtherm_core::quantum::{curve_sweep, f_curve_sweep, STEFAN_BOLTZMANN_INTEGRAL};
use auxtherm_core::validation::{run_all, ValidationOptions};
use auxtherm_core::{CouplingSign, Error, Prefactor};

pub use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("invalid config: {0}")]
    Parse(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("validation failed: {failed} check(s) did not pass")]
    ValidationFailed { failed: usize, report: String },
}

impl CliError {
    /// `2` for configuration and output problems, `3` for points outside
    /// the physical domain, `4` for numerical failures, `1` for a failed
    /// validation run.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::ValidationFailed { .. } => 1,
            CliError::Core(e) => match e {
                Error::Config(_) => 2,
                Error::Domain(_) | Error::Subcritical(_) | Error::Boundary { .. } => 3,
                Error::Convergence { .. } | Error::Bracket { .. } => 4,
            },
        }
    }
}

/// A CSV file to be written, by name relative to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvFile {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outputs {
    pub summary: String,
    pub files: Vec<CsvFile>,
}

/// Shortest decimal that reads back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Per-channel scales and critical temperatures.
pub fn cmd_poles(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let medium = cfg.medium()?;
    let channels = cfg.channels()?;
    let crit = critical_temperature(&channels, &medium)?;

    let mut summary = format!(
        "{:>3} {:>12} {:>12} {:>12} {:>10} {:>12} {:>12} {:>12}\n",
        "s", "mu", "kappa", "gamma", "sign", "T_s", "alpha", "T_crit"
    );
    let mut rows = Vec::new();
    for (s, (ch, t_crit)) in channels.iter().zip(&crit.per_channel).enumerate() {
        let sign = match ch.sign {
            CouplingSign::Repulsive => "repulsive",
            CouplingSign::Attractive => "attractive",
        };
        let t_s = ch.t_char(&medium);
        let alpha = ch.alpha(&medium);
        let _ = writeln!(
            summary,
            "{s:>3} {:>12.6e} {:>12.6e} {:>12.6e} {sign:>10} {t_s:>12.6e} {alpha:>12.6e} {t_crit:>12.6e}",
            ch.mu, ch.kappa, ch.gamma
        );
        rows.push(vec![
            s.to_string(),
            num(ch.mu),
            num(ch.kappa),
            num(ch.gamma),
            sign.to_string(),
            num(t_s),
            num(alpha),
            num(*t_crit),
        ]);
    }
    let _ = write!(
        summary,
        "global threshold T_crit = {} (lowest channel threshold {})",
        crit.global, crit.weakest
    );
    Ok(Outputs {
        summary,
        files: vec![CsvFile {
            name: "poles.csv".into(),
            contents: csv("s,mu,kappa,gamma,sign,T_s,alpha,T_crit", rows),
        }],
    })
}

/// `f(α, τ)` and `∂f/∂τ` over the configured `τ` grid.
pub fn cmd_fcurve(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let section = RunConfig::section(&cfg.fcurve, "fcurve")?;
    let alpha = match section.alpha {
        Some(a) => a,
        None => {
            let channels = cfg.channels()?;
            if channels.len() != 1 {
                return Err(CliError::Core(Error::Config(format!(
                    "[fcurve] has no `alpha` and there are {} channels; give `alpha` explicitly",
                    channels.len()
                ))));
            }
            channels[0].alpha(&cfg.medium()?)
        }
    };
    let taus = section.tau.values("tau")?;
    let samples = f_curve_sweep(alpha, &taus, &cfg.quadrature()?)?;
    let rows = samples
        .iter()
        .map(|s| vec![num(s.tau), num(s.f), num(s.f2)]);
    Ok(Outputs {
        summary: format!("f(alpha = {alpha}, tau) at {} points", samples.len()),
        files: vec![CsvFile {
            name: "fcurve.csv".into(),
            contents: csv("tau,f,f2", rows),
        }],
    })
}

/// Field energy and heat capacity per channel, plus their sums.
pub fn cmd_heatcap(cfg: &RunConfig, prefactor: Option<Prefactor>) -> Result<Outputs, CliError> {
    let section = RunConfig::section(&cfg.heatcap, "heatcap")?;
    let medium = cfg.medium()?;
    let channels = cfg.channels()?;
    let prefactor = cfg.prefactor(prefactor)?;
    let spec = cfg.quadrature()?;
    let mut temps = section.temperature.values("temperature")?;
    temps.sort_by(f64::total_cmp);

    for (s, ch) in channels.iter().enumerate() {
        let t_crit = ch.critical_temperature(&medium);
        let bad: Vec<String> = temps
            .iter()
            .filter(|&&t| !(t > t_crit))
            .map(|t| t.to_string())
            .collect();
        if !bad.is_empty() {
            return Err(CliError::Core(Error::Subcritical(format!(
                "channel s = {s} (mu = {}) has T_crit = {t_crit}; temperatures not above it: {}",
                ch.mu,
                bad.join(", ")
            ))));
        }
    }

    let coefficient = prefactor.coefficient(&medium) * STEFAN_BOLTZMANN_INTEGRAL;
    let mut totals = vec![(0.0, 0.0); temps.len()];
    let mut files = Vec::new();
    for (s, ch) in channels.iter().enumerate() {
        let t_s = ch.t_char(&medium);
        let taus: Vec<f64> = temps.iter().map(|t| t / t_s).collect();
        let samples = curve_sweep(ch, &medium, &taus, &spec, prefactor)?;
        let mut rows = Vec::with_capacity(temps.len());
        for ((t, sample), total) in temps.iter().zip(&samples).zip(&mut totals) {
            let w = coefficient * t.powi(4) * sample.f;
            let cv = sample
                .cv_contrib
                .expect("curve_sweep fills the heat capacity");
            total.0 += w;
            total.1 += cv;
            rows.push(vec![num(*t), num(sample.tau), num(w), num(cv)]);
        }
        files.push(CsvFile {
            name: format!("heatcap_channel_{s}.csv"),
            contents: csv("T,tau,W,Cv", rows),
        });
    }
    let rows = temps
        .iter()
        .zip(&totals)
        .map(|(t, (w, cv))| vec![num(*t), num(*w), num(*cv)]);
    files.push(CsvFile {
        name: "heatcap_total.csv".into(),
        contents: csv("T,W,Cv", rows),
    });
    Ok(Outputs {
        summary: format!(
            "W and Cv for {} channel(s) at {} temperatures ({prefactor:?} prefactor)",
            channels.len(),
            temps.len()
        ),
        files,
    })
}

/// Classical mean energy as a function of the mode cutoff `M`.
pub fn cmd_classical_energy(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let section = RunConfig::section(&cfg.classical, "classical")?;
    let medium = cfg.medium()?;
    let channels = cfg.channels()?;
    let t = section.temperature;
    if !(t > 0.0 && t.is_finite()) {
        return Err(CliError::Core(Error::Config(format!(
            "[classical] temperature must be positive, got {t}"
        ))));
    }
    let mut modes = section.modes.clone();
    if modes.is_empty() {
        return Err(CliError::Core(Error::Config(
            "[classical] modes is empty".into(),
        )));
    }
    modes.sort_unstable();
    let mut rows = Vec::with_capacity(modes.len());
    for &m in &modes {
        let e = classical_energy(&channels, &medium, 1.0 / t, &default_k_grid(&medium, m))?;
        rows.push(vec![m.to_string(), num(e)]);
    }
    Ok(Outputs {
        summary: format!(
            "classical energy at T = {t} for {} mode cutoffs; each added mode contributes at most 2T",
            modes.len()
        ),
        files: vec![CsvFile {
            name: "classical_energy.csv".into(),
            contents: csv("M,E", rows),
        }],
    })
}

/// The oracle cross-validation suite. A failing check is reported in the
/// summary and turned into [`CliError::ValidationFailed`] by [`run`],
/// which carries the full report.
pub fn cmd_validate(cfg: &RunConfig) -> Result<(Outputs, usize), CliError> {
    let mut opts = ValidationOptions {
        quadrature: cfg.quadrature()?,
        ..Default::default()
    };
    if let Some(seed) = cfg.validate.seed {
        opts.seed = seed;
    }
    if cfg.validate.inject_fault {
        opts.bessel_scale = 1.0 + 1e-6;
    }
    let report = run_all(&opts);
    let failed = report.failures().count();
    Ok((
        Outputs {
            summary: report.to_string(),
            files: Vec::new(),
        },
        failed,
    ))
}

/// Writes every file into `dir` through a temporary file in the same
/// directory, renamed into place once complete.
pub fn write_outputs(dir: &Path, outputs: &Outputs) -> Result<Vec<PathBuf>, CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    if outputs.files.is_empty() {
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::with_capacity(outputs.files.len());
    for file in &outputs.files {
        let target = dir.join(&file.name);
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io(dir))?;
        tmp.write_all(file.contents.as_bytes())
            .map_err(io(&target))?;
        tmp.as_file().sync_all().map_err(io(&target))?;
        tmp.persist(&target).map_err(|e| CliError::Io {
            path: target.clone(),
            source: e.error,
        })?;
        written.push(target);
    }
    Ok(written)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Poles,
    Fcurve,
    Heatcap,
    ClassicalEnergy,
    Validate,
}

/// Runs one command end to end and returns the summary text.
pub fn run(
    command: Command,
    cfg: &RunConfig,
    out: Option<&Path>,
    prefactor: Option<Prefactor>,
) -> Result<String, CliError> {
    let (outputs, failed) = match command {
        Command::Poles => (cmd_poles(cfg)?, 0),
        Command::Fcurve => (cmd_fcurve(cfg)?, 0),
        Command::Heatcap => (cmd_heatcap(cfg, prefactor)?, 0),
        Command::ClassicalEnergy => (cmd_classical_energy(cfg)?, 0),
        Command::Validate => cmd_validate(cfg)?,
    };
    if failed > 0 {
        return Err(CliError::ValidationFailed {
            failed,
            report: outputs.summary,
        });
    }
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let written = write_outputs(&dir, &outputs)?;
    let mut summary = outputs.summary;
    for path in written {
        let _ = write!(summary, "\nwrote {}", path.display());
    }
    Ok(summary)
}
