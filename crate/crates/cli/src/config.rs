use crate::CliError;
use lptwist_core::analysis::Exponent;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    Rigidity,
    Weyl,
    Nctorus,
    Pnorm,
    Isometries,
    Core,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// The two modes of the noncommutative torus experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum TorusMode {
    /// σ_{k/N} on ℤ_N².
    Quotient { k: i64, n: usize },
    /// Box compressions on ℤ² with real θ.
    Folner { theta: f64, radii: Vec<usize> },
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub p: Exponent,
    pub seed: u64,
    /// Overrides the per-command default tolerance.
    pub tol: Option<f64>,
    pub starts: usize,
    pub format: OutputFormat,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub search_order: Option<u64>,
    /// Phases of the Weyl pairs drawn from μ_q.
    pub phase_order: Option<u64>,
    pub torus: Option<TorusMode>,
    #[serde(skip)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            inputs: Vec::new(),
            p: Exponent::Finite(3.0),
            seed: 0,
            tol: None,
            starts: 32,
            format: OutputFormat::Json,
            out: None,
            search_order: None,
            phase_order: None,
            torus: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Exponent::Finite(p) = self.p {
            if !(p >= 1.0) || !p.is_finite() {
                return Err(CliError::Config(format!("p must be at least 1, got {p}")));
            }
        }
        if self.starts == 0 {
            return Err(CliError::Config("starts must be at least 1".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(CliError::Config(format!("tol must be positive, got {t}")));
            }
        }
        if self.search_order == Some(0) || self.phase_order == Some(0) {
            return Err(CliError::Config("orders must be at least 1".into()));
        }
        if let Some(TorusMode::Folner { radii, .. }) = &self.torus {
            if radii.is_empty() || radii.contains(&0) {
                return Err(CliError::Config("box sizes must be at least 1".into()));
            }
        }
        let wanted = match self.command {
            Command::Rigidity => Some(2),
            Command::Nctorus => Some(0),
            Command::Weyl | Command::Pnorm | Command::Isometries | Command::Core => Some(1),
            Command::Validate => None,
        };
        match wanted {
            Some(k) if self.inputs.len() != k => {
                Err(CliError::Config(format!("expected {k} input file(s), got {}", self.inputs.len())))
            }
            None if self.inputs.is_empty() => Err(CliError::Config("no input files".into())),
            _ => Ok(()),
        }
    }
}
