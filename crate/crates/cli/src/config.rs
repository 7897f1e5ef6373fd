//! Declarative run configuration (TOML) and its resolution into model inputs.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use wellqfi::modes::check_sign_constraints;
use wellqfi::{harmonic_mode_integrals, ModeIntegrals, SplitterSign, StateKind, SystemParams};

use crate::error::{CliError, Result};

pub const DEFAULT_N_PARTICLES: usize = 50;
pub const DEFAULT_T: f64 = 1.0;
pub const DEFAULT_LAMBDA: f64 = 1.0;
pub const DEFAULT_G: f64 = 0.0;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<ModesConfig>,
    #[serde(default)]
    pub protocol: ProtocolConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Physics parameters. Unset sweepable fields fall back to defaults and may
/// be used as sweep axes; set fields are fixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub n_particles: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Force `χ`; with `kappa` gives `λ = 2χκ`. Mutually exclusive with `lambda`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_a: Option<f64>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            n_particles: DEFAULT_N_PARTICLES,
            g: None,
            delta_eps: None,
            lambda: None,
            chi: None,
            kappa: None,
            t: None,
            eta: None,
            xi: None,
            delta_a: None,
        }
    }
}

/// Overlap integrals replacing the harmonic-oscillator defaults.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesConfig {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub kappa: f64,
    pub eps0: f64,
    pub eps1: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    pub theta: f64,
    pub state: StateChoice,
    pub splitter: SplitterChoice,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            theta: wellqfi::protocols::DEFAULT_THETA,
            state: StateChoice::Fragmented,
            splitter: SplitterChoice::Minus,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateChoice {
    #[default]
    Fragmented,
    Coherent,
}

impl From<StateChoice> for StateKind {
    fn from(s: StateChoice) -> Self {
        match s {
            StateChoice::Fragmented => StateKind::Fragmented,
            StateChoice::Coherent => StateKind::Coherent,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitterChoice {
    #[default]
    Minus,
    Plus,
}

impl From<SplitterChoice> for SplitterSign {
    fn from(s: SplitterChoice) -> Self {
        match s {
            SplitterChoice::Minus => SplitterSign::Minus,
            SplitterChoice::Plus => SplitterSign::Plus,
        }
    }
}

impl FromStr for StateChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fragmented" => Ok(StateChoice::Fragmented),
            "coherent" => Ok(StateChoice::Coherent),
            _ => Err(format!("unknown state '{s}' (expected fragmented or coherent)")),
        }
    }
}

impl FromStr for SplitterChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "minus" => Ok(SplitterChoice::Minus),
            "plus" => Ok(SplitterChoice::Plus),
            _ => Err(format!("unknown splitter sign '{s}' (expected minus or plus)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    CqfiNoninteracting,
    CqfiInteracting,
    ProtocolQfi,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::CqfiNoninteracting => "cqfi_noninteracting",
            Target::CqfiInteracting => "cqfi_interacting",
            Target::ProtocolQfi => "protocol_qfi",
        }
    }

    /// Column header of the computed value.
    pub fn value_column(self) -> &'static str {
        match self {
            Target::CqfiNoninteracting | Target::CqfiInteracting => "cqfi",
            Target::ProtocolQfi => "qfi",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cqfi_noninteracting" => Ok(Target::CqfiNoninteracting),
            "cqfi_interacting" => Ok(Target::CqfiInteracting),
            "protocol_qfi" => Ok(Target::ProtocolQfi),
            _ => Err(format!("unknown target '{s}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    G,
    DeltaEps,
    T,
    Lambda,
    DeltaA,
}

impl Axis {
    pub const ALL: [Axis; 5] = [Axis::G, Axis::DeltaEps, Axis::T, Axis::Lambda, Axis::DeltaA];

    pub fn name(self) -> &'static str {
        match self {
            Axis::G => "g",
            Axis::DeltaEps => "delta_eps",
            Axis::T => "t",
            Axis::Lambda => "lambda",
            Axis::DeltaA => "delta_a",
        }
    }

    pub fn get(self, p: &SystemParams) -> f64 {
        match self {
            Axis::G => p.g,
            Axis::DeltaEps => p.delta_eps,
            Axis::T => p.t,
            Axis::Lambda => p.lambda_acc,
            Axis::DeltaA => p.delta_a,
        }
    }

    pub fn apply(self, p: &mut SystemParams, value: f64) {
        match self {
            Axis::G => p.g = value,
            Axis::DeltaEps => p.delta_eps = value,
            Axis::T => p.t = value,
            Axis::Lambda => p.lambda_acc = value,
            Axis::DeltaA => p.delta_a = value,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown sweep axis '{s}' (expected g, delta_eps, t, lambda or delta_a)"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub target: Target,
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    /// Optional second axis: one curve per value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_axis: Option<Axis>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series_values: Vec<f64>,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_workers() -> usize {
    1
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
    #[serde(default)]
    pub log_y: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
}

impl Config {
    pub fn from_toml_str(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration is always representable as TOML")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
        Self::from_toml_str(&text).map_err(|message| CliError::Config { path: path.to_owned(), message })
    }

    /// Whether `axis` is pinned by the `[system]` table.
    pub fn is_fixed(&self, axis: Axis) -> bool {
        let s = &self.system;
        match axis {
            Axis::G => s.g.is_some(),
            Axis::DeltaEps => s.delta_eps.is_some(),
            Axis::T => s.t.is_some(),
            Axis::Lambda => s.lambda.is_some() || s.chi.is_some(),
            Axis::DeltaA => s.delta_a.is_some(),
        }
    }

    pub fn mode_integrals(&self) -> Result<ModeIntegrals> {
        match self.modes {
            None => Ok(harmonic_mode_integrals()?),
            Some(m) => Ok(ModeIntegrals::new(m.a1, m.a2, m.a3, m.a4, m.kappa, m.eps0, m.eps1)?),
        }
    }

    pub fn lambda(&self, mi: &ModeIntegrals) -> Result<f64> {
        let s = &self.system;
        match (s.lambda, s.chi) {
            (Some(_), Some(_)) => Err(CliError::Invalid("set either lambda or chi, not both".into())),
            (Some(l), None) => Ok(l),
            (None, Some(chi)) => Ok(2.0 * chi * s.kappa.unwrap_or(mi.kappa)),
            (None, None) => Ok(DEFAULT_LAMBDA),
        }
    }

    /// Model parameters with overrides applied, without checking the sign
    /// constraints (callers decide whether a violation is fatal).
    pub fn system_params_unchecked(&self) -> Result<SystemParams> {
        let s = &self.system;
        if s.n_particles == 0 {
            return Err(CliError::Model(wellqfi::Error::InvalidInput(
                "n_particles must be at least 1".into(),
            )));
        }
        let mi = self.mode_integrals()?;
        let lambda = self.lambda(&mi)?;
        // Geometry-derived values first; overrides replace them afterwards.
        let mut p = wellqfi::derive_params(&mi, s.n_particles, 0.0, 0.0, 0.0, s.delta_eps)?;
        p.g = s.g.unwrap_or(DEFAULT_G);
        p.lambda_acc = lambda;
        p.t = s.t.unwrap_or(DEFAULT_T);
        if let Some(eta) = s.eta {
            p.eta = eta;
        }
        if let Some(xi) = s.xi {
            p.xi = xi;
        }
        if let Some(delta_a) = s.delta_a {
            p.delta_a = delta_a;
        }
        Ok(p)
    }

    pub fn system_params(&self) -> Result<SystemParams> {
        let p = self.system_params_unchecked()?;
        check_sign_constraints(p.eta, p.xi)?;
        p.validate()?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_harmonic_defaults() {
        let c = Config::from_toml_str("").unwrap();
        let p = c.system_params().unwrap();
        assert_eq!(p.n_particles, 50);
        assert!((p.eta - 0.625).abs() < 1e-9);
        assert!((p.xi + 0.6).abs() < 1e-9);
        assert!((p.delta_a - 0.25).abs() < 1e-9);
        assert!((p.delta_eps - 1.0).abs() < 1e-9);
        assert_eq!((p.g, p.t, p.lambda_acc), (0.0, 1.0, 1.0));
        assert_eq!(c.protocol.theta, 0.5);
    }

    #[test]
    fn lambda_from_force() {
        let c = Config::from_toml_str("[system]\nn_particles = 4\nchi = 1.0\n").unwrap();
        let p = c.system_params().unwrap();
        assert!((p.lambda_acc - 2f64.sqrt()).abs() < 1e-9);
        let both = Config::from_toml_str("[system]\nn_particles = 4\nchi = 1.0\nlambda = 2.0\n").unwrap();
        assert!(both.system_params().is_err());
    }

    #[test]
    fn rejects_fractional_particle_number() {
        assert!(Config::from_toml_str("[system]\nn_particles = 50.5\n").is_err());
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Config::from_toml_str("[system]\nn_particles = 5\nbogus = 1\n").is_err());
    }

    #[test]
    fn sign_violation_is_an_invariant_error() {
        let c = Config::from_toml_str("[system]\nn_particles = 5\neta = 0.5\nxi = 2.0\n").unwrap();
        let err = c.system_params().unwrap_err();
        assert_eq!(err.exit_code(), crate::error::EXIT_INVARIANT);
        assert!(err.to_string().contains("opposite signs"));
        assert!(c.system_params_unchecked().is_ok());
    }

    #[test]
    fn parses_sweep_table() {
        let c = Config::from_toml_str(
            "[sweep]\ntarget = \"protocol_qfi\"\naxis = \"g\"\nmin = 0.0\nmax = 200.0\nsteps = 101\nseries_axis = \"delta_eps\"\nseries_values = [1.0, 5.0, 10.0]\n",
        )
        .unwrap();
        let s = c.sweep.unwrap();
        assert_eq!(s.target, Target::ProtocolQfi);
        assert_eq!(s.series_axis, Some(Axis::DeltaEps));
        assert_eq!(s.workers, 1);
    }

    #[test]
    fn axis_names_round_trip() {
        for a in Axis::ALL {
            assert_eq!(a.name().parse::<Axis>().unwrap(), a);
        }
        assert!("omega".parse::<Axis>().is_err());
    }
}
