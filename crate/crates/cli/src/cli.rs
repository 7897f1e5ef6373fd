//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Axis, Config, SplitterChoice, StateChoice, SweepConfig, Target};
use crate::error::{CliError, Result};
use crate::output::{emit_csv, read_csv};
use crate::plot::{emit_plot, PlotOptions};
use crate::report::ParamsReport;
use crate::sweep::{run_sweep, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "wellqfi", version, about = "Channel and protocol QFI of a two-mode accelerometer in a single well")]
pub struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the resolved model parameters.
    Params(ConfigArgs),
    /// Check the configuration and its physical constraints.
    Validate(ConfigArgs),
    /// Evaluate a target over a parameter grid and write CSV and/or SVG.
    Sweep(SweepArgs),
    /// Render a previously written sweep CSV as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Default, Args)]
pub struct ConfigArgs {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n_particles: Option<usize>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta_eps: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta_a: Option<f64>,
    /// Fragmentation angle of the probe state.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Probe state: fragmented or coherent.
    #[arg(long)]
    pub state: Option<StateChoice>,
    /// Beam-splitter sign: minus or plus.
    #[arg(long)]
    pub splitter: Option<SplitterChoice>,
}

#[derive(Debug, Default, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub base: ConfigArgs,
    /// cqfi_noninteracting, cqfi_interacting or protocol_qfi.
    #[arg(long)]
    pub target: Option<Target>,
    /// g, delta_eps, t, lambda or delta_a.
    #[arg(long)]
    pub sweep_axis: Option<Axis>,
    #[arg(long, allow_hyphen_values = true)]
    pub min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub series_axis: Option<Axis>,
    /// Comma-separated values of the series axis.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub series_values: Option<Vec<f64>>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub log_y: bool,
    #[arg(long)]
    pub title: Option<String>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Sweep CSV written by `wellqfi sweep`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub log_y: bool,
    #[arg(long)]
    pub title: Option<String>,
}

impl ConfigArgs {
    pub fn load(&self) -> Result<Config> {
        let mut c = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        let s = &mut c.system;
        if let Some(n) = self.n_particles {
            s.n_particles = n;
        }
        macro_rules! set {
            ($($field:ident),*) => { $(if self.$field.is_some() { s.$field = self.$field; })* };
        }
        set!(g, delta_eps, lambda, chi, kappa, t, eta, xi, delta_a);
        if let Some(theta) = self.theta {
            c.protocol.theta = theta;
        }
        if let Some(state) = self.state {
            c.protocol.state = state;
        }
        if let Some(splitter) = self.splitter {
            c.protocol.splitter = splitter;
        }
        Ok(c)
    }
}

impl SweepArgs {
    pub fn load(&self) -> Result<Config> {
        let mut c = self.base.load()?;
        let sweep = match c.sweep.take() {
            Some(mut s) => {
                macro_rules! set {
                    ($($field:ident => $target:ident),*) => { $(if let Some(v) = self.$field { s.$target = v; })* };
                }
                set!(target => target, sweep_axis => axis, min => min, max => max, steps => steps, workers => workers);
                if self.series_axis.is_some() {
                    s.series_axis = self.series_axis;
                }
                if let Some(v) = &self.series_values {
                    s.series_values = v.clone();
                }
                s
            }
            None => {
                let missing = |name: &str| CliError::Invalid(format!("--{name} is required without a [sweep] table"));
                SweepConfig {
                    target: self.target.ok_or_else(|| missing("target"))?,
                    axis: self.sweep_axis.ok_or_else(|| missing("sweep-axis"))?,
                    min: self.min.ok_or_else(|| missing("min"))?,
                    max: self.max.ok_or_else(|| missing("max"))?,
                    steps: self.steps.ok_or_else(|| missing("steps"))?,
                    series_axis: self.series_axis,
                    series_values: self.series_values.clone().unwrap_or_default(),
                    workers: self.workers.unwrap_or(1),
                }
            }
        };
        c.sweep = Some(sweep);
        if self.csv.is_some() {
            c.output.csv = self.csv.clone();
        }
        if self.svg.is_some() {
            c.output.svg = self.svg.clone();
        }
        c.output.log_y |= self.log_y;
        if self.title.is_some() {
            c.output.title = self.title.clone();
        }
        Ok(c)
    }
}

fn report(config: &Config) -> Result<ParamsReport> {
    let params = config.system_params_unchecked()?;
    let kappa = config.mode_integrals()?.kappa;
    ParamsReport::new(params, kappa)
}

/// Executes `cli`, writing human-readable output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let stdout_err = |source| CliError::Io { path: PathBuf::from("<stdout>"), source };
    match &cli.command {
        Command::Params(args) => {
            let config = args.load()?;
            write!(out, "{}", report(&config)?.render()).map_err(stdout_err)?;
            config.system_params()?;
        }
        Command::Validate(args) => {
            let config = args.load()?;
            let r = report(&config)?;
            write!(out, "{}", r.render()).map_err(stdout_err)?;
            config.system_params()?;
            if config.sweep.is_some() {
                let spec = SweepSpec::from_config(&config)?;
                let points = spec.grid.steps * spec.series.as_ref().map_or(1, |s| s.values.len());
                writeln!(out, "sweep       = ok ({points} points)").map_err(stdout_err)?;
            }
            writeln!(out, "valid").map_err(stdout_err)?;
        }
        Command::Sweep(args) => {
            let config = args.load()?;
            let spec = SweepSpec::from_config(&config)?;
            if config.output.csv.is_none() && config.output.svg.is_none() {
                return Err(CliError::Invalid("sweep needs --csv and/or --svg (or an [output] table)".into()));
            }
            let result = run_sweep(&spec)?;
            if let Some(path) = &config.output.csv {
                emit_csv(&result, path)?;
                writeln!(out, "wrote {}", path.display()).map_err(stdout_err)?;
            }
            if let Some(path) = &config.output.svg {
                let options = PlotOptions { log_y: config.output.log_y, title: config.output.title.clone() };
                emit_plot(&result, path, &options)?;
                writeln!(out, "wrote {}", path.display()).map_err(stdout_err)?;
            }
        }
        Command::Plot(args) => {
            let result = read_csv(&args.input)?;
            emit_plot(&result, &args.output, &PlotOptions { log_y: args.log_y, title: args.title.clone() })?;
            writeln!(out, "wrote {}", args.output.display()).map_err(stdout_err)?;
        }
    }
    Ok(())
}
