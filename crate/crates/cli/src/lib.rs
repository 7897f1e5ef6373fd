//! Configuration, parameter sweeps, CSV and SVG output for the `wellqfi`
//! command-line tool.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod report;
pub mod sweep;

pub use config::{Axis, Config, Target};
pub use error::{CliError, Result};
pub use output::{emit_csv, read_csv, render_csv};
pub use plot::{emit_plot, render_svg, PlotOptions};
pub use sweep::{run_sweep, Grid, SweepResult, SweepRow, SweepSpec};
