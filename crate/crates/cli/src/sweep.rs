//! Parameter sweeps over the model, evaluated on a worker pool.

use rayon::prelude::*;
use wellqfi::{
    cqfi_noninteracting, cqfi_upper_bound, dynamical_generator, run_protocol_with_generator, ProtocolSpec,
    SpinOperators, SplitterSign, StateKind, SystemParams,
};

use crate::config::{Axis, Config, Target};
use crate::error::{CliError, Result};
use crate::output::format_value;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Grid {
    /// Evenly spaced points, both endpoints included exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub axis: Axis,
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolSettings {
    pub theta: f64,
    pub state_kind: StateKind,
    pub splitter: SplitterSign,
}

impl Default for ProtocolSettings {
    fn default() -> Self {
        Self {
            theta: wellqfi::protocols::DEFAULT_THETA,
            state_kind: StateKind::Fragmented,
            splitter: SplitterSign::Minus,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub target: Target,
    pub axis: Axis,
    pub grid: Grid,
    pub series: Option<Series>,
    pub base: SystemParams,
    pub protocol: ProtocolSettings,
    pub workers: usize,
}

impl SweepSpec {
    pub fn new(target: Target, axis: Axis, grid: Grid, base: SystemParams) -> Self {
        Self { target, axis, grid, series: None, base, protocol: ProtocolSettings::default(), workers: 1 }
    }

    pub fn with_series(mut self, axis: Axis, values: Vec<f64>) -> Self {
        self.series = Some(Series { axis, values });
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_protocol(mut self, protocol: ProtocolSettings) -> Self {
        self.protocol = protocol;
        self
    }

    /// Builds the sweep described by `config.sweep`, refusing axes that the
    /// `[system]` table pins to a fixed value.
    pub fn from_config(config: &Config) -> Result<Self> {
        let sweep = config
            .sweep
            .as_ref()
            .ok_or_else(|| CliError::Invalid("no [sweep] table in configuration".into()))?;
        let mut axes = vec![sweep.axis];
        axes.extend(sweep.series_axis);
        if let Some(a) = axes.iter().find(|a| config.is_fixed(**a)) {
            return Err(CliError::Invalid(format!(
                "axis '{a}' is swept but also fixed in [system]; remove one of them"
            )));
        }
        if sweep.series_axis.is_none() && !sweep.series_values.is_empty() {
            return Err(CliError::Invalid("series_values given without series_axis".into()));
        }
        let spec = SweepSpec {
            target: sweep.target,
            axis: sweep.axis,
            grid: Grid { min: sweep.min, max: sweep.max, steps: sweep.steps },
            series: sweep.series_axis.map(|axis| Series { axis, values: sweep.series_values.clone() }),
            base: config.system_params()?,
            protocol: ProtocolSettings {
                theta: config.protocol.theta,
                state_kind: config.protocol.state.into(),
                splitter: config.protocol.splitter.into(),
            },
            workers: sweep.workers,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.steps < 2 {
            return Err(CliError::Invalid(format!("steps = {} must be at least 2", g.steps)));
        }
        if !g.min.is_finite() || !g.max.is_finite() || g.min >= g.max {
            return Err(CliError::Invalid(format!("need finite min < max, got [{}, {}]", g.min, g.max)));
        }
        if self.workers == 0 {
            return Err(CliError::Invalid("workers must be at least 1".into()));
        }
        if let Some(s) = &self.series {
            if s.axis == self.axis {
                return Err(CliError::Invalid(format!("series axis '{}' equals sweep axis", s.axis)));
            }
            if s.values.is_empty() {
                return Err(CliError::Invalid("series_axis given without series_values".into()));
            }
            if let Some(v) = s.values.iter().find(|v| !v.is_finite()) {
                return Err(CliError::Invalid(format!("series value {v} is not finite")));
            }
        }
        Ok(())
    }

    fn points(&self) -> Vec<(Option<f64>, f64)> {
        let xs = self.grid.values();
        match &self.series {
            None => xs.into_iter().map(|x| (None, x)).collect(),
            Some(s) => s.values.iter().flat_map(|&v| xs.iter().map(move |&x| (Some(v), x))).collect(),
        }
    }

    fn params_at(&self, series_value: Option<f64>, x: f64) -> SystemParams {
        let mut p = self.base;
        if let (Some(s), Some(v)) = (&self.series, series_value) {
            s.axis.apply(&mut p, v);
        }
        self.axis.apply(&mut p, x);
        p
    }

    fn describe_point(&self, p: &SystemParams) -> String {
        format!(
            "n_particles = {}, g = {}, delta_eps = {}, delta_a = {}, lambda = {}, t = {}",
            p.n_particles, p.g, p.delta_eps, p.delta_a, p.lambda_acc, p.t
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub series: Option<f64>,
    pub x: f64,
    pub value: f64,
    /// `N² t²` at this point.
    pub bound: f64,
    /// Ideal-interferometer QFI of the same probe state (protocol target only).
    pub ideal: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub target: Target,
    pub axis: Axis,
    pub series_axis: Option<Axis>,
    pub rows: Vec<SweepRow>,
    /// Ordered `key = value` pairs describing the run.
    pub metadata: Vec<(String, String)>,
}

impl SweepResult {
    /// Rows grouped by series value, in sweep order.
    pub fn series(&self) -> Vec<(Option<f64>, Vec<SweepRow>)> {
        let mut out: Vec<(Option<f64>, Vec<SweepRow>)> = Vec::new();
        for row in &self.rows {
            match out.last_mut() {
                Some((s, rows)) if *s == row.series => rows.push(*row),
                _ => out.push((row.series, vec![*row])),
            }
        }
        out
    }

    pub fn has_ideal(&self) -> bool {
        self.rows.iter().any(|r| r.ideal.is_some())
    }
}

fn evaluate(spec: &SweepSpec, ops: &SpinOperators, p: &SystemParams) -> wellqfi::Result<(f64, Option<f64>)> {
    p.validate()?;
    let out = match spec.target {
        Target::CqfiNoninteracting => (cqfi_noninteracting(p.n_particles, p.lambda_acc, p.delta_eps, p.t), None),
        Target::CqfiInteracting => (dynamical_generator(p, ops)?.cqfi, None),
        Target::ProtocolQfi => {
            let gen = dynamical_generator(p, ops)?;
            let protocol = ProtocolSpec {
                params: *p,
                theta: spec.protocol.theta,
                state_kind: spec.protocol.state_kind,
                splitter: spec.protocol.splitter,
            };
            let r = run_protocol_with_generator(&protocol, ops, &gen)?;
            (r.qfi, Some(r.ideal_qfi_baseline))
        }
    };
    if !out.0.is_finite() || out.1.is_some_and(|v| !v.is_finite()) {
        return Err(wellqfi::Error::Numerical(format!("non-finite result {:?}", out)));
    }
    Ok(out)
}

fn metadata(spec: &SweepSpec) -> Vec<(String, String)> {
    let mut m = vec![
        ("target".to_string(), spec.target.name().to_string()),
        ("axis".to_string(), spec.axis.name().to_string()),
        ("min".to_string(), format_value(spec.grid.min)),
        ("max".to_string(), format_value(spec.grid.max)),
        ("steps".to_string(), spec.grid.steps.to_string()),
    ];
    if let Some(s) = &spec.series {
        m.push(("series_axis".into(), s.axis.name().into()));
        let values: Vec<String> = s.values.iter().map(|v| format_value(*v)).collect();
        m.push(("series_values".into(), values.join(",")));
    }
    m.push(("n_particles".into(), spec.base.n_particles.to_string()));
    let swept = |a: Axis| a == spec.axis || spec.series.as_ref().is_some_and(|s| s.axis == a);
    for a in Axis::ALL.into_iter().filter(|a| !swept(*a)) {
        m.push((a.name().into(), format_value(a.get(&spec.base))));
    }
    m.push(("eta".into(), format_value(spec.base.eta)));
    m.push(("xi".into(), format_value(spec.base.xi)));
    if spec.target == Target::ProtocolQfi {
        let state = match spec.protocol.state_kind {
            StateKind::Fragmented => "fragmented",
            StateKind::Coherent => "coherent",
        };
        let splitter = match spec.protocol.splitter {
            SplitterSign::Minus => "minus",
            SplitterSign::Plus => "plus",
        };
        m.push(("state".into(), state.into()));
        if spec.protocol.state_kind == StateKind::Fragmented {
            m.push(("theta".into(), format_value(spec.protocol.theta)));
        }
        m.push(("splitter".into(), splitter.into()));
    }
    m
}

/// Evaluates every grid point. Rows come back in sweep order regardless of
/// the number of workers; the first failing point (in that order) is reported.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let ops = SpinOperators::new(spec.base.n_particles)?;
    let points = spec.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| CliError::Invalid(format!("cannot start {} workers: {e}", spec.workers)))?;
    log::info!("sweeping {} points on {} workers", points.len(), spec.workers);

    let outcomes: Vec<_> = pool.install(|| {
        points
            .par_iter()
            .map(|&(s, x)| {
                let p = spec.params_at(s, x);
                evaluate(spec, &ops, &p).map(|v| (p, v))
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(points.len());
    for (&(series, x), outcome) in points.iter().zip(outcomes) {
        match outcome {
            Ok((p, (value, ideal))) => rows.push(SweepRow {
                series,
                x,
                value,
                bound: cqfi_upper_bound(p.n_particles, p.t),
                ideal,
            }),
            Err(source) => {
                return Err(CliError::SweepPoint { point: spec.describe_point(&spec.params_at(series, x)), source })
            }
        }
    }
    Ok(SweepResult {
        target: spec.target,
        axis: spec.axis,
        series_axis: spec.series.as_ref().map(|s| s.axis),
        rows,
        metadata: metadata(spec),
    })
}
