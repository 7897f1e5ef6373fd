//! Human-readable summaries of resolved parameters.

use std::fmt::Write as _;

use wellqfi::modes::check_sign_constraints;
use wellqfi::{validity_gamma, SystemParams};

use crate::error::Result;

pub struct ParamsReport {
    pub params: SystemParams,
    pub kappa: f64,
    pub gamma: f64,
    pub two_mode_ok: bool,
    /// `None` when the sign constraints on `(η, ξ)` hold.
    pub constraint_violation: Option<String>,
}

impl ParamsReport {
    pub fn new(params: SystemParams, kappa: f64) -> Result<Self> {
        let v = validity_gamma(params.g_1d(), params.n_particles)?;
        let constraint_violation = check_sign_constraints(params.eta, params.xi).err().map(|e| e.to_string());
        Ok(Self { params, kappa, gamma: v.gamma, two_mode_ok: v.two_mode_ok, constraint_violation })
    }

    pub fn render(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k:<11} = {v}");
        };
        line("n_particles", p.n_particles.to_string());
        line("g", p.g.to_string());
        line("g_1d", p.g_1d().to_string());
        line("delta_eps", p.delta_eps.to_string());
        line("delta_a", fmt(p.delta_a));
        line("eta", fmt(p.eta));
        line("xi", fmt(p.xi));
        line("q", fmt(p.q()));
        line("kappa", fmt(self.kappa));
        line("lambda", fmt(p.lambda_acc));
        line("t", p.t.to_string());
        line("gamma", fmt(self.gamma));
        line("two_mode_ok", self.two_mode_ok.to_string());
        line(
            "constraints",
            match &self.constraint_violation {
                None => "ok".into(),
                Some(msg) => format!("VIOLATED: {msg}"),
            },
        );
        s
    }
}

fn fmt(x: f64) -> String {
    let r = format!("{x:.10}");
    let r = r.trim_end_matches('0').trim_end_matches('.');
    if r == "-0" { "0".into() } else { r.into() }
}
