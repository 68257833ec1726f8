//! Serializable reports printed by the CLI and written by `reproduce`.

use fracplanar_core::analysis::DecayReport;
use fracplanar_core::charfun::trig_consts;
use fracplanar_core::stability::{StabilityStatus, StabilityVerdict};
use fracplanar_core::PlanarSystem;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct TrigConstants {
    pub rho1: f64,
    pub rho2: f64,
    pub q1: f64,
    pub q2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub verdict: String,
    pub criteria_hit: Vec<String>,
    pub winding_count: Option<i64>,
    pub imaginary_zero_free: Option<bool>,
    pub alpha: [f64; 2],
    /// `(a, b, c) = (a11, a22, det A)`.
    pub triple: [f64; 3],
    pub constants: Option<TrigConstants>,
    pub diagnostics: String,
}

impl StabilityReport {
    pub fn new(system: &PlanarSystem, v: &StabilityVerdict) -> Self {
        let t = system.char_triple();
        let constants =
            trig_consts(system.orders).ok().map(|k| TrigConstants { rho1: k.rho1, rho2: k.rho2, q1: k.q1, q2: k.q2 });
        Self {
            verdict: v.status.as_str().to_string(),
            criteria_hit: v.criteria_hit.iter().map(|c| c.tag().to_string()).collect(),
            winding_count: v.winding_count,
            imaginary_zero_free: v.imaginary_zero_free,
            alpha: [system.orders.alpha1(), system.orders.alpha2()],
            triple: [t.a, t.b, t.c],
            constants,
            diagnostics: v.diagnostics.trim_end().to_string(),
        }
    }

    /// Human-readable form.
    pub fn render(&self) -> String {
        let mut out = format!("verdict: {}\n", self.verdict);
        let hit = if self.criteria_hit.is_empty() { "none".to_string() } else { self.criteria_hit.join(", ") };
        out += &format!("criteria_hit: {hit}\n");
        let show = |o: Option<String>| o.unwrap_or_else(|| "unavailable".to_string());
        out += &format!("winding_count: {}\n", show(self.winding_count.map(|z| z.to_string())));
        out += &format!("imaginary_zero_free: {}\n", show(self.imaginary_zero_free.map(|z| z.to_string())));
        out += &format!("alpha: ({}, {})\n", self.alpha[0], self.alpha[1]);
        out += &format!("a = {}, b = {}, c = {}\n", self.triple[0], self.triple[1], self.triple[2]);
        if let Some(k) = &self.constants {
            out += &format!("rho1 = {:.12}, rho2 = {:.12}, q1 = {:.12}, q2 = {:.12}\n", k.rho1, k.rho2, k.q1, k.q2);
        }
        for line in self.diagnostics.lines() {
            out += &format!("note: {line}\n");
        }
        out
    }
}

/// Process exit code for a stability verdict.
pub fn stability_exit_code(status: StabilityStatus) -> i32 {
    match status {
        StabilityStatus::AsymptoticallyStable => 0,
        StabilityStatus::NotAsymptoticallyStable => 2,
        StabilityStatus::Inconclusive => 3,
    }
}

/// Output of the `analyze` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub fitted_mu: Option<f64>,
    pub tail_sup: Option<f64>,
    pub verdict: String,
    pub window: [f64; 2],
    pub weighted_norm: f64,
    /// Basin radius, present when a nonlinear spec and `ε` were supplied.
    pub delta: Option<f64>,
    pub epsilon_used: Option<f64>,
}

/// JSON has no NaN or infinity; those become `null`.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl AnalyzeReport {
    pub fn new(d: &DecayReport, weighted_norm: f64) -> Self {
        Self {
            fitted_mu: finite(d.fitted_mu),
            tail_sup: finite(d.tail_sup),
            verdict: d.verdict.as_str().to_string(),
            window: [d.window.0, d.window.1],
            weighted_norm,
            delta: None,
            epsilon_used: None,
        }
    }
}

/// Contents of `report.json` for one reproduction run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub example: u8,
    pub run: usize,
    pub x0: [f64; 2],
    pub method: String,
    pub h: f64,
    pub t_end: f64,
    pub nu: f64,
    pub window: [f64; 2],
    pub verdict: String,
    pub fitted_mu: Option<f64>,
    pub tail_sup: Option<f64>,
    pub weighted_norm: Option<f64>,
    /// Mittag-Leffler check against `m_bound`, for nonlinear systems only.
    pub ml_stable: Option<bool>,
    pub m_bound: Option<f64>,
    /// Time of blow-up when the solution left every bound.
    pub blow_up: Option<f64>,
    pub stability: StabilityReport,
}
