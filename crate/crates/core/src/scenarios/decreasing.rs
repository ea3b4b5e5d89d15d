use crate::dynamics::TimeGrid;
use crate::ffscale::{scaling_map, MagnificationProtocol, ScalingMap};
use crate::{Real, Result};

use super::models::FieldEnvelope;
use super::result::{EventRecord, Outcome, ScenarioResult};

/// Field `(h(t) cos ωt, h(t) sin ωt, ω)` starting from spin down.
#[derive(Clone, Debug)]
pub struct DecreasingFieldScenario<T: Real> {
    pub envelope: FieldEnvelope<T>,
    pub omega: T,
    pub dt: T,
    pub t_end: T,
}

impl DecreasingFieldScenario<f64> {
    pub fn new(envelope: FieldEnvelope<f64>) -> Self {
        Self { envelope, omega: std::f64::consts::PI / 40.0, dt: 1e-3, t_end: 20.0 }
    }
}

/// Pointwise solvability of `α(t) h(Λ(t)) = h(t) cos(φ + ωΛ − ωt)`.
#[derive(Clone, Debug)]
pub struct FeasibilityReport<T: Real> {
    pub grid: TimeGrid<T>,
    pub alpha: Vec<T>,
    pub lambda: Vec<T>,
    pub h: Vec<T>,
    pub h_lambda: Vec<T>,
    /// `α h(Λ) / h`.
    pub ratio: Vec<T>,
    pub feasible: Vec<bool>,
    /// Continuous branch `φ = arccos(ratio) − ω(Λ − t)` where feasible.
    pub phi: Vec<Option<T>>,
    pub first_infeasible: Option<T>,
}

impl<T: Real> FeasibilityReport<T> {
    pub fn is_feasible(&self) -> bool {
        self.first_infeasible.is_none()
    }
}

pub fn run_decreasing_field<T: Real>(s: &DecreasingFieldScenario<T>, p: &MagnificationProtocol<T>) -> Result<FeasibilityReport<T>> {
    let grid = TimeGrid::covering(T::zero(), s.t_end, s.dt)?;
    let map: ScalingMap<T> = scaling_map(p);
    let n = grid.len();
    let mut r = FeasibilityReport {
        grid,
        alpha: Vec::with_capacity(n),
        lambda: Vec::with_capacity(n),
        h: Vec::with_capacity(n),
        h_lambda: Vec::with_capacity(n),
        ratio: Vec::with_capacity(n),
        feasible: Vec::with_capacity(n),
        phi: Vec::with_capacity(n),
        first_infeasible: None,
    };
    let slack = T::one() + T::tol(1e-12);
    for t in grid.times() {
        let (a, l) = (map.alpha(t), map.lambda(t));
        let (h, hl) = (s.envelope.value(t), s.envelope.value(l));
        let ratio = a * hl / h;
        let ok = ratio.is_finite() && ratio.abs() <= slack;
        let phi = ok.then(|| ratio.max(-T::one()).min(T::one()).acos() - s.omega * (l - t));
        if !ok && r.first_infeasible.is_none() {
            r.first_infeasible = Some(t);
        }
        r.alpha.push(a);
        r.lambda.push(l);
        r.h.push(h);
        r.h_lambda.push(hl);
        r.ratio.push(ratio);
        r.feasible.push(ok);
        r.phi.push(phi);
    }
    Ok(r)
}

pub fn decreasing_field_result(report: &FeasibilityReport<f64>) -> ScenarioResult {
    let mut out = ScenarioResult::new("decreasing-field");
    out.push("t", report.grid.times().collect());
    out.push("alpha", report.alpha.clone());
    out.push("lambda", report.lambda.clone());
    let phi: Vec<f64> = report.phi.iter().map(|p| p.unwrap_or(0.0)).collect();
    let dt = report.grid.dt();
    let n = phi.len();
    let rate = (0..n)
        .map(|k| {
            let ok = |i: usize| report.phi[i].is_some();
            if k > 0 && k + 1 < n && ok(k - 1) && ok(k + 1) {
                (phi[k + 1] - phi[k - 1]) / (2.0 * dt)
            } else {
                0.0
            }
        })
        .collect();
    out.push("phi_1", phi);
    out.push("phidot_1", rate);
    out.push("h", report.h.clone());
    out.push("h_lambda", report.h_lambda.clone());
    out.push("ratio", report.ratio.clone());
    out.push("feasible", report.feasible.iter().map(|&f| if f { 1.0 } else { 0.0 }).collect());
    out.push("singular_flag", vec![0.0; n]);
    if let Some(t) = report.first_infeasible {
        let k = report.grid.index_of(t).unwrap_or(0);
        out.events.push(EventRecord::Infeasible { time: t, reason: format!("alpha h(Lambda) / h = {} exceeds 1", report.ratio[k]) });
        out.outcome = Outcome::Infeasible;
    }
    out.diagnostic("max_ratio", report.ratio.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    out.diagnostic("feasible_points", report.feasible.iter().filter(|&&f| f).count() as f64);
    out
}
