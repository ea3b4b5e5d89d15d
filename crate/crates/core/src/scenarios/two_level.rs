use crate::dynamics::{evolve, evolve_driven, population, Refinement, TimeGrid, Trajectory};
use crate::ffscale::{
    detect_singularity, find_nodes, gauge_eliminate, scaling_map, solve_phase_condition, synthesize_potential, AccelerationPotential,
    MagnificationProtocol, NodeEvent, PhaseTrajectory, PotentialField, ScalingMap,
};
use crate::qcore::{diagonal_phase_unitary, DiagonalObservableBasis, StateVector};
use crate::{tol, Real, Result};

use super::models::{TwoLevelExact, TwoLevelHamiltonian};
use super::result::{EventRecord, Outcome, ScenarioResult};

/// Rotating-field two-level model with the cosine protocol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelScenario<T> {
    pub omega: T,
    pub alpha_bar: T,
    pub t0: T,
    pub dt: T,
    pub gauge_eliminate: bool,
}

impl Default for TwoLevelScenario<f64> {
    fn default() -> Self {
        Self { omega: std::f64::consts::PI / 40.0, alpha_bar: 2.0, t0: 10.0, dt: 1e-3, gauge_eliminate: true }
    }
}

impl<T: Real> TwoLevelScenario<T> {
    /// `t_f = π/(2ω)`, when the unscaled state reaches spin up.
    pub fn final_time(&self) -> T {
        T::FRAC_PI_2() / self.omega
    }
}

/// Everything produced by a fast-forward run of a model with known solution.
#[derive(Clone, Debug)]
pub struct FastForwardRun<T: Real> {
    /// Output grid.
    pub grid: TimeGrid<T>,
    pub map: ScalingMap<T>,
    pub basis: DiagonalObservableBasis<T>,
    /// Phases on the half-step grid.
    pub phases: PhaseTrajectory<T>,
    /// Potential on the half-step grid, as synthesized (with `v0`).
    pub potential: AccelerationPotential<T>,
    /// Potential used for the driven run (gauge-eliminated if requested).
    pub drive_potential: AccelerationPotential<T>,
    pub events: Vec<NodeEvent<T>>,
    pub unscaled: Trajectory<T>,
    pub driven: Trajectory<T>,
    /// `U(t) ψ(Λ(t))` on the output grid.
    pub analytic: Vec<StateVector<T>>,
}

impl<T: Real> FastForwardRun<T> {
    /// Half-step-grid index of output row `k`.
    pub fn fine_index(&self, k: usize) -> usize {
        2 * k
    }

    pub fn is_singular_row(&self, k: usize) -> bool {
        self.potential.is_singular(self.fine_index(k))
    }
}

pub(crate) struct Setup<'a, T: Real, H, P> {
    pub h: &'a H,
    pub reference: &'a P,
    pub basis: DiagonalObservableBasis<T>,
    pub map: ScalingMap<T>,
    pub grid: TimeGrid<T>,
    pub gauge: bool,
}

pub(crate) fn fast_forward<T, H, P>(s: Setup<'_, T, H, P>) -> Result<FastForwardRun<T>>
where
    T: Real,
    H: crate::dynamics::TimeDependentOperator<T>,
    P: crate::dynamics::StatePath<T>,
{
    let Setup { h, reference, basis, map, grid, gauge } = s;
    let fine = grid.refined(2);
    let phases = solve_phase_condition(h, reference, &map, &basis, &fine)?;
    let potential = synthesize_potential(&phases, h, reference, &map)?;
    let drive_potential = if gauge { gauge_eliminate(&potential) } else { potential.clone() };
    let events = detect_singularity(reference, &map, &drive_potential);
    let psi0 = reference.state(T::zero());
    let unscaled = evolve(h, &psi0, &grid)?;
    let nodes: Vec<T> = find_nodes(reference, &map, &grid, T::lit(tol::REFINE_AMPLITUDE)).into_iter().map(|e| e.time).collect();
    let field = PotentialField { h, reference, map: &map, phases: &phases, gauge_eliminate: gauge };
    let u0 = diagonal_phase_unitary(phases.phases(0), &basis)?;
    let driven = evolve_driven(h, &field, &psi0.apply(&u0), &grid, &Refinement::around(nodes, grid.dt()))?;
    let analytic = (0..grid.len())
        .map(|k| {
            let u = diagonal_phase_unitary(phases.phases(2 * k), &basis)?;
            Ok(reference.state(map.lambda(grid.time(k))).apply(&u))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FastForwardRun { grid, map, basis, phases, potential, drive_potential, events, unscaled, driven, analytic })
}

/// Output window `[0, max(t0, t_f)]`, rounded up to a whole step.
pub(crate) fn window<T: Real>(t0: T, t_f: T, dt: T) -> Result<TimeGrid<T>> {
    TimeGrid::covering(T::zero(), t0.max(t_f), dt)
}

/// Runs the fast-forward pipeline on the two-level model.
pub fn simulate_two_level<T: Real>(s: &TwoLevelScenario<T>) -> Result<FastForwardRun<T>> {
    let p = MagnificationProtocol::new(s.alpha_bar, s.t0)?;
    let h = TwoLevelHamiltonian { omega: s.omega };
    let reference = TwoLevelExact { omega: s.omega };
    fast_forward(Setup {
        h: &h,
        reference: &reference,
        basis: DiagonalObservableBasis::standard(2)?,
        map: scaling_map(&p),
        grid: window(s.t0, s.final_time(), s.dt)?,
        gauge: s.gauge_eliminate,
    })
}

/// Output row closest to `t`, clamped to the grid.
pub(crate) fn nearest_row(grid: &TimeGrid<f64>, t: f64) -> usize {
    (((t - grid.start()) / grid.dt()).round().max(0.0) as usize).min(grid.len() - 1)
}

pub(crate) fn push_common(out: &mut ScenarioResult, run: &FastForwardRun<f64>) {
    let rows = run.grid.len();
    let fine = |k: usize| run.fine_index(k);
    out.push("t", run.grid.times().collect());
    out.push("alpha", run.grid.times().map(|t| run.map.alpha(t)).collect());
    out.push("lambda", run.grid.times().map(|t| run.map.lambda(t)).collect());
    let m = run.basis.len();
    for a in 0..m {
        out.push(format!("phi_{}", a + 1), (0..rows).map(|k| run.phases.phases(fine(k))[a]).collect());
    }
    for a in 0..m {
        out.push(format!("phidot_{}", a + 1), (0..rows).map(|k| run.phases.rates(fine(k))[a]).collect());
    }
    let pot = &run.drive_potential;
    out.push("v0", (0..rows).map(|k| pot.v0[fine(k)]).collect());
    for a in 0..m {
        out.push(format!("v_{}", a + 1), (0..rows).map(|k| pot.v[fine(k)][a]).collect());
    }
}

pub(crate) fn finish(out: &mut ScenarioResult, run: &FastForwardRun<f64>) {
    let rows = run.grid.len();
    out.push("singular_flag", (0..rows).map(|k| if run.is_singular_row(k) { 1.0 } else { 0.0 }).collect());
    out.events = run.events.iter().map(EventRecord::from).collect();
    out.outcome = if run.events.is_empty() && run.potential.singular_count() == 0 { Outcome::Completed } else { Outcome::Clamped };
    out.diagnostic("max_equivalence_residual", run.potential.max_equivalence_residual());
    out.diagnostic("max_imag_residual", run.potential.max_imag_residual());
    out.diagnostic("max_phase_jump", run.phases.max_jump());
    out.diagnostic("unscaled_norm_drift", run.unscaled.norm_drift);
    out.diagnostic("driven_norm_drift", run.driven.norm_drift);
    out.diagnostic("singular_points", run.potential.singular_count() as f64);
}

pub fn run_two_level(s: &TwoLevelScenario<f64>) -> Result<ScenarioResult> {
    let run = simulate_two_level(s)?;
    let rows = run.grid.len();
    let mut out = ScenarioResult::new("two-level");
    push_common(&mut out, &run);
    let fine = |k: usize| run.fine_index(k);
    out.push("V_up", (0..rows).map(|k| run.drive_potential.values[fine(k)][0]).collect());
    out.push("V_down", (0..rows).map(|k| run.drive_potential.values[fine(k)][1]).collect());
    let pop = |psi: &StateVector<f64>| population(psi, 0).unwrap_or(f64::NAN);
    out.push("pop_up_unscaled", run.unscaled.states.iter().map(pop).collect());
    out.push("pop_up_analytic", run.analytic.iter().map(pop).collect());
    out.push("pop_up_driven", run.driven.states.iter().map(pop).collect());
    finish(&mut out, &run);
    let diff = (0..rows).fold(0.0f64, |m, k| m.max((pop(&run.analytic[k]) - pop(&run.driven.states[k])).abs()));
    out.diagnostic("max_pop_diff_driven_analytic", diff);
    let (k0, kf) = (nearest_row(&run.grid, s.t0), nearest_row(&run.grid, s.final_time()));
    out.diagnostic("pop_up_final", pop(&run.driven.states[k0]));
    out.diagnostic("pop_up_analytic_final", pop(&run.analytic[k0]));
    out.diagnostic("pop_up_unscaled_final", pop(&run.unscaled.states[kf]));
    Ok(out)
}
