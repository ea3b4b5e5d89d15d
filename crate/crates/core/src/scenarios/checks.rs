use crate::dynamics::{evolve, fidelity, Trajectory};
use crate::ffscale::{ff_hamiltonian, scaling_map, MagnificationProtocol};
use crate::qcore::{diagonal_phase_unitary, DiagonalObservableBasis, StateVector};
use crate::shortcuts::{ff_conditions_solve, lr_build, lr_ff_residuals, AdiabaticModel, FFConditionSolution, TransitionlessHamiltonian};
use crate::{tol, Real, Result};

use super::models::{RotatingFieldHamiltonian, TwoLevelHamiltonian};
use super::result::ScenarioResult;
use super::two_level::{finish, push_common, simulate_two_level, window, FastForwardRun, TwoLevelScenario};

/// Parameters shared by the counterdiabatic and invariant cross-checks, which
/// reuse the two-level model as an adiabatic target.
pub type CheckScenario<T> = TwoLevelScenario<T>;

/// Index of the tracked eigenstate of `½(cos ωt σ_x + sin ωt σ_z)` (upper level).
pub const TARGET_LEVEL: usize = 1;

#[derive(Clone, Debug)]
pub struct CdCheckRun<T: Real> {
    pub generic: FastForwardRun<T>,
    pub condad: FFConditionSolution<T>,
    /// Evolution under `H_ad + H_cd` from the target eigenstate.
    pub transitionless: Trajectory<T>,
    /// `|<n(t)|ψ(t)>|²` along `transitionless`.
    pub pop_transitionless: Vec<T>,
    /// Evolution under the fast-forward Hamiltonian of `H_ad + H_cd`.
    pub ff_transitionless: Trajectory<T>,
    /// `|<ñ(t)|ψ(t)>|²` along `ff_transitionless`.
    pub pop_ff_transitionless: Vec<T>,
    /// Per half-step point: largest `|V_condad(σ) − V_generic(σ)|`, `None` if flagged.
    pub potential_gap: Vec<Option<T>>,
}

pub fn simulate_cd_check<T: Real>(s: &CheckScenario<T>) -> Result<CdCheckRun<T>> {
    let generic = simulate_two_level(&TwoLevelScenario { gauge_eliminate: false, ..*s })?;
    let model = AdiabaticModel::new(RotatingFieldHamiltonian { omega: s.omega });
    let p = MagnificationProtocol::new(s.alpha_bar, s.t0)?;
    let map = scaling_map(&p);
    let basis = DiagonalObservableBasis::standard(2)?;
    let grid = window(s.t0, s.final_time(), s.dt)?;
    let fine = grid.refined(2);
    let fd = T::lit(tol::EIGENFRAME_STEP);
    let condad = ff_conditions_solve(&model, TARGET_LEVEL, &map, &basis, &fine, fd)?;

    let h_tl = TransitionlessHamiltonian::new(&model, fd);
    let level = |t: T| -> Result<StateVector<T>> { Ok(model.decompose(t)?.vectors[TARGET_LEVEL].clone()) };
    let transitionless = evolve(&h_tl, &level(T::zero())?, &grid)?;
    let pop_transitionless = grid.times().zip(&transitionless.states).map(|(t, psi)| Ok(fidelity(psi, &level(t)?))).collect::<Result<Vec<_>>>()?;

    let h_ff = ff_hamiltonian(&h_tl, &map, &condad.phases)?;
    let ntilde = |k: usize| -> Result<StateVector<T>> {
        let u = diagonal_phase_unitary(condad.phases.phases(2 * k), &basis)?;
        Ok(level(map.lambda(grid.time(k)))?.apply(&u))
    };
    let ff_transitionless = evolve(&h_ff, &ntilde(0)?, &grid)?;
    let pop_ff_transitionless = (0..grid.len()).map(|k| Ok(fidelity(&ff_transitionless.states[k], &ntilde(k)?))).collect::<Result<Vec<_>>>()?;

    let potential_gap = (0..fine.len())
        .map(|k| {
            if generic.potential.is_singular(k) || condad.potential.is_singular(k) {
                return None;
            }
            let a = &generic.potential.values[k];
            let b = &condad.potential.values[k];
            Some(a.iter().zip(b).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs())))
        })
        .collect();
    Ok(CdCheckRun { generic, condad, transitionless, pop_transitionless, ff_transitionless, pop_ff_transitionless, potential_gap })
}

pub fn run_cd_check(s: &CheckScenario<f64>) -> Result<ScenarioResult> {
    let run = simulate_cd_check(s)?;
    let rows = run.generic.grid.len();
    let mut out = ScenarioResult::new("cd-check");
    push_common(&mut out, &run.generic);
    let pot = &run.condad.potential;
    out.push("v0_condad", (0..rows).map(|k| pot.v0[2 * k]).collect());
    out.push("v_1_condad", (0..rows).map(|k| pot.v[2 * k][0]).collect());
    out.push("pop_transitionless", run.pop_transitionless.clone());
    out.push("pop_ff_transitionless", run.pop_ff_transitionless.clone());
    finish(&mut out, &run.generic);
    out.diagnostic("max_potential_gap", run.potential_gap.iter().flatten().copied().fold(0.0, f64::max));
    out.diagnostic("min_pop_transitionless", run.pop_transitionless.iter().copied().fold(1.0, f64::min));
    out.diagnostic("min_pop_ff_transitionless", run.pop_ff_transitionless.iter().copied().fold(1.0, f64::min));
    out.diagnostic("max_condad_residual", run.condad.max_residual());
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct InvariantCheckRun<T: Real> {
    pub generic: FastForwardRun<T>,
    /// Base residual of the rank-one invariant on the output grid.
    pub lr_residual: Vec<T>,
    /// Fast-forwarded residual with the synthesized potential (half-step grid).
    pub lr_ff_residual: Vec<Option<T>>,
    /// Same with every `v_a` forced to zero.
    pub lr_ff_residual_without_v: Vec<Option<T>>,
}

pub fn simulate_invariant_check<T: Real>(s: &CheckScenario<T>) -> Result<InvariantCheckRun<T>> {
    let generic = simulate_two_level(&TwoLevelScenario { gauge_eliminate: false, ..*s })?;
    let model = AdiabaticModel::new(RotatingFieldHamiltonian { omega: s.omega });
    let mut weights = vec![T::zero(); 2];
    weights[TARGET_LEVEL] = T::one();
    let inv = lr_build(weights, &model, T::lit(tol::EIGENFRAME_STEP))?;
    let lr_residual = generic.grid.times().map(|t| inv.dynamical_residual(t)).collect::<Result<Vec<_>>>()?;
    let h = TwoLevelHamiltonian { omega: s.omega };
    let lr_ff_residual = lr_ff_residuals(&inv, &generic.map, &generic.phases, &generic.potential, &h)?;
    let lr_ff_residual_without_v = lr_ff_residuals(&inv, &generic.map, &generic.phases, &generic.potential.scaled_v(T::zero()), &h)?;
    Ok(InvariantCheckRun { generic, lr_residual, lr_ff_residual, lr_ff_residual_without_v })
}

pub fn run_invariant_check(s: &CheckScenario<f64>) -> Result<ScenarioResult> {
    let run = simulate_invariant_check(s)?;
    let rows = run.generic.grid.len();
    let mut out = ScenarioResult::new("invariant-check");
    push_common(&mut out, &run.generic);
    out.push("lr_residual", run.lr_residual.clone());
    out.push("lr_ff_residual", (0..rows).map(|k| run.lr_ff_residual[2 * k].unwrap_or(0.0)).collect());
    out.push("lr_ff_residual_without_v", (0..rows).map(|k| run.lr_ff_residual_without_v[2 * k].unwrap_or(0.0)).collect());
    finish(&mut out, &run.generic);
    out.diagnostic("max_lr_residual", run.lr_residual.iter().copied().fold(0.0, f64::max));
    out.diagnostic("max_lr_ff_residual", run.lr_ff_residual.iter().flatten().copied().fold(0.0, f64::max));
    out.diagnostic("min_lr_ff_residual_without_v", run.lr_ff_residual_without_v.iter().flatten().copied().fold(f64::INFINITY, f64::min));
    out.diagnostic("max_lr_ff_residual_without_v", run.lr_ff_residual_without_v.iter().flatten().copied().fold(0.0, f64::max));
    Ok(out)
}
