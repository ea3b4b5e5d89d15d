use crate::dynamics::fidelity;
use crate::ffscale::{scaling_map, MagnificationProtocol};
use crate::qcore::{DiagonalObservableBasis, StateVector};
use crate::{Error, Real, Result};

use super::models::{two_spin_exact, TwoSpinExact, TwoSpinHamiltonian};
use super::result::ScenarioResult;
use super::two_level::{fast_forward, finish, nearest_row, push_common, window, FastForwardRun, Setup};

/// Two-spin entangler driven from `|→→>` to `(|↑↓> + |↓↑>)/√2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSpinScenario<T> {
    pub omega: T,
    pub alpha_bar: T,
    pub t0: T,
    pub dt: T,
    pub gauge_eliminate: bool,
}

impl Default for TwoSpinScenario<f64> {
    fn default() -> Self {
        Self { omega: std::f64::consts::PI / 40.0, alpha_bar: 2.0, t0: 10.0, dt: 1e-3, gauge_eliminate: true }
    }
}

impl<T: Real> TwoSpinScenario<T> {
    pub fn final_time(&self) -> T {
        T::FRAC_PI_2() / self.omega
    }

    pub fn initial_state(&self) -> StateVector<T> {
        two_spin_exact(T::zero(), self.omega)
    }

    /// `(|↑↓> + |↓↑>)/√2`.
    pub fn target_state(&self) -> StateVector<T> {
        let z = num_complex::Complex::new(T::zero(), T::zero());
        let r = num_complex::Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        StateVector::from_raw(vec![z, r, r, z])
    }
}

pub fn simulate_two_spin<T: Real>(s: &TwoSpinScenario<T>) -> Result<FastForwardRun<T>> {
    let p = MagnificationProtocol::new(s.alpha_bar, s.t0)?;
    let h = TwoSpinHamiltonian { omega: s.omega };
    let reference = TwoSpinExact { omega: s.omega };
    let run = fast_forward(Setup {
        h: &h,
        reference: &reference,
        basis: DiagonalObservableBasis::standard(4)?,
        map: scaling_map(&p),
        grid: window(s.t0, s.final_time(), s.dt)?,
        gauge: s.gauge_eliminate,
    })?;
    let bound = T::lit(1e-8);
    for k in 0..run.phases.len() {
        let phi = run.phases.phases(k);
        if phi[0].abs() > bound || phi[1].abs() > bound {
            return Err(Error::InvariantViolation(format!("phi_1, phi_2 nonzero at t = {}", run.phases.grid().time(k))));
        }
        if !run.potential.is_singular(k) && (run.potential.v[k][0].abs() > bound || run.potential.v[k][1].abs() > bound) {
            return Err(Error::InvariantViolation(format!("v_1, v_2 nonzero at t = {}", run.phases.grid().time(k))));
        }
    }
    Ok(run)
}

pub fn run_two_spin(s: &TwoSpinScenario<f64>) -> Result<ScenarioResult> {
    let run = simulate_two_spin(s)?;
    let mut out = ScenarioResult::new("two-spin");
    push_common(&mut out, &run);
    let (init, target) = (s.initial_state(), s.target_state());
    out.push("overlap_initial_unscaled", run.unscaled.states.iter().map(|p| fidelity(p, &init)).collect());
    out.push("overlap_final_unscaled", run.unscaled.states.iter().map(|p| fidelity(p, &target)).collect());
    out.push("overlap_initial_analytic", run.analytic.iter().map(|p| fidelity(p, &init)).collect());
    out.push("overlap_final_analytic", run.analytic.iter().map(|p| fidelity(p, &target)).collect());
    out.push("overlap_initial", run.driven.states.iter().map(|p| fidelity(p, &init)).collect());
    out.push("overlap_final", run.driven.states.iter().map(|p| fidelity(p, &target)).collect());
    finish(&mut out, &run);
    let w = s.omega;
    let cond = (0..run.phases.len())
        .filter(|&k| !run.potential.is_singular(k))
        .map(|k| {
            let t = run.phases.grid().time(k);
            (2.0 * (w * t).cos() * (2.0 * run.phases.phases(k)[2]).sin() - run.map.alpha(t) * w).abs()
        })
        .fold(0.0f64, f64::max);
    out.diagnostic("max_stated_condition_residual", cond);
    let (k0, kf) = (nearest_row(&run.grid, s.t0), nearest_row(&run.grid, s.final_time()));
    out.diagnostic("overlap_final_at_t0", fidelity(&run.driven.states[k0], &target));
    out.diagnostic("overlap_final_analytic_at_t0", fidelity(&run.analytic[k0], &target));
    out.diagnostic("overlap_final_unscaled_at_tf", fidelity(&run.unscaled.states[kf], &target));
    Ok(out)
}
