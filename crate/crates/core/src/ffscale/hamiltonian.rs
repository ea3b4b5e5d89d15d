use crate::dynamics::{checked_evaluate, StatePath, TimeDependentOperator};
use crate::qcore::{diagonal_phase_unitary, CMatrix, DiagonalObservableBasis, StateVector};
use crate::{Error, Real, Result};

use super::{PhaseTrajectory, ScalingMap};

/// `H_FF(t) = Σ_a φ̇_a X_a + α(t) U(t) H(Λ(t)) U†(t)`, defined on the phase grid.
pub struct FastForwardHamiltonian<'a, T: Real, H: ?Sized> {
    h: &'a H,
    map: &'a ScalingMap<T>,
    phases: &'a PhaseTrajectory<T>,
}

/// Fast-forward Hamiltonian of `h` under `map` and `phases`.
pub fn ff_hamiltonian<'a, T, H>(h: &'a H, map: &'a ScalingMap<T>, phases: &'a PhaseTrajectory<T>) -> Result<FastForwardHamiltonian<'a, T, H>>
where
    T: Real,
    H: TimeDependentOperator<T> + ?Sized,
{
    if h.dim() != phases.basis().dim() {
        return Err(Error::DimensionMismatch { expected: phases.basis().dim(), got: h.dim() });
    }
    Ok(FastForwardHamiltonian { h, map, phases })
}

/// `φ̇·X + α U H(Λ) U†` for explicit phase data.
pub fn assemble<T, H>(h: &H, map: &ScalingMap<T>, basis: &DiagonalObservableBasis<T>, phases: &[T], rates: &[T], t: T) -> Result<CMatrix<T>>
where
    T: Real,
    H: TimeDependentOperator<T> + ?Sized,
{
    let u = diagonal_phase_unitary(phases, basis)?;
    let inner = checked_evaluate(h, map.lambda(t))?.scale_real(map.alpha(t));
    let mut out = u.matmul(&inner).matmul(&u.adjoint());
    out.add_real_diagonal(&basis.combine(rates));
    Ok(out)
}

impl<T, H> TimeDependentOperator<T> for FastForwardHamiltonian<'_, T, H>
where
    T: Real,
    H: TimeDependentOperator<T> + ?Sized,
{
    fn dim(&self) -> usize {
        self.h.dim()
    }

    fn evaluate(&self, t: T) -> Result<CMatrix<T>> {
        let (phi, rate) = self.phases.sample(t)?;
        assemble(self.h, self.map, self.phases.basis(), phi, rate, t)
    }
}

/// `ψ_FF(t) = U(t) ψ(Λ(t))` at a phase-grid time.
pub fn ff_state<T, P>(reference: &P, map: &ScalingMap<T>, phases: &PhaseTrajectory<T>, t: T) -> Result<StateVector<T>>
where
    T: Real,
    P: StatePath<T> + ?Sized,
{
    let (phi, _) = phases.sample(t)?;
    let u = diagonal_phase_unitary(phi, phases.basis())?;
    Ok(reference.state(map.lambda(t)).apply(&u))
}
