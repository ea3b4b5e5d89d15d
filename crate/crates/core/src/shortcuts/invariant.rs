use num_complex::Complex;

use crate::dynamics::{checked_evaluate, TimeDependentOperator};
use crate::ffscale::{AccelerationPotential, PhaseTrajectory, ScalingMap};
use crate::qcore::{diagonal_phase_unitary, CMatrix};
use crate::{tol, Error, Real, Result};

use super::{AdiabaticModel, TransitionlessHamiltonian};

/// `F(t) = Σ_n λ_n |n(t)><n(t)|` built on the eigenbasis of `H_ad`.
pub struct LRInvariant<'a, T, H> {
    eigenvalues: Vec<T>,
    model: &'a AdiabaticModel<H>,
    dt_fd: T,
}

pub fn lr_build<'a, T, H>(eigenvalues: Vec<T>, model: &'a AdiabaticModel<H>, dt_fd: T) -> Result<LRInvariant<'a, T, H>>
where
    T: Real,
    H: TimeDependentOperator<T>,
{
    let dim = model.dim();
    if eigenvalues.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: eigenvalues.len() });
    }
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidDimension("invariant eigenvalues must be finite".into()));
    }
    model.decompose(T::zero())?.ensure_nondegenerate(tol::COUNTERDIABATIC_GAP)?;
    Ok(LRInvariant { eigenvalues, model, dt_fd })
}

impl<T, H> LRInvariant<'_, T, H>
where
    T: Real,
    H: TimeDependentOperator<T>,
{
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn value_at(&self, t: T) -> Result<CMatrix<T>> {
        let d = self.model.decompose(t)?;
        d.ensure_nondegenerate(tol::COUNTERDIABATIC_GAP)?;
        Ok(d.weighted_sum(&self.eigenvalues))
    }

    /// `‖i dF/dt − [H_ad + H_cd, F]‖` (Frobenius), central differences.
    pub fn dynamical_residual(&self, t: T) -> Result<T> {
        let h = self.dt_fd;
        let df = (&self.value_at(t + h)? - &self.value_at(t - h)?).scale_real(T::one() / (T::lit(2.0) * h));
        let hamiltonian = checked_evaluate(&TransitionlessHamiltonian::new(self.model, self.dt_fd), t)?;
        let lhs = df.scale(Complex::new(T::zero(), T::one()));
        Ok((&lhs - &hamiltonian.commutator(&self.value_at(t)?)).frobenius_norm())
    }
}

/// Per grid point `‖i dF_FF/dt − [H + V, F_FF]‖` with `F_FF = U F(Λ) U†`;
/// `None` at points where the potential is flagged.
pub fn lr_ff_residuals<T, H, O>(
    inv: &LRInvariant<'_, T, H>,
    map: &ScalingMap<T>,
    phases: &PhaseTrajectory<T>,
    potential: &AccelerationPotential<T>,
    h: &O,
) -> Result<Vec<Option<T>>>
where
    T: Real,
    H: TimeDependentOperator<T>,
    O: TimeDependentOperator<T> + ?Sized,
{
    let grid = phases.grid();
    if potential.len() != grid.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), got: potential.len() });
    }
    let mut f = Vec::with_capacity(grid.len());
    for (k, t) in grid.times().enumerate() {
        let u = diagonal_phase_unitary(phases.phases(k), phases.basis())?;
        f.push(u.matmul(&inv.value_at(map.lambda(t))?).matmul(&u.adjoint()));
    }
    let n = f.len();
    let two_dt = T::lit(2.0) * grid.dt();
    let i = Complex::new(T::zero(), T::one());
    let mut out = Vec::with_capacity(n);
    for (k, t) in grid.times().enumerate() {
        if potential.is_singular(k) {
            out.push(None);
            continue;
        }
        let df = if k == 0 {
            (&(&f[1].scale_real(T::lit(4.0)) - &f[0].scale_real(T::lit(3.0))) - &f[2]).scale_real(T::one() / two_dt)
        } else if k == n - 1 {
            (&(&f[k].scale_real(T::lit(3.0)) - &f[k - 1].scale_real(T::lit(4.0))) + &f[k - 2]).scale_real(T::one() / two_dt)
        } else {
            (&f[k + 1] - &f[k - 1]).scale_real(T::one() / two_dt)
        };
        let mut hv = checked_evaluate(h, t)?;
        hv.add_real_diagonal(&potential.values[k]);
        out.push(Some((&df.scale(i) - &hv.commutator(&f[k])).frobenius_norm()));
    }
    Ok(out)
}

/// Largest [`lr_ff_residuals`] entry over unflagged points.
pub fn lr_ff_check<T, H, O>(
    inv: &LRInvariant<'_, T, H>,
    map: &ScalingMap<T>,
    phases: &PhaseTrajectory<T>,
    potential: &AccelerationPotential<T>,
    h: &O,
) -> Result<T>
where
    T: Real,
    H: TimeDependentOperator<T>,
    O: TimeDependentOperator<T> + ?Sized,
{
    Ok(lr_ff_residuals(inv, map, phases, potential, h)?.into_iter().flatten().fold(T::zero(), T::max))
}
