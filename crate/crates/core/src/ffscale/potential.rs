use num_complex::Complex;

use crate::dynamics::{checked_evaluate, DiagonalDrive, StatePath, TimeDependentOperator, TimeGrid};
use crate::qcore::{diagonal_phase_unitary, CMatrix, DiagonalObservableBasis, StateVector};
use crate::{tol, Error, Real, Result};

use super::hamiltonian::assemble;
use super::{PhaseTrajectory, ScalingMap};

/// `V(σ) = <σ|(H_FF − H)|ψ_FF> / <σ|ψ_FF>` with node components flagged.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualPotential<T> {
    /// Raw values; flagged components hold the clamped real part.
    pub values: Vec<Complex<T>>,
    pub flagged: Vec<bool>,
}

fn clamp<T: Real>(x: T) -> T {
    let cap = T::lit(tol::POTENTIAL_CAP);
    if x.is_nan() { T::zero() } else { x.max(-cap).min(cap) }
}

pub fn residual_potential<T: Real>(psi_ff: &StateVector<T>, h_ff: &CMatrix<T>, h: &CMatrix<T>) -> Result<ResidualPotential<T>> {
    let n = psi_ff.dim();
    for m in [h_ff, h] {
        if m.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.dim() });
        }
    }
    let num = (h_ff - h).mul_vec(psi_ff.amplitudes());
    let eps = T::lit(tol::NODE_AMPLITUDE);
    let mut values = Vec::with_capacity(n);
    let mut flagged = Vec::with_capacity(n);
    for (z, &p) in num.iter().zip(psi_ff.amplitudes()) {
        if p.norm() < eps {
            let raw = if p.norm() > T::zero() { (z * p.conj() / p.norm_sqr()).re } else { T::zero() };
            values.push(Complex::new(clamp(raw), T::zero()));
            flagged.push(true);
        } else {
            values.push(z / p);
            flagged.push(false);
        }
    }
    Ok(ResidualPotential { values, flagged })
}

/// Real diagonal potential `V = v0 I/N + Σ_a v_a X_a` sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct AccelerationPotential<T> {
    pub grid: TimeGrid<T>,
    pub basis: DiagonalObservableBasis<T>,
    pub v0: Vec<T>,
    pub v: Vec<Vec<T>>,
    /// `V(σ, t_k)`, clamped at flagged components.
    pub values: Vec<Vec<T>>,
    /// Per point and component: node flag.
    pub flags: Vec<Vec<bool>>,
    /// Largest `|Im V(σ)|` over unflagged components, per point.
    pub imag_residual: Vec<T>,
    /// `‖(H + V)ψ_FF − H_FF ψ_FF‖` with the real `V`, per point.
    pub equivalence_residual: Vec<T>,
    /// `v0` removed by [`gauge_eliminate`].
    pub dropped_v0: Option<Vec<T>>,
}

impl<T: Real> AccelerationPotential<T> {
    /// Potential from coefficients; `flags` defaults to none.
    pub fn from_coefficients(grid: TimeGrid<T>, basis: DiagonalObservableBasis<T>, v0: Vec<T>, v: Vec<Vec<T>>) -> Result<Self> {
        if v0.len() != grid.len() || v.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: v0.len().min(v.len()) });
        }
        let values = v0.iter().zip(&v).map(|(&a, b)| basis.compose(a, b)).collect();
        let n = basis.dim();
        Ok(Self {
            flags: vec![vec![false; n]; grid.len()],
            imag_residual: vec![T::zero(); grid.len()],
            equivalence_residual: vec![T::zero(); grid.len()],
            dropped_v0: None,
            grid,
            basis,
            v0,
            v,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.v0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v0.is_empty()
    }

    pub fn is_singular(&self, k: usize) -> bool {
        self.flags[k].iter().any(|&f| f)
    }

    pub fn singular_count(&self) -> usize {
        (0..self.len()).filter(|&k| self.is_singular(k)).count()
    }

    /// Largest imaginary residual over unflagged points.
    pub fn max_imag_residual(&self) -> T {
        (0..self.len()).filter(|&k| !self.is_singular(k)).fold(T::zero(), |m, k| m.max(self.imag_residual[k]))
    }

    pub fn max_equivalence_residual(&self) -> T {
        (0..self.len()).filter(|&k| !self.is_singular(k)).fold(T::zero(), |m, k| m.max(self.equivalence_residual[k]))
    }

    /// Same potential with every `v_a` replaced by `v_a · s`.
    pub fn scaled_v(&self, s: T) -> Self {
        let mut out = self.clone();
        for (k, va) in out.v.iter_mut().enumerate() {
            va.iter_mut().for_each(|x| *x *= s);
            out.values[k] = out.basis.compose(out.v0[k], va);
        }
        out
    }
}

/// Drops `v0`, recording it in `dropped_v0`.
pub fn gauge_eliminate<T: Real>(v: &AccelerationPotential<T>) -> AccelerationPotential<T> {
    let mut out = v.clone();
    let n = T::from_usize(v.basis.dim()).unwrap();
    for (vals, &v0) in out.values.iter_mut().zip(&v.v0) {
        vals.iter_mut().for_each(|x| *x -= v0 / n);
    }
    out.dropped_v0 = Some(v.v0.clone());
    out.v0 = vec![T::zero(); v.len()];
    out
}

/// Samples the acceleration potential on the phase grid.
pub fn synthesize_potential<T, H, P>(phases: &PhaseTrajectory<T>, h: &H, reference: &P, map: &ScalingMap<T>) -> Result<AccelerationPotential<T>>
where
    T: Real,
    H: TimeDependentOperator<T> + ?Sized,
    P: StatePath<T> + ?Sized,
{
    let grid = *phases.grid();
    let basis = phases.basis().clone();
    let n = basis.dim();
    let mut out = AccelerationPotential {
        grid,
        basis: basis.clone(),
        v0: Vec::with_capacity(grid.len()),
        v: Vec::with_capacity(grid.len()),
        values: Vec::with_capacity(grid.len()),
        flags: Vec::with_capacity(grid.len()),
        imag_residual: Vec::with_capacity(grid.len()),
        equivalence_residual: Vec::with_capacity(grid.len()),
        dropped_v0: None,
    };
    for (k, t) in grid.times().enumerate() {
        let (phi, rate) = (phases.phases(k), phases.rates(k));
        let h_ff = assemble(h, map, &basis, phi, rate, t)?;
        let h_now = checked_evaluate(h, t)?;
        let u = diagonal_phase_unitary(phi, &basis)?;
        let psi = reference.state(map.lambda(t)).apply(&u);
        let res = residual_potential(&psi, &h_ff, &h_now)?;
        let real: Vec<T> = res.values.iter().map(|z| clamp(z.re)).collect();
        let imag = res.values.iter().zip(&res.flagged).filter(|(_, &f)| !f).fold(T::zero(), |m, (z, _)| m.max(z.im.abs()));
        let mut lhs = h_now.clone();
        lhs.add_real_diagonal(&real);
        let a = lhs.mul_vec(psi.amplitudes());
        let b = h_ff.mul_vec(psi.amplitudes());
        let eq = a.iter().zip(&b).fold(T::zero(), |s, (x, y)| s + (x - y).norm_sqr()).sqrt();
        let (v0, va) = basis.decompose(&real)?;
        debug_assert_eq!(real.len(), n);
        out.v0.push(v0);
        out.v.push(va);
        out.values.push(real);
        out.flags.push(res.flagged);
        out.imag_residual.push(imag);
        out.equivalence_residual.push(eq);
    }
    Ok(out)
}

/// Acceleration potential evaluated pointwise from interpolated phases and the
/// exact reference state, unclamped; drives [`evolve_driven`](crate::dynamics::evolve_driven).
pub struct PotentialField<'a, T: Real, H: ?Sized, P: ?Sized> {
    pub h: &'a H,
    pub reference: &'a P,
    pub map: &'a ScalingMap<T>,
    pub phases: &'a PhaseTrajectory<T>,
    /// Subtract the identity component.
    pub gauge_eliminate: bool,
}

impl<T, H, P> DiagonalDrive<T> for PotentialField<'_, T, H, P>
where
    T: Real,
    H: TimeDependentOperator<T> + ?Sized,
    P: StatePath<T> + ?Sized,
{
    fn diagonal(&self, t: T) -> Result<Vec<T>> {
        let basis = self.phases.basis();
        let (phi, rate) = self.phases.interpolate(t)?;
        let h_ff = assemble(self.h, self.map, basis, &phi, &rate, t)?;
        let h_now = self.h.evaluate(t)?;
        let u = diagonal_phase_unitary(&phi, basis)?;
        let psi = self.reference.state(self.map.lambda(t)).apply(&u);
        let num = (&h_ff - &h_now).mul_vec(psi.amplitudes());
        let mut v: Vec<T> = num
            .iter()
            .zip(psi.amplitudes())
            .map(|(z, p)| {
                let x = (z * p.conj()).re / p.norm_sqr();
                if x.is_finite() { x } else { T::zero() }
            })
            .collect();
        if self.gauge_eliminate {
            let mean = v.iter().fold(T::zero(), |s, &x| s + x) / T::from_usize(v.len()).unwrap();
            v.iter_mut().for_each(|x| *x -= mean);
        }
        Ok(v)
    }
}
