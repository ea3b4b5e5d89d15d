use num_complex::Complex;

use crate::qcore::StateVector;
use crate::{tol, Error, Real, Result};

use super::operator::checked_evaluate;
use super::{TimeDependentOperator, TimeGrid};

/// States sampled on a grid, with the largest observed `| |ψ|² − 1 |`.
#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    pub grid: TimeGrid<T>,
    pub states: Vec<StateVector<T>>,
    pub norm_drift: T,
}

impl<T: Real> Trajectory<T> {
    pub fn state(&self, k: usize) -> &StateVector<T> {
        &self.states[k]
    }

    pub fn final_state(&self) -> &StateVector<T> {
        self.states.last().expect("trajectory has at least one state")
    }
}

type Amps<T> = Vec<Complex<T>>;

fn rhs<T: Real>(h: &crate::qcore::CMatrix<T>, y: &[Complex<T>]) -> Amps<T> {
    let mi = Complex::new(T::zero(), -T::one());
    h.mul_vec(y).into_iter().map(|z| z * mi).collect()
}

fn axpy<T: Real>(y: &[Complex<T>], a: T, k: &[Complex<T>]) -> Amps<T> {
    y.iter().zip(k).map(|(&y, &k)| y + k * a).collect()
}

fn check_start<T: Real>(dim: usize, psi0: &StateVector<T>) -> Result<()> {
    if dim != psi0.dim() {
        return Err(Error::DimensionMismatch { expected: dim, got: psi0.dim() });
    }
    let dev = (psi0.norm_sqr() - T::one()).abs();
    if !(dev <= T::tol(tol::NORM)) {
        return Err(Error::NotNormalized { deviation: dev.as_f64() });
    }
    Ok(())
}

fn gate<T: Real>(drift: T) -> Result<()> {
    if drift.is_finite() && drift <= T::tol(tol::NORM_DRIFT) {
        Ok(())
    } else {
        Err(Error::IntegrationQuality { drift: drift.as_f64() })
    }
}

/// Classical RK4 for `dψ/dt = −i H(t) ψ`, without renormalization.
pub fn evolve<T, H>(h: &H, psi0: &StateVector<T>, grid: &TimeGrid<T>) -> Result<Trajectory<T>>
where
    T: Real,
    H: TimeDependentOperator<T> + ?Sized,
{
    check_start(h.dim(), psi0)?;
    let dt = grid.dt();
    let half = dt * T::lit(0.5);
    let sixth = dt / T::lit(6.0);
    let mut y = psi0.amplitudes().to_vec();
    let mut states = Vec::with_capacity(grid.len());
    states.push(psi0.clone());
    let mut drift = T::zero();
    let mut h_start = checked_evaluate(h, grid.time(0))?;
    for k in 0..grid.steps() {
        let t = grid.time(k);
        let h_mid = checked_evaluate(h, t + half)?;
        let h_end = checked_evaluate(h, grid.time(k + 1))?;
        let k1 = rhs(&h_start, &y);
        let k2 = rhs(&h_mid, &axpy(&y, half, &k1));
        let k3 = rhs(&h_mid, &axpy(&y, half, &k2));
        let k4 = rhs(&h_end, &axpy(&y, dt, &k3));
        for i in 0..y.len() {
            y[i] += (k1[i] + (k2[i] + k3[i]) * T::lit(2.0) + k4[i]) * sixth;
        }
        let s = StateVector::from_raw(y.clone());
        drift = drift.max((s.norm_sqr() - T::one()).abs());
        states.push(s);
        h_start = h_end;
    }
    gate(drift)?;
    Ok(Trajectory { grid: *grid, states, norm_drift: drift })
}

/// Real diagonal potential `t ↦ V(σ, t)` added to a Hamiltonian.
pub trait DiagonalDrive<T: Real> {
    fn diagonal(&self, t: T) -> Result<Vec<T>>;
}

impl<T: Real, F: Fn(T) -> Result<Vec<T>>> DiagonalDrive<T> for F {
    fn diagonal(&self, t: T) -> Result<Vec<T>> {
        self(t)
    }
}

/// Sub-stepping around times where the drive diverges.
///
/// Inside `radius` of a listed time, steps are shortened so that no component
/// of the drive accumulates more than `max_phase` of phase per substep, and the
/// interval `[t_s − hop, t_s + hop]` is crossed in a single step.
#[derive(Clone, Debug, PartialEq)]
pub struct Refinement<T> {
    pub times: Vec<T>,
    pub radius: T,
    pub max_phase: T,
    pub hop: T,
}

impl<T: Real> Refinement<T> {
    pub fn none() -> Self {
        Self { times: Vec::new(), radius: T::zero(), max_phase: T::lit(0.05), hop: T::lit(1e-9) }
    }

    pub fn around(times: Vec<T>, dt: T) -> Self {
        Self { times, radius: dt * T::lit(64.0), max_phase: T::lit(0.05), hop: T::lit(1e-9) }
    }

    fn touches(&self, a: T, b: T) -> bool {
        self.times.iter().any(|&ts| ts + self.radius > a && ts - self.radius < b)
    }
}

/// RK4 for `dψ/dt = −i (H(t) + diag V(t)) ψ` in the interaction picture of the
/// diagonal drive, which is integrated exactly per stage.
pub fn evolve_driven<T, H, D>(h: &H, drive: &D, psi0: &StateVector<T>, grid: &TimeGrid<T>, refine: &Refinement<T>) -> Result<Trajectory<T>>
where
    T: Real,
    H: TimeDependentOperator<T> + ?Sized,
    D: DiagonalDrive<T> + ?Sized,
{
    check_start(h.dim(), psi0)?;
    let mut y = psi0.amplitudes().to_vec();
    let mut states = Vec::with_capacity(grid.len());
    states.push(psi0.clone());
    let mut drift = T::zero();
    for k in 0..grid.steps() {
        let (t0, t1) = (grid.time(k), grid.time(k + 1));
        if refine.touches(t0, t1) {
            let mut s = t0;
            let eps = grid.dt() * T::lit(1e-12);
            while t1 - s > eps {
                let step = substep(drive, refine, s, t1)?;
                y = lawson_step(h, drive, s, &y, step)?;
                s = if t1 - (s + step) <= eps { t1 } else { s + step };
            }
        } else {
            y = lawson_step(h, drive, t0, &y, grid.dt())?;
        }
        let st = StateVector::from_raw(y.clone());
        drift = drift.max((st.norm_sqr() - T::one()).abs());
        states.push(st);
    }
    gate(drift)?;
    Ok(Trajectory { grid: *grid, states, norm_drift: drift })
}

fn substep<T: Real, D: DiagonalDrive<T> + ?Sized>(drive: &D, refine: &Refinement<T>, s: T, t1: T) -> Result<T> {
    let remaining = t1 - s;
    let hop = refine.hop;
    if let Some(&ts) = refine.times.iter().find(|&&ts| s >= ts - hop && s < ts + hop) {
        return Ok((ts + hop - s).min(remaining));
    }
    let vmax = drive.diagonal(s)?.into_iter().fold(T::zero(), |m, v| if v.is_finite() { m.max(v.abs()) } else { m });
    let mut step = if vmax > T::zero() { remaining.min(refine.max_phase / vmax) } else { remaining };
    if let Some(&ts) = refine.times.iter().find(|&&ts| s < ts - hop && s + step > ts - hop) {
        step = ts - hop - s;
    }
    Ok(step.max(remaining * T::epsilon()))
}

fn lawson_step<T, H, D>(h: &H, drive: &D, t: T, y: &[Complex<T>], step: T) -> Result<Amps<T>>
where
    T: Real,
    H: TimeDependentOperator<T> + ?Sized,
    D: DiagonalDrive<T> + ?Sized,
{
    let half = step * T::lit(0.5);
    let (tm, t1) = (t + half, t + step);
    let finite = |v: Vec<T>| -> Vec<T> { v.into_iter().map(|x| if x.is_finite() { x } else { T::zero() }).collect() };
    let v0 = finite(drive.diagonal(t)?);
    let vm = finite(drive.diagonal(tm)?);
    let v1 = finite(drive.diagonal(t1)?);
    if v0.len() != y.len() || vm.len() != y.len() || v1.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: y.len(), got: v0.len() });
    }
    let c24 = step / T::lit(24.0);
    let c6 = step / T::lit(6.0);
    let em: Amps<T> = (0..y.len())
        .map(|i| Complex::from_polar(T::one(), -(c24 * (T::lit(5.0) * v0[i] + T::lit(8.0) * vm[i] - v1[i]))))
        .collect();
    let e1: Amps<T> = (0..y.len()).map(|i| Complex::from_polar(T::one(), -(c6 * (v0[i] + T::lit(4.0) * vm[i] + v1[i])))).collect();
    let (h0, hm, h1) = (checked_evaluate(h, t)?, checked_evaluate(h, tm)?, checked_evaluate(h, t1)?);
    let twist = |e: &Amps<T>, z: Amps<T>| -> Amps<T> { z.into_iter().zip(e).map(|(z, e)| z * e).collect() };
    let untwist = |e: &Amps<T>, z: Amps<T>| -> Amps<T> { z.into_iter().zip(e).map(|(z, e)| z * e.conj()).collect() };
    let k1 = rhs(&h0, y);
    let k2 = untwist(&em, rhs(&hm, &twist(&em, axpy(y, half, &k1))));
    let k3 = untwist(&em, rhs(&hm, &twist(&em, axpy(y, half, &k2))));
    let k4 = untwist(&e1, rhs(&h1, &twist(&e1, axpy(y, step, &k3))));
    let mut out = y.to_vec();
    for i in 0..out.len() {
        out[i] += (k1[i] + (k2[i] + k3[i]) * T::lit(2.0) + k4[i]) * c6;
    }
    Ok(twist(&e1, out))
}

/// `|<χ|ψ>|²`.
pub fn fidelity<T: Real>(psi: &StateVector<T>, chi: &StateVector<T>) -> T {
    chi.inner(psi).norm_sqr()
}

/// `|<σ|ψ>|²`.
pub fn population<T: Real>(psi: &StateVector<T>, index: usize) -> Result<T> {
    if index >= psi.dim() {
        return Err(Error::InvalidIndex { index, dim: psi.dim() });
    }
    Ok(psi[index].norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::FnOperator;
    use crate::qcore::{pauli, Axis, CMatrix};

    fn half_z() -> FnOperator<impl Fn(f64) -> CMatrix<f64> + Send + Sync> {
        FnOperator::new(2, |_t: f64| pauli::<f64>(Axis::Z).scale_real(0.5))
    }

    #[test]
    fn stationary_state_picks_up_phase() {
        let psi0 = StateVector::basis(2, 0).unwrap();
        let grid = TimeGrid::new(0.0, std::f64::consts::PI, std::f64::consts::PI / 1000.0).unwrap();
        let traj = evolve(&half_z(), &psi0, &grid).unwrap();
        let end = traj.final_state();
        assert!((end[0] - Complex::new(0.0, -1.0)).norm() < 1e-10);
        assert!((population(end, 0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_start_rejected() {
        let psi0 = StateVector::from_raw(vec![Complex::new(2.0, 0.0), Complex::new(0.0, 0.0)]);
        let grid = TimeGrid::new(0.0, 1.0, 0.1).unwrap();
        assert!(matches!(evolve(&half_z(), &psi0, &grid), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn coarse_step_trips_quality_gate() {
        let psi0 = StateVector::normalized(vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)]).unwrap();
        let big = FnOperator::new(2, |_t: f64| pauli::<f64>(Axis::X).scale_real(50.0));
        let grid = TimeGrid::new(0.0, 1.0, 0.05).unwrap();
        assert!(matches!(evolve(&big, &psi0, &grid), Err(Error::IntegrationQuality { .. })));
    }

    #[test]
    fn driven_constant_drive_matches_closed_form() {
        let zero = FnOperator::new(2, |_t: f64| CMatrix::zeros(2));
        let drive = |_t: f64| -> Result<Vec<f64>> { Ok(vec![3.0, -1.0]) };
        let psi0 = StateVector::normalized(vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)]).unwrap();
        let grid = TimeGrid::new(0.0, 2.0, 0.5).unwrap();
        let traj = evolve_driven(&zero, &drive, &psi0, &grid, &Refinement::none()).unwrap();
        let end = traj.final_state();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((end[0] - Complex::from_polar(r, -6.0)).norm() < 1e-14);
        assert!((end[1] - Complex::from_polar(r, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn fidelity_examples() {
        let up = StateVector::<f64>::basis(2, 0).unwrap();
        let down = StateVector::<f64>::basis(2, 1).unwrap();
        assert_eq!(fidelity(&up, &up), 1.0);
        assert_eq!(fidelity(&up, &down), 0.0);
        let half = Complex::new(0.5, 0.0);
        let xx = StateVector::new(vec![half; 4]).unwrap();
        let r = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex::new(0.0, 0.0);
        let bell = StateVector::new(vec![z, r, r, z]).unwrap();
        assert!((fidelity(&xx, &bell) - 0.5).abs() < 1e-15);
        assert!(population(&up, 2).is_err());
    }
}
