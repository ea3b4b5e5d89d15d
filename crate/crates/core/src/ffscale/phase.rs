use num_complex::Complex;

use crate::dynamics::{checked_evaluate, StatePath, TimeDependentOperator, TimeGrid};
use crate::qcore::{linalg, DiagonalObservableBasis};
use crate::{tol, Error, Real, Result};

use super::newton::{self, NewtonFailure};
use super::ScalingMap;

/// Sampled phases `φ_a(t_k)` and rates `φ̇_a(t_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseTrajectory<T> {
    grid: TimeGrid<T>,
    basis: DiagonalObservableBasis<T>,
    phases: Vec<Vec<T>>,
    rates: Vec<Vec<T>>,
    bridged: Vec<bool>,
}

impl<T: Real> PhaseTrajectory<T> {
    /// Builds a trajectory from phase samples; rates come from central
    /// differences with second-order one-sided stencils at the ends.
    pub fn from_samples(grid: TimeGrid<T>, basis: DiagonalObservableBasis<T>, phases: Vec<Vec<T>>) -> Result<Self> {
        if phases.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: phases.len() });
        }
        if let Some(p) = phases.iter().find(|p| p.len() != basis.len()) {
            return Err(Error::DimensionMismatch { expected: basis.len(), got: p.len() });
        }
        let rates = finite_difference(&phases, grid.dt());
        let bridged = vec![false; phases.len()];
        Ok(Self { grid, basis, phases, rates, bridged })
    }

    /// All-zero phases on `grid`.
    pub fn zeros(grid: TimeGrid<T>, basis: DiagonalObservableBasis<T>) -> Self {
        let n = basis.len();
        Self::from_samples(grid, basis, vec![vec![T::zero(); n]; grid.len()]).expect("consistent shapes")
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn basis(&self) -> &DiagonalObservableBasis<T> {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self, k: usize) -> &[T] {
        &self.phases[k]
    }

    pub fn rates(&self, k: usize) -> &[T] {
        &self.rates[k]
    }

    /// Whether sample `k` sits at a node and was filled from its neighbours.
    pub(crate) fn with_bridged(mut self, bridged: Vec<bool>) -> Self {
        self.bridged = bridged;
        self
    }

    pub fn is_bridged(&self, k: usize) -> bool {
        self.bridged[k]
    }

    /// Grid index of `t`, or an out-of-domain error.
    pub fn index_of(&self, t: T) -> Result<usize> {
        self.grid.index_of(t).ok_or(Error::OutOfDomain { t: t.as_f64() })
    }

    /// Phases and rates at a grid time.
    pub fn sample(&self, t: T) -> Result<(&[T], &[T])> {
        let k = self.index_of(t)?;
        Ok((&self.phases[k], &self.rates[k]))
    }

    /// Cubic Hermite interpolation of phases and rates inside the grid span.
    pub fn interpolate(&self, t: T) -> Result<(Vec<T>, Vec<T>)> {
        if let Some(k) = self.grid.index_of(t) {
            if (t - self.grid.time(k)).abs() <= self.grid.dt() * T::epsilon() * T::lit(4.0) {
                return Ok((self.phases[k].clone(), self.rates[k].clone()));
            }
        }
        let k = self.grid.interval_of(t).ok_or(Error::OutOfDomain { t: t.as_f64() })?;
        let h = self.grid.dt();
        let s = (t - self.grid.time(k)) / h;
        let (s2, s3) = (s * s, s * s * s);
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = -two * s3 + three * s2;
        let h11 = s3 - s2;
        let d00 = (T::lit(6.0) * s2 - T::lit(6.0) * s) / h;
        let d10 = three * s2 - T::lit(4.0) * s + T::one();
        let d01 = -d00;
        let d11 = three * s2 - two * s;
        let (p0, p1, r0, r1) = (&self.phases[k], &self.phases[k + 1], &self.rates[k], &self.rates[k + 1]);
        let phi = (0..p0.len()).map(|a| h00 * p0[a] + h10 * h * r0[a] + h01 * p1[a] + h11 * h * r1[a]).collect();
        let rate = (0..p0.len()).map(|a| d00 * p0[a] + d10 * r0[a] + d01 * p1[a] + d11 * r1[a]).collect();
        Ok((phi, rate))
    }

    /// Largest adjacent-sample change of any phase.
    pub fn max_jump(&self) -> T {
        self.phases.windows(2).fold(T::zero(), |m, w| w[0].iter().zip(&w[1]).fold(m, |m, (a, b)| m.max((*b - *a).abs())))
    }
}

pub(crate) fn finite_difference<T: Real>(samples: &[Vec<T>], dt: T) -> Vec<Vec<T>> {
    let n = samples.len();
    let m = samples.first().map_or(0, Vec::len);
    let two_dt = T::lit(2.0) * dt;
    (0..n)
        .map(|k| {
            (0..m)
                .map(|a| {
                    let f = |i: usize| samples[i][a];
                    if n < 3 {
                        if n == 2 { (f(1) - f(0)) / dt } else { T::zero() }
                    } else if k == 0 {
                        (-T::lit(3.0) * f(0) + T::lit(4.0) * f(1) - f(2)) / two_dt
                    } else if k == n - 1 {
                        (T::lit(3.0) * f(k) - T::lit(4.0) * f(k - 1) + f(k - 2)) / two_dt
                    } else {
                        (f(k + 1) - f(k - 1)) / two_dt
                    }
                })
                .collect()
        })
        .collect()
}

/// Quantities of the reality condition at one time that do not depend on `φ`.
#[derive(Clone, Debug)]
pub(crate) struct Frame<T> {
    pub t: T,
    pub mag: Vec<T>,
    pub node: bool,
    constant: Vec<T>,
    coupling: Vec<Vec<Complex<T>>>,
    projector: Vec<Vec<T>>,
}

/// The reality condition `Im V(σ, t) = 0` for a model and reference solution.
pub struct PhaseProblem<'a, T: Real, H: ?Sized, P: ?Sized> {
    pub h: &'a H,
    pub reference: &'a P,
    pub map: &'a ScalingMap<T>,
    pub basis: &'a DiagonalObservableBasis<T>,
}

impl<'a, T, H, P> PhaseProblem<'a, T, H, P>
where
    T: Real,
    H: TimeDependentOperator<T> + ?Sized,
    P: StatePath<T> + ?Sized,
{
    pub fn new(h: &'a H, reference: &'a P, map: &'a ScalingMap<T>, basis: &'a DiagonalObservableBasis<T>) -> Result<Self> {
        let n = basis.dim();
        if h.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: h.dim() });
        }
        if reference.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: reference.dim() });
        }
        Ok(Self { h, reference, map, basis })
    }

    pub(crate) fn frame(&self, t: T) -> Result<Frame<T>> {
        let alpha = self.map.alpha(t);
        let lam = self.map.lambda(t);
        let psi = self.reference.state(lam);
        let h_lam = checked_evaluate(self.h, lam)?;
        let h_now = checked_evaluate(self.h, t)?;
        let amps = psi.amplitudes();
        let hpsi = h_lam.mul_vec(amps);
        let mag: Vec<T> = amps.iter().map(|z| z.norm()).collect();
        let node = mag.iter().any(|&m| m < T::lit(tol::NODE_AMPLITUDE));
        let n = amps.len();
        let safe = |s: usize| if mag[s] > T::zero() { mag[s] } else { T::one() };
        let constant = (0..n).map(|s| alpha * (amps[s].conj() * hpsi[s]).im / safe(s)).collect();
        let coupling = (0..n).map(|s| (0..n).map(|u| h_now[(s, u)] * amps[s].conj() * amps[u] / safe(s)).collect()).collect();
        let projector = linalg::orthogonal_complement(&mag);
        Ok(Frame { t, mag, node, constant, coupling, projector })
    }

    /// `ρ_σ = |ψ_σ| Im V(σ)` and `∂ρ_σ/∂φ_a`.
    pub(crate) fn weighted_residual(&self, frame: &Frame<T>, phases: &[T]) -> (Vec<T>, Vec<Vec<T>>) {
        let theta = self.basis.angles(phases);
        let n = theta.len();
        let m = self.basis.len();
        let mut rho = frame.constant.clone();
        let mut jac = vec![vec![T::zero(); m]; n];
        for s in 0..n {
            for u in 0..n {
                let z = frame.coupling[s][u] * Complex::from_polar(T::one(), theta[s] - theta[u]);
                rho[s] -= z.im;
                for (a, row) in jac[s].iter_mut().enumerate() {
                    *row -= z.re * (self.basis.entry(a, s) - self.basis.entry(a, u));
                }
            }
        }
        (rho, jac)
    }

    fn projected(&self, frame: &Frame<T>, phases: &[T]) -> (Vec<T>, Vec<Vec<T>>) {
        let (rho, jac) = self.weighted_residual(frame, phases);
        let m = self.basis.len();
        let g = frame.projector.iter().map(|q| q.iter().zip(&rho).fold(T::zero(), |s, (a, b)| s + *a * *b)).collect();
        let j = frame
            .projector
            .iter()
            .map(|q| (0..m).map(|a| q.iter().zip(&jac).fold(T::zero(), |s, (qs, row)| s + *qs * row[a])).collect())
            .collect();
        (g, j)
    }

    /// `Im V(σ, t)` for the given phases (components at nodes report 0).
    pub fn imaginary_parts(&self, t: T, phases: &[T]) -> Result<Vec<T>> {
        let frame = self.frame(t)?;
        let (rho, _) = self.weighted_residual(&frame, phases);
        Ok(rho.iter().zip(&frame.mag).map(|(r, &m)| if m < T::lit(tol::NODE_AMPLITUDE) { T::zero() } else { *r / m }).collect())
    }

    /// Solves the condition at `t` starting from `seed`.
    pub fn solve_at(&self, t: T, seed: &[T]) -> Result<Vec<T>> {
        let frame = self.frame(t)?;
        self.solve_frame(&frame, seed)
    }

    fn solve_frame(&self, frame: &Frame<T>, seed: &[T]) -> Result<Vec<T>> {
        newton::solve_default(|x| self.projected(frame, x), seed).map(|s| s.x).map_err(|e| infeasible(frame.t, &e))
    }

    /// Tries a spread of seeds and keeps the solution of smallest `max |φ_a|`.
    fn solve_initial(&self, frame: &Frame<T>) -> Result<Vec<T>> {
        let m = self.basis.len();
        let mut seeds = vec![vec![T::zero(); m]];
        for a in 0..m {
            for s in [0.25, -0.25, 0.5, -0.5, 1.0, -1.0] {
                let mut v = vec![T::zero(); m];
                v[a] = T::lit(s) * T::PI();
                seeds.push(v);
            }
        }
        let mut best: Option<Vec<T>> = None;
        let mut last_err = None;
        for seed in seeds {
            match self.solve_frame(frame, &seed) {
                Ok(x) => {
                    let size = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
                    let better = best.as_ref().is_none_or(|b| size < b.iter().fold(T::zero(), |m, v| m.max(v.abs())) - T::lit(1e-12));
                    if better {
                        best = Some(x);
                    }
                    if size <= T::lit(1e-12) {
                        break;
                    }
                }
                Err(e) => last_err = Some(e),
            }
        }
        best.ok_or_else(|| last_err.unwrap_or(Error::Infeasible { t: frame.t.as_f64(), reason: "no seed converged".into() }))
    }
}

fn infeasible<T: Real>(t: T, e: &NewtonFailure) -> Error {
    Error::Infeasible { t: t.as_f64(), reason: e.to_string() }
}

/// Solves the reality condition on every grid point by Newton continuation.
///
/// Points where the reference state has a node are skipped during the sweep
/// and bridged by cubic interpolation from the neighbouring solutions.
pub fn solve_phase_condition<T, H, P>(
    h: &H,
    reference: &P,
    map: &ScalingMap<T>,
    basis: &DiagonalObservableBasis<T>,
    grid: &TimeGrid<T>,
) -> Result<PhaseTrajectory<T>>
where
    T: Real,
    H: TimeDependentOperator<T> + ?Sized,
    P: StatePath<T> + ?Sized,
{
    let problem = PhaseProblem::new(h, reference, map, basis)?;
    let m = basis.len();
    let mut phases: Vec<Option<Vec<T>>> = Vec::with_capacity(grid.len());
    let mut last: Option<Vec<T>> = None;
    let jump_limit = T::lit(tol::BRANCH_JUMP);
    for t in grid.times() {
        let frame = problem.frame(t)?;
        if frame.node {
            phases.push(None);
            continue;
        }
        let x = match &last {
            None => problem.solve_initial(&frame)?,
            Some(prev) => {
                let x = problem.solve_frame(&frame, prev)?;
                let jump = x.iter().zip(prev).fold(T::zero(), |j, (a, b)| j.max((*a - *b).abs()));
                if jump > jump_limit {
                    return Err(Error::BranchLoss { t: t.as_f64(), jump: jump.as_f64() });
                }
                x
            }
        };
        last = Some(x.clone());
        phases.push(Some(x));
    }
    if phases.iter().all(Option::is_none) {
        return Err(Error::Infeasible { t: grid.start().as_f64(), reason: "reference state has a node at every grid point".into() });
    }
    let bridged: Vec<bool> = phases.iter().map(Option::is_none).collect();
    let filled = bridge(grid, &phases, m);
    let mut traj = PhaseTrajectory::from_samples(*grid, basis.clone(), filled)?;
    traj.bridged = bridged;
    Ok(traj)
}

/// Fills missing samples by Lagrange interpolation through up to two solved
/// neighbours on each side.
pub fn bridge<T: Real>(grid: &TimeGrid<T>, phases: &[Option<Vec<T>>], m: usize) -> Vec<Vec<T>> {
    let known: Vec<usize> = (0..phases.len()).filter(|&k| phases[k].is_some()).collect();
    (0..phases.len())
        .map(|k| {
            if let Some(p) = &phases[k] {
                return p.clone();
            }
            let pos = known.partition_point(|&i| i < k);
            let lo = pos.saturating_sub(2).min(known.len().saturating_sub(4));
            let hi = (lo + 4).min(known.len());
            let nodes: Vec<usize> = known[lo..hi].to_vec();
            let t = grid.time(k);
            (0..m)
                .map(|a| {
                    nodes.iter().fold(T::zero(), |acc, &i| {
                        let w = nodes.iter().filter(|&&j| j != i).fold(T::one(), |w, &j| w * (t - grid.time(j)) / (grid.time(i) - grid.time(j)));
                        acc + w * phases[i].as_ref().unwrap()[a]
                    })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_difference_exact_for_quadratics() {
        let dt = 0.1;
        let samples: Vec<Vec<f64>> = (0..6).map(|k| vec![(k as f64 * dt).powi(2)]).collect();
        let d = finite_difference(&samples, dt);
        for (k, row) in d.iter().enumerate() {
            assert!((row[0] - 2.0 * k as f64 * dt).abs() < 1e-12);
        }
    }

    #[test]
    fn interpolation_reproduces_cubic() {
        let grid = TimeGrid::new(0.0, 1.0, 0.1).unwrap();
        let basis = DiagonalObservableBasis::standard(2).unwrap();
        let f = |t: f64| t * t * t - t;
        let mut traj = PhaseTrajectory::from_samples(grid, basis, grid.times().map(|t| vec![f(t)]).collect()).unwrap();
        traj.rates = grid.times().map(|t| vec![3.0 * t * t - 1.0]).collect();
        let (p, r) = traj.interpolate(0.437).unwrap();
        assert!((p[0] - f(0.437)).abs() < 1e-14);
        assert!((r[0] - (3.0 * 0.437f64.powi(2) - 1.0)).abs() < 1e-13);
        assert!(traj.interpolate(1.5).is_err());
        assert!(traj.sample(0.45).is_err());
    }

    #[test]
    fn bridge_fills_gap_smoothly() {
        let grid = TimeGrid::new(0.0, 1.0, 0.1).unwrap();
        let mut phases: Vec<Option<Vec<f64>>> = grid.times().map(|t| Some(vec![t * t])).collect();
        phases[5] = None;
        let filled = bridge(&grid, &phases, 1);
        assert!((filled[5][0] - 0.25).abs() < 1e-14);
    }
}
