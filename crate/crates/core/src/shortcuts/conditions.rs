use num_complex::Complex;

use crate::dynamics::{checked_evaluate, TimeDependentOperator, TimeGrid};
use crate::ffscale::{newton, AccelerationPotential, PhaseTrajectory, ScalingMap};
use crate::qcore::{diagonal_phase_unitary, eigendecompose, linalg, CMatrix, DiagonalObservableBasis};
use crate::{tol, Error, Real, Result};

use super::{AdiabaticModel, TransitionlessHamiltonian};

/// Phases and potential that fast-forward the adiabatic state `n`.
#[derive(Clone, Debug)]
pub struct FFConditionSolution<T> {
    pub target: usize,
    pub phases: PhaseTrajectory<T>,
    /// `w_a = φ̇_a − v_a` per grid point.
    pub w: Vec<Vec<T>>,
    pub potential: AccelerationPotential<T>,
    /// `‖H_FF|ñ> − (H + V)|ñ>‖` per grid point.
    pub residual: Vec<T>,
}

impl<T: Real> FFConditionSolution<T> {
    pub fn grid(&self) -> &TimeGrid<T> {
        self.phases.grid()
    }

    pub fn max_residual(&self) -> T {
        (0..self.residual.len()).filter(|&k| !self.potential.is_singular(k)).fold(T::zero(), |m, k| m.max(self.residual[k]))
    }
}

struct Point<T> {
    t: T,
    alpha: T,
    energy: T,
    n: Vec<Complex<T>>,
    others: Vec<Vec<Complex<T>>>,
    /// `iα<m|ṅ>` per `m ≠ n`.
    drift: Vec<Complex<T>>,
    h: CMatrix<T>,
    node: bool,
}

fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(Complex::new(T::zero(), T::zero()), |s, (x, y)| s + x.conj() * y)
}

impl<T: Real> Point<T> {
    /// `<m|X_a|n>`.
    fn x_elem(&self, basis: &DiagonalObservableBasis<T>, m: &[Complex<T>], a: usize) -> Complex<T> {
        (0..m.len()).fold(Complex::new(T::zero(), T::zero()), |s, i| s + m[i].conj() * self.n[i] * basis.entry(a, i))
    }

    /// `<m̃|H|ñ>` and its `φ_a` derivatives.
    fn h_elem(&self, basis: &DiagonalObservableBasis<T>, m: &[Complex<T>], theta: &[T]) -> (Complex<T>, Vec<Complex<T>>) {
        let dim = m.len();
        let i = Complex::new(T::zero(), T::one());
        let mut val = Complex::new(T::zero(), T::zero());
        let mut grad = vec![Complex::new(T::zero(), T::zero()); basis.len()];
        for s in 0..dim {
            for u in 0..dim {
                let z = m[s].conj() * self.n[u] * self.h[(s, u)] * Complex::from_polar(T::one(), theta[s] - theta[u]);
                val += z;
                for (a, g) in grad.iter_mut().enumerate() {
                    *g += z * i * (basis.entry(a, s) - basis.entry(a, u));
                }
            }
        }
        (val, grad)
    }

    /// Real and imaginary parts of the off-diagonal conditions in `(φ, w)`.
    fn system(&self, basis: &DiagonalObservableBasis<T>, x: &[T]) -> (Vec<T>, Vec<Vec<T>>) {
        let mm = basis.len();
        let (phi, w) = x.split_at(mm);
        let theta = basis.angles(phi);
        let mut g = Vec::with_capacity(2 * mm);
        let mut jac = Vec::with_capacity(2 * mm);
        for (m, drift) in self.others.iter().zip(&self.drift) {
            let (hv, hg) = self.h_elem(basis, m, &theta);
            let xs: Vec<Complex<T>> = (0..mm).map(|a| self.x_elem(basis, m, a)).collect();
            let e = xs.iter().zip(w).fold(hv - drift, |s, (xa, &wa)| s - xa * wa);
            g.push(e.re);
            g.push(e.im);
            jac.push(hg.iter().map(|z| z.re).chain(xs.iter().map(|z| -z.re)).collect());
            jac.push(hg.iter().map(|z| z.im).chain(xs.iter().map(|z| -z.im)).collect());
        }
        (g, jac)
    }

    /// Smallest singular value of the phase block of the Jacobian once the
    /// `w` directions are projected out, relative to `max(1, max|H|)`.
    fn phase_sensitivity(&self, basis: &DiagonalObservableBasis<T>, x: &[T]) -> T {
        let mm = basis.len();
        let (_, jac) = self.system(basis, x);
        let w_cols: Vec<Vec<T>> = jac.iter().map(|r| r[mm..].to_vec()).collect();
        let perp: Vec<Vec<T>> = (0..mm)
            .map(|a| {
                let c: Vec<T> = jac.iter().map(|r| r[a]).collect();
                let coef = linalg::least_squares(&w_cols, &c, T::min_positive_value()).unwrap_or_else(|| vec![T::zero(); mm]);
                c.iter().zip(&w_cols).map(|(ci, row)| *ci - row.iter().zip(&coef).fold(T::zero(), |s, (r, k)| s + *r * *k)).collect()
            })
            .collect();
        let gram = CMatrix::from_fn(mm, |a, b| Complex::new(perp[a].iter().zip(&perp[b]).fold(T::zero(), |s, (x, y)| s + *x * *y), T::zero()));
        let smallest = eigendecompose(&gram, T::zero()).map_or(T::zero(), |d| d.energies[0].max(T::zero()));
        smallest.sqrt() / self.h.max_abs().max(T::one())
    }

    /// Least-squares `w` for fixed phases.
    fn w_for(&self, basis: &DiagonalObservableBasis<T>, phi: &[T]) -> Vec<T> {
        let mm = basis.len();
        let mut x: Vec<T> = phi.to_vec();
        x.extend(std::iter::repeat_n(T::zero(), mm));
        let (g, jac) = self.system(basis, &x);
        let a: Vec<Vec<T>> = jac.iter().map(|r| r[mm..].to_vec()).collect();
        let b: Vec<T> = g.iter().map(|v| -*v).collect();
        linalg::least_squares(&a, &b, T::lit(1e-300).max(T::min_positive_value())).unwrap_or_else(|| vec![T::zero(); mm])
    }
}

/// Solves the off-diagonal conditions `<m̃|H|ñ> = Σ_a w_a <m|X_a|n> + iα<m|ṅ>`
/// for `φ_a`, `w_a` by Newton continuation, then fixes `v_a = φ̇_a − w_a` and
/// `v0` from the diagonal condition.
///
/// Points where the conditions lose their dependence on `φ` (for instance
/// when `H` is diagonal) are bridged from their neighbours and flagged.
///
/// `H` is the transitionless Hamiltonian `H_ad + H_cd` and the target state is
/// eigenvector `n` (ascending energy order) of `H_ad(Λ(t))`.
pub fn ff_conditions_solve<T, H>(
    model: &AdiabaticModel<H>,
    n: usize,
    map: &ScalingMap<T>,
    basis: &DiagonalObservableBasis<T>,
    grid: &TimeGrid<T>,
    dt_fd: T,
) -> Result<FFConditionSolution<T>>
where
    T: Real,
    H: TimeDependentOperator<T>,
{
    let dim = model.dim();
    if basis.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: basis.dim() });
    }
    if n >= dim {
        return Err(Error::InvalidIndex { index: n, dim });
    }
    let h_tl = TransitionlessHamiltonian::new(model, dt_fd);
    let mm = basis.len();
    let i = Complex::new(T::zero(), T::one());
    let mut points = Vec::with_capacity(grid.len());
    let mut prev_frame: Option<crate::qcore::SpectralDecomposition<T>> = None;
    for t in grid.times() {
        let s = map.lambda(t);
        let alpha = map.alpha(t);
        let mut frame = model.eigenframe(s, dt_fd)?;
        if let Some(prev) = &prev_frame {
            let aligned = frame.decomposition.clone().align_to(prev);
            for (k, (old, new)) in frame.decomposition.vectors.iter().zip(&aligned.vectors).enumerate() {
                let ph = old.inner(new);
                frame.derivatives[k].iter_mut().for_each(|z| *z *= ph);
            }
            frame.decomposition = aligned;
        }
        prev_frame = Some(frame.decomposition.clone());
        let vecs: Vec<Vec<Complex<T>>> = frame.decomposition.vectors.iter().map(|v| v.amplitudes().to_vec()).collect();
        let nv = vecs[n].clone();
        let others: Vec<Vec<Complex<T>>> = (0..dim).filter(|&m| m != n).map(|m| vecs[m].clone()).collect();
        let drift = others.iter().map(|m| i * alpha * dot(m, &frame.derivatives[n])).collect();
        let node = nv.iter().any(|z| z.norm() < T::lit(tol::NODE_AMPLITUDE));
        points.push(Point { t, alpha, energy: frame.decomposition.energies[n], n: nv, others, drift, h: checked_evaluate(&h_tl, t)?, node });
    }

    let mut sols: Vec<Option<Vec<T>>> = Vec::with_capacity(points.len());
    let mut last: Option<Vec<T>> = None;
    let mut degenerate = vec![false; points.len()];
    for p in &points {
        if p.node {
            sols.push(None);
            continue;
        }
        let seed = last.clone().unwrap_or_else(|| vec![T::zero(); 2 * mm]);
        if last.is_some() && p.phase_sensitivity(basis, &seed) < T::lit(tol::PHASE_SENSITIVITY) {
            degenerate[sols.len()] = true;
            sols.push(None);
            continue;
        }
        let sol = newton::solve_default(|x| p.system(basis, x), &seed).map_err(|e| Error::Infeasible { t: p.t.as_f64(), reason: e.to_string() })?;
        if let Some(prev) = &last {
            let jump = sol.x[..mm].iter().zip(&prev[..mm]).fold(T::zero(), |j, (a, b)| j.max((*a - *b).abs()));
            if jump > T::lit(tol::BRANCH_JUMP) {
                return Err(Error::BranchLoss { t: p.t.as_f64(), jump: jump.as_f64() });
            }
        }
        last = Some(sol.x.clone());
        sols.push(Some(sol.x));
    }
    if sols.iter().all(Option::is_none) {
        return Err(Error::Infeasible { t: grid.start().as_f64(), reason: "target state has a node at every grid point".into() });
    }

    let known: Vec<Option<Vec<T>>> = sols.iter().map(|s| s.as_ref().map(|x| x[..mm].to_vec())).collect();
    let phi = crate::ffscale::bridge_samples(grid, &known, mm);
    let phases = PhaseTrajectory::from_samples(*grid, basis.clone(), phi)?.with_bridged(known.iter().map(Option::is_none).collect());
    let nn = T::from_usize(dim).unwrap();
    let cap = T::lit(tol::POTENTIAL_CAP);
    let mut w_all = Vec::with_capacity(points.len());
    let mut v0s = Vec::with_capacity(points.len());
    let mut vs = Vec::with_capacity(points.len());
    let mut values = Vec::with_capacity(points.len());
    let mut flags = Vec::with_capacity(points.len());
    let mut residual = Vec::with_capacity(points.len());
    for (k, p) in points.iter().enumerate() {
        let phi = phases.phases(k);
        let w = match &sols[k] {
            Some(x) => x[mm..].to_vec(),
            None => p.w_for(basis, phi),
        };
        let theta = basis.angles(phi);
        let (hnn, _) = p.h_elem(basis, &p.n, &theta);
        let xw = (0..mm).fold(T::zero(), |s, a| s + w[a] * p.x_elem(basis, &p.n, a).re);
        let mut v0 = nn * (p.alpha * p.energy + xw - hnn.re);
        let mut v: Vec<T> = phases.rates(k).iter().zip(&w).map(|(r, wa)| *r - *wa).collect();
        let mut vals = basis.compose(v0, &v);
        let flag: Vec<bool> = p.n.iter().map(|z| degenerate[k] || z.norm() < T::lit(tol::NODE_AMPLITUDE)).collect();
        if flag.iter().any(|&f| f) || vals.iter().any(|x| !x.is_finite() || x.abs() > cap) {
            vals.iter_mut().for_each(|x| *x = if x.is_nan() { T::zero() } else { x.max(-cap).min(cap) });
            let (a, b) = basis.decompose(&vals)?;
            v0 = a;
            v = b;
        }
        let u = diagonal_phase_unitary(phi, basis)?;
        let ntilde = u.mul_vec(&p.n);
        let h_ff = crate::ffscale::assemble_ff(&h_tl, map, basis, phi, phases.rates(k), p.t)?;
        let lhs = h_ff.mul_vec(&ntilde);
        let mut hv = p.h.clone();
        hv.add_real_diagonal(&vals);
        let rhs = hv.mul_vec(&ntilde);
        residual.push(lhs.iter().zip(&rhs).fold(T::zero(), |s, (a, b)| s + (a - b).norm_sqr()).sqrt());
        w_all.push(w);
        v0s.push(v0);
        vs.push(v);
        values.push(vals);
        flags.push(flag);
    }
    let mut potential = AccelerationPotential::from_coefficients(*grid, basis.clone(), v0s, vs)?;
    potential.values = values;
    potential.flags = flags;
    potential.equivalence_residual = residual.clone();
    Ok(FFConditionSolution { target: n, phases, w: w_all, potential, residual })
}
