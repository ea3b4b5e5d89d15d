//! Damped Newton iteration shared by the phase-condition solvers.

use crate::qcore::linalg;
use crate::{tol, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonSolution<T> {
    pub x: Vec<T>,
    pub residual: T,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NewtonFailure {
    Singular { residual: f64 },
    NoConvergence { residual: f64 },
    NonFinite,
}

impl std::fmt::Display for NewtonFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Singular { residual } => write!(f, "singular Jacobian (residual {residual:e})"),
            Self::NoConvergence { residual } => write!(f, "no convergence (residual {residual:e})"),
            Self::NonFinite => write!(f, "non-finite residual"),
        }
    }
}

fn max_norm<T: Real>(g: &[T]) -> T {
    g.iter().fold(T::zero(), |m, x| if x.is_nan() { T::nan() } else { m.max(x.abs()) })
}

/// Solves `g(x) = 0` where `system(x)` returns `(g, ∂g/∂x)`.
///
/// Converges once `max |g| ≤ tol`, then applies one polishing step.
pub fn solve<T, F>(mut system: F, x0: &[T], tol: T, max_iter: usize) -> Result<NewtonSolution<T>, NewtonFailure>
where
    T: Real,
    F: FnMut(&[T]) -> (Vec<T>, Vec<Vec<T>>),
{
    let mut x = x0.to_vec();
    let (mut g, mut jac) = system(&x);
    let mut r = max_norm(&g);
    for it in 0..=max_iter {
        if !r.is_finite() {
            return Err(NewtonFailure::NonFinite);
        }
        let neg: Vec<T> = g.iter().map(|&v| -v).collect();
        let step = linalg::solve(&jac, &neg);
        if r <= tol {
            if let Some(d) = step {
                let xp: Vec<T> = x.iter().zip(&d).map(|(a, b)| *a + *b).collect();
                let (gp, _) = system(&xp);
                let rp = max_norm(&gp);
                if rp <= r {
                    return Ok(NewtonSolution { x: xp, residual: rp, iterations: it + 1 });
                }
            }
            return Ok(NewtonSolution { x, residual: r, iterations: it });
        }
        if it == max_iter {
            break;
        }
        let Some(d) = step else {
            return Err(NewtonFailure::Singular { residual: r.as_f64() });
        };
        let mut lam = T::one();
        let mut accepted = None;
        for _ in 0..12 {
            let xt: Vec<T> = x.iter().zip(&d).map(|(a, b)| *a + lam * *b).collect();
            let (gt, jt) = system(&xt);
            let rt = max_norm(&gt);
            if rt.is_finite() && rt < r {
                accepted = Some((xt, gt, jt, rt));
                break;
            }
            lam *= T::lit(0.5);
        }
        match accepted {
            Some((xt, gt, jt, rt)) => {
                x = xt;
                g = gt;
                jac = jt;
                r = rt;
            }
            None => return Err(NewtonFailure::NoConvergence { residual: r.as_f64() }),
        }
    }
    Err(NewtonFailure::NoConvergence { residual: r.as_f64() })
}

/// [`solve`] with the library's default tolerance and iteration cap.
pub fn solve_default<T, F>(system: F, x0: &[T]) -> Result<NewtonSolution<T>, NewtonFailure>
where
    T: Real,
    F: FnMut(&[T]) -> (Vec<T>, Vec<Vec<T>>),
{
    solve(system, x0, T::tol(tol::NEWTON_TOL), tol::NEWTON_MAX_ITER)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_square_root() {
        let s = solve_default(|x: &[f64]| (vec![x[0] * x[0] - 2.0], vec![vec![2.0 * x[0]]]), &[1.0]).unwrap();
        assert!((s.x[0] - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn reports_unsolvable_system() {
        let r = solve_default(|x: &[f64]| (vec![x[0] * x[0] + 1.0], vec![vec![2.0 * x[0]]]), &[0.5]);
        assert!(r.is_err());
    }

    #[test]
    fn solves_coupled_system() {
        let sys = |x: &[f64]| {
            (vec![x[0].sin() - 0.5 * x[1], x[0] + x[1] - 1.0], vec![vec![x[0].cos(), -0.5], vec![1.0, 1.0]])
        };
        let s = solve_default(sys, &[0.0, 0.0]).unwrap();
        assert!((s.x[0].sin() - 0.5 * s.x[1]).abs() < 1e-12);
    }
}
