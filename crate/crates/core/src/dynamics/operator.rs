use crate::qcore::{CMatrix, StateVector};
use crate::{tol, Real, Result};

/// Time-dependent Hermitian operator `t ↦ H(t)`.
pub trait TimeDependentOperator<T: Real>: Send + Sync {
    fn dim(&self) -> usize;
    fn evaluate(&self, t: T) -> Result<CMatrix<T>>;
}

impl<T: Real, O: TimeDependentOperator<T> + ?Sized> TimeDependentOperator<T> for &O {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn evaluate(&self, t: T) -> Result<CMatrix<T>> {
        (**self).evaluate(t)
    }
}

impl<T: Real, O: TimeDependentOperator<T> + ?Sized> TimeDependentOperator<T> for Box<O> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn evaluate(&self, t: T) -> Result<CMatrix<T>> {
        (**self).evaluate(t)
    }
}

/// Evaluates `op` and enforces the Hermiticity gate.
pub fn checked_evaluate<T: Real, O: TimeDependentOperator<T> + ?Sized>(op: &O, t: T) -> Result<CMatrix<T>> {
    let m = op.evaluate(t)?;
    m.ensure_hermitian(tol::HERMITIAN_EVAL)?;
    Ok(m)
}

/// Operator backed by a closure.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<T: Real, F: Fn(T) -> CMatrix<T> + Send + Sync> TimeDependentOperator<T> for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn evaluate(&self, t: T) -> Result<CMatrix<T>> {
        Ok((self.f)(t))
    }
}

/// A known solution `t ↦ ψ(t)` of some Schrödinger equation.
pub trait StatePath<T: Real>: Send + Sync {
    fn dim(&self) -> usize;
    fn state(&self, t: T) -> StateVector<T>;
}

impl<T: Real, P: StatePath<T> + ?Sized> StatePath<T> for &P {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn state(&self, t: T) -> StateVector<T> {
        (**self).state(t)
    }
}

pub struct FnPath<F> {
    dim: usize,
    f: F,
}

impl<F> FnPath<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<T: Real, F: Fn(T) -> StateVector<T> + Send + Sync> StatePath<T> for FnPath<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn state(&self, t: T) -> StateVector<T> {
        (self.f)(t)
    }
}
