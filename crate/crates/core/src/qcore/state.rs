use std::ops::Index;

use num_complex::Complex;

use crate::{tol, Error, Real, Result};

use super::CMatrix;

/// Complex amplitude vector in a fixed computational basis.
///
/// States built with [`StateVector::new`] are normalized within the norm
/// tolerance; integrator output uses [`StateVector::from_raw`] and tracks the
/// drift separately.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension("state must have at least one component".into()));
        }
        let s = Self { amps };
        let dev = (s.norm_sqr() - T::one()).abs();
        if dev.is_finite() && dev <= T::tol(tol::NORM) {
            Ok(s)
        } else {
            Err(Error::NotNormalized { deviation: dev.as_f64() })
        }
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(amps: Vec<Complex<T>>) -> Result<Self> {
        let n = amps.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        if amps.is_empty() || !(n > T::zero()) || !n.is_finite() {
            return Err(Error::NotNormalized { deviation: 1.0 });
        }
        Ok(Self { amps: amps.into_iter().map(|z| z / n).collect() })
    }

    /// Wraps amplitudes without checking the norm.
    pub fn from_raw(amps: Vec<Complex<T>>) -> Self {
        Self { amps }
    }

    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidIndex { index: k, dim });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[k] = Complex::new(T::one(), T::zero());
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |s, z| s + z.norm_sqr())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.amps.iter().zip(&other.amps).fold(Complex::new(T::zero(), T::zero()), |s, (a, b)| s + a.conj() * b)
    }

    /// `M |self>` without renormalization.
    pub fn apply(&self, m: &CMatrix<T>) -> Self {
        Self { amps: m.mul_vec(&self.amps) }
    }

    pub fn scaled(&self, s: Complex<T>) -> Self {
        Self { amps: self.amps.iter().map(|&z| z * s).collect() }
    }

    /// `<self| M |self>`.
    pub fn expectation(&self, m: &CMatrix<T>) -> Complex<T> {
        self.inner(&self.apply(m))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.amps.iter().zip(&other.amps).fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.amps.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<T> Index<usize> for StateVector<T> {
    type Output = Complex<T>;
    fn index(&self, k: usize) -> &Complex<T> {
        &self.amps[k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_rejects_unnormalized() {
        let bad = StateVector::new(vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)]);
        assert!(matches!(bad, Err(Error::NotNormalized { .. })));
        let ok = StateVector::normalized(vec![Complex::new(1.0f64, 0.0), Complex::new(1.0, 0.0)]).unwrap();
        assert!((ok.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_index_checked() {
        assert!(matches!(StateVector::<f64>::basis(2, 2), Err(Error::InvalidIndex { .. })));
        let e1 = StateVector::<f64>::basis(3, 1).unwrap();
        assert_eq!(e1[1], Complex::new(1.0, 0.0));
    }

    #[test]
    fn inner_is_conjugate_linear_in_bra() {
        let a = StateVector::from_raw(vec![Complex::new(0.0, 1.0)]);
        let b = StateVector::from_raw(vec![Complex::new(1.0, 0.0)]);
        assert_eq!(a.inner(&b), Complex::new(0.0, -1.0));
    }
}
