use num_complex::Complex;

use crate::{tol, Error, Real, Result};

use super::{linalg, CMatrix};

/// `N − 1` commuting traceless diagonal observables, independent together with
/// the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalObservableBasis<T> {
    dim: usize,
    diagonals: Vec<Vec<T>>,
}

impl<T: Real> DiagonalObservableBasis<T> {
    /// Validates a user-supplied basis given by its diagonals.
    pub fn new(diagonals: Vec<Vec<T>>) -> Result<Self> {
        let dim = diagonals.len() + 1;
        if dim < 2 {
            return Err(Error::InvalidDimension("basis needs N >= 2".into()));
        }
        if let Some(d) = diagonals.iter().find(|d| d.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: d.len() });
        }
        for (a, d) in diagonals.iter().enumerate() {
            if d.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidBasis(format!("X_{} has non-finite entries", a + 1)));
            }
            let tr = d.iter().fold(T::zero(), |s, &x| s + x);
            if tr.abs() > T::tol(tol::TRACELESS) {
                return Err(Error::InvalidBasis(format!("X_{} has trace {:e}", a + 1, tr)));
            }
        }
        let basis = Self { dim, diagonals };
        for a in 0..basis.len() {
            for b in 0..a {
                let r = basis.operator(a).commutator(&basis.operator(b)).max_abs();
                if r > T::tol(tol::HERMITIAN) {
                    return Err(Error::InvalidBasis(format!("X_{} and X_{} do not commute", a + 1, b + 1)));
                }
            }
        }
        let probe: Vec<T> = (0..dim).map(|k| T::lit(1.0 + k as f64)).collect();
        if linalg::solve(&basis.system(), &probe).is_none() {
            return Err(Error::InvalidBasis("diagonals are not independent of the identity".into()));
        }
        Ok(basis)
    }

    /// `σ_z/2` for `N = 2`, the two-spin triple for `N = 4`, generalized
    /// Gell-Mann diagonals otherwise.
    pub fn standard(dim: usize) -> Result<Self> {
        let diagonals: Vec<Vec<f64>> = match dim {
            0 | 1 => return Err(Error::InvalidDimension(format!("standard basis needs N >= 2, got {dim}"))),
            2 => vec![vec![0.5, -0.5]],
            4 => vec![vec![1.0, 1.0, -1.0, -1.0], vec![1.0, -1.0, 1.0, -1.0], vec![1.0, -1.0, -1.0, 1.0]],
            n => (1..n)
                .map(|k| {
                    let s = 1.0 / ((2 * k * (k + 1)) as f64).sqrt();
                    (0..n)
                        .map(|j| match j.cmp(&k) {
                            std::cmp::Ordering::Less => s,
                            std::cmp::Ordering::Equal => -(k as f64) * s,
                            std::cmp::Ordering::Greater => 0.0,
                        })
                        .collect()
                })
                .collect(),
        };
        Self::new(diagonals.into_iter().map(|d| d.into_iter().map(T::lit).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of observables, `N − 1`.
    pub fn len(&self) -> usize {
        self.diagonals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonals.is_empty()
    }

    pub fn diagonal(&self, a: usize) -> &[T] {
        &self.diagonals[a]
    }

    /// `X_a(σ)`.
    pub fn entry(&self, a: usize, sigma: usize) -> T {
        self.diagonals[a][sigma]
    }

    pub fn operator(&self, a: usize) -> CMatrix<T> {
        CMatrix::from_real_diagonal(&self.diagonals[a])
    }

    /// `θ_σ = Σ_a φ_a X_a(σ)`.
    pub fn angles(&self, phases: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|s| self.diagonals.iter().zip(phases).fold(T::zero(), |acc, (d, &p)| acc + p * d[s]))
            .collect()
    }

    /// `Σ_a c_a X_a` as a diagonal.
    pub fn combine(&self, coeffs: &[T]) -> Vec<T> {
        self.angles(coeffs)
    }

    /// Splits diagonal values `V(σ)` into `v0` and `v_a` with
    /// `V = v0 I/N + Σ_a v_a X_a`.
    pub fn decompose(&self, values: &[T]) -> Result<(T, Vec<T>)> {
        if values.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: values.len() });
        }
        let x = linalg::solve(&self.system(), values).ok_or_else(|| Error::InvalidBasis("singular basis system".into()))?;
        Ok((x[0], x[1..].to_vec()))
    }

    /// Inverse of [`decompose`](Self::decompose).
    pub fn compose(&self, v0: T, v: &[T]) -> Vec<T> {
        let n = T::from_usize(self.dim).unwrap();
        self.combine(v).into_iter().map(|x| x + v0 / n).collect()
    }

    /// Rows `σ`, columns `[1/N, X_1(σ), …]`.
    fn system(&self) -> Vec<Vec<T>> {
        let inv_n = T::one() / T::from_usize(self.dim).unwrap();
        (0..self.dim)
            .map(|s| std::iter::once(inv_n).chain(self.diagonals.iter().map(|d| d[s])).collect())
            .collect()
    }
}

/// `exp(−i Σ_a φ_a X_a)`, exact on the diagonal.
pub fn diagonal_phase_unitary<T: Real>(phases: &[T], basis: &DiagonalObservableBasis<T>) -> Result<CMatrix<T>> {
    if phases.len() != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), got: phases.len() });
    }
    if phases.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidBasis("phases must be finite".into()));
    }
    let diag: Vec<Complex<T>> = basis.angles(phases).into_iter().map(|th| Complex::from_polar(T::one(), -th)).collect();
    Ok(CMatrix::from_diagonal(&diag))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_two_level_is_half_sigma_z() {
        let b = DiagonalObservableBasis::<f64>::standard(2).unwrap();
        assert_eq!(b.diagonal(0), &[0.5, -0.5]);
    }

    #[test]
    fn standard_two_spin_matches_spin_products() {
        let b = DiagonalObservableBasis::<f64>::standard(4).unwrap();
        assert_eq!(b.diagonal(0), &[1.0, 1.0, -1.0, -1.0]);
        assert_eq!(b.diagonal(1), &[1.0, -1.0, 1.0, -1.0]);
        assert_eq!(b.diagonal(2), &[1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn standard_general_n_satisfies_invariants() {
        for n in [3, 5, 8] {
            let b = DiagonalObservableBasis::<f64>::standard(n).unwrap();
            assert_eq!(b.len(), n - 1);
            for a in 0..b.len() {
                assert!(b.diagonal(a).iter().sum::<f64>().abs() < 1e-12);
            }
        }
        assert!(matches!(DiagonalObservableBasis::<f64>::standard(1), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn dependent_or_traced_diagonals_rejected() {
        assert!(DiagonalObservableBasis::new(vec![vec![1.0, -1.0, 0.0], vec![2.0, -2.0, 0.0]]).is_err());
        assert!(DiagonalObservableBasis::new(vec![vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn decompose_compose_roundtrip() {
        let b = DiagonalObservableBasis::<f64>::standard(4).unwrap();
        let v = [0.3, -1.2, 2.5, 0.7];
        let (v0, va) = b.decompose(&v).unwrap();
        assert!((v0 - v.iter().sum::<f64>()).abs() < 1e-14);
        let back = b.compose(v0, &va);
        for (x, y) in back.iter().zip(&v) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn phase_unitary_examples() {
        let b = DiagonalObservableBasis::<f64>::standard(2).unwrap();
        let u = diagonal_phase_unitary(&[std::f64::consts::PI], &b).unwrap();
        assert!((u[(0, 0)] - Complex::new(0.0, -1.0)).norm() < 1e-15);
        assert!((u[(1, 1)] - Complex::new(0.0, 1.0)).norm() < 1e-15);
        let id = diagonal_phase_unitary(&[0.0], &b).unwrap();
        assert_eq!(id, CMatrix::identity(2));
        assert!(diagonal_phase_unitary(&[f64::NAN], &b).is_err());
    }
}
