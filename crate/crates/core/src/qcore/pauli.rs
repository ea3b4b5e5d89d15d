use num_complex::Complex;

use crate::Real;

use super::CMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Pauli matrix along `axis`.
pub fn pauli<T: Real>(axis: Axis) -> CMatrix<T> {
    let o = T::zero();
    let l = T::one();
    let c = Complex::new;
    let rows = match axis {
        Axis::X => [[c(o, o), c(l, o)], [c(l, o), c(o, o)]],
        Axis::Y => [[c(o, o), c(o, -l)], [c(o, l), c(o, o)]],
        Axis::Z => [[c(l, o), c(o, o)], [c(o, o), c(-l, o)]],
    };
    CMatrix::from_fn(2, |i, j| rows[i][j])
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let (na, nb) = (a.dim(), b.dim());
    CMatrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

/// `op` acting on `site` of an `n_sites` chain of two-level systems.
pub fn embed<T: Real>(op: &CMatrix<T>, site: usize, n_sites: usize) -> CMatrix<T> {
    assert!(site < n_sites, "site out of range");
    (0..n_sites).fold(CMatrix::identity(1), |acc, s| {
        if s == site {
            kron(&acc, op)
        } else {
            kron(&acc, &CMatrix::identity(2))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (pauli::<f64>(Axis::X), pauli::<f64>(Axis::Y), pauli::<f64>(Axis::Z));
        let i = Complex::new(0.0, 1.0);
        assert!(x.matmul(&y).max_abs_diff(&z.scale(i)) < 1e-15);
        assert!(x.matmul(&x).max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn embed_orders_sites_left_to_right() {
        let z = pauli::<f64>(Axis::Z);
        let z1 = embed(&z, 0, 2);
        let diag: Vec<f64> = z1.diagonal().iter().map(|c| c.re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
        let z2 = embed(&z, 1, 2);
        let diag: Vec<f64> = z2.diagonal().iter().map(|c| c.re).collect();
        assert_eq!(diag, vec![1.0, -1.0, 1.0, -1.0]);
    }
}
