use num_complex::Complex;

use crate::{tol, Error, Real, Result};

use super::{CMatrix, StateVector};

/// Eigen-decomposition of a Hermitian matrix at a time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition<T> {
    pub time: T,
    /// Ascending.
    pub energies: Vec<T>,
    pub vectors: Vec<StateVector<T>>,
    pub min_gap: T,
    pub degenerate: bool,
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Eigenvectors follow the convention that their largest-magnitude component
/// is real and positive.
pub fn eigendecompose<T: Real>(h: &CMatrix<T>, t: T) -> Result<SpectralDecomposition<T>> {
    h.ensure_hermitian(tol::HERMITIAN)?;
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = CMatrix::<T>::identity(n);
    let scale = a.frobenius_norm().max(T::min_positive_value());
    let target = T::epsilon() * scale;
    for _sweep in 0..100 {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let energies: Vec<T> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = order
        .iter()
        .map(|&col| StateVector::from_raw(canonical_phase((0..n).map(|row| v[(row, col)]).collect())))
        .collect();
    let min_gap = energies.windows(2).fold(T::infinity(), |g, w| g.min(w[1] - w[0]));
    Ok(SpectralDecomposition {
        time: t,
        degenerate: min_gap < T::tol(tol::DEGENERATE_GAP),
        energies,
        vectors,
        min_gap,
    })
}

fn off_diagonal_norm<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate<T: Real>(a: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == T::zero() {
        return;
    }
    let n = a.dim();
    let phase = apq / mag;
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let zeta = (aqq - app) / (T::lit(2.0) * mag);
    let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
    let tan = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
    let c = T::one() / (T::one() + tan * tan).sqrt();
    let s = tan * c;
    // J = D R with D = diag(1, e^{-iβ}) on (p, q).
    let pc = phase.conj();
    let jpp = Complex::new(c, T::zero());
    let jpq = Complex::new(s, T::zero());
    let jqp = pc * (-s);
    let jqq = pc * c;
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
    for k in 0..n {
        let (bpk, bqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = jpp.conj() * bpk + jqp.conj() * bqk;
        a[(q, k)] = jpq.conj() * bpk + jqq.conj() * bqk;
    }
    a[(p, q)] = Complex::new(T::zero(), T::zero());
    a[(q, p)] = Complex::new(T::zero(), T::zero());
    a[(p, p)].im = T::zero();
    a[(q, q)].im = T::zero();
}

/// Rotates `amps` so the first component of maximal magnitude is real positive.
fn canonical_phase<T: Real>(mut amps: Vec<Complex<T>>) -> Vec<Complex<T>> {
    let max = amps.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let cut = max * (T::one() - T::lit(1e-9));
    let Some(k) = amps.iter().position(|z| z.norm() >= cut && z.norm() > T::zero()) else {
        return amps;
    };
    let rot = amps[k].conj() / amps[k].norm();
    for z in amps.iter_mut() {
        *z *= rot;
    }
    amps[k].im = T::zero();
    amps
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `|n><n|`.
    pub fn projector(&self, n: usize) -> CMatrix<T> {
        let v = self.vectors[n].amplitudes();
        CMatrix::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    /// `Σ_n w_n |n><n|`.
    pub fn weighted_sum(&self, weights: &[T]) -> CMatrix<T> {
        let n = self.dim();
        (0..n).fold(CMatrix::zeros(n), |acc, k| &acc + &self.projector(k).scale_real(weights[k]))
    }

    pub fn reconstruct(&self) -> CMatrix<T> {
        self.weighted_sum(&self.energies)
    }

    /// Largest `|<m|n> − δ_mn|`.
    pub fn orthonormality_residual(&self) -> T {
        let n = self.dim();
        let mut r = T::zero();
        for i in 0..n {
            for j in 0..n {
                let d = if i == j { T::one() } else { T::zero() };
                r = r.max((self.vectors[i].inner(&self.vectors[j]) - Complex::new(d, T::zero())).norm());
            }
        }
        r
    }

    /// Re-phases each eigenvector so `<prev_n|n>` is real and positive.
    pub fn align_to(mut self, prev: &Self) -> Self {
        for (v, p) in self.vectors.iter_mut().zip(&prev.vectors) {
            let ov = p.inner(v);
            if ov.norm() > T::zero() {
                *v = v.scaled(ov.conj() / ov.norm());
            }
        }
        self
    }

    pub fn ensure_nondegenerate(&self, gap: f64) -> Result<()> {
        if self.min_gap < T::tol(gap) {
            Err(Error::DegenerateSpectrum { t: self.time.as_f64(), gap: self.min_gap.as_f64() })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{pauli, Axis};

    #[test]
    fn half_sigma_z() {
        let h = pauli::<f64>(Axis::Z).scale_real(0.5);
        let d = eigendecompose(&h, 0.0).unwrap();
        assert_eq!(d.energies, vec![-0.5, 0.5]);
        assert!((d.vectors[0][1] - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!((d.vectors[1][0] - Complex::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let h = CMatrix::from_rows(&[
            vec![Complex::new(1.0, 0.0), Complex::new(0.3, 0.4), Complex::new(0.0, -1.0)],
            vec![Complex::new(0.3, -0.4), Complex::new(-2.0, 0.0), Complex::new(0.5, 0.5)],
            vec![Complex::new(0.0, 1.0), Complex::new(0.5, -0.5), Complex::new(0.7, 0.0)],
        ])
        .unwrap();
        let d = eigendecompose(&h, 0.0).unwrap();
        assert!(d.reconstruct().max_abs_diff(&h) < 1e-12);
        assert!(d.orthonormality_residual() < 1e-12);
        assert!(d.energies.windows(2).all(|w| w[0] <= w[1]));
        for v in &d.vectors {
            let lead = v.amplitudes().iter().fold(Complex::new(0.0f64, 0.0), |m, z| if z.norm() > m.norm() + 1e-9 { *z } else { m });
            assert!(lead.im.abs() < 1e-12 && lead.re > 0.0);
        }
    }

    #[test]
    fn degeneracy_flagged() {
        let d = eigendecompose(&CMatrix::<f64>::identity(3), 0.0).unwrap();
        assert!(d.degenerate);
        assert!(d.ensure_nondegenerate(1e-8).is_err());
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::from_rows(&[vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)], vec![Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)]]).unwrap();
        assert!(matches!(eigendecompose(&m, 0.0), Err(Error::NotHermitian { .. })));
    }
}
