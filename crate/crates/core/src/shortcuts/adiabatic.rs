use num_complex::Complex;

use crate::dynamics::{checked_evaluate, TimeDependentOperator, TimeGrid};
use crate::qcore::{eigendecompose, CMatrix, SpectralDecomposition};
use crate::{tol, Error, Real, Result};

/// Wraps `H_ad(t)` and exposes its instantaneous eigenbasis.
#[derive(Clone, Debug)]
pub struct AdiabaticModel<H> {
    h_ad: H,
}

/// Eigenbasis at `t` together with the eigenvector derivatives.
#[derive(Clone, Debug)]
pub struct EigenFrame<T> {
    pub decomposition: SpectralDecomposition<T>,
    /// `|ṅ(t)>` per eigenvector, phase-aligned central differences.
    pub derivatives: Vec<Vec<Complex<T>>>,
}

impl<H> AdiabaticModel<H> {
    pub fn new(h_ad: H) -> Self {
        Self { h_ad }
    }

    pub fn hamiltonian(&self) -> &H {
        &self.h_ad
    }
}

impl<H> AdiabaticModel<H> {
    pub fn dim<T: Real>(&self) -> usize
    where
        H: TimeDependentOperator<T>,
    {
        self.h_ad.dim()
    }

    pub fn decompose<T: Real>(&self, t: T) -> Result<SpectralDecomposition<T>>
    where
        H: TimeDependentOperator<T>,
    {
        eigendecompose(&checked_evaluate(&self.h_ad, t)?, t)
    }

    /// Eigenbases along `grid`, each phase-aligned with its predecessor.
    pub fn decompose_along<T: Real>(&self, grid: &TimeGrid<T>) -> Result<Vec<SpectralDecomposition<T>>>
    where
        H: TimeDependentOperator<T>,
    {
        let mut out: Vec<SpectralDecomposition<T>> = Vec::with_capacity(grid.len());
        for t in grid.times() {
            let d = self.decompose(t)?;
            d.ensure_nondegenerate(tol::COUNTERDIABATIC_GAP)?;
            let d = match out.last() {
                Some(prev) => d.align_to(prev),
                None => d,
            };
            out.push(d);
        }
        Ok(out)
    }

    pub fn eigenframe<T: Real>(&self, t: T, dt_fd: T) -> Result<EigenFrame<T>>
    where
        H: TimeDependentOperator<T>,
    {
        let center = self.decompose(t)?;
        center.ensure_nondegenerate(tol::COUNTERDIABATIC_GAP)?;
        let plus = self.decompose(t + dt_fd)?;
        plus.ensure_nondegenerate(tol::COUNTERDIABATIC_GAP)?;
        let minus = self.decompose(t - dt_fd)?;
        minus.ensure_nondegenerate(tol::COUNTERDIABATIC_GAP)?;
        let (plus, minus) = (plus.align_to(&center), minus.align_to(&center));
        let inv = T::one() / (T::lit(2.0) * dt_fd);
        let derivatives = plus
            .vectors
            .iter()
            .zip(&minus.vectors)
            .map(|(p, m)| p.amplitudes().iter().zip(m.amplitudes()).map(|(a, b)| (a - b) * inv).collect())
            .collect();
        Ok(EigenFrame { decomposition: center, derivatives })
    }
}

fn outer<T: Real>(ket: &[Complex<T>], bra: &[Complex<T>]) -> CMatrix<T> {
    CMatrix::from_fn(ket.len(), |i, j| ket[i] * bra[j].conj())
}

/// `i (1 − |n><n|) |ṅ><n|`.
fn transition_part<T: Real>(frame: &EigenFrame<T>, n: usize) -> CMatrix<T> {
    let nv = frame.decomposition.vectors[n].amplitudes();
    let dn = &frame.derivatives[n];
    let overlap = nv.iter().zip(dn).fold(Complex::new(T::zero(), T::zero()), |s, (a, b)| s + a.conj() * b);
    let perp: Vec<Complex<T>> = dn.iter().zip(nv).map(|(d, v)| d - v * overlap).collect();
    outer(&perp, nv).scale(Complex::new(T::zero(), T::one()))
}

/// `H_cd(t) = i Σ_n Σ_{m≠n} |m><m|ṅ><n|`, Hermitian part.
pub fn counterdiabatic_term<T, H>(model: &AdiabaticModel<H>, t: T, dt_fd: T) -> Result<CMatrix<T>>
where
    T: Real,
    H: TimeDependentOperator<T>,
{
    let frame = model.eigenframe(t, dt_fd)?;
    let dim = frame.decomposition.dim();
    let sum = (0..dim).fold(CMatrix::zeros(dim), |acc, n| &acc + &transition_part(&frame, n));
    Ok(sum.hermitian_part())
}

/// State-specific drive `i(1 − |n><n|)|ṅ><n| + h.c.`
pub fn deformed_cd<T, H>(model: &AdiabaticModel<H>, n: usize, t: T, dt_fd: T) -> Result<CMatrix<T>>
where
    T: Real,
    H: TimeDependentOperator<T>,
{
    let dim = model.dim();
    if n >= dim {
        return Err(Error::InvalidIndex { index: n, dim });
    }
    let frame = model.eigenframe(t, dt_fd)?;
    let a = transition_part(&frame, n);
    Ok(&a + &a.adjoint())
}

/// Counterdiabatic field `h × ḣ / |h|²` of a two-level Hamiltonian `h·σ/2`.
pub fn cd_two_level<T: Real>(h: impl Fn(T) -> [T; 3], t: T, dt_fd: T) -> Result<[T; 3]> {
    let v = h(t);
    let norm2 = v.iter().fold(T::zero(), |s, &x| s + x * x);
    if !(norm2.sqrt() >= T::lit(1e-9)) {
        return Err(Error::VanishingField { t: t.as_f64() });
    }
    let (p, m) = (h(t + dt_fd), h(t - dt_fd));
    let d: Vec<T> = (0..3).map(|i| (p[i] - m[i]) / (T::lit(2.0) * dt_fd)).collect();
    Ok([
        (v[1] * d[2] - v[2] * d[1]) / norm2,
        (v[2] * d[0] - v[0] * d[2]) / norm2,
        (v[0] * d[1] - v[1] * d[0]) / norm2,
    ])
}

/// `H_ad(t) + H_cd(t)`.
pub struct TransitionlessHamiltonian<'a, T, H> {
    pub model: &'a AdiabaticModel<H>,
    pub dt_fd: T,
}

impl<'a, T: Real, H> TransitionlessHamiltonian<'a, T, H> {
    pub fn new(model: &'a AdiabaticModel<H>, dt_fd: T) -> Self {
        Self { model, dt_fd }
    }
}

impl<T, H> TimeDependentOperator<T> for TransitionlessHamiltonian<'_, T, H>
where
    T: Real,
    H: TimeDependentOperator<T>,
{
    fn dim(&self) -> usize {
        self.model.hamiltonian().dim()
    }

    fn evaluate(&self, t: T) -> Result<CMatrix<T>> {
        let had = checked_evaluate(self.model.hamiltonian(), t)?;
        Ok(&had + &counterdiabatic_term(self.model, t, self.dt_fd)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::FnOperator;
    use crate::qcore::{pauli, Axis};

    fn rotating(omega: f64) -> AdiabaticModel<FnOperator<impl Fn(f64) -> CMatrix<f64> + Send + Sync>> {
        AdiabaticModel::new(FnOperator::new(2, move |t: f64| {
            &pauli::<f64>(Axis::X).scale_real(0.5 * (omega * t).cos()) + &pauli::<f64>(Axis::Z).scale_real(0.5 * (omega * t).sin())
        }))
    }

    #[test]
    fn static_model_has_no_cd_term() {
        let m = AdiabaticModel::new(FnOperator::new(2, |_t: f64| pauli::<f64>(Axis::Z)));
        assert!(counterdiabatic_term(&m, 0.3, 1e-3).unwrap().max_abs() < 1e-12);
        assert!(deformed_cd(&m, 0, 0.3, 1e-3).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn rotating_field_cd_is_minus_half_omega_sigma_y() {
        let omega = std::f64::consts::PI / 40.0;
        let m = rotating(omega);
        let expect = pauli::<f64>(Axis::Y).scale_real(-omega / 2.0);
        for t in [0.0, 3.3, 10.0, 17.9] {
            let cd = counterdiabatic_term(&m, t, 1e-3).unwrap();
            assert!(cd.max_abs_diff(&expect) < 1e-8, "t={t}");
            assert!(cd.trace().norm() < 1e-12);
        }
    }

    #[test]
    fn two_level_field_formula() {
        let omega = 0.3;
        let f = cd_two_level(|t: f64| [(omega * t).cos(), 0.0, (omega * t).sin()], 1.7, 1e-4).unwrap();
        assert!(f[0].abs() < 1e-9 && (f[1] + omega).abs() < 1e-8 && f[2].abs() < 1e-9);
        assert_eq!(cd_two_level(|_t: f64| [1.0, 2.0, 3.0], 0.0, 1e-3).unwrap(), [0.0, 0.0, 0.0]);
        assert!(matches!(cd_two_level(|_t: f64| [0.0; 3], 0.0, 1e-3), Err(Error::VanishingField { .. })));
    }

    #[test]
    fn degenerate_model_rejected() {
        let m = AdiabaticModel::new(FnOperator::new(2, |_t: f64| CMatrix::identity(2)));
        assert!(matches!(counterdiabatic_term(&m, 0.0, 1e-3), Err(Error::DegenerateSpectrum { .. })));
    }
}
