//! Benchmark Hamiltonians and their closed-form solutions.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::dynamics::{StatePath, TimeDependentOperator};
use crate::qcore::{embed, pauli, Axis, CMatrix, StateVector};
use crate::{Real, Result};

/// `½ h·σ`.
pub fn field_hamiltonian<T: Real>(h: [T; 3]) -> CMatrix<T> {
    let half = T::lit(0.5);
    let x = pauli::<T>(Axis::X).scale_real(h[0] * half);
    let y = pauli::<T>(Axis::Y).scale_real(h[1] * half);
    let z = pauli::<T>(Axis::Z).scale_real(h[2] * half);
    &(&x + &y) + &z
}

/// Rotating field `(cos ωt, −ω, sin ωt)` with unit amplitude.
pub fn two_level_field<T: Real>(t: T, omega: T) -> [T; 3] {
    [(omega * t).cos(), -omega, (omega * t).sin()]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelHamiltonian<T> {
    pub omega: T,
}

impl<T: Real> TimeDependentOperator<T> for TwoLevelHamiltonian<T> {
    fn dim(&self) -> usize {
        2
    }
    fn evaluate(&self, t: T) -> Result<CMatrix<T>> {
        Ok(field_hamiltonian(two_level_field(t, self.omega)))
    }
}

/// Adiabatic part `½(cos ωt σ_x + sin ωt σ_z)` of the two-level model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotatingFieldHamiltonian<T> {
    pub omega: T,
}

impl<T: Real> TimeDependentOperator<T> for RotatingFieldHamiltonian<T> {
    fn dim(&self) -> usize {
        2
    }
    fn evaluate(&self, t: T) -> Result<CMatrix<T>> {
        Ok(field_hamiltonian([(self.omega * t).cos(), T::zero(), (self.omega * t).sin()]))
    }
}

/// `e^{−it/2}/√2 (cos(ωt/2) + sin(ωt/2), cos(ωt/2) − sin(ωt/2))`.
pub fn two_level_exact<T: Real>(t: T, omega: T) -> StateVector<T> {
    let half = T::lit(0.5);
    let (s, c) = (omega * t * half).sin_cos();
    let g = Complex::from_polar(T::FRAC_1_SQRT_2(), -t * half);
    StateVector::from_raw(vec![g * (c + s), g * (c - s)])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelExact<T> {
    pub omega: T,
}

impl<T: Real> StatePath<T> for TwoLevelExact<T> {
    fn dim(&self) -> usize {
        2
    }
    fn state(&self, t: T) -> StateVector<T> {
        two_level_exact(t, self.omega)
    }
}

fn spin_ops<T: Real>() -> [[CMatrix<T>; 3]; 2] {
    let p = [pauli::<T>(Axis::X), pauli::<T>(Axis::Y), pauli::<T>(Axis::Z)];
    [0, 1].map(|site| [0, 1, 2].map(|a| embed(&p[a], site, 2)))
}

/// `sin ωt σ_z σ_z − ½ cos ωt (σ_x¹ + σ_x²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSpinAdiabatic<T> {
    pub omega: T,
}

impl<T: Real> TimeDependentOperator<T> for TwoSpinAdiabatic<T> {
    fn dim(&self) -> usize {
        4
    }
    fn evaluate(&self, t: T) -> Result<CMatrix<T>> {
        let [s1, s2] = spin_ops::<T>();
        let (sn, cs) = (self.omega * t).sin_cos();
        let zz = s1[2].matmul(&s2[2]).scale_real(sn);
        let xx = (&s1[0] + &s2[0]).scale_real(-T::lit(0.5) * cs);
        Ok(&zz + &xx)
    }
}

/// Two-spin entangler: the adiabatic part plus `(ω/4)(σ_y¹σ_z² + σ_z¹σ_y²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSpinHamiltonian<T> {
    pub omega: T,
}

impl<T: Real> TimeDependentOperator<T> for TwoSpinHamiltonian<T> {
    fn dim(&self) -> usize {
        4
    }
    fn evaluate(&self, t: T) -> Result<CMatrix<T>> {
        let [s1, s2] = spin_ops::<T>();
        let cd = (&s1[1].matmul(&s2[2]) + &s1[2].matmul(&s2[1])).scale_real(self.omega * T::lit(0.25));
        Ok(&TwoSpinAdiabatic { omega: self.omega }.evaluate(t)? + &cd)
    }
}

/// `e^{it}/(2√(1 + sin ωt)) (cos ωt, 1 + sin ωt, 1 + sin ωt, cos ωt)`, valid
/// while `1 + sin ωt > 0`.
pub fn two_spin_exact<T: Real>(t: T, omega: T) -> StateVector<T> {
    let (s, c) = (omega * t).sin_cos();
    let p = T::one() + s;
    let g = Complex::from_polar(T::one() / (T::lit(2.0) * p.sqrt()), t);
    StateVector::from_raw(vec![g * c, g * p, g * p, g * c])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSpinExact<T> {
    pub omega: T,
}

impl<T: Real> StatePath<T> for TwoSpinExact<T> {
    fn dim(&self) -> usize {
        4
    }
    fn state(&self, t: T) -> StateVector<T> {
        two_spin_exact(t, self.omega)
    }
}

type EnvelopeFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Field envelope `h(t)` with its running integral.
#[derive(Clone)]
pub enum FieldEnvelope<T> {
    Constant(T),
    /// `1 + t`.
    Linear,
    /// `e^{−t/τ}`.
    Exponential { tau: T },
    /// `(1 + t/τ)^{−p}`, `p > 1`.
    Power { tau: T, p: T },
    /// Arbitrary envelope integrated by Simpson's rule with step `dt`.
    Custom { h: EnvelopeFn<T>, dt: T },
}

impl<T: Real> fmt::Debug for FieldEnvelope<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::Linear => write!(f, "Linear"),
            Self::Exponential { tau } => write!(f, "Exponential {{ tau: {tau} }}"),
            Self::Power { tau, p } => write!(f, "Power {{ tau: {tau}, p: {p} }}"),
            Self::Custom { dt, .. } => write!(f, "Custom {{ dt: {dt} }}"),
        }
    }
}

impl<T: Real> FieldEnvelope<T> {
    pub fn custom(h: impl Fn(T) -> T + Send + Sync + 'static, dt: T) -> Self {
        Self::Custom { h: Arc::new(h), dt }
    }

    pub fn value(&self, t: T) -> T {
        match self {
            Self::Constant(c) => *c,
            Self::Linear => T::one() + t,
            Self::Exponential { tau } => (-t / *tau).exp(),
            Self::Power { tau, p } => (T::one() + t / *tau).powf(-*p),
            Self::Custom { h, .. } => h(t),
        }
    }

    /// `∫₀ᵗ h`.
    pub fn integral(&self, t: T) -> T {
        let half = T::lit(0.5);
        match self {
            Self::Constant(c) => *c * t,
            Self::Linear => t + half * t * t,
            Self::Exponential { tau } => *tau * (T::one() - (-t / *tau).exp()),
            Self::Power { tau, p } => *tau / (*p - T::one()) * (T::one() - (T::one() + t / *tau).powf(T::one() - *p)),
            Self::Custom { h, dt } => {
                if t == T::zero() {
                    return T::zero();
                }
                let n = (t.abs() / *dt).ceil().max(T::one());
                let step = t / n;
                let n = n.to_usize().unwrap_or(1);
                (0..n).fold(T::zero(), |acc, k| {
                    let a = step * T::from_usize(k).unwrap();
                    acc + step / T::lit(6.0) * (h(a) + T::lit(4.0) * h(a + step * half) + h(a + step))
                })
            }
        }
    }
}

/// `½(h cos ωt σ_x + h sin ωt σ_y + ω σ_z)`.
#[derive(Clone, Debug)]
pub struct DecreasingFieldHamiltonian<T: Real> {
    pub envelope: FieldEnvelope<T>,
    pub omega: T,
}

impl<T: Real> TimeDependentOperator<T> for DecreasingFieldHamiltonian<T> {
    fn dim(&self) -> usize {
        2
    }
    fn evaluate(&self, t: T) -> Result<CMatrix<T>> {
        let h = self.envelope.value(t);
        let (s, c) = (self.omega * t).sin_cos();
        Ok(field_hamiltonian([h * c, h * s, self.omega]))
    }
}

/// `(−i e^{−iωt/2} sin(½∫h), e^{iωt/2} cos(½∫h))`.
pub fn decreasing_field_exact<T: Real>(t: T, envelope: &FieldEnvelope<T>, omega: T) -> StateVector<T> {
    let half = T::lit(0.5);
    let (s, c) = (half * envelope.integral(t)).sin_cos();
    let up = Complex::new(T::zero(), -T::one()) * Complex::from_polar(s, -omega * t * half);
    let down = Complex::from_polar(c, omega * t * half);
    StateVector::from_raw(vec![up, down])
}

#[derive(Clone, Debug)]
pub struct DecreasingFieldExact<T: Real> {
    pub envelope: FieldEnvelope<T>,
    pub omega: T,
}

impl<T: Real> StatePath<T> for DecreasingFieldExact<T> {
    fn dim(&self) -> usize {
        2
    }
    fn state(&self, t: T) -> StateVector<T> {
        decreasing_field_exact(t, &self.envelope, self.omega)
    }
}
