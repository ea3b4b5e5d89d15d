use std::fmt;
use std::sync::Arc;

use crate::dynamics::TimeGrid;
use crate::{tol, Error, Real, Result};

/// Cosine magnification: `α(t) = ᾱ + (1 − ᾱ) cos(2πt/t0)` on `[0, t0]`, then 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MagnificationProtocol<T> {
    alpha_bar: T,
    t0: T,
}

impl<T: Real> MagnificationProtocol<T> {
    pub fn new(alpha_bar: T, t0: T) -> Result<Self> {
        if !alpha_bar.is_finite() || alpha_bar < T::one() {
            return Err(Error::InvalidProtocol(format!("alpha_bar must be >= 1, got {alpha_bar}")));
        }
        if !t0.is_finite() || !(t0 > T::zero()) {
            return Err(Error::InvalidProtocol(format!("t0 must be positive, got {t0}")));
        }
        Ok(Self { alpha_bar, t0 })
    }

    pub fn alpha_bar(&self) -> T {
        self.alpha_bar
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    fn rate(&self) -> T {
        T::TAU() / self.t0
    }

    pub fn alpha(&self, t: T) -> T {
        if t <= self.t0 {
            self.alpha_bar + (T::one() - self.alpha_bar) * (self.rate() * t).cos()
        } else {
            T::one()
        }
    }

    pub fn lambda(&self, t: T) -> T {
        if t <= self.t0 {
            self.alpha_bar * t + (T::one() - self.alpha_bar) * (self.rate() * t).sin() / self.rate()
        } else {
            self.alpha_bar * self.t0 + t - self.t0
        }
    }
}

/// `α(t)` for the cosine protocol.
pub fn magnification<T: Real>(t: T, p: &MagnificationProtocol<T>) -> T {
    p.alpha(t)
}

type AlphaFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// The pair `α(t)`, `Λ(t) = ∫₀ᵗ α`.
#[derive(Clone)]
pub enum ScalingMap<T> {
    Cosine(MagnificationProtocol<T>),
    Tabulated { alpha: AlphaFn<T>, grid: TimeGrid<T>, knots: Vec<T> },
}

impl<T: Real> fmt::Debug for ScalingMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cosine(p) => f.debug_tuple("Cosine").field(p).finish(),
            Self::Tabulated { grid, .. } => f.debug_struct("Tabulated").field("grid", grid).finish_non_exhaustive(),
        }
    }
}

/// Closed-form map for the cosine protocol.
pub fn scaling_map<T: Real>(p: &MagnificationProtocol<T>) -> ScalingMap<T> {
    ScalingMap::Cosine(*p)
}

impl<T: Real> ScalingMap<T> {
    /// Map for a user-supplied `α`, integrated by Simpson's rule on `grid`
    /// (one midpoint per step). `grid` must start at 0.
    pub fn from_alpha(alpha: impl Fn(T) -> T + Send + Sync + 'static, grid: TimeGrid<T>) -> Result<Self> {
        if grid.start() != T::zero() {
            return Err(Error::InvalidProtocol("scaling map grid must start at t = 0".into()));
        }
        let floor = T::one() - T::tol(tol::PROTOCOL_ALPHA);
        let dt = grid.dt();
        let mut knots = Vec::with_capacity(grid.len());
        knots.push(T::zero());
        for k in 0..grid.steps() {
            let (a, b) = (grid.time(k), grid.time(k + 1));
            let (fa, fm, fb) = (alpha(a), alpha(a + dt * T::lit(0.5)), alpha(b));
            for (t, v) in [(a, fa), (b, fb)] {
                if !v.is_finite() || v < floor {
                    return Err(Error::InvalidProtocol(format!("alpha({t}) = {v} < 1")));
                }
            }
            if !fm.is_finite() || fm < floor {
                return Err(Error::InvalidProtocol(format!("alpha dips below 1 near t = {a}")));
            }
            knots.push(knots[k] + dt / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb));
        }
        Ok(Self::Tabulated { alpha: Arc::new(alpha), grid, knots })
    }

    /// `α ≡ 1`, `Λ(t) = t`.
    pub fn identity() -> Self {
        Self::Cosine(MagnificationProtocol { alpha_bar: T::one(), t0: T::one() })
    }

    pub fn alpha(&self, t: T) -> T {
        match self {
            Self::Cosine(p) => p.alpha(t),
            Self::Tabulated { alpha, .. } => alpha(t),
        }
    }

    pub fn lambda(&self, t: T) -> T {
        match self {
            Self::Cosine(p) => p.lambda(t),
            Self::Tabulated { alpha, grid, knots } => {
                let k = grid.interval_of(t).unwrap_or(if t < grid.start() { 0 } else { grid.steps() - 1 });
                let a = grid.time(k);
                let h = t - a;
                knots[k] + h / T::lit(6.0) * (alpha(a) + T::lit(4.0) * alpha(a + h * T::lit(0.5)) + alpha(t))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_protocol_landmarks() {
        let p = MagnificationProtocol::new(2.0f64, 10.0).unwrap();
        assert_eq!(magnification(0.0, &p), 1.0);
        assert!((p.alpha(5.0) - 3.0).abs() < 1e-15);
        assert_eq!(p.alpha(12.0), 1.0);
        assert!((p.lambda(10.0) - 20.0).abs() < 1e-13);
        assert!((p.lambda(13.5) - p.lambda(10.0) - 3.5).abs() < 1e-13);
    }

    #[test]
    fn invalid_protocols_rejected() {
        assert!(MagnificationProtocol::new(0.5, 10.0).is_err());
        assert!(MagnificationProtocol::new(2.0, 0.0).is_err());
        assert!(MagnificationProtocol::new(f64::NAN, 1.0).is_err());
        let grid = TimeGrid::new(0.0, 1.0, 0.01).unwrap();
        assert!(ScalingMap::from_alpha(|t: f64| 1.0 - t, grid).is_err());
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let p = MagnificationProtocol::new(2.0, 10.0).unwrap();
        let grid = TimeGrid::new(0.0, 20.0, 1e-2).unwrap();
        let tab = ScalingMap::from_alpha(move |t| p.alpha(t), grid).unwrap();
        let closed = scaling_map(&p);
        let worst = (0..2000).map(|i| 0.01 * i as f64 + 0.0037).fold(0.0f64, |m, t| m.max((tab.lambda(t) - closed.lambda(t)).abs()));
        assert!(worst < 1e-9, "{worst}");
    }
}
