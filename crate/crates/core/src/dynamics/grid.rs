use crate::{tol, Error, Real, Result};

/// Uniform samples `t_start + k dt`, `k = 0..=steps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid<T> {
    start: T,
    dt: T,
    steps: usize,
}

impl<T: Real> TimeGrid<T> {
    /// Requires `(end − start)/dt` to be an integer within a relative `1e-9`.
    pub fn new(start: T, end: T, dt: T) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && dt.is_finite()) {
            return Err(Error::InvalidGrid("bounds and step must be finite".into()));
        }
        if !(dt > T::zero()) {
            return Err(Error::InvalidGrid(format!("dt must be positive, got {dt}")));
        }
        if !(end > start) {
            return Err(Error::InvalidGrid(format!("t_end {end} must exceed t_start {start}")));
        }
        let n = (end - start) / dt;
        let steps = n.round();
        if (n - steps).abs() > T::tol(tol::GRID_ALIGNMENT) * n.max(T::one()) || steps < T::one() {
            return Err(Error::InvalidGrid(format!("span {} is not a multiple of dt {dt}", end - start)));
        }
        Ok(Self { start, dt, steps: steps.to_usize().unwrap() })
    }

    pub fn with_steps(start: T, dt: T, steps: usize) -> Result<Self> {
        if !(dt > T::zero()) || steps == 0 || !start.is_finite() {
            return Err(Error::InvalidGrid("need dt > 0 and at least one step".into()));
        }
        Ok(Self { start, dt, steps })
    }

    /// Grid on `[start, ≥ end]` with the end rounded up to a whole step.
    pub fn covering(start: T, end: T, dt: T) -> Result<Self> {
        if !(dt > T::zero()) || !(end > start) {
            return Err(Error::InvalidGrid("need dt > 0 and end > start".into()));
        }
        let n = ((end - start) / dt - T::tol(tol::GRID_ALIGNMENT)).ceil().max(T::one());
        Self::with_steps(start, dt, n.to_usize().unwrap())
    }

    pub fn start(&self) -> T {
        self.start
    }

    pub fn end(&self) -> T {
        self.time(self.steps)
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of sample points, `steps + 1`.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, k: usize) -> T {
        self.start + self.dt * T::from_usize(k).unwrap()
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len()).map(|k| self.time(k))
    }

    /// Index of the sample at `t`, if `t` lies on the grid.
    pub fn index_of(&self, t: T) -> Option<usize> {
        let x = (t - self.start) / self.dt;
        let k = x.round();
        if k < T::zero() || (x - k).abs() > T::lit(1e-6) {
            return None;
        }
        let k = k.to_usize()?;
        (k <= self.steps).then_some(k)
    }

    /// Interval `k` with `t_k ≤ t ≤ t_{k+1}`, clamped to the grid.
    pub fn interval_of(&self, t: T) -> Option<usize> {
        let x = (t - self.start) / self.dt;
        let slack = T::lit(1e-9);
        if !(x >= -slack) || x > T::from_usize(self.steps).unwrap() + slack {
            return None;
        }
        Some(x.floor().max(T::zero()).to_usize()?.min(self.steps - 1))
    }

    pub fn contains(&self, t: T) -> bool {
        self.interval_of(t).is_some()
    }

    /// Same span, step divided by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self { start: self.start, dt: self.dt / T::from_usize(factor).unwrap(), steps: self.steps * factor }
    }
}
