use crate::dynamics::{StatePath, TimeGrid};
use crate::{tol, Real};

use super::{AccelerationPotential, ScalingMap};

/// A zero of some component of `ψ(Λ(t))`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeEvent<T> {
    pub time: T,
    pub component: usize,
    pub min_amplitude: T,
    /// Sign of `V` just before the node (0 when unknown).
    pub left_sign: i8,
    /// Sign of `V` just after the node (0 when unknown).
    pub right_sign: i8,
}

/// Local minima of `|<σ|ψ(Λ(t))>|` below `threshold`, each located by
/// golden-section search between the neighbouring grid points.
pub fn find_nodes<T, P>(reference: &P, map: &ScalingMap<T>, grid: &TimeGrid<T>, threshold: T) -> Vec<NodeEvent<T>>
where
    T: Real,
    P: StatePath<T> + ?Sized,
{
    let n = reference.dim();
    let amps: Vec<Vec<T>> = grid.times().map(|t| reference.state(map.lambda(t)).amplitudes().iter().map(|z| z.norm()).collect()).collect();
    let last = amps.len() - 1;
    let mut events: Vec<NodeEvent<T>> = Vec::new();
    for s in 0..n {
        for k in 0..=last {
            let m = amps[k][s];
            let left_ok = k == 0 || m <= amps[k - 1][s];
            let right_ok = k == last || m < amps[k + 1][s];
            if !(left_ok && right_ok) {
                continue;
            }
            let (a, b) = (grid.time(k.saturating_sub(1)), grid.time((k + 1).min(last)));
            let f = |t: T| reference.state(map.lambda(t))[s].norm();
            let (time, min_amplitude) = golden_min(f, a, b);
            if min_amplitude < threshold {
                let dup = events.iter().any(|e| e.component == s && (e.time - time).abs() <= grid.dt());
                if !dup {
                    events.push(NodeEvent { time, component: s, min_amplitude, left_sign: 0, right_sign: 0 });
                }
            }
        }
    }
    events.sort_by(|a, b| a.time.partial_cmp(&b.time).unwrap_or(std::cmp::Ordering::Equal).then(a.component.cmp(&b.component)));
    events
}

fn golden_min<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T) -> (T, T) {
    let r = T::lit(0.618_033_988_749_894_9);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let floor = (b - a).abs() * T::epsilon() * T::lit(4.0);
    for _ in 0..200 {
        if (b - a).abs() <= floor.max(T::min_positive_value()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let (fa, fb) = (f(a), f(b));
    [(c, fc), (d, fd), (a, fa), (b, fb)].into_iter().fold((c, fc), |best, x| if x.1 < best.1 { x } else { best })
}

/// Node events with `|ψ_σ| < ε_node`, with the sign of the sampled potential on
/// the nearest grid point to each side.
pub fn detect_singularity<T, P>(reference: &P, map: &ScalingMap<T>, potential: &AccelerationPotential<T>) -> Vec<NodeEvent<T>>
where
    T: Real,
    P: StatePath<T> + ?Sized,
{
    let grid = &potential.grid;
    let mut events = find_nodes(reference, map, grid, T::lit(tol::NODE_AMPLITUDE));
    let sign = |x: T| -> i8 {
        if x > T::zero() {
            1
        } else if x < T::zero() {
            -1
        } else {
            0
        }
    };
    let gap = grid.dt() * T::lit(1e-6);
    for e in &mut events {
        let left = grid.times().enumerate().filter(|(_, t)| *t < e.time - gap).last().map(|(k, _)| k);
        let right = grid.times().enumerate().find(|(_, t)| *t > e.time + gap).map(|(k, _)| k);
        e.left_sign = left.map_or(0, |k| sign(potential.values[k][e.component]));
        e.right_sign = right.map_or(0, |k| sign(potential.values[k][e.component]));
    }
    events
}
