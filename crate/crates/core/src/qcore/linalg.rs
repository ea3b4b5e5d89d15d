//! Small dense real linear algebra.

use crate::Real;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
///
/// Returns `None` when a pivot falls below `eps * max|a|`.
pub fn solve<T: Real>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut m: Vec<Vec<T>> = a.iter().zip(b).map(|(r, &bi)| r.iter().copied().chain(std::iter::once(bi)).collect()).collect();
    let scale = a.iter().flatten().fold(T::zero(), |s, &x| s.max(x.abs()));
    if !(scale > T::zero()) || !scale.is_finite() {
        return None;
    }
    let threshold = scale * T::epsilon() * T::lit(16.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
        if !(m[piv][col].abs() > threshold) {
            return None;
        }
        m.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f != T::zero() {
                for k in col..=n {
                    let v = m[col][k];
                    m[row][k] -= f * v;
                }
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let s = (i + 1..n).fold(m[i][n], |s, k| s - m[i][k] * x[k]);
        x[i] = s / m[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Minimum-norm least-squares solution of `a x = b` (rows may exceed columns),
/// via Tikhonov-regularized normal equations.
pub fn least_squares<T: Real>(a: &[Vec<T>], b: &[T], ridge: T) -> Option<Vec<T>> {
    let cols = a.first()?.len();
    let mut ata = vec![vec![T::zero(); cols]; cols];
    let mut atb = vec![T::zero(); cols];
    for (row, &bi) in a.iter().zip(b) {
        for i in 0..cols {
            atb[i] += row[i] * bi;
            for j in 0..cols {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    for (i, r) in ata.iter_mut().enumerate() {
        r[i] += ridge;
    }
    solve(&ata, &atb)
}

/// Orthonormal basis of the complement of the unit vector `w`, as rows.
pub fn orthogonal_complement<T: Real>(w: &[T]) -> Vec<Vec<T>> {
    let n = w.len();
    let norm = w.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
    let mut u: Vec<T> = w.iter().map(|&x| x / norm).collect();
    let sign = if u[0] >= T::zero() { T::one() } else { -T::one() };
    u[0] += sign;
    let uu = u.iter().fold(T::zero(), |s, &x| s + x * x);
    let two = T::lit(2.0);
    (1..n)
        .map(|col| (0..n).map(|row| {
            let id = if row == col { T::one() } else { T::zero() };
            id - two * u[row] * u[col] / uu
        }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x: Vec<f64> = solve(&a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn singular_system_rejected() {
        assert!(solve(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn complement_is_orthonormal() {
        let w = [0.6f64, 0.0, 0.8];
        let q = orthogonal_complement(&w);
        assert_eq!(q.len(), 2);
        for (i, qi) in q.iter().enumerate() {
            let dot_w: f64 = qi.iter().zip(&w).map(|(a, b)| a * b).sum();
            assert!(dot_w.abs() < 1e-15);
            for (j, qj) in q.iter().enumerate() {
                let d: f64 = qi.iter().zip(qj).map(|(a, b)| a * b).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }
}
