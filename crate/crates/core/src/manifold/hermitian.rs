//! Real coordinates on the space of `n x n` hermitian matrices.
//!
//! The layout is `n` diagonal entries followed by `sqrt(2) Re a_ij`,
//! `sqrt(2) Im a_ij` for every `i < j`. With this scaling the Euclidean dot
//! product of coordinate vectors equals the Frobenius product `Re tr(A B^*)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use std::f64::consts::SQRT_2;

pub(crate) type CMat = DMatrix<Complex64>;

pub(crate) fn real_dim(n: usize) -> usize {
    n * n
}

pub(crate) fn to_matrix(n: usize, coords: &[f64]) -> CMat {
    debug_assert_eq!(coords.len(), n * n);
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(coords[i], 0.0);
    }
    let mut idx = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = Complex64::new(coords[idx], coords[idx + 1]) / SQRT_2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            idx += 2;
        }
    }
    m
}

/// Coordinates of the hermitian part of `m`.
pub(crate) fn from_matrix(m: &CMat) -> Vec<f64> {
    let n = m.nrows();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        out[i] = m[(i, i)].re;
    }
    let mut idx = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out[idx] = SQRT_2 * z.re;
            out[idx + 1] = SQRT_2 * z.im;
            idx += 2;
        }
    }
    out
}

pub(crate) fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Orthogonal projector onto the span of the `rank` leading eigenvectors.
pub(crate) fn leading_projector(m: &CMat, rank: usize) -> CMat {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut p = CMat::zeros(n, n);
    for &col in order.iter().take(rank) {
        let v = eig.eigenvectors.column(col);
        p += v * v.adjoint();
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_round_trip_and_are_isometric() {
        let n = 3;
        let a: Vec<f64> = (0..9).map(|i| (i as f64 * 0.37).sin()).collect();
        let b: Vec<f64> = (0..9).map(|i| (i as f64 * 1.3).cos()).collect();
        let ma = to_matrix(n, &a);
        let mb = to_matrix(n, &b);
        let back = from_matrix(&ma);
        for (x, y) in a.iter().zip(&back) {
            assert!((x - y).abs() < 1e-15);
        }
        let frob: f64 = (&ma * mb.adjoint()).trace().re;
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((frob - dot).abs() < 1e-14);
    }

    #[test]
    fn leading_projector_is_idempotent() {
        let m = to_matrix(3, &[2.0, 0.5, -1.0, 0.3, 0.1, -0.2, 0.4, 0.0, 0.7]);
        let p = leading_projector(&m, 1);
        let err = (&p * &p - &p).norm();
        assert!(err < 1e-13);
        assert!((p.trace().re - 1.0).abs() < 1e-13);
    }
}
