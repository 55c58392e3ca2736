//! Dense linear algebra for the handful-of-summands matrices this crate needs.
//!
//! Matrices here are at most the number of irreducible summands across, so a
//! one-sided Jacobi SVD and a cyclic Jacobi eigensolver are plenty.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|l| self[(i, l)] * other[(l, j)]).sum()
        })
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// Thin SVD `A = U Σ Vᵀ` of a square or tall matrix.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

/// One-sided Jacobi SVD. Singular values are returned in decreasing order.
pub fn svd(a: &Matrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    assert!(m >= n, "svd expects rows >= cols");
    let mut w = a.clone();
    let mut v = Matrix::identity(n);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    alpha += w[(i, p)] * w[(i, p)];
                    beta += w[(i, q)] * w[(i, q)];
                    gamma += w[(i, p)] * w[(i, q)];
                }
                if gamma.abs() <= 1e-300 || gamma.abs() <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for i in 0..m {
                    let (wp, wq) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = c * wp - s * wq;
                    w[(i, q)] = s * wp + c * wq;
                }
                for i in 0..n {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sigma: Vec<f64> = (0..n).map(|j| norm(&w.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        sigma[j]
            .partial_cmp(&sigma[i])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let mut u = Matrix::zeros(m, n);
    let mut vs = Matrix::zeros(n, n);
    let sorted: Vec<f64> = order.iter().map(|&j| sigma[j]).collect();
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            vs[(i, new)] = v[(i, old)];
        }
        if sigma[old] > 0.0 {
            for i in 0..m {
                u[(i, new)] = w[(i, old)] / sigma[old];
            }
        }
    }
    sigma = sorted;
    Svd { u, sigma, v: vs }
}

impl Svd {
    /// Number of singular values above `rel_tol * σ_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let smax = self.sigma.first().copied().unwrap_or(0.0);
        self.sigma
            .iter()
            .filter(|&&s| s > rel_tol * smax && s > 0.0)
            .count()
    }

    /// Right singular vectors spanning the numerical null space.
    pub fn null_space(&self, rel_tol: f64) -> Vec<Vec<f64>> {
        let r = self.rank(rel_tol);
        (r..self.sigma.len()).map(|j| self.v.column(j)).collect()
    }

    /// Minimum-norm least-squares solution of `A x = b`.
    pub fn solve(&self, b: &[f64], rel_tol: f64) -> Vec<f64> {
        let r = self.rank(rel_tol);
        let n = self.v.rows();
        let mut x = vec![0.0; n];
        for j in 0..r {
            let coef: f64 =
                (0..b.len()).map(|i| self.u[(i, j)] * b[i]).sum::<f64>() / self.sigma[j];
            for i in 0..n {
                x[i] += coef * self.v[(i, j)];
            }
        }
        x
    }
}

/// Eigenvalues and eigenvectors (columns) of a symmetric matrix, ascending.
pub fn symmetric_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        if off <= 1e-30 * (1.0 + m.max_abs() * m.max_abs()) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * m[(p, q)]);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[(i, i)]
            .partial_cmp(&m[(j, j)])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let vals = order.iter().map(|&i| m[(i, i)]).collect();
    let vecs = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_reconstructs_and_finds_null_space() {
        let a = Matrix::from_fn(3, 3, |i, j| {
            [[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [1.0, 0.0, 1.0]][i][j]
        });
        let s = svd(&a);
        assert_eq!(s.rank(1e-9), 2);
        let ns = s.null_space(1e-9);
        assert_eq!(ns.len(), 1);
        assert!(norm(&a.mul_vec(&ns[0])) < 1e-12);
        let sig = Matrix::from_fn(3, 3, |i, j| if i == j { s.sigma[i] } else { 0.0 });
        let rec = s.u.mul(&sig).mul(&s.v.transpose());
        assert!(rec.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn least_squares_is_minimum_norm() {
        // x + y = 2 has minimum-norm solution (1, 1).
        let a = Matrix::from_fn(2, 2, |i, _| if i == 0 { 1.0 } else { 0.0 });
        let x = svd(&a).solve(&[2.0, 0.0], 1e-12);
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_eigen_of_known_matrix() {
        let a = Matrix::from_fn(2, 2, |i, j| [[2.0, 1.0], [1.0, 2.0]][i][j]);
        let (vals, vecs) = symmetric_eigen(&a);
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
        let av = a.mul_vec(&vecs.column(1));
        assert!((av[0] - 3.0 * vecs[(0, 1)]).abs() < 1e-13);
    }
}
