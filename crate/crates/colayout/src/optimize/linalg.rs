//! Dense symmetric matrices and a cyclic Jacobi eigensolver, sized for the
//! low-dimensional search spaces of the layout optimizer.

use crate::num::{real, Real};

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMat<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Real> SquareMat<R> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![R::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> R {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.n + j] = v;
    }

    /// Largest absolute difference between the matrix and its transpose.
    pub fn asymmetry(&self) -> R {
        let mut worst = R::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Replace with `(A + A^T) / 2`.
    pub fn symmetrize(&mut self) {
        let half = real::<R>(0.5);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let v = (self.get(i, j) + self.get(j, i)) * half;
                self.set(i, j, v);
                self.set(j, i, v);
            }
        }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[R]) -> Vec<R> {
        debug_assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }
}

/// Eigendecomposition of a symmetric matrix: eigenvalues ascending with the
/// matching eigenvector columns, via cyclic Jacobi rotations. Deterministic.
pub struct SymEigen<R> {
    pub values: Vec<R>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: SquareMat<R>,
}

pub fn sym_eigen<R: Real>(m: &SquareMat<R>) -> SymEigen<R> {
    let n = m.n();
    let mut a = m.clone();
    a.symmetrize();
    let mut v = SquareMat::identity(n);
    if n == 1 {
        return SymEigen {
            values: vec![a.get(0, 0)],
            vectors: v,
        };
    }

    let eps = real::<R>(1e-14);
    for _sweep in 0..100 {
        // Off-diagonal Frobenius mass decides convergence.
        let mut off = R::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off = off + a.get(i, j) * a.get(i, j);
            }
        }
        let mut diag = R::zero();
        for i in 0..n {
            diag = diag + a.get(i, i) * a.get(i, i);
        }
        if off <= eps * eps * (diag + off).max(R::one()) {
            break;
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == R::zero() {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (real::<R>(2.0) * apq);
                // Numerically stable tangent of the rotation angle.
                let t = {
                    let sign = if theta >= R::zero() { R::one() } else { -R::one() };
                    sign / (theta.abs() + (theta * theta + R::one()).sqrt())
                };
                let c = R::one() / (t * t + R::one()).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .partial_cmp(&a.get(j, j))
            .expect("finite eigenvalues")
    });
    let values: Vec<R> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vectors = SquareMat::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, col, v.get(row, src));
        }
    }
    SymEigen { values, vectors }
}
