//! Dense complex linear algebra for the truncated coefficient systems.
//!
//! LU and SVD are delegated to `nalgebra`; the triangular Toeplitz solve the
//! iterations use on every rep is done here by back substitution.

use nalgebra::DMatrix;

use crate::{Complex64, Error, Result};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: DMatrix::from_element(rows, cols, Complex64::new(0.0, 0.0)),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            inner: DMatrix::from_fn(rows, cols, f),
        }
    }

    /// Builds from row-major entries.
    pub fn from_rows(rows: usize, cols: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self {
            inner: DMatrix::from_row_slice(rows, cols, entries),
        }
    }

    /// Upper-triangular Toeplitz matrix: entry `(i, j) = band[j − i]` for `j ≥ i`.
    pub fn upper_toeplitz(band: &[Complex64], n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if j >= i {
                band.get(j - i).copied().unwrap_or_default()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.inner[(i, j)] = v;
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            inner: &self.inner * s,
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols());
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.inner[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.inner
    }
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Partial-pivot LU factorization that can be reused across right-hand sides.
#[derive(Debug, Clone)]
pub struct DenseLu {
    lu: nalgebra::linalg::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    size: usize,
}

impl DenseLu {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let n = a.rows();
        if n != a.cols() {
            return Err(Error::Dimension(format!("expected square matrix, got {}x{}", n, a.cols())));
        }
        let lu = a.inner.clone().lu();
        let u = lu.u();
        let scale = a.inner.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tol = f64::EPSILON * n as f64 * scale;
        for i in 0..n {
            let pivot = u[(i, i)].norm();
            if !(pivot > tol) {
                return Err(Error::Singular { pivot: i, size: n });
            }
        }
        Ok(Self { lu, size: n })
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        if b.len() != self.size {
            return Err(Error::Dimension(format!("rhs length {} for {}x{} system", b.len(), self.size, self.size)));
        }
        let rhs = nalgebra::DVector::from_column_slice(b);
        let x = self
            .lu
            .solve(&rhs)
            .ok_or(Error::Singular { pivot: 0, size: self.size })?;
        Ok(x.iter().copied().collect())
    }
}

pub fn solve_dense(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    DenseLu::new(a)?.solve(b)
}

/// `σ_max / σ_min` in the 2-norm; `+∞` for a singular matrix.
pub fn condition_number_2norm(a: &ComplexMatrix) -> f64 {
    assert_eq!(a.rows(), a.cols(), "condition number needs a square matrix");
    if a.rows() == 0 {
        return 1.0;
    }
    let sv = a.inner.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= max * f64::EPSILON || min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves the upper-triangular Toeplitz system `Σ_{j≥i} band[j−i] x_j = rhs_i`
/// by back substitution. `band[0]` is the diagonal.
pub fn solve_triangular_toeplitz(band: &[Complex64], rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = rhs.len();
    let lead = band.first().copied().unwrap_or_default();
    if lead.norm() == 0.0 || !lead.norm().is_finite() {
        return Err(Error::Singular { pivot: 0, size: n });
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for j in (i + 1)..n {
            let d = j - i;
            if d < band.len() {
                s -= band[d] * x[j];
            }
        }
        x[i] = s / lead;
    }
    Ok(x)
}

/// Relative residual `‖A x − b‖ / ‖b‖` (absolute when `b = 0`).
pub fn relative_residual(a: &ComplexMatrix, x: &[Complex64], b: &[Complex64]) -> f64 {
    let ax = a.mul_vec(x);
    let r: Vec<Complex64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    let nb = norm2(b);
    if nb == 0.0 {
        norm2(&r)
    } else {
        norm2(&r) / nb
    }
}
