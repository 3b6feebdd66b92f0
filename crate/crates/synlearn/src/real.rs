//! Dense real matrices and the least-squares / singular-value kernels used
//! by the rate estimator.
//!
//! The heavy lifting is delegated to nalgebra's orthogonal factorizations;
//! this module owns the crate-facing types, the rank diagnostics (deficient
//! columns are named, not just counted), and the error mapping.

use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Relative tolerance for declaring a column dependent during the
/// Gram-Schmidt rank scan.
const RANK_TOL: f64 = 1e-10;

/// Row-major dense real matrix.
#[derive(Clone, Debug)]
pub struct RealMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    /// Zero matrix of the given shape.
    #[must_use]
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        RealMatrix {
            nrows,
            ncols,
            data: vec![0.0; nrows * ncols],
        }
    }

    /// Builds from row-major data.
    ///
    /// # Panics
    /// Panics when `data.len() != nrows * ncols`.
    #[must_use]
    pub fn from_rows(nrows: usize, ncols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), nrows * ncols, "row-major data length");
        RealMatrix { nrows, ncols, data }
    }

    /// Number of rows.
    #[must_use]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Number of columns.
    #[must_use]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Entry at `(i, j)`.
    #[must_use]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.ncols + j]
    }

    /// Sets entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.ncols + j] = v;
    }

    /// Matrix-vector product.
    ///
    /// # Panics
    /// Panics when `x.len() != ncols`.
    #[must_use]
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols, "matvec dimension");
        let mut y = vec![0.0; self.nrows];
        if self.ncols == 0 {
            return y;
        }
        for (yi, row) in y.iter_mut().zip(self.data.chunks_exact(self.ncols)) {
            *yi = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        y
    }

    fn to_na(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.nrows, self.ncols, &self.data)
    }

    /// Singular values, descending.
    #[must_use]
    pub fn singular_values(&self) -> Vec<f64> {
        let sv = self.to_na().singular_values();
        let mut out: Vec<f64> = sv.iter().copied().collect();
        out.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
        out
    }

    /// Columns that are numerically dependent on earlier columns, detected
    /// by a modified Gram-Schmidt sweep. Empty means full column rank.
    #[must_use]
    pub fn dependent_columns(&self) -> Vec<usize> {
        let mut q: Vec<Vec<f64>> = Vec::new();
        let mut dependent = Vec::new();
        for j in 0..self.ncols {
            let mut col: Vec<f64> = (0..self.nrows).map(|i| self.get(i, j)).collect();
            let orig_norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            for basis in &q {
                let proj: f64 = basis.iter().zip(&col).map(|(a, b)| a * b).sum();
                for (c, b) in col.iter_mut().zip(basis) {
                    *c -= proj * b;
                }
            }
            let res_norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            if res_norm <= RANK_TOL * orig_norm.max(1.0) {
                dependent.push(j);
            } else {
                for c in &mut col {
                    *c /= res_norm;
                }
                q.push(col);
            }
        }
        dependent
    }
}

/// Outcome of a least-squares solve.
#[derive(Clone, Debug)]
pub struct LstsqSolution {
    /// Minimizer of `‖A x − b‖₂`.
    pub x: Vec<f64>,
    /// Residual norm `‖A x − b‖₂` at the minimizer.
    pub residual_l2: f64,
    /// Smallest singular value of `A`.
    pub sigma_min: f64,
    /// Largest singular value of `A`.
    pub sigma_max: f64,
}

/// Solves `min ‖A x − b‖₂` through an orthogonal factorization (SVD).
///
/// # Errors
/// - [`Error::Dimension`] when `b.len() != A.nrows()`.
/// - [`Error::Numeric`] naming the dependent columns when `A` is column-rank
///   deficient; the normal equations are never formed, so ill conditioning
///   surfaces here rather than as silent noise amplification.
pub fn lstsq_solve(a: &RealMatrix, b: &[f64]) -> Result<LstsqSolution> {
    if b.len() != a.nrows() {
        return Err(Error::Dimension(format!(
            "least squares: rhs has {} entries, matrix has {} rows",
            b.len(),
            a.nrows()
        )));
    }
    if a.nrows() < a.ncols() {
        return Err(Error::Numeric(format!(
            "least squares: underdetermined system ({} rows < {} columns)",
            a.nrows(),
            a.ncols()
        )));
    }
    let dep = a.dependent_columns();
    if !dep.is_empty() {
        return Err(Error::Numeric(format!(
            "least squares: design is column-rank deficient; dependent columns {dep:?}"
        )));
    }
    let m = a.to_na();
    let svd = m.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0f64, f64::max);
    let sigma_min = svd
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let rhs = DVector::from_column_slice(b);
    let x = svd
        .solve(&rhs, RANK_TOL * sigma_max)
        .map_err(|e| Error::Numeric(format!("least squares: {e}")))?;
    let residual = (&m * &x - &rhs).norm();
    Ok(LstsqSolution {
        x: x.iter().copied().collect(),
        residual_l2: residual,
        sigma_min,
        sigma_max,
    })
}
