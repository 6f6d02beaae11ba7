//! Dense complex matrices sized for small bus networks, with an LU solve.

use num_complex::Complex64;
use thiserror::Error;

/// Dense square complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    /// Elimination found no pivot above the numerical floor.
    #[error("matrix is singular to working precision (pivot column {0})")]
    SingularMatrix(usize),
    /// Right-hand side length does not match the matrix dimension.
    #[error("dimension mismatch: matrix is {n}x{n}, rhs has {rhs} entries")]
    DimensionMismatch { n: usize, rhs: usize },
    /// Matrices must be square with at least one row.
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
}

impl ComplexMatrix {
    /// Zero matrix of dimension `n` (must be at least 1).
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        assert!(n > 0 && rows.iter().all(|r| r.len() == n), "must be square");
        let data = rows.iter().flatten().copied().collect();
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] += v;
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j) * x[j])
                    .sum::<Complex64>()
            })
            .collect()
    }

    /// LU factorization with partial pivoting, reusable across many
    /// right-hand sides with the same matrix.
    pub fn lu(&self) -> Result<LuFactors, LinalgError> {
        let n = self.n;
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = self
            .data
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        for col in 0..n {
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| (r, lu[r * n + col].norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty column");
            if pivot_mag <= scale * 1e-14 {
                return Err(LinalgError::SingularMatrix(col));
            }
            if pivot_row != col {
                perm.swap(col, pivot_row);
                for j in 0..n {
                    lu.swap(col * n + j, pivot_row * n + j);
                }
            }
            let pivot = lu[col * n + col];
            for r in (col + 1)..n {
                let factor = lu[r * n + col] / pivot;
                lu[r * n + col] = factor;
                for j in (col + 1)..n {
                    let v = lu[col * n + j];
                    lu[r * n + j] -= factor * v;
                }
            }
        }
        Ok(LuFactors { n, lu, perm })
    }
}

/// Factored form produced by [`ComplexMatrix::lu`].
#[derive(Clone, Debug)]
pub struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        let n = self.n;
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch { n, rhs: b.len() });
        }
        let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                let yj = y[j];
                y[i] -= l * yj;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.lu[i * n + j];
                let yj = y[j];
                y[i] -= u * yj;
            }
            y[i] /= self.lu[i * n + i];
        }
        Ok(y)
    }
}

/// Solves `A x = b` for a dense complex system by LU with partial pivoting.
pub fn solve_linear_complex(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
    if b.len() != a.n() {
        return Err(LinalgError::DimensionMismatch {
            n: a.n(),
            rhs: b.len(),
        });
    }
    a.lu()?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_returns_rhs() {
        let mut a = ComplexMatrix::zeros(3);
        for i in 0..3 {
            a.set(i, i, c(1.0, 0.0));
        }
        let b = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, -1.0)];
        let x = solve_linear_complex(&a, &b).unwrap();
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi).norm() < 1e-15);
        }
    }

    #[test]
    fn diagonal_system_matches_hand_values() {
        let mut a = ComplexMatrix::zeros(2);
        a.set(0, 0, c(2.0, 0.0));
        a.set(1, 1, c(0.0, 2.0));
        let x = solve_linear_complex(&a, &[c(4.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert!((x[0] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn random_system_residual_is_tiny() {
        // Deterministic pseudo-random 10x10 system; verify by residual.
        let n = 10;
        let mut seed = 0x243f6a8885a308d3u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut a = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, c(next(), next()));
            }
            a.add_at(i, i, c(4.0, 0.0));
        }
        let b: Vec<Complex64> = (0..n).map(|_| c(next(), next())).collect();
        let x = solve_linear_complex(&a, &b).unwrap();
        let r = a.mul_vec(&x);
        let resid = r
            .iter()
            .zip(&b)
            .map(|(ri, bi)| (ri - bi).norm())
            .fold(0.0f64, f64::max);
        assert!(resid < 1e-10, "residual {resid}");
    }

    #[test]
    fn singular_matrix_is_detected() {
        let mut a = ComplexMatrix::zeros(2);
        a.set(0, 0, c(1.0, 1.0));
        a.set(0, 1, c(2.0, 2.0));
        a.set(1, 0, c(0.5, 0.5));
        a.set(1, 1, c(1.0, 1.0));
        assert!(matches!(
            solve_linear_complex(&a, &[c(1.0, 0.0), c(1.0, 0.0)]),
            Err(LinalgError::SingularMatrix(_))
        ));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = ComplexMatrix::zeros(2);
        assert!(matches!(
            solve_linear_complex(&a, &[c(1.0, 0.0)]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn factorization_reuses_across_rhs() {
        let mut a = ComplexMatrix::zeros(2);
        a.set(0, 0, c(3.0, 0.0));
        a.set(0, 1, c(1.0, 0.0));
        a.set(1, 0, c(1.0, 0.0));
        a.set(1, 1, c(2.0, 0.0));
        let lu = a.lu().unwrap();
        for b in [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 1.0), c(2.0, -1.0)]] {
            let x = lu.solve(&b).unwrap();
            let r = a.mul_vec(&x);
            assert!((r[0] - b[0]).norm() < 1e-12 && (r[1] - b[1]).norm() < 1e-12);
        }
    }
}
