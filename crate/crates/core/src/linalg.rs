//! Small dense symmetric matrices and Cholesky solves.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Fills entries `(i, j)` with `i <= j` from `f` and mirrors them.
    pub fn from_upper(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| x * factor).collect() }
    }

    /// `xᵗ M x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim);
        let mut total = 0.0;
        for i in 0..self.dim {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            total += x[i] * row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        }
        total
    }

    /// Lower-triangular factor `L` with `M = L Lᵗ`. Fails when a pivot drops
    /// below `1e-12 · max diagonal`.
    pub fn cholesky(&self) -> Result<Cholesky> {
        let n = self.dim;
        let max_diag = (0..n).map(|i| self.get(i, i)).fold(0.0, f64::max);
        if !(max_diag > 0.0) || !max_diag.is_finite() {
            return Err(Error::Numeric("matrix has no positive diagonal".into()));
        }
        let tol = 1e-12 * max_diag;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > tol) {
                return Err(Error::Numeric(format!("matrix is not positive definite (pivot {j})")));
            }
            let djj = d.sqrt();
            l[j * n + j] = djj;
            for i in j + 1..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / djj;
            }
        }
        Ok(Cholesky { dim: n, l })
    }
}

#[derive(Debug, Clone)]
pub struct Cholesky {
    dim: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Solves `M x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            let s = y[i] - row.iter().zip(&y[..i]).map(|(l, y)| l * y).sum::<f64>();
            y[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let s = y[i] - (i + 1..n).map(|k| self.l[k * n + i] * y[k]).sum::<f64>();
            y[i] = s / self.l[i * n + i];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_spd_system() {
        let m = SymMatrix::from_upper(3, |i, j| [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]][i][j]);
        let x = [1.0, -2.0, 0.5];
        let b: Vec<f64> = (0..3).map(|i| (0..3).map(|j| m.get(i, j) * x[j]).sum()).collect();
        let got = m.cholesky().unwrap().solve(&b);
        for (g, w) in got.iter().zip(x) {
            assert!((g - w).abs() < 1e-14);
        }
        assert!((m.quadratic_form(&x) - x.iter().zip(&b).map(|(a, b)| a * b).sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn rejects_indefinite() {
        let m = SymMatrix::from_upper(2, |i, j| if i == j { 1.0 } else { 2.0 });
        assert!(matches!(m.cholesky(), Err(Error::Numeric(_))));
        let z = SymMatrix::from_upper(2, |_, _| 0.0);
        assert!(z.cholesky().is_err());
    }
}
