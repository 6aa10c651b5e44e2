//! Dense exact matrices over `Q`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Square matrix with the given diagonal.
    pub fn diag(d: &[Q]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.data[i * d.len() + i] = x.clone();
        }
        m
    }

    /// Matrix unit e_{ij} (0-based) in M_n.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.data[i * n + j] = Q::one();
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("{} columns, vector of {}", self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Matrix {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Q::one());
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::Structure("singular matrix".into()));
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    /// Some solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Q]) -> Result<Option<Vec<Q>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension("right-hand side length".into()));
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Q::zero(); self.cols];
        for (row, &c) in piv.iter().enumerate() {
            x[c] = r.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Basis of the null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (row, &c) in piv.iter().enumerate() {
                    v[c] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }
}

/// Indices of a maximal linearly independent subfamily, greedy in order.
pub fn independent_subset(vectors: &[Vec<Q>]) -> Vec<usize> {
    let Some(len) = vectors.first().map(|v| v.len()) else {
        return vec![];
    };
    let m = Matrix::from_columns(len, vectors);
    m.rref().1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn solve_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let x = a.solve(&[q(1), q(2)]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![q(1), q(2)]);
        assert!(a.solve(&[q(1), q(3)]).unwrap().is_none());
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).unwrap().iter().all(|x| x == &q(0)));
        }
        assert_eq!(m(&[&[3, 1], &[1, 1]]).solve(&[q(1), q(0)]).unwrap().unwrap(), vec![frac(1, 2), frac(-1, 2)]);
    }

    #[test]
    fn independent_columns() {
        let v = vec![vec![q(1), q(0)], vec![q(2), q(0)], vec![q(0), q(1)]];
        assert_eq!(independent_subset(&v), vec![0, 2]);
    }
}
