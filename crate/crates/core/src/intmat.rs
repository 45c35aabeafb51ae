//! Small dense integer matrices.
//!
//! Ranks here stay in single digits, so everything is a flat row-major
//! `Vec<i64>` with naive products. Products use checked arithmetic.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            data.extend_from_slice(row);
        }
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[i64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = a
                        .checked_mul(other[(k, j)])
                        .expect("integer matrix overflow");
                    out[(i, j)] = out[(i, j)].checked_add(v).expect("integer matrix overflow");
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .try_fold(0i64, |acc, (&a, &b)| acc.checked_add(a.checked_mul(b)?))
                    .expect("integer matrix overflow")
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i64 {
        let n = self.dim;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let Some(swap) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                    return 0;
                };
                for c in 0..n {
                    a.swap(k * n + c, swap * n + c);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] = (a[i * n + j] * pivot - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = pivot;
        }
        i64::try_from(sign * a[n * n - 1]).expect("determinant overflow")
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let n = self.dim - 1;
        let mut m = Self::zeros(n);
        for (ri, i) in (0..self.dim).filter(|&i| i != skip_row).enumerate() {
            for (cj, j) in (0..self.dim).filter(|&j| j != skip_col).enumerate() {
                m[(ri, cj)] = self[(i, j)];
            }
        }
        m
    }

    /// Classical adjugate, so that `self * adj = det * I`.
    pub fn adjugate(&self) -> Self {
        let n = self.dim;
        if n == 1 {
            return Self::identity(1);
        }
        let mut adj = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let cofactor = self.minor(j, i).determinant();
                adj[(i, j)] = if (i + j) % 2 == 0 {
                    cofactor
                } else {
                    -cofactor
                };
            }
        }
        adj
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.dim).map(|i| self.row(i)))
            .finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:>3}")).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_adjugate() {
        let m = IntMatrix::from_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(m.determinant(), 4);
        let adj = m.adjugate();
        let prod = m.mul(&adj);
        assert_eq!(prod, {
            let mut d = IntMatrix::identity(3);
            for i in 0..3 {
                d[(i, i)] = 4;
            }
            d
        });
    }

    #[test]
    fn determinant_with_zero_pivot() {
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.determinant(), -1);
        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(singular.determinant(), 0);
    }

    #[test]
    fn rank_one_adjugate() {
        let m = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(m.adjugate(), IntMatrix::identity(1));
        assert_eq!(m.determinant(), 2);
    }
}
