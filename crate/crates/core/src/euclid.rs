//! A fixed orthonormal realization of each root system.
//!
//! The simple roots are the rows of the lower-triangular Cholesky factor
//! `L` of the Gram matrix `<a_i, a_j> = C_ij d_j / 2` (long roots have
//! squared length 2). The fundamental coweights are the columns of `L^-1`
//! and the fundamental weights are `w_i = (d_i / 2) w_i^v`.
//!
//! Lattice computations never go through this frame; it exists for
//! off-lattice interpolation and for emitting plot coordinates.

use crate::rootdata::RootSystemData;
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct EuclideanFrame<T> {
    simple_roots: Vec<Vec<T>>,
    coweights: Vec<Vec<T>>,
    weights: Vec<Vec<T>>,
}

impl<T: Real> EuclideanFrame<T> {
    #[allow(clippy::needless_range_loop)]
    pub fn new(rsd: &RootSystemData) -> Self {
        let n = rsd.rank();
        let d: Vec<f64> = rsd.root_norms.iter().map(|&x| x as f64).collect();
        let gram: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| rsd.cartan[(i, j)] as f64 * d[j] / 2.0)
                    .collect()
            })
            .collect();

        let mut l = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
                if i == j {
                    l[i][j] = (gram[i][i] - s).sqrt();
                } else {
                    l[i][j] = (gram[i][j] - s) / l[j][j];
                }
            }
        }
        // inverse of a lower-triangular matrix by forward substitution
        let mut inv = vec![vec![0.0f64; n]; n];
        for col in 0..n {
            for i in 0..n {
                let rhs = if i == col { 1.0 } else { 0.0 };
                let s: f64 = (0..i).map(|k| l[i][k] * inv[k][col]).sum();
                inv[i][col] = (rhs - s) / l[i][i];
            }
        }
        let coweights: Vec<Vec<f64>> = (0..n)
            .map(|j| (0..n).map(|k| inv[k][j]).collect())
            .collect();
        let weights: Vec<Vec<f64>> = coweights
            .iter()
            .zip(&d)
            .map(|(v, di)| v.iter().map(|x| x * di / 2.0).collect())
            .collect();

        let cast = |m: Vec<Vec<f64>>| -> Vec<Vec<T>> {
            m.into_iter()
                .map(|r| r.into_iter().map(T::from_f64_lossy).collect())
                .collect()
        };
        Self {
            simple_roots: cast(l),
            coweights: cast(coweights),
            weights: cast(weights),
        }
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple_root(&self, i: usize) -> &[T] {
        &self.simple_roots[i]
    }

    pub fn coweight(&self, i: usize) -> &[T] {
        &self.coweights[i]
    }

    pub fn weight(&self, i: usize) -> &[T] {
        &self.weights[i]
    }

    fn combine(basis: &[Vec<T>], coeffs: impl Iterator<Item = T>) -> Vec<T> {
        let n = basis.len();
        let mut out = vec![T::zero(); n];
        for (c, b) in coeffs.zip(basis) {
            for k in 0..n {
                out[k] += c * b[k];
            }
        }
        out
    }

    /// Euclidean vector of the weight `sum t_i w_i`.
    pub fn weight_vector(&self, t: &[i64]) -> Vec<T> {
        Self::combine(
            &self.weights,
            t.iter().map(|&x| T::from_i64(x).expect("finite")),
        )
    }

    /// Euclidean vector of the point `sum y_i w_i^v` (real coweight coordinates).
    pub fn point_vector(&self, y: &[T]) -> Vec<T> {
        Self::combine(&self.coweights, y.iter().copied())
    }

    /// Coweight coordinates `y_i = <x, a_i>` of a Euclidean point.
    pub fn coweight_coords(&self, x: &[T]) -> Vec<T> {
        self.simple_roots.iter().map(|a| dot(a, x)).collect()
    }
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{Family, SimpleType};

    #[test]
    fn duality_relations() {
        for (f, n) in [
            (Family::A, 1),
            (Family::A, 3),
            (Family::B, 3),
            (Family::C, 2),
            (Family::C, 4),
            (Family::D, 5),
        ] {
            let rsd = RootSystemData::new(SimpleType::new(f, n).unwrap());
            let frame = EuclideanFrame::<f64>::new(&rsd);
            for i in 0..n {
                for j in 0..n {
                    let a = frame.simple_root(i);
                    let b = frame.simple_root(j);
                    let cartan = 2.0 * dot(a, b) / dot(b, b);
                    assert!((cartan - rsd.cartan[(i, j)] as f64).abs() < 1e-12);
                    let delta = if i == j { 1.0 } else { 0.0 };
                    assert!((dot(frame.coweight(i), b) - delta).abs() < 1e-12);
                    let coroot: Vec<f64> = b.iter().map(|x| 2.0 * x / dot(b, b)).collect();
                    let dj = if i == j { 1.0 } else { 0.0 };
                    assert!((dot(frame.weight(i), &coroot) - dj).abs() < 1e-12);
                    let inv = rsd.cartan_adjugate[(i, j)] as f64 / rsd.center as f64;
                    assert!((dot(frame.weight(i), frame.coweight(j)) - inv).abs() < 1e-12);
                }
            }
            let y = vec![0.25; n];
            let back = frame.coweight_coords(&frame.point_vector(&y));
            for v in back {
                assert!((v - 0.25).abs() < 1e-12);
            }
        }
    }
}
