//! The weighted scalar product on `F^e_M`, the forward discrete E-transform,
//! the interpolant and the identities used to check them.

use std::collections::HashSet;
use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;

use crate::efun::{
    evaluate_e, evaluate_e_table_capped, CompensatedSum, ComplexMatrix, DEFAULT_TABLE_CAP,
};
use crate::error::{Error, Result};
use crate::euclid::{dot, EuclideanFrame};
use crate::grids::{class_key, enumerate_fe_m, enumerate_lambda_e_m, GridPoint, WeightPoint};
use crate::rootdata::{PointCoord, RootSystemData, SimpleType, WeightCoord};
use crate::scalar::Real;
use crate::weyl::{enumerate_weyl, even_subgroup, Lattice, WeylElement};

/// Default cap on `c M^n` for the brute torus sums.
pub const DEFAULT_TORUS_CAP: u64 = 10_000_000;

/// Identifies the grid a vector was sampled on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridTag {
    pub ty: SimpleType,
    pub level: i64,
    pub j: usize,
}

impl fmt::Display for GridTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} M={} j={}", self.ty, self.level, self.j)
    }
}

/// Values indexed by the canonical order of `F^e_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleVector<T> {
    pub values: Vec<Complex<T>>,
    pub tag: GridTag,
}

/// Coefficients indexed by the canonical order of `Lambda^e_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector<T> {
    pub values: Vec<Complex<T>>,
    pub tag: GridTag,
}

#[derive(Debug, Clone)]
pub struct GramReport<T> {
    pub matrix: ComplexMatrix<T>,
    pub max_offdiag_abs: T,
    /// `max_offdiag_abs` divided by `c |W^e| M^n`.
    pub max_offdiag_scaled: T,
    pub max_diag_reldev: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlancherelReport<T> {
    pub lhs: T,
    pub rhs: T,
    pub reldev: T,
}

/// Everything needed to transform on one grid: both grids, the even group
/// and the E-function table `Xi_lambda(x)` (rows weights, columns points).
#[derive(Debug, Clone)]
pub struct ETransform<T> {
    tag: GridTag,
    rsd: RootSystemData,
    even: Vec<WeylElement>,
    points: Vec<GridPoint>,
    weights: Vec<WeightPoint>,
    table: ComplexMatrix<T>,
    frame: EuclideanFrame<T>,
    // Euclidean images w(lambda) for every weight and every w in W^e
    orbit_vectors: Vec<Vec<Vec<T>>>,
}

impl<T: Real> ETransform<T> {
    pub fn new(ty: SimpleType, level: i64, j: usize) -> Result<Self> {
        Self::with_cap(ty, level, j, DEFAULT_TABLE_CAP)
    }

    pub fn with_cap(ty: SimpleType, level: i64, j: usize, table_cap: u64) -> Result<Self> {
        let rsd = RootSystemData::new(ty);
        let even = even_subgroup(&enumerate_weyl(&rsd)?);
        let points = enumerate_fe_m(&rsd, level, j)?;
        let weights = enumerate_lambda_e_m(&rsd, level, j)?;
        if points.len() != weights.len() {
            return Err(Error::InvariantViolation(format!(
                "|F^e_M| = {} but |Lambda^e_M| = {}",
                points.len(),
                weights.len()
            )));
        }
        let ws: Vec<WeightCoord> = weights.iter().map(WeightPoint::weight).collect();
        let ps: Vec<PointCoord> = points.iter().map(GridPoint::point).collect();
        let table = evaluate_e_table_capped(&rsd, &even, &ws, &ps, table_cap)?;
        let frame = EuclideanFrame::new(&rsd);
        let orbit_vectors = ws
            .iter()
            .map(|t| {
                even.iter()
                    .map(|w| frame.weight_vector(&w.apply_to_weight(t).0))
                    .collect()
            })
            .collect();
        Ok(Self {
            tag: GridTag { ty, level, j },
            rsd,
            even,
            points,
            weights,
            table,
            frame,
            orbit_vectors,
        })
    }

    pub fn tag(&self) -> GridTag {
        self.tag
    }

    pub fn root_system(&self) -> &RootSystemData {
        &self.rsd
    }

    pub fn even_group(&self) -> &[WeylElement] {
        &self.even
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn weights(&self) -> &[WeightPoint] {
        &self.weights
    }

    pub fn table(&self) -> &ComplexMatrix<T> {
        &self.table
    }

    pub fn frame(&self) -> &EuclideanFrame<T> {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `c |W^e| M^n`, the common factor of every Gram diagonal entry.
    pub fn norm_scale(&self) -> T {
        let n = self.rsd.rank() as i32;
        T::from_count(self.rsd.center as u64)
            * T::from_count(self.even.len() as u64)
            * T::from_count(self.tag.level as u64).powi(n)
    }

    fn check_tag(&self, tag: GridTag) -> Result<()> {
        if tag != self.tag {
            return Err(Error::GridMismatch {
                expected: self.tag.to_string(),
                found: tag.to_string(),
            });
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: len,
            });
        }
        Ok(())
    }

    pub fn samples(&self, values: Vec<Complex<T>>) -> Result<SampleVector<T>> {
        self.check_len(values.len())?;
        Ok(SampleVector {
            values,
            tag: self.tag,
        })
    }

    pub fn coefficients(&self, values: Vec<Complex<T>>) -> Result<CoefficientVector<T>> {
        self.check_len(values.len())?;
        Ok(CoefficientVector {
            values,
            tag: self.tag,
        })
    }

    /// Samples `f` at every grid point.
    pub fn sample_with(&self, f: impl Fn(&GridPoint) -> Complex<T>) -> SampleVector<T> {
        SampleVector {
            values: self.points.iter().map(f).collect(),
            tag: self.tag,
        }
    }

    /// `Xi_mu` on the grid, `mu` given by its index in `Lambda^e_M`.
    pub fn e_function_samples(&self, weight_index: usize) -> SampleVector<T> {
        SampleVector {
            values: self.table.row(weight_index).to_vec(),
            tag: self.tag,
        }
    }

    /// `sum_x eps(x) f(x) conj(g(x))`.
    pub fn scalar_product(&self, f: &SampleVector<T>, g: &SampleVector<T>) -> Result<Complex<T>> {
        self.check_tag(f.tag)?;
        self.check_tag(g.tag)?;
        self.check_len(f.values.len())?;
        self.check_len(g.values.len())?;
        Ok(self.weighted_sum(&f.values, &g.values))
    }

    fn weighted_sum(&self, f: &[Complex<T>], g: &[Complex<T>]) -> Complex<T> {
        let mut acc = CompensatedSum::new();
        for ((p, a), b) in self.points.iter().zip(f).zip(g) {
            acc.add(*a * b.conj() * T::from_count(p.eps));
        }
        acc.total()
    }

    /// `c_lambda = (c |W^e| M^n h_lambda)^-1 sum_x eps(x) f(x) conj(Xi_lambda(x))`.
    pub fn forward(&self, f: &SampleVector<T>) -> Result<CoefficientVector<T>> {
        self.check_tag(f.tag)?;
        self.check_len(f.values.len())?;
        let scale = self.norm_scale();
        let values = self
            .weights
            .par_iter()
            .map(|wp| {
                let s = self.weighted_sum(&f.values, self.table.row(wp.index));
                s / (scale * T::from_count(wp.h_dual))
            })
            .collect();
        Ok(CoefficientVector {
            values,
            tag: self.tag,
        })
    }

    /// The interpolant at every grid point.
    pub fn inverse(&self, cv: &CoefficientVector<T>) -> Result<SampleVector<T>> {
        self.check_tag(cv.tag)?;
        self.check_len(cv.values.len())?;
        let values = (0..self.len())
            .into_par_iter()
            .map(|col| {
                let mut acc = CompensatedSum::new();
                for (row, c) in cv.values.iter().enumerate() {
                    acc.add(*c * self.table.get(row, col));
                }
                acc.total()
            })
            .collect();
        Ok(SampleVector {
            values,
            tag: self.tag,
        })
    }

    /// `sum_lambda c_lambda Xi_lambda(x)` at a lattice point of any level,
    /// with exact phases.
    pub fn interpolate(&self, cv: &CoefficientVector<T>, x: &PointCoord) -> Result<Complex<T>> {
        self.check_tag(cv.tag)?;
        self.check_len(cv.values.len())?;
        if x.coords.len() != self.rsd.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rsd.rank(),
                found: x.coords.len(),
            });
        }
        if x.level < 1 {
            return Err(Error::InvalidLevel(x.level));
        }
        let mut acc = CompensatedSum::new();
        for (wp, c) in self.weights.iter().zip(&cv.values) {
            let xi: Complex<T> = evaluate_e(&self.rsd, &self.even, &wp.weight(), x);
            acc.add(*c * xi);
        }
        Ok(acc.total())
    }

    /// The interpolant at an arbitrary point given in real coweight
    /// coordinates `y` (`x = sum y_i w_i^v`).
    pub fn interpolate_real(&self, cv: &CoefficientVector<T>, y: &[T]) -> Result<Complex<T>> {
        self.check_tag(cv.tag)?;
        self.check_len(cv.values.len())?;
        if y.len() != self.rsd.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rsd.rank(),
                found: y.len(),
            });
        }
        let x = self.frame.point_vector(y);
        let mut acc = CompensatedSum::new();
        for (orbit, c) in self.orbit_vectors.iter().zip(&cv.values) {
            let mut xi = CompensatedSum::new();
            for v in orbit {
                let p = dot(v, &x);
                let angle = T::TAU() * (p - p.floor());
                xi.add(Complex::new(angle.cos(), angle.sin()));
            }
            acc.add(*c * xi.total());
        }
        Ok(acc.total())
    }

    /// Full Gram matrix of the E-functions of `Lambda^e_M` on `F^e_M`.
    pub fn gram_matrix(&self) -> GramReport<T> {
        let n = self.len();
        let rows: Vec<Vec<Complex<T>>> = (0..n)
            .into_par_iter()
            .map(|a| {
                (0..n)
                    .map(|b| self.weighted_sum(self.table.row(a), self.table.row(b)))
                    .collect()
            })
            .collect();
        let scale = self.norm_scale();
        let mut max_off = T::zero();
        let mut max_diag = T::zero();
        for (a, row) in rows.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                if a == b {
                    let expected = scale * T::from_count(self.weights[a].h_dual);
                    let dev = (*v - Complex::new(expected, T::zero())).norm() / expected;
                    max_diag = max_diag.max(dev);
                } else {
                    max_off = max_off.max(v.norm());
                }
            }
        }
        GramReport {
            matrix: ComplexMatrix::from_rows(n, n, rows.into_iter().flatten().collect()),
            max_offdiag_abs: max_off,
            max_offdiag_scaled: max_off / scale,
            max_diag_reldev: max_diag,
        }
    }

    /// Both sides of the Plancherel identity for `f`.
    pub fn plancherel_check(&self, f: &SampleVector<T>) -> Result<PlancherelReport<T>> {
        let cv = self.forward(f)?;
        let mut lhs = CompensatedSum::new();
        for (p, v) in self.points.iter().zip(&f.values) {
            lhs.add(Complex::new(v.norm_sqr() * T::from_count(p.eps), T::zero()));
        }
        let mut rhs = CompensatedSum::new();
        for (wp, c) in self.weights.iter().zip(&cv.values) {
            rhs.add(Complex::new(
                c.norm_sqr() * T::from_count(wp.h_dual),
                T::zero(),
            ));
        }
        let lhs = lhs.total().re;
        let rhs = rhs.total().re * self.norm_scale();
        let denom = lhs.abs().max(rhs.abs());
        let reldev = if denom == T::zero() {
            T::zero()
        } else {
            (lhs - rhs).abs() / denom
        };
        Ok(PlancherelReport { lhs, rhs, reldev })
    }
}

/// Representatives (scaled by `M`) of every class of `(1/M) P^v / Q^v`,
/// built as the union of the `W^e` orbits of `F^e_M`.
pub fn torus_classes(
    rsd: &RootSystemData,
    even: &[WeylElement],
    level: i64,
    j: usize,
) -> Result<Vec<Vec<i64>>> {
    torus_classes_capped(rsd, even, level, j, DEFAULT_TORUS_CAP)
}

pub fn torus_classes_capped(
    rsd: &RootSystemData,
    even: &[WeylElement],
    level: i64,
    j: usize,
    cap: u64,
) -> Result<Vec<Vec<i64>>> {
    if level < 1 {
        return Err(Error::InvalidLevel(level));
    }
    let required =
        (rsd.center as u64).saturating_mul((level as u64).saturating_pow(rsd.rank() as u32));
    if required > cap {
        return Err(Error::SizeLimit { required, cap });
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in enumerate_fe_m(rsd, level, j)? {
        for w in even {
            let v = w.act(Lattice::Point, &p.coords);
            if seen.insert(class_key(rsd, &v, level, Lattice::Point)) {
                out.push(v);
            }
        }
    }
    if out.len() as u64 != required {
        return Err(Error::InvariantViolation(format!(
            "W^e orbits of F^e_M cover {} classes, expected c M^n = {required}",
            out.len()
        )));
    }
    Ok(out)
}

/// `sum_{y in (1/M) P^v / Q^v} exp(2 pi i <lambda - lambda', y>)` by brute force.
pub fn abelian_orthogonality_oracle<T: Real>(
    rsd: &RootSystemData,
    level: i64,
    lambda: &WeightCoord,
    lambda_prime: &WeightCoord,
) -> Result<Complex<T>> {
    let n = rsd.rank();
    for t in [lambda, lambda_prime] {
        if t.0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: t.0.len(),
            });
        }
    }
    let even = even_subgroup(&enumerate_weyl(rsd)?);
    let classes = torus_classes(rsd, &even, level, 1)?;
    let diff: Vec<i64> = lambda
        .0
        .iter()
        .zip(&lambda_prime.0)
        .map(|(a, b)| a - b)
        .collect();
    let modulus = rsd.center * level;
    let roots = crate::efun::RootsOfUnity::<T>::new(modulus as usize);
    let mut acc = CompensatedSum::new();
    for y in &classes {
        let k = rsd.pairing_numerator(&diff, y, level).rem_euclid(modulus);
        acc.add(roots.get(k as usize));
    }
    Ok(acc.total())
}
