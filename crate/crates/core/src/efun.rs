//! E-functions `Xi_b(a) = sum_{w in W^e} exp(2 pi i <w b, a>)`.
//!
//! Phases are computed exactly as integers modulo `c M`; the only floating
//! point step is looking up the corresponding root of unity and summing.

use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rootdata::{PointCoord, RootSystemData, WeightCoord};
use crate::scalar::Real;
use crate::weyl::WeylElement;

/// Default cap on the number of cells of an E-function table.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 24;

/// A reduced fraction `numerator / denominator` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPhase {
    numerator: i64,
    denominator: i64,
}

impl RationalPhase {
    pub fn new(numerator: i64, denominator: i64) -> Self {
        assert!(denominator > 0, "phase denominator must be positive");
        let num = numerator.rem_euclid(denominator);
        if num == 0 {
            return Self {
                numerator: 0,
                denominator: 1,
            };
        }
        let g = num_integer::gcd(num, denominator);
        Self {
            numerator: num / g,
            denominator: denominator / g,
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 1)
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn add(&self, other: &Self) -> Self {
        let den = num_integer::lcm(self.denominator, other.denominator);
        Self::new(
            self.numerator * (den / self.denominator) + other.numerator * (den / other.denominator),
            den,
        )
    }

    /// `exp(2 pi i * self)`.
    pub fn to_complex<T: Real>(&self) -> Complex<T> {
        let angle = T::TAU() * T::from_i64(self.numerator).expect("finite")
            / T::from_i64(self.denominator).expect("finite");
        Complex::new(angle.cos(), angle.sin())
    }
}

impl fmt::Display for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// All `N`-th roots of unity `exp(2 pi i k / N)`, `k = 0..N`.
#[derive(Debug, Clone)]
pub struct RootsOfUnity<T> {
    table: Vec<Complex<T>>,
}

impl<T: Real> RootsOfUnity<T> {
    pub fn new(order: usize) -> Self {
        assert!(order > 0);
        // computed in f64 with the angle folded into the first octant-ish
        // range so the table is symmetric to the last bit
        let table = (0..order)
            .map(|k| {
                let (re, im) = unit_root(k as u64, order as u64);
                Complex::new(T::from_f64_lossy(re), T::from_f64_lossy(im))
            })
            .collect();
        Self { table }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn get(&self, k: usize) -> Complex<T> {
        self.table[k]
    }
}

/// `(cos, sin)` of `2 pi k / n`, reduced through quarter-turn symmetry.
fn unit_root(k: u64, n: u64) -> (f64, f64) {
    let k = k % n;
    // 4 k / n = quarter + frac
    let four_k = 4 * k;
    let quarter = four_k / n;
    let rem = four_k % n;
    let theta = std::f64::consts::FRAC_PI_2 * (rem as f64) / (n as f64);
    let (s, c) = if rem == 0 {
        (0.0, 1.0)
    } else {
        theta.sin_cos()
    };
    match quarter {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: Complex<T>,
    comp: Complex<T>,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: Complex::new(T::zero(), T::zero()),
            comp: Complex::new(T::zero(), T::zero()),
        }
    }

    #[inline]
    pub fn add(&mut self, v: Complex<T>) {
        neumaier(&mut self.sum.re, &mut self.comp.re, v.re);
        neumaier(&mut self.sum.im, &mut self.comp.im, v.im);
    }

    pub fn total(&self) -> Complex<T> {
        self.sum + self.comp
    }
}

#[inline]
fn neumaier<T: Real>(sum: &mut T, comp: &mut T, v: T) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *comp += (*sum - t) + v;
    } else {
        *comp += (v - t) + *sum;
    }
    *sum = t;
}

/// Weight orbit pre-multiplied by `adj(C)^T`, so that the phase numerator
/// of `<w t, s / M>` is a dot product with the raw point coordinates.
fn orbit_functionals(
    rsd: &RootSystemData,
    even_group: &[WeylElement],
    t: &WeightCoord,
) -> Vec<Vec<i64>> {
    let adj_t = rsd.cartan_adjugate.transpose();
    even_group
        .iter()
        .map(|w| adj_t.mul_vec(&w.apply_to_weight(t).0))
        .collect()
}

#[inline]
fn phase_index(functional: &[i64], s: &[i64], modulus: i64) -> usize {
    let mut acc: i128 = 0;
    for (a, b) in functional.iter().zip(s) {
        acc += (*a as i128) * (*b as i128);
    }
    acc.rem_euclid(modulus as i128) as usize
}

/// `Xi_t(x)`, summed over every element of the even group in canonical order.
pub fn evaluate_e<T: Real>(
    rsd: &RootSystemData,
    even_group: &[WeylElement],
    t: &WeightCoord,
    x: &PointCoord,
) -> Complex<T> {
    let modulus = rsd.center * x.level;
    let roots = RootsOfUnity::<T>::new(modulus as usize);
    evaluate_with(
        &roots,
        &orbit_functionals(rsd, even_group, t),
        &x.coords,
        modulus,
    )
}

fn evaluate_with<T: Real>(
    roots: &RootsOfUnity<T>,
    functionals: &[Vec<i64>],
    s: &[i64],
    modulus: i64,
) -> Complex<T> {
    let mut acc = CompensatedSum::new();
    for f in functionals {
        acc.add(roots.get(phase_index(f, s, modulus)));
    }
    acc.total()
}

/// Dense row-major matrix of complex values.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

/// Table of `Xi_lambda(x)` with rows indexed by weights and columns by points.
pub fn evaluate_e_table<T: Real>(
    rsd: &RootSystemData,
    even_group: &[WeylElement],
    weights: &[WeightCoord],
    points: &[PointCoord],
) -> Result<ComplexMatrix<T>> {
    evaluate_e_table_capped(rsd, even_group, weights, points, DEFAULT_TABLE_CAP)
}

pub fn evaluate_e_table_capped<T: Real>(
    rsd: &RootSystemData,
    even_group: &[WeylElement],
    weights: &[WeightCoord],
    points: &[PointCoord],
    cap: u64,
) -> Result<ComplexMatrix<T>> {
    let cells = weights.len() as u64 * points.len() as u64;
    if cells > cap {
        return Err(Error::MemoryCap { cells, cap });
    }
    let Some(level) = points.first().map(|p| p.level) else {
        return Ok(ComplexMatrix::from_rows(weights.len(), 0, Vec::new()));
    };
    if let Some(p) = points.iter().find(|p| p.level != level) {
        return Err(Error::InvariantViolation(format!(
            "points of mixed level {level} and {} in one table",
            p.level
        )));
    }
    let modulus = rsd.center * level;
    let roots = RootsOfUnity::<T>::new(modulus as usize);
    let data: Vec<Vec<Complex<T>>> = weights
        .par_iter()
        .map(|t| {
            let functionals = orbit_functionals(rsd, even_group, t);
            points
                .iter()
                .map(|x| evaluate_with(&roots, &functionals, &x.coords, modulus))
                .collect()
        })
        .collect();
    Ok(ComplexMatrix::from_rows(
        weights.len(),
        points.len(),
        data.into_iter().flatten().collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{Family, SimpleType};
    use crate::weyl::{enumerate_weyl, even_subgroup};

    fn setup(family: Family, rank: usize) -> (RootSystemData, Vec<WeylElement>) {
        let rsd = RootSystemData::new(SimpleType::new(family, rank).unwrap());
        let even = even_subgroup(&enumerate_weyl(&rsd).unwrap());
        (rsd, even)
    }

    #[test]
    fn phase_normalization() {
        let p = RationalPhase::new(-6, 8);
        assert_eq!((p.numerator(), p.denominator()), (1, 4));
        assert_eq!(RationalPhase::new(8, 8), RationalPhase::zero());
        assert_eq!(
            RationalPhase::new(1, 4).add(&RationalPhase::new(3, 4)),
            RationalPhase::zero()
        );
        assert_eq!(
            RationalPhase::new(1, 6).add(&RationalPhase::new(1, 3)),
            RationalPhase::new(1, 2)
        );
    }

    #[test]
    fn roots_table_matches_direct_trig() {
        for n in [1usize, 2, 3, 7, 8, 12, 40] {
            let roots = RootsOfUnity::<f64>::new(n);
            for k in 0..n {
                let angle = std::f64::consts::TAU * k as f64 / n as f64;
                let z = roots.get(k);
                assert!((z.re - angle.cos()).abs() < 1e-15 && (z.im - angle.sin()).abs() < 1e-15);
            }
        }
        let r4 = RootsOfUnity::<f64>::new(4);
        assert_eq!(r4.get(1), Complex::new(0.0, 1.0));
        assert_eq!(r4.get(2), Complex::new(-1.0, 0.0));
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::<f64>::new();
        acc.add(Complex::new(1e16, 0.0));
        for _ in 0..10 {
            acc.add(Complex::new(1.0, 0.0));
        }
        acc.add(Complex::new(-1e16, 0.0));
        assert_eq!(acc.total().re, 10.0);
    }

    #[test]
    fn zero_weight_and_origin() {
        let (rsd, even) = setup(Family::C, 2);
        let x = PointCoord::new(vec![1, 2], 4).unwrap();
        let v: Complex<f64> = evaluate_e(&rsd, &even, &WeightCoord::zero(2), &x);
        assert_eq!(v, Complex::new(4.0, 0.0));
        let v: Complex<f64> = evaluate_e(
            &rsd,
            &even,
            &WeightCoord(vec![3, -1]),
            &PointCoord::origin(2, 4),
        );
        assert_eq!(v, Complex::new(4.0, 0.0));
    }

    #[test]
    fn a1_closed_form() {
        let (rsd, even) = setup(Family::A, 1);
        for m in 1..=5 {
            for t in -4..=4 {
                for s in -3..=6 {
                    let v: Complex<f64> = evaluate_e(
                        &rsd,
                        &even,
                        &WeightCoord(vec![t]),
                        &PointCoord::new(vec![s], m).unwrap(),
                    );
                    let angle = std::f64::consts::TAU * (t * s) as f64 / (2 * m) as f64;
                    assert!((v - Complex::new(angle.cos(), angle.sin())).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn table_zero_row_and_matches_single_evaluation() {
        let (rsd, even) = setup(Family::B, 3);
        let weights = vec![
            WeightCoord::zero(3),
            WeightCoord(vec![1, 0, 1]),
            WeightCoord(vec![0, 2, -1]),
        ];
        let points: Vec<PointCoord> = [[0, 1, 1], [1, 0, 2], [2, 1, 0]]
            .iter()
            .map(|c| PointCoord::new(c.to_vec(), 6).unwrap())
            .collect();
        let table = evaluate_e_table::<f64>(&rsd, &even, &weights, &points).unwrap();
        for c in 0..3 {
            assert_eq!(table.get(0, c), Complex::new(24.0, 0.0));
        }
        for (r, t) in weights.iter().enumerate() {
            for (c, x) in points.iter().enumerate() {
                assert_eq!(table.get(r, c), evaluate_e::<f64>(&rsd, &even, t, x));
            }
        }
    }

    #[test]
    fn table_cap_and_mixed_levels() {
        let (rsd, even) = setup(Family::A, 2);
        let w = vec![WeightCoord::zero(2); 3];
        let p = vec![PointCoord::origin(2, 3); 3];
        assert_eq!(
            evaluate_e_table_capped::<f64>(&rsd, &even, &w, &p, 8),
            Err(Error::MemoryCap { cells: 9, cap: 8 })
        );
        let mixed = vec![PointCoord::origin(2, 3), PointCoord::origin(2, 4)];
        assert!(matches!(
            evaluate_e_table::<f64>(&rsd, &even, &w, &mixed),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn magnitude_bounded_by_group_order() {
        let (rsd, even) = setup(Family::D, 4);
        for a in -2..=2 {
            for b in 0..=2 {
                let t = WeightCoord(vec![a, b, 1, -a]);
                let x = PointCoord::new(vec![b, a, 2, 1], 5).unwrap();
                let v: Complex<f64> = evaluate_e(&rsd, &even, &t, &x);
                assert!(v.norm() <= 96.0 + 1e-9);
            }
        }
    }

    #[test]
    fn single_precision_agrees() {
        let (rsd, even) = setup(Family::C, 2);
        let t = WeightCoord(vec![1, 1]);
        let x = PointCoord::new(vec![1, 1], 4).unwrap();
        let a: Complex<f64> = evaluate_e(&rsd, &even, &t, &x);
        let b: Complex<f32> = evaluate_e(&rsd, &even, &t, &x);
        assert!((a.re - b.re as f64).abs() < 1e-5 && (a.im - b.im as f64).abs() < 1e-5);
    }
}
