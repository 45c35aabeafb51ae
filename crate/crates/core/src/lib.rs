//! Discrete E-transforms on tori of the classical simple Lie groups.
//!
//! Integer data (Cartan matrices, Weyl group elements, grids, phases) is
//! exact. Numeric work is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the bottom fix `f64` for the common case.
//!
//! ```
//! use etorus::{Complex64, ETransform64, Family, SimpleType};
//!
//! let tr = ETransform64::new(SimpleType::new(Family::C, 2)?, 4, 1)?;
//! assert_eq!(tr.len(), 10);
//! let f = tr.sample_with(|p| Complex64::new(p.index as f64, 0.0));
//! let back = tr.inverse(&tr.forward(&f)?)?;
//! assert!(back.values.iter().zip(&f.values).all(|(a, b)| (a - b).norm() < 1e-12));
//! assert!(tr.gram_matrix().max_diag_reldev < 1e-12);
//! # Ok::<(), etorus::Error>(())
//! ```

pub mod efun;
pub mod error;
pub mod euclid;
pub mod grids;
pub mod intmat;
pub mod rootdata;
pub mod scalar;
pub mod transform;
pub mod weyl;

pub use efun::{evaluate_e, evaluate_e_table, ComplexMatrix, RationalPhase, RootsOfUnity};
pub use error::{Error, Result};
pub use euclid::EuclideanFrame;
pub use grids::{
    count_formula, enumerate_fe_m, enumerate_lambda_e_m, stabilizer_order_brute,
    stabilizer_order_diagram, GridPoint, WeightPoint,
};
pub use intmat::IntMatrix;
pub use rootdata::{Family, PointCoord, RootSystemData, SimpleType, WeightCoord};
pub use scalar::Real;
pub use transform::{
    abelian_orthogonality_oracle, CoefficientVector, ETransform, GramReport, GridTag,
    PlancherelReport, SampleVector,
};
pub use weyl::{
    enumerate_weyl, even_subgroup, fold_to_f, fold_to_fe, fold_weight_to_lambda,
    fold_weight_to_lambda_e, BarycentricPoint, Folded, Lattice, Part, WeylElement,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
pub type ETransform64 = ETransform<f64>;
pub type ETransform32 = ETransform<f32>;
pub type SampleVector64 = SampleVector<f64>;
pub type CoefficientVector64 = CoefficientVector<f64>;
