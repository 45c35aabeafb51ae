//! Weyl group `W`, its even subgroup `W^e`, and folding into fundamental domains.
//!
//! Every element carries two integer matrices: its action on weight
//! coordinates (fundamental weight basis) and on point coordinates
//! (fundamental coweight basis). Both are left actions on column vectors,
//! so `(g h).weight_matrix = g.weight_matrix * h.weight_matrix`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::rootdata::{PointCoord, RootSystemData, WeightCoord};

/// Default cap on `|W|` for explicit enumeration.
pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    weight_matrix: IntMatrix,
    point_matrix: IntMatrix,
    parity: i8,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        Self {
            weight_matrix: IntMatrix::identity(rank),
            point_matrix: IntMatrix::identity(rank),
            parity: 1,
        }
    }

    /// Simple reflection `r_i`, `1 <= i <= n`.
    pub fn simple_reflection(rsd: &RootSystemData, i: usize) -> Result<Self> {
        let n = rsd.rank();
        if i == 0 || i > n {
            return Err(Error::InvalidRootIndex { index: i, rank: n });
        }
        let k = i - 1;
        // t -> t - t_k * (row k of C);  y -> y - y_k * (column k of C)
        let mut weight_matrix = IntMatrix::identity(n);
        let mut point_matrix = IntMatrix::identity(n);
        for r in 0..n {
            weight_matrix[(r, k)] -= rsd.cartan[(k, r)];
            point_matrix[(r, k)] -= rsd.cartan[(r, k)];
        }
        Ok(Self {
            weight_matrix,
            point_matrix,
            parity: -1,
        })
    }

    /// Reflection `r_xi` in the highest root.
    pub fn highest_root_reflection(rsd: &RootSystemData) -> Self {
        // weights: t -> t - <t, xi^v> xi ; points: y -> y - <y, xi> xi^v
        Self::reflection(
            rsd,
            &rsd.highest_coroot_coeffs,
            &rsd.highest_root_weight(),
            &rsd.marks,
            &rsd.highest_coroot_coweight(),
        )
    }

    /// Reflection `r_eta` in the highest dual root.
    pub fn highest_dual_root_reflection(rsd: &RootSystemData) -> Self {
        // weights: t -> t - <t, eta> eta^v ; points: y -> y - <y, eta^v> eta
        Self::reflection(
            rsd,
            &rsd.dual_marks,
            &rsd.highest_short_root_weight(),
            &rsd.highest_short_root_coeffs,
            &rsd.highest_dual_root_coweight(),
        )
    }

    fn reflection(
        rsd: &RootSystemData,
        weight_functional: &[i64],
        weight_direction: &[i64],
        point_functional: &[i64],
        point_direction: &[i64],
    ) -> Self {
        let n = rsd.rank();
        let mut weight_matrix = IntMatrix::identity(n);
        let mut point_matrix = IntMatrix::identity(n);
        for r in 0..n {
            for c in 0..n {
                weight_matrix[(r, c)] -= weight_direction[r] * weight_functional[c];
                point_matrix[(r, c)] -= point_direction[r] * point_functional[c];
            }
        }
        Self {
            weight_matrix,
            point_matrix,
            parity: -1,
        }
    }

    pub fn rank(&self) -> usize {
        self.weight_matrix.dim()
    }

    pub fn parity(&self) -> i8 {
        self.parity
    }

    pub fn is_even(&self) -> bool {
        self.parity == 1
    }

    pub fn weight_matrix(&self) -> &IntMatrix {
        &self.weight_matrix
    }

    pub fn point_matrix(&self) -> &IntMatrix {
        &self.point_matrix
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            weight_matrix: self.weight_matrix.mul(&other.weight_matrix),
            point_matrix: self.point_matrix.mul(&other.point_matrix),
            parity: self.parity * other.parity,
        }
    }

    pub fn apply_to_weight(&self, t: &WeightCoord) -> WeightCoord {
        WeightCoord(self.weight_matrix.mul_vec(&t.0))
    }

    pub fn apply_to_point(&self, x: &PointCoord) -> PointCoord {
        PointCoord {
            coords: self.point_matrix.mul_vec(&x.coords),
            level: x.level,
        }
    }

    pub fn act(&self, lattice: Lattice, v: &[i64]) -> Vec<i64> {
        match lattice {
            Lattice::Point => self.point_matrix.mul_vec(v),
            Lattice::Weight => self.weight_matrix.mul_vec(v),
        }
    }
}

pub fn apply_to_weight(w: &WeylElement, t: &WeightCoord) -> WeightCoord {
    w.apply_to_weight(t)
}

/// Full Weyl group in canonical order: breadth-first from the identity over
/// left multiplication by `r_1..r_n`, each layer sorted by weight matrix.
pub fn enumerate_weyl(rsd: &RootSystemData) -> Result<Vec<WeylElement>> {
    enumerate_weyl_capped(rsd, DEFAULT_GROUP_CAP)
}

pub fn enumerate_weyl_capped(rsd: &RootSystemData, cap: u64) -> Result<Vec<WeylElement>> {
    let required = rsd.weyl_order();
    if required > cap {
        return Err(Error::SizeLimit { required, cap });
    }
    let n = rsd.rank();
    let generators: Vec<WeylElement> = (1..=n)
        .map(|i| WeylElement::simple_reflection(rsd, i))
        .collect::<Result<_>>()?;

    let identity = WeylElement::identity(n);
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    seen.insert(identity.weight_matrix.clone());
    let mut out = vec![identity];
    let mut layer_start = 0;
    while layer_start < out.len() {
        let layer_end = out.len();
        let mut next = Vec::new();
        for w in &out[layer_start..layer_end] {
            for g in &generators {
                let gw = g.compose(w);
                if seen.insert(gw.weight_matrix.clone()) {
                    next.push(gw);
                }
            }
        }
        next.sort_by(|a, b| a.weight_matrix.cmp(&b.weight_matrix));
        out.extend(next);
        layer_start = layer_end;
    }
    if out.len() as u64 != required {
        return Err(Error::InvariantViolation(format!(
            "enumerated {} Weyl group elements for {}, expected {required}",
            out.len(),
            rsd.ty
        )));
    }
    Ok(out)
}

/// Elements of parity +1, in the input order.
pub fn even_subgroup(elements: &[WeylElement]) -> Vec<WeylElement> {
    elements.iter().filter(|w| w.is_even()).cloned().collect()
}

/// Which lattice a coordinate vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lattice {
    /// `(1/M) P^v`, coordinates in the fundamental coweight basis.
    Point,
    /// `P`, coordinates in the fundamental weight basis.
    Weight,
}

/// Part of the even fundamental domain `F^e = F u r_j int(F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    /// The closed simplex `F`.
    Base,
    /// The reflected interior `r_j int(F)`.
    Reflected,
}

impl Part {
    pub fn label(self) -> &'static str {
        match self {
            Part::Base => "F",
            Part::Reflected => "rjF",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "F" => Some(Part::Base),
            "rjF" => Some(Part::Reflected),
            _ => None,
        }
    }
}

/// Barycentric coordinates `[s_0, s_1, ..., s_n]` at level `M`.
///
/// For `Part::Reflected` the coordinates describe the interior point `b`
/// of `M F`; the represented point is `r_j b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarycentricPoint {
    pub part: Part,
    pub coords: Vec<i64>,
    pub level: i64,
}

impl BarycentricPoint {
    /// Barycentric coordinates of `v` (level `M`) against the given marks.
    pub fn from_coords(v: &[i64], marks: &[i64], level: i64, part: Part) -> Self {
        let s0 = level - v.iter().zip(marks).map(|(a, m)| a * m).sum::<i64>();
        let mut coords = Vec::with_capacity(v.len() + 1);
        coords.push(s0);
        coords.extend_from_slice(v);
        Self {
            part,
            coords,
            level,
        }
    }

    /// Coordinates `s_1..s_n` without `s_0`.
    pub fn tail(&self) -> &[i64] {
        &self.coords[1..]
    }

    pub fn is_interior(&self) -> bool {
        self.coords.iter().all(|&s| s > 0)
    }

    /// Checks the level identity and sign constraints for the given marks.
    pub fn validate(&self, marks: &[i64]) -> Result<()> {
        if self.coords.len() != marks.len() + 1 {
            return Err(Error::InvariantViolation(format!(
                "barycentric vector has {} entries, expected {}",
                self.coords.len(),
                marks.len() + 1
            )));
        }
        let total = self.coords[0]
            + self
                .tail()
                .iter()
                .zip(marks)
                .map(|(a, m)| a * m)
                .sum::<i64>();
        if total != self.level {
            return Err(Error::InvariantViolation(format!(
                "barycentric level {total} differs from M = {}",
                self.level
            )));
        }
        let min = match self.part {
            Part::Base => 0,
            Part::Reflected => 1,
        };
        if let Some(bad) = self.coords.iter().find(|&&s| s < min) {
            return Err(Error::InvariantViolation(format!(
                "barycentric entry {bad} below {min} for part {}",
                self.part.label()
            )));
        }
        Ok(())
    }
}

/// Result of folding `x` into a fundamental domain: `x = w * rep + M * q`
/// in scaled coordinates (`q` unscaled, in `Q^v` or `Q`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Folded {
    pub bary: BarycentricPoint,
    pub w: WeylElement,
    pub q: Vec<i64>,
}

/// Generators of the affine group acting on one lattice.
struct Alcove<'a> {
    rsd: &'a RootSystemData,
    lattice: Lattice,
    marks: &'a [i64],
    reflections: Vec<WeylElement>,
    affine_linear: WeylElement,
    affine_translation: Vec<i64>,
}

impl<'a> Alcove<'a> {
    fn new(rsd: &'a RootSystemData, lattice: Lattice) -> Self {
        let reflections = (1..=rsd.rank())
            .map(|i| WeylElement::simple_reflection(rsd, i).expect("index in range"))
            .collect();
        let (marks, affine_linear, affine_translation) = match lattice {
            Lattice::Point => (
                rsd.marks.as_slice(),
                WeylElement::highest_root_reflection(rsd),
                rsd.highest_coroot_coweight(),
            ),
            Lattice::Weight => (
                rsd.dual_marks.as_slice(),
                WeylElement::highest_dual_root_reflection(rsd),
                rsd.highest_short_root_weight(),
            ),
        };
        Self {
            rsd,
            lattice,
            marks,
            reflections,
            affine_linear,
            affine_translation,
        }
    }

    /// Affine Weyl folding into the closed simplex `M F`.
    fn fold(&self, v: &[i64], level: i64) -> Folded {
        let n = self.rsd.rank();
        let mut cur = v.to_vec();
        let mut w = WeylElement::identity(n);
        let mut q = vec![0i64; n];
        loop {
            let bary = BarycentricPoint::from_coords(&cur, self.marks, level, Part::Base);
            let Some(i) = bary.coords.iter().position(|&s| s < 0) else {
                return Folded { bary, w, q };
            };
            if i == 0 {
                // r_0 v = r_aff v + M tau; then x = (w r_aff) v' + w tau + q
                let mut next = self.affine_linear.act(self.lattice, &cur);
                for (c, t) in next.iter_mut().zip(&self.affine_translation) {
                    *c += level * t;
                }
                let shift = w.act(self.lattice, &self.affine_translation);
                for (a, b) in q.iter_mut().zip(shift) {
                    *a += b;
                }
                w = w.compose(&self.affine_linear);
                cur = next;
            } else {
                let r = &self.reflections[i - 1];
                cur = r.act(self.lattice, &cur);
                w = w.compose(r);
            }
        }
    }

    /// Folding into `F^e = F u r_j int(F)` with an even Weyl part.
    fn fold_even(&self, v: &[i64], level: i64, j: usize) -> Result<Folded> {
        let n = self.rsd.rank();
        if j == 0 || j > n {
            return Err(Error::InvalidRootIndex { index: j, rank: n });
        }
        let Folded {
            mut bary,
            mut w,
            mut q,
        } = self.fold(v, level);
        if w.is_even() {
            return Ok(Folded { bary, w, q });
        }
        if bary.is_interior() {
            w = w.compose(&self.reflections[j - 1]);
            bary.part = Part::Reflected;
            return Ok(Folded { bary, w, q });
        }
        let i = bary
            .coords
            .iter()
            .position(|&s| s == 0)
            .expect("boundary point has a zero coordinate");
        if i == 0 {
            let shift = w.act(self.lattice, &self.affine_translation);
            for (a, b) in q.iter_mut().zip(shift) {
                *a += b;
            }
            w = w.compose(&self.affine_linear);
        } else {
            w = w.compose(&self.reflections[i - 1]);
        }
        Ok(Folded { bary, w, q })
    }
}

fn check_level(level: i64) -> Result<()> {
    if level < 1 {
        return Err(Error::InvalidLevel(level));
    }
    Ok(())
}

/// Folds `x` into the simplex `F`: `x = w a' + q^v` with `a' in F`.
pub fn fold_to_f(rsd: &RootSystemData, x: &PointCoord) -> Result<Folded> {
    check_level(x.level)?;
    Ok(Alcove::new(rsd, Lattice::Point).fold(&x.coords, x.level))
}

/// Folds `x` into `F^e = F u r_j int(F)` with `w` in `W^e`.
pub fn fold_to_fe(rsd: &RootSystemData, x: &PointCoord, j: usize) -> Result<Folded> {
    check_level(x.level)?;
    Alcove::new(rsd, Lattice::Point).fold_even(&x.coords, x.level, j)
}

/// Folds the weight `t` into `M F^{e v}` modulo `M Q`: `t = w t' + M q`.
pub fn fold_weight_to_lambda_e(
    rsd: &RootSystemData,
    t: &WeightCoord,
    level: i64,
    j: usize,
) -> Result<Folded> {
    check_level(level)?;
    Alcove::new(rsd, Lattice::Weight).fold_even(&t.0, level, j)
}

/// Folds the weight `t` into the simplex `M F^v` with the full Weyl group.
pub fn fold_weight_to_lambda(rsd: &RootSystemData, t: &WeightCoord, level: i64) -> Result<Folded> {
    check_level(level)?;
    Ok(Alcove::new(rsd, Lattice::Weight).fold(&t.0, level))
}

/// Actual lattice coordinates of a folded representative.
pub fn representative_coords(
    rsd: &RootSystemData,
    bary: &BarycentricPoint,
    lattice: Lattice,
    j: usize,
) -> Result<Vec<i64>> {
    let tail = bary.tail().to_vec();
    match bary.part {
        Part::Base => Ok(tail),
        Part::Reflected => Ok(WeylElement::simple_reflection(rsd, j)?.act(lattice, &tail)),
    }
}
