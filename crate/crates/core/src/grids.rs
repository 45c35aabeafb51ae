//! The point grid `F^e_M`, the weight grid `Lambda^e_M`, their stabilizer
//! orders, and the closed-form point counts.
//!
//! Canonical order (part of the public contract, since transform vectors
//! are index aligned): the closed simplex block first, then the reflected
//! interior block, lexicographic in `[s_0, ..., s_n]` inside each block.

use crate::error::{Error, Result};
use crate::rootdata::{weyl_order, Family, PointCoord, RootSystemData, SimpleType, WeightCoord};
use crate::weyl::{representative_coords, BarycentricPoint, Lattice, Part, WeylElement};

/// One point of `F^e_M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPoint {
    pub bary: BarycentricPoint,
    /// Size of the even orbit, `|W^e| / h^e_x`.
    pub eps: u64,
    pub index: usize,
    /// Actual coordinates of the point times `M`, in the coweight basis.
    pub coords: Vec<i64>,
}

impl GridPoint {
    pub fn point(&self) -> PointCoord {
        PointCoord {
            coords: self.coords.clone(),
            level: self.bary.level,
        }
    }
}

/// One weight of `Lambda^e_M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPoint {
    pub bary: BarycentricPoint,
    /// Order of the even stabilizer modulo `M Q`.
    pub h_dual: u64,
    pub index: usize,
    /// Actual weight coordinates.
    pub coords: Vec<i64>,
}

impl WeightPoint {
    pub fn weight(&self) -> WeightCoord {
        WeightCoord(self.coords.clone())
    }
}

/// All `[s_0, ..., s_n]` with `s_i >= min` and `s_0 + sum s_i m_i = M`,
/// in lexicographic order.
pub fn barycentric_solutions(marks: &[i64], level: i64, min: i64) -> Vec<Vec<i64>> {
    fn rec(
        marks: &[i64],
        min: i64,
        remaining: i64,
        prefix: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        let k = prefix.len();
        if k == marks.len() {
            if remaining >= min {
                let mut row = Vec::with_capacity(marks.len() + 1);
                row.push(remaining);
                row.extend_from_slice(prefix);
                out.push(row);
            }
            return;
        }
        let mut s = min;
        while remaining - s * marks[k] >= min {
            prefix.push(s);
            rec(marks, min, remaining - s * marks[k], prefix, out);
            prefix.pop();
            s += 1;
        }
    }
    if level < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(marks, min, level, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `|F_M|`, the number of points of the closed simplex block.
pub fn simplex_count(marks: &[i64], level: i64) -> u64 {
    barycentric_solutions(marks, level, 0).len() as u64
}

fn check_inputs(rsd: &RootSystemData, level: i64, j: usize) -> Result<()> {
    if level < 1 {
        return Err(Error::InvalidLevel(level));
    }
    if j == 0 || j > rsd.rank() {
        return Err(Error::InvalidRootIndex {
            index: j,
            rank: rsd.rank(),
        });
    }
    Ok(())
}

fn enumerate_side(
    rsd: &RootSystemData,
    level: i64,
    j: usize,
    lattice: Lattice,
) -> Result<Vec<(BarycentricPoint, Vec<i64>, u64)>> {
    check_inputs(rsd, level, j)?;
    let marks = match lattice {
        Lattice::Point => &rsd.marks,
        Lattice::Weight => &rsd.dual_marks,
    };
    let mut out = Vec::new();
    for (part, min) in [(Part::Base, 0), (Part::Reflected, 1)] {
        for coords in barycentric_solutions(marks, level, min) {
            let bary = BarycentricPoint {
                part,
                coords,
                level,
            };
            let rep = representative_coords(rsd, &bary, lattice, j)?;
            let h = stabilizer_order_diagram(&bary, rsd, lattice)?;
            out.push((bary, rep, h));
        }
    }
    Ok(out)
}

/// `F^e_M = F_M u r_j F~_M` with `eps` from the diagram procedure.
pub fn enumerate_fe_m(rsd: &RootSystemData, level: i64, j: usize) -> Result<Vec<GridPoint>> {
    let even = rsd.even_weyl_order();
    enumerate_side(rsd, level, j, Lattice::Point)?
        .into_iter()
        .enumerate()
        .map(|(index, (bary, coords, h))| {
            if !even.is_multiple_of(h) {
                return Err(Error::InvariantViolation(format!(
                    "stabilizer order {h} does not divide |W^e| = {even}"
                )));
            }
            Ok(GridPoint {
                bary,
                eps: even / h,
                index,
                coords,
            })
        })
        .collect()
}

/// `Lambda^e_M = Lambda_M u r_j Lambda~_M` with `h_dual` from the diagram procedure.
pub fn enumerate_lambda_e_m(
    rsd: &RootSystemData,
    level: i64,
    j: usize,
) -> Result<Vec<WeightPoint>> {
    Ok(enumerate_side(rsd, level, j, Lattice::Weight)?
        .into_iter()
        .enumerate()
        .map(|(index, (bary, coords, h_dual))| WeightPoint {
            bary,
            h_dual,
            index,
            coords,
        })
        .collect())
}

fn binomial(a: i64, b: i64) -> u128 {
    if b < 0 || a < b {
        return 0;
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut r: u128 = 1;
    for i in 0..b {
        r = r * (a - i) / (i + 1);
    }
    r
}

/// Closed-form `|F^e_M|` for the classical families.
pub fn count_formula(ty: SimpleType, level: i64) -> Result<u128> {
    if level < 1 {
        return Err(Error::InvalidLevel(level));
    }
    let n = ty.rank() as i64;
    let m = level;
    let k = m / 2;
    let even = m % 2 == 0;
    let c = |a, b| binomial(a, b);
    Ok(match ty.family() {
        Family::A => c(n + m, n) + c(m - 1, n),
        Family::B | Family::C => {
            if even {
                c(n + k, n) + c(n + k - 1, n) + c(k, n) + c(k - 1, n)
            } else {
                2 * c(n + k, n) + 2 * c(k, n)
            }
        }
        Family::D => {
            if even {
                c(n + k, n)
                    + 6 * c(n + k - 1, n)
                    + c(n + k - 2, n)
                    + c(k + 1, n)
                    + 6 * c(k, n)
                    + c(k - 1, n)
            } else {
                4 * c(n + k, n) + 4 * c(n + k - 1, n) + 4 * c(k + 1, n) + 4 * c(k, n)
            }
        }
    })
}

/// Stabilizer order through the extended Dynkin diagram.
///
/// Zero coordinates select a subgraph of the extended diagram (the dual one
/// for weights); each connected component is sized by its Weyl group and
/// the product is halved.
pub fn stabilizer_order_diagram(
    bary: &BarycentricPoint,
    rsd: &RootSystemData,
    lattice: Lattice,
) -> Result<u64> {
    let (marks, diagram) = match lattice {
        Lattice::Point => (&rsd.marks, &rsd.ext_diagram),
        Lattice::Weight => (&rsd.dual_marks, &rsd.dual_ext_diagram),
    };
    bary.validate(marks)?;
    if bary.part == Part::Reflected {
        return Ok(1);
    }
    let zero: Vec<bool> = bary.coords.iter().map(|&s| s == 0).collect();
    if !zero.iter().any(|&z| z) {
        return Ok(1);
    }
    let mut visited = vec![false; zero.len()];
    let mut product: u64 = 1;
    for start in 0..zero.len() {
        if !zero[start] || visited[start] {
            continue;
        }
        let mut stack = vec![start];
        visited[start] = true;
        let (mut nodes, mut double, mut branch) = (0usize, false, false);
        while let Some(v) = stack.pop() {
            nodes += 1;
            let mut degree = 0;
            for (u, mult) in diagram.neighbors(v) {
                if !zero[u] {
                    continue;
                }
                degree += 1;
                match mult {
                    1 => {}
                    2 => double = true,
                    _ => {
                        return Err(Error::InvariantViolation(format!(
                            "bond of multiplicity {mult} inside a stabilizer subdiagram"
                        )))
                    }
                }
                if !visited[u] {
                    visited[u] = true;
                    stack.push(u);
                }
            }
            branch |= degree >= 3;
        }
        let family = if double {
            Family::B
        } else if branch {
            Family::D
        } else {
            Family::A
        };
        product *= weyl_order(family, nodes);
    }
    Ok(product / 2)
}

/// Brute-force stabilizer: counts `w in W^e` with `w v = v` modulo `M Q^v`
/// (points) or `M Q` (weights). `coords` are actual lattice coordinates.
pub fn stabilizer_order_brute(
    coords: &[i64],
    level: i64,
    even_group: &[WeylElement],
    rsd: &RootSystemData,
    lattice: Lattice,
) -> u64 {
    even_group
        .iter()
        .filter(|w| {
            let image = w.act(lattice, coords);
            let diff: Vec<i64> = image.iter().zip(coords).map(|(a, b)| a - b).collect();
            in_scaled_root_lattice(rsd, &diff, level, lattice)
        })
        .count() as u64
}

/// Whether `v` lies in `M Q^v` (points, coweight coordinates) or `M Q`
/// (weights, weight coordinates).
pub fn in_scaled_root_lattice(
    rsd: &RootSystemData,
    v: &[i64],
    level: i64,
    lattice: Lattice,
) -> bool {
    let modulus = rsd.center * level;
    let adj = match lattice {
        Lattice::Point => rsd.cartan_adjugate.clone(),
        Lattice::Weight => rsd.cartan_adjugate.transpose(),
    };
    adj.mul_vec(v).iter().all(|x| x.rem_euclid(modulus) == 0)
}

/// Canonical key of the class of `v` in `(1/M) P^v / Q^v` (points) or
/// `P / M Q` (weights).
pub fn class_key(rsd: &RootSystemData, v: &[i64], level: i64, lattice: Lattice) -> Vec<i64> {
    let modulus = rsd.center * level;
    let adj = match lattice {
        Lattice::Point => rsd.cartan_adjugate.clone(),
        Lattice::Weight => rsd.cartan_adjugate.transpose(),
    };
    adj.mul_vec(v)
        .into_iter()
        .map(|x| x.rem_euclid(modulus))
        .collect()
}
