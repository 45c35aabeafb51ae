//! Static data of the classical simple Lie algebras `A_n`, `B_n`, `C_n`, `D_n`.
//!
//! Conventions: simple roots are numbered as in Bourbaki and the Cartan
//! matrix is `C[i][j] = 2<a_i, a_j> / <a_j, a_j>`. Row `i` of `C` is the
//! simple root `a_i` written in the basis of fundamental weights, and
//! column `i` is the simple coroot `a_i^v` in the basis of fundamental
//! coweights. The pairing `<w_i, w_j^v>` equals `(C^-1)[i][j]` and is kept
//! exact as `adj(C)[i][j] / det(C)`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::efun::RationalPhase;
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    /// Smallest rank accepted for the family.
    pub const fn min_rank(self) -> usize {
        match self {
            Family::A => 1,
            Family::C => 2,
            Family::B => 3,
            Family::D => 4,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            other => Err(format!(
                "unknown family '{other}', expected one of A, B, C, D"
            )),
        }
    }
}

/// A classical simple type such as `C_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleType {
    family: Family,
    rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let min_rank = family.min_rank();
        if rank < min_rank {
            return Err(Error::InvalidType {
                family,
                rank,
                min_rank,
            });
        }
        Ok(Self { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// Order of the Weyl group of a (possibly degenerate) classical diagram.
///
/// Accepts any rank >= 1 in every family so that components of extended
/// diagram subgraphs (`A_1`, `B_2`, `D_3`, ...) can be sized.
pub fn weyl_order(family: Family, rank: usize) -> u64 {
    let k = rank as u64;
    let fact: u64 = (1..=k).product();
    match family {
        Family::A => fact * (k + 1),
        Family::B | Family::C => (1u64 << k) * fact,
        Family::D => {
            if k == 0 {
                1
            } else {
                (1u64 << (k - 1)) * fact
            }
        }
    }
}

/// Weight `t_1 w_1 + ... + t_n w_n` of the weight lattice `P`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightCoord(pub Vec<i64>);

impl WeightCoord {
    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

/// Point `(s_1 w_1^v + ... + s_n w_n^v) / M` of the refined coweight lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointCoord {
    pub coords: Vec<i64>,
    pub level: i64,
}

impl PointCoord {
    pub fn new(coords: Vec<i64>, level: i64) -> Result<Self> {
        if level < 1 {
            return Err(Error::InvalidLevel(level));
        }
        Ok(Self { coords, level })
    }

    pub fn origin(rank: usize, level: i64) -> Self {
        Self {
            coords: vec![0; rank],
            level,
        }
    }
}

/// Extended Coxeter-Dynkin diagram on nodes `0..=n`; node 0 is the affine node.
///
/// Edges carry their multiplicity (1 single, 2 double). Orientation is not
/// recorded. Affine `A_1` is the one diagram with a multiplicity-4 bond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedDiagram {
    nodes: usize,
    edges: Vec<(usize, usize, u8)>,
}

impl ExtendedDiagram {
    fn new(nodes: usize, mut edges: Vec<(usize, usize, u8)>) -> Self {
        for e in &mut edges {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
        }
        edges.sort_unstable();
        Self { nodes, edges }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize, u8)] {
        &self.edges
    }

    /// Edge multiplicity between two nodes, 0 if not adjacent.
    pub fn multiplicity(&self, a: usize, b: usize) -> u8 {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.edges
            .iter()
            .find(|e| e.0 == a && e.1 == b)
            .map_or(0, |e| e.2)
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.edges.iter().filter_map(move |&(a, b, m)| {
            if a == node {
                Some((b, m))
            } else if b == node {
                Some((a, m))
            } else {
                None
            }
        })
    }
}

/// Everything the rest of the crate needs to know about one simple type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystemData {
    pub ty: SimpleType,
    pub cartan: IntMatrix,
    /// `det(C) * C^-1`.
    pub cartan_adjugate: IntMatrix,
    /// Coefficients of the highest root in the simple roots.
    pub marks: Vec<i64>,
    /// Coefficients of the highest dual root in the simple coroots.
    pub dual_marks: Vec<i64>,
    pub coxeter: i64,
    /// Order of the center, `det(C)`.
    pub center: i64,
    /// Squared lengths of the simple roots, long roots normalized to 2.
    pub root_norms: Vec<i64>,
    /// Coroot of the highest root, in the simple coroot basis.
    pub highest_coroot_coeffs: Vec<i64>,
    /// Coroot of the highest dual root (the highest short root), in the simple root basis.
    pub highest_short_root_coeffs: Vec<i64>,
    pub ext_diagram: ExtendedDiagram,
    pub dual_ext_diagram: ExtendedDiagram,
}

impl RootSystemData {
    pub fn new(ty: SimpleType) -> Self {
        let n = ty.rank();
        let cartan = cartan_matrix(ty);
        let center = cartan.determinant();
        let cartan_adjugate = cartan.adjugate();
        let marks = marks_table(ty);
        let dual_marks = dual_marks_table(ty);
        let coxeter = 1 + marks.iter().sum::<i64>();
        let root_norms = root_norms(&cartan);
        let long = *root_norms.iter().max().expect("rank >= 1");
        let short = *root_norms.iter().min().expect("rank >= 1");

        // highest root is long, so <xi, xi> = long
        let highest_coroot_coeffs = marks
            .iter()
            .zip(&root_norms)
            .map(|(&m, &d)| exact_div(m * d, long))
            .collect();
        // highest dual root is the coroot of the highest short root
        let highest_short_root_coeffs = dual_marks
            .iter()
            .zip(&root_norms)
            .map(|(&m, &d)| exact_div(m * short, d))
            .collect();

        let rsd = Self {
            ty,
            cartan,
            cartan_adjugate,
            marks,
            dual_marks,
            coxeter,
            center,
            root_norms,
            highest_coroot_coeffs,
            highest_short_root_coeffs,
            ext_diagram: extended_diagram(ty),
            dual_ext_diagram: dual_extended_diagram(ty),
        };
        debug_assert_eq!(
            highest_root(&rsd.cartan),
            rsd.marks,
            "mark table disagrees with root generation for {ty}"
        );
        debug_assert_eq!(
            highest_root(&rsd.cartan.transpose()),
            rsd.dual_marks,
            "dual mark table disagrees with root generation for {ty}"
        );
        debug_assert_eq!(n, rsd.marks.len());
        rsd
    }

    pub fn rank(&self) -> usize {
        self.ty.rank()
    }

    /// `|W|`.
    pub fn weyl_order(&self) -> u64 {
        weyl_order(self.ty.family(), self.ty.rank())
    }

    /// `|W^e| = |W| / 2`.
    pub fn even_weyl_order(&self) -> u64 {
        self.weyl_order() / 2
    }

    /// Highest root `xi` in fundamental weight coordinates.
    pub fn highest_root_weight(&self) -> Vec<i64> {
        self.cartan.transpose().mul_vec(&self.marks)
    }

    /// Coroot `xi^v` in fundamental coweight coordinates.
    pub fn highest_coroot_coweight(&self) -> Vec<i64> {
        self.cartan.mul_vec(&self.highest_coroot_coeffs)
    }

    /// Highest dual root `eta` in fundamental coweight coordinates.
    pub fn highest_dual_root_coweight(&self) -> Vec<i64> {
        self.cartan.mul_vec(&self.dual_marks)
    }

    /// `eta^v` (the highest short root) in fundamental weight coordinates.
    pub fn highest_short_root_weight(&self) -> Vec<i64> {
        self.cartan
            .transpose()
            .mul_vec(&self.highest_short_root_coeffs)
    }

    /// Numerator `k` of `<t, s/M> = k / (c M) mod 1`, reduced into `0..c*M`.
    pub fn pairing_numerator(&self, t: &[i64], s: &[i64], level: i64) -> i64 {
        let n = self.rank();
        let modulus = (self.center as i128) * (level as i128);
        let mut acc: i128 = 0;
        for (i, &ti) in t.iter().enumerate().take(n) {
            if ti == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for (j, &sj) in s.iter().enumerate().take(n) {
                let term = (self.cartan_adjugate[(i, j)] as i128)
                    .checked_mul(sj as i128)
                    .expect("pairing overflow");
                row = row.checked_add(term).expect("pairing overflow");
            }
            let term = (ti as i128).checked_mul(row).expect("pairing overflow");
            acc = (acc + term.rem_euclid(modulus)).rem_euclid(modulus);
        }
        acc as i64
    }

    /// Exact `<t, x> mod 1` as a reduced fraction.
    pub fn pairing_phase(&self, t: &WeightCoord, x: &PointCoord) -> RationalPhase {
        let num = self.pairing_numerator(&t.0, &x.coords, x.level);
        RationalPhase::new(num, self.center * x.level)
    }
}

fn exact_div(a: i64, b: i64) -> i64 {
    assert!(a % b == 0, "inexact division {a}/{b} in root data");
    a / b
}

pub fn build_root_system(ty: SimpleType) -> RootSystemData {
    RootSystemData::new(ty)
}

fn cartan_matrix(ty: SimpleType) -> IntMatrix {
    let n = ty.rank();
    let mut c = IntMatrix::zeros(n);
    for i in 0..n {
        c[(i, i)] = 2;
    }
    let link = |c: &mut IntMatrix, a: usize, b: usize| {
        c[(a, b)] = -1;
        c[(b, a)] = -1;
    };
    match ty.family() {
        Family::A => {
            for i in 0..n.saturating_sub(1) {
                link(&mut c, i, i + 1);
            }
        }
        Family::B => {
            for i in 0..n - 1 {
                link(&mut c, i, i + 1);
            }
            // a_n short
            c[(n - 2, n - 1)] = -2;
        }
        Family::C => {
            for i in 0..n - 1 {
                link(&mut c, i, i + 1);
            }
            // a_n long
            c[(n - 1, n - 2)] = -2;
        }
        Family::D => {
            for i in 0..n - 2 {
                link(&mut c, i, i + 1);
            }
            link(&mut c, n - 3, n - 1);
        }
    }
    c
}

fn marks_table(ty: SimpleType) -> Vec<i64> {
    let n = ty.rank();
    match ty.family() {
        Family::A => vec![1; n],
        Family::B => {
            let mut m = vec![2; n];
            m[0] = 1;
            m
        }
        Family::C => {
            let mut m = vec![2; n];
            m[n - 1] = 1;
            m
        }
        Family::D => {
            let mut m = vec![2; n];
            m[0] = 1;
            m[n - 2] = 1;
            m[n - 1] = 1;
            m
        }
    }
}

fn dual_marks_table(ty: SimpleType) -> Vec<i64> {
    let n = ty.rank();
    match ty.family() {
        Family::A | Family::D => marks_table(ty),
        Family::B => {
            let mut m = vec![2; n];
            m[n - 1] = 1;
            m
        }
        Family::C => {
            let mut m = vec![2; n];
            m[0] = 1;
            m
        }
    }
}

fn extended_diagram(ty: SimpleType) -> ExtendedDiagram {
    let n = ty.rank();
    let mut edges = finite_edges(ty);
    match ty.family() {
        Family::A if n == 1 => edges.push((0, 1, 4)),
        Family::A => {
            edges.push((0, 1, 1));
            edges.push((0, n, 1));
        }
        Family::B | Family::D => edges.push((0, 2, 1)),
        Family::C => edges.push((0, 1, 2)),
    }
    ExtendedDiagram::new(n + 1, edges)
}

fn dual_extended_diagram(ty: SimpleType) -> ExtendedDiagram {
    // B_n and C_n are dual to each other; A_n and D_n are self-dual.
    let n = ty.rank();
    let mut edges = finite_edges(ty);
    match ty.family() {
        Family::A | Family::D => return extended_diagram(ty),
        Family::B => edges.push((0, 1, 2)),
        Family::C if n == 2 => edges.push((0, 2, 2)),
        Family::C => edges.push((0, 2, 1)),
    }
    ExtendedDiagram::new(n + 1, edges)
}

/// Edges of the ordinary Dynkin diagram on nodes `1..=n`.
fn finite_edges(ty: SimpleType) -> Vec<(usize, usize, u8)> {
    let n = ty.rank();
    let mut edges = Vec::new();
    match ty.family() {
        Family::A => {
            for i in 1..n {
                edges.push((i, i + 1, 1));
            }
        }
        Family::B | Family::C => {
            for i in 1..n - 1 {
                edges.push((i, i + 1, 1));
            }
            edges.push((n - 1, n, 2));
        }
        Family::D => {
            for i in 1..n - 2 {
                edges.push((i, i + 1, 1));
            }
            edges.push((n - 2, n - 1, 1));
            edges.push((n - 2, n, 1));
        }
    }
    edges
}

/// Squared root lengths from the symmetrizability `C_ij d_j = C_ji d_i`.
fn root_norms(cartan: &IntMatrix) -> Vec<i64> {
    let n = cartan.dim();
    let mut d: Vec<Option<i64>> = vec![None; n];
    d[0] = Some(1 << 20);
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        let di = d[i].expect("visited");
        for j in 0..n {
            if j == i || cartan[(i, j)] == 0 || d[j].is_some() {
                continue;
            }
            d[j] = Some(di * cartan[(j, i)] / cartan[(i, j)]);
            stack.push(j);
        }
    }
    let d: Vec<i64> = d
        .into_iter()
        .map(|x| x.expect("connected diagram"))
        .collect();
    let g = d.iter().fold(0, |g, &x| num_integer::gcd(g, x));
    let mut d: Vec<i64> = d.into_iter().map(|x| x / g).collect();
    if d.iter().all(|&x| x == 1) {
        d.iter_mut().for_each(|x| *x = 2);
    }
    d
}

/// Positive roots in simple-root coordinates, generated by closing the
/// simple roots under the simple reflections.
pub fn positive_roots(cartan: &IntMatrix) -> Vec<Vec<i64>> {
    let n = cartan.dim();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut frontier: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    for r in &frontier {
        seen.insert(r.clone());
    }
    while let Some(beta) = frontier.pop() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|k| beta[k] * cartan[(k, i)]).sum();
            let mut image = beta.clone();
            image[i] -= pairing;
            if seen.insert(image.clone()) {
                frontier.push(image);
            }
        }
    }
    let mut pos: Vec<Vec<i64>> = seen
        .into_iter()
        .filter(|r| r.iter().all(|&c| c >= 0))
        .collect();
    pos.sort();
    pos
}

/// Highest root (maximal height) in simple-root coordinates.
pub fn highest_root(cartan: &IntMatrix) -> Vec<i64> {
    positive_roots(cartan)
        .into_iter()
        .max_by_key(|r| r.iter().sum::<i64>())
        .expect("nonempty root system")
}
