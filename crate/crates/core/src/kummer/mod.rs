//! Kummer lattices K(T) as overlattices of A_1^16 indexed by F_2^4, the
//! complements Q_4 and Q_2, and saturated embeddings into rank-22
//! lattices of signature (1,21).

pub mod embed;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::codes::{build_v16, even_overlattice, span_points, subset_mask, BinaryCode, CodeError};
use crate::lattice::glue::saturation;
use crate::lattice::{ade_type, matrix, LatticeError};
use crate::scalar::{rat, rat_mod};
use crate::{Lattice, Rational};

pub use embed::{embed_kummer, Complement, Embedding};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KummerError {
    #[error("unknown Kummer type {0:?}")]
    UnknownType(String),
    #[error("no saturated embedding exists for these parameters")]
    NoEmbedding,
    #[error("this complement needs the extended glue data")]
    ExtendedRequired,
    #[error("verification failed: {0}")]
    Check(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum KummerType {
    #[serde(rename = "16A1")]
    A1x16,
    #[serde(rename = "4D4")]
    D4x4,
    #[serde(rename = "2D8")]
    D8x2,
    #[serde(rename = "1D16")]
    D16,
    #[serde(rename = "2E8")]
    E8x2,
}

impl KummerType {
    pub const ALL: [KummerType; 5] = [Self::A1x16, Self::D4x4, Self::D8x2, Self::D16, Self::E8x2];

    pub fn name(self) -> &'static str {
        match self {
            Self::A1x16 => "16A1",
            Self::D4x4 => "4D4",
            Self::D8x2 => "2D8",
            Self::D16 => "1D16",
            Self::E8x2 => "2E8",
        }
    }

    /// Vector 2-planes of F_2^4 whose indicator words are added to V16.
    pub fn planes(self) -> Vec<Vec<u32>> {
        let (v1, v2, v3) = (1u32, 2u32, 4u32);
        match self {
            Self::A1x16 => vec![],
            Self::D4x4 => vec![span_points(&[v1, v2])],
            Self::D8x2 => vec![span_points(&[v1, v2]), span_points(&[v1, v3]), span_points(&[v1, v2 ^ v3])],
            Self::D16 => {
                let mut out: BTreeSet<Vec<u32>> = BTreeSet::new();
                for x in 1..16u32 {
                    if x != v1 {
                        out.insert(span_points(&[v1, x]));
                    }
                }
                out.into_iter().collect()
            }
            Self::E8x2 => {
                let mut out: BTreeSet<Vec<u32>> = BTreeSet::new();
                for x in 1..8u32 {
                    for y in 1..8u32 {
                        if x != y {
                            out.insert(span_points(&[x, y]));
                        }
                    }
                }
                out.into_iter().collect()
            }
        }
    }

    /// n: number of glue generators available with Q_4.
    pub fn glue_rank_q4(self) -> usize {
        match self {
            Self::A1x16 => 4,
            Self::D4x4 => 3,
            Self::D8x2 => 2,
            _ => 0,
        }
    }

    /// Largest Artin invariant admitting a saturated embedding.
    pub fn sigma_max(self) -> u32 {
        match self {
            Self::A1x16 => 5,
            Self::D4x4 => 4,
            Self::D8x2 => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for KummerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KummerType {
    type Err = KummerError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|t| t.name().eq_ignore_ascii_case(s)).ok_or_else(|| KummerError::UnknownType(s.into()))
    }
}

/// Even overlattice of A_1^16 with the ambient basis it was built from.
#[derive(Clone, Debug)]
pub struct KummerLattice {
    pub kind: KummerType,
    pub code: BinaryCode,
    pub lattice: Lattice,
    /// Basis rows in coordinates e_x, x in F_2^4.
    pub basis: Vec<Vec<Rational>>,
}

impl KummerLattice {
    /// Coordinates of an ambient vector in the lattice basis (rational).
    pub fn coords(&self, ambient: &[Rational]) -> Vec<Rational> {
        matrix::solve_row(&self.basis, ambient).expect("basis spans the ambient space")
    }

    /// The class (1/2) sum_{x in T} e_x in lattice coordinates.
    pub fn half_class(&self, points: &[u32]) -> Vec<Rational> {
        self.coords(&half_indicator(points))
    }

    pub fn to_ambient(&self, v: &[BigInt]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); 16];
        for (c, row) in v.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            let c = Rational::from_integer(c.clone());
            for (o, r) in out.iter_mut().zip(row) {
                *o += c.clone() * r;
            }
        }
        out
    }
}

pub fn half_indicator(points: &[u32]) -> Vec<Rational> {
    (0..16u32).map(|x| if points.contains(&x) { rat(1, 2) } else { rat(0, 1) }).collect()
}

pub fn build_kummer(kind: KummerType) -> Result<KummerLattice, KummerError> {
    let v = build_v16();
    let mut rows: Vec<u32> = v.basis().to_vec();
    rows.extend(kind.planes().iter().map(|p| subset_mask(p)));
    let code = BinaryCode::new(16, &rows)?;
    let o = even_overlattice(&code)?;
    Ok(KummerLattice { kind, code, lattice: o.lattice, basis: o.basis })
}

#[derive(Clone, Debug, Serialize)]
pub struct KummerReport {
    pub kind: KummerType,
    pub rank: usize,
    pub code_dim: usize,
    pub root_count: usize,
    pub extra_root_count: usize,
    pub planes_in_code: usize,
    pub ade_type: String,
    pub root_index: String,
    pub index_over_16a1: String,
    pub discriminant: String,
    pub disc_two_rank: Option<usize>,
    pub two_elementary: bool,
    pub type2: bool,
    pub contains_16a1: bool,
}

/// Roots, ADE type, indices and discriminant data of K(T).
pub fn kummer_report(k: &KummerLattice) -> Result<KummerReport, KummerError> {
    let roots = k.lattice.roots()?;
    let ade = ade_type(&k.lattice, &roots)?;
    let sat = saturation(&k.lattice, &roots)?;
    let root_index = sat.index;
    if sat.basis.len() != 16 {
        return Err(KummerError::Check("roots do not span".into()));
    }
    let base = build_kummer(KummerType::A1x16)?;
    // K(16A1) inside K(T): both live in the same ambient space
    let sub_rows: Vec<Vec<Rational>> = base.basis.iter().map(|r| k.coords(r)).collect();
    let contains = sub_rows.iter().all(|r| r.iter().all(|c| c.is_integer()));
    let d = k.lattice.discriminant()?;
    let d0 = base.lattice.discriminant()?;
    let ratio = (d0 / d.clone()).to_u64().unwrap_or(0);
    let index_over = ratio.sqrt();
    if index_over * index_over != ratio {
        return Err(KummerError::Check("discriminant ratio is not a square".into()));
    }
    let dg = k.lattice.discriminant_group()?;
    let (el, t2) = k.lattice.is_two_elementary_type2()?;
    // weight-4 words of the code
    let planes_in_code = k.code.codewords().iter().filter(|w| w.count_ones() == 4).count();
    let base_roots = 16;
    Ok(KummerReport {
        kind: k.kind,
        rank: k.lattice.rank(),
        code_dim: k.code.dim(),
        root_count: 2 * roots.len(),
        extra_root_count: 2 * roots.len() - 2 * base_roots,
        planes_in_code,
        ade_type: ade.to_string(),
        root_index: root_index.to_string(),
        index_over_16a1: index_over.to_string(),
        discriminant: d.to_string(),
        disc_two_rank: dg.two_rank(),
        two_elementary: el,
        type2: t2,
        contains_16a1: contains,
    })
}

/// Which complement lattice to use.
pub fn build_q(which: Complement) -> Lattice {
    let mut g = vec![vec![BigInt::zero(); 6]; 6];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = BigInt::from(-2);
    }
    let mut link = |i: usize, j: usize| {
        g[i][j] = BigInt::one();
        g[j][i] = BigInt::one();
    };
    match which {
        Complement::Q4 => {
            for i in 1..6 {
                link(0, i);
            }
        }
        Complement::Q2 => {
            for i in 1..5 {
                link(0, i);
            }
            link(4, 5);
        }
    }
    Lattice::new(g).expect("symmetric")
}

/// t_1..t_4 as vector 2-planes of F_2^4 (points numbered by coordinates).
pub fn t_planes() -> [Vec<u32>; 4] {
    let (v1, v2, v3, v4) = (1u32, 2u32, 4u32, 8u32);
    [
        span_points(&[v1, v4]),
        span_points(&[v2, v3]),
        span_points(&[v1 ^ v2, v3 ^ v4]),
        span_points(&[v1 ^ v2 ^ v3, v1 ^ v3 ^ v4]),
    ]
}

/// The six-point subsets used for glueing with Q_2.
pub fn t_sets_q2() -> [Vec<u32>; 2] {
    let (v1, v2, v3, v4) = (1u32, 2u32, 4u32, 8u32);
    [vec![v1, v2, v3, v2 ^ v3, v4, v1 ^ v4], vec![v1, v2, v4, v2 ^ v4, v3 ^ v4, v1 ^ v3 ^ v4]]
}

/// u_i = (1/2) sum_{2 <= j <= 6, j != i+1} w_j in Q_4 coordinates.
pub fn u_classes_q4() -> Vec<Vec<Rational>> {
    (1..=5)
        .map(|i| (1..=6).map(|j| if j >= 2 && j != i + 1 { rat(1, 2) } else { rat(0, 1) }).collect())
        .collect()
}

/// u_i = (1/2)(w_{2i} + w_3) for i = 1, 2 in Q_2 coordinates.
pub fn u_classes_q2() -> Vec<Vec<Rational>> {
    (1..=2)
        .map(|i| (1..=6).map(|j| if j == 2 * i || j == 3 { rat(1, 2) } else { rat(0, 1) }).collect())
        .collect()
}

/// The literal reading u_i = (1/2) sum_{j != i+1} w_i = 2 w_i, which is
/// zero in the discriminant group.
pub fn u_classes_q4_literal() -> Vec<Vec<Rational>> {
    (1..=5).map(|i| (1..=6).map(|j| if j == i + 1 { rat(2, 1) } else { rat(0, 1) }).collect()).collect()
}

/// q of every sum of m distinct classes, grouped by m, as sets of
/// reduced values in Q/2Z.
pub fn q_glue_values(l: &Lattice, classes: &[Vec<Rational>]) -> Result<Vec<BTreeSet<Rational>>, KummerError> {
    if classes.iter().any(|c| c.len() != l.rank() || !l.in_dual(c)) {
        return Err(LatticeError::NotInDual.into());
    }
    let n = classes.len();
    let mut out = vec![BTreeSet::new(); n + 1];
    for s in 0u32..(1 << n) {
        let mut v = vec![Rational::zero(); l.rank()];
        for (i, c) in classes.iter().enumerate() {
            if s >> i & 1 == 1 {
                for (a, b) in v.iter_mut().zip(c) {
                    *a += b;
                }
            }
        }
        out[s.count_ones() as usize].insert(rat_mod(&l.pairing(&v, &v), &BigInt::from(2)));
    }
    Ok(out)
}

/// Does x -> y (sums of matching subsets) satisfy q(x) + q(y) = 0?
pub fn glue_compatible(l1: &Lattice, xs: &[Vec<Rational>], l2: &Lattice, ys: &[Vec<Rational>]) -> bool {
    let n = xs.len().min(ys.len());
    let two = BigInt::from(2);
    (0u32..(1 << n)).all(|s| {
        let sum = |l: &Lattice, vs: &[Vec<Rational>]| {
            let mut v = vec![Rational::zero(); l.rank()];
            for (i, c) in vs.iter().enumerate().take(n) {
                if s >> i & 1 == 1 {
                    for (a, b) in v.iter_mut().zip(c) {
                        *a += b;
                    }
                }
            }
            l.pairing(&v, &v)
        };
        rat_mod(&(sum(l1, xs) + sum(l2, ys)), &two).is_zero()
    })
}
