//! Binary linear codes of length at most 24 stored as bitmask bases.

pub mod equiv;
pub mod search;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::glue::overlattice;
use crate::lattice::{diagonal, LatticeError};
use crate::scalar::rat;
use crate::Lattice;

pub use equiv::{are_equivalent, equivalence_classes, invariant, CodeInvariant};
pub use search::{g_table, max_admissible_dim, SearchOutcome};

pub const MAX_LEN: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("ground set size {0} exceeds 24")]
    TooLong(usize),
    #[error("codeword has support outside the ground set")]
    OutOfRange,
    #[error("code is not doubly even")]
    NotDoublyEven,
    #[error("code contains a word of weight 4")]
    WeightFour,
    #[error("generator matrix check failed: {0}")]
    SelfCheck(String),
    #[error("invalid code json: {0}")]
    Json(String),
    #[error("j must be in 0..=4")]
    BadIndex,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A linear code in F_2^m; bit i of a word is coordinate i.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryCode {
    m: usize,
    /// Reduced row echelon basis, leading bits strictly decreasing.
    basis: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct CodeJson {
    m: usize,
    basis: Vec<String>,
}

pub fn weight(w: u32) -> u32 {
    w.count_ones()
}

fn rref(rows: &[u32]) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            let lead = 31 - b.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= b;
            }
        }
        if v == 0 {
            continue;
        }
        let lead = 31 - v.leading_zeros();
        for b in basis.iter_mut() {
            if *b >> lead & 1 == 1 {
                *b ^= v;
            }
        }
        basis.push(v);
    }
    basis.sort_unstable_by(|a, b| b.cmp(a));
    basis
}

impl BinaryCode {
    pub fn new(m: usize, rows: &[u32]) -> Result<Self, CodeError> {
        if m > MAX_LEN {
            return Err(CodeError::TooLong(m));
        }
        let mask = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
        if rows.iter().any(|r| r & !mask != 0) {
            return Err(CodeError::OutOfRange);
        }
        Ok(Self { m, basis: rref(rows) })
    }

    pub fn zero(m: usize) -> Self {
        Self { m, basis: Vec::new() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// All 2^dim codewords in Gray-code order starting at 0.
    pub fn codewords(&self) -> Vec<u32> {
        let k = self.dim();
        let mut out = Vec::with_capacity(1 << k);
        let mut w = 0u32;
        out.push(0);
        for i in 1u32..(1u32 << k) {
            w ^= self.basis[i.trailing_zeros() as usize];
            out.push(w);
        }
        out
    }

    pub fn contains(&self, w: u32) -> bool {
        let mut v = w;
        for &b in &self.basis {
            let lead = 31 - b.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= b;
            }
        }
        v == 0
    }

    pub fn weight_distribution(&self) -> BTreeMap<u32, u64> {
        let mut d = BTreeMap::new();
        for w in self.codewords() {
            *d.entry(weight(w)).or_default() += 1;
        }
        d
    }

    pub fn is_doubly_even(&self) -> bool {
        self.codewords().iter().all(|&w| weight(w) % 4 == 0)
    }

    /// Every nonzero weight is divisible by 4 and different from 4.
    pub fn is_kummer_admissible(&self) -> bool {
        self.codewords().iter().all(|&w| w == 0 || (weight(w) % 4 == 0 && weight(w) != 4))
    }

    pub fn support(&self) -> u32 {
        self.basis.iter().fold(0, |a, b| a | b)
    }

    pub fn with_word(&self, w: u32) -> Self {
        let mut rows = self.basis.clone();
        rows.push(w);
        Self { m: self.m, basis: rref(&rows) }
    }

    /// Restrict to the coordinates in `mask`, renumbered in increasing order.
    pub fn restrict(&self, mask: u32) -> Self {
        let idx: Vec<usize> = (0..32).filter(|i| mask >> i & 1 == 1).collect();
        let rows: Vec<u32> = self
            .basis
            .iter()
            .map(|&b| idx.iter().enumerate().fold(0u32, |acc, (new, &old)| acc | ((b >> old & 1) << new)))
            .collect();
        Self { m: idx.len(), basis: rref(&rows) }
    }

    /// Same code viewed in a larger ground set.
    pub fn padded(&self, m: usize) -> Self {
        assert!(m >= self.m);
        Self { m, basis: self.basis.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.json()).expect("serializable")
    }

    fn json(&self) -> CodeJson {
        CodeJson { m: self.m, basis: self.basis.iter().map(|&b| bitstring(b, self.m)).collect() }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.json()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, CodeError> {
        let j: CodeJson = serde_json::from_str(s).map_err(|e| CodeError::Json(e.to_string()))?;
        let mut rows = Vec::new();
        for b in &j.basis {
            if b.len() != j.m || b.chars().any(|c| c != '0' && c != '1') {
                return Err(CodeError::Json(format!("bad bitstring {b:?}")));
            }
            rows.push(b.chars().enumerate().fold(0u32, |a, (i, c)| a | (((c == '1') as u32) << i)));
        }
        Self::new(j.m, &rows)
    }
}

pub fn bitstring(w: u32, m: usize) -> String {
    (0..m).map(|i| if w >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// Upper bound for the dimension of an admissible code on m points.
pub fn f_bound(m: usize) -> Result<usize, CodeError> {
    match m {
        0..=15 => {
            let d = 16 - m;
            // ceil(log2(d))
            let c = usize::BITS - (d - 1).leading_zeros();
            let c = if d == 1 { 0 } else { c as usize };
            Ok(4 - c)
        }
        16 => Ok(5),
        17..=24 => Ok(m - 12),
        _ => Err(CodeError::TooLong(m)),
    }
}

/// Linear hyperplane {x in F_2^4 : x_i = 0} as a subset of 16 points.
pub fn linear_hyperplane(i: usize) -> u32 {
    (0..16u32).filter(|x| x >> i & 1 == 0).fold(0, |a, x| a | 1 << x)
}

/// Subset of F_2^4 (points numbered by their coordinates) as a bitmask.
pub fn subset_mask(points: &[u32]) -> u32 {
    points.iter().fold(0, |a, &p| a | 1 << p)
}

/// Span of a set of points in F_2^4.
pub fn span_points(gens: &[u32]) -> Vec<u32> {
    let mut pts = vec![0u32];
    for &g in gens {
        if pts.contains(&g) {
            continue;
        }
        let more: Vec<u32> = pts.iter().map(|p| p ^ g).collect();
        pts.extend(more);
    }
    pts.sort();
    pts
}

/// The code on F_2^4 generated by the empty set, the whole set and all
/// affine hyperplanes.
pub fn build_v16() -> BinaryCode {
    let mut rows = vec![0xFFFFu32];
    rows.extend((0..4).map(linear_hyperplane));
    BinaryCode::new(16, &rows).unwrap()
}

/// Span of H_1..H_j realised on the union of its supports.
pub fn build_subcode(j: usize) -> Result<BinaryCode, CodeError> {
    if j > 4 {
        return Err(CodeError::BadIndex);
    }
    let rows: Vec<u32> = (0..j).map(linear_hyperplane).collect();
    let c = BinaryCode::new(16, &rows)?;
    Ok(c.restrict(c.support()))
}

/// Rows of the extended Golay code: shifts of x^11+x^10+x^6+x^5+x^4+x^2+1
/// with a parity bit in coordinate 23.
pub const GOLAY_ROWS: [u32; 12] = [
    0x800c75, 0x8018ea, 0x8031d4, 0x8063a8, 0x80c750, 0x818ea0, 0x831d40, 0x863a80, 0x8c7500, 0x98ea00, 0xb1d400,
    0xe3a800,
];

/// The extended Golay code, checked on construction.
pub fn golay_witness() -> Result<BinaryCode, CodeError> {
    let c = BinaryCode::new(24, &GOLAY_ROWS)?;
    if c.dim() != 12 {
        return Err(CodeError::SelfCheck(format!("dimension {}", c.dim())));
    }
    let want: BTreeMap<u32, u64> = [(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)].into_iter().collect();
    if c.weight_distribution() != want {
        return Err(CodeError::SelfCheck("weight distribution".into()));
    }
    Ok(c)
}

/// Golay codewords vanishing outside the first m coordinates.
pub fn shortened_golay(m: usize) -> Result<BinaryCode, CodeError> {
    let g = golay_witness()?;
    let mask = if m >= 32 { u32::MAX } else { (1u32 << m) - 1 };
    let words: Vec<u32> = g.codewords().into_iter().filter(|w| w & !mask == 0).collect();
    BinaryCode::new(m, &words)
}

/// Sizes of the 2^l cells cut out by B_1..B_l inside an m-point set;
/// cell e collects the points lying in B_i exactly for the bits of e.
pub fn intersection_cells(m: usize, words: &[u32]) -> Vec<usize> {
    let l = words.len();
    let mut cells = vec![0usize; 1 << l];
    for p in 0..m {
        let e = words.iter().enumerate().fold(0usize, |a, (i, w)| a | (((w >> p & 1) as usize) << i));
        cells[e] += 1;
    }
    cells
}

pub struct CodeOverlattice {
    pub lattice: Lattice,
    /// Basis rows in the coordinates e_1..e_m of A_1^m.
    pub basis: Vec<Vec<crate::Rational>>,
    pub index: BigInt,
}

/// Overlattice of A_1^m generated by (1/2) sum_{i in B} e_i, B in the
/// code. Only double evenness is required here.
pub fn even_overlattice(code: &BinaryCode) -> Result<CodeOverlattice, CodeError> {
    if !code.is_doubly_even() {
        return Err(CodeError::NotDoublyEven);
    }
    let m = code.m();
    let amb: Lattice = diagonal(&vec![-2; m]);
    let extra: Vec<Vec<crate::Rational>> = code
        .basis()
        .iter()
        .map(|&b| (0..m).map(|i| if b >> i & 1 == 1 { rat(1, 2) } else { rat(0, 1) }).collect())
        .collect();
    let (basis, lattice) = overlattice(&amb, &extra)?;
    let index = BigInt::one() << code.dim();
    Ok(CodeOverlattice { lattice, basis, index })
}

/// The even overlattice of A_1^m of index 2^dim whose roots are exactly
/// the +-e_i; rejects codes with weight-4 words.
pub fn code_to_overlattice(code: &BinaryCode) -> Result<CodeOverlattice, CodeError> {
    if !code.is_doubly_even() {
        return Err(CodeError::NotDoublyEven);
    }
    if !code.is_kummer_admissible() {
        return Err(CodeError::WeightFour);
    }
    let o = even_overlattice(code)?;
    let roots = o.lattice.roots()?;
    let amb = ambient_vectors(&o.basis, &roots);
    let ok = amb.len() == code.m()
        && amb.iter().all(|v| {
            v.iter().filter(|c| !c.is_zero()).count() == 1 && v.iter().all(|c| c.is_zero() || c.is_one())
        });
    if !ok {
        return Err(CodeError::SelfCheck("roots are not exactly the +-e_i".into()));
    }
    Ok(o)
}

/// Lattice-coordinate vectors mapped to ambient coordinates.
pub fn ambient_vectors(basis: &[Vec<crate::Rational>], vs: &[Vec<BigInt>]) -> Vec<Vec<crate::Rational>> {
    vs.iter()
        .map(|v| {
            let n = basis[0].len();
            let mut out = vec![crate::Rational::zero(); n];
            for (c, row) in v.iter().zip(basis) {
                if c.is_zero() {
                    continue;
                }
                let c = crate::Rational::from_integer(c.clone());
                for (o, r) in out.iter_mut().zip(row) {
                    *o += c.clone() * r;
                }
            }
            // canonical sign in ambient coordinates
            if let Some(f) = out.iter().find(|x| !x.is_zero()) {
                if *f < crate::Rational::zero() {
                    for o in out.iter_mut() {
                        *o = -o.clone();
                    }
                }
            }
            out
        })
        .collect()
}
