//! Even lattices given by integral Gram matrices.

pub mod ade;
pub mod disc;
pub mod glue;
pub mod matrix;
pub mod roots;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{int, Rat, Scalar};
use matrix::{IMat, QMat};

pub use ade::{ade_type, AdeComponent, AdeKind};
pub use disc::DiscriminantGroup;
pub use glue::{glue, saturation, GlueData, Glued, Saturation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("non-integral Gram matrix")]
    NotIntegral,
    #[error("lattice is not even")]
    NotEven,
    #[error("degenerate lattice")]
    Degenerate,
    #[error("root enumeration requires definite lattice")]
    NotDefinite,
    #[error("not a root system of ADE type")]
    NotAde,
    #[error("vector is not in the dual lattice")]
    NotInDual,
    #[error("glue map does not preserve the discriminant form: {0}")]
    GlueForm(String),
    #[error("glued lattice check failed: {0}")]
    GlueCheck(String),
    #[error("dimension mismatch")]
    Dimension,
    #[error("invalid lattice json: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub null: usize,
}

/// A lattice Z^n with bilinear form x^T G y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice<I> {
    gram: IMat<I>,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    gram: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl<I: Scalar> GramLattice<I> {
    pub fn new(gram: IMat<I>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        Ok(Self { gram, labels: None })
    }

    /// Like `new` but also requires even diagonal.
    pub fn new_even(gram: IMat<I>) -> Result<Self, LatticeError> {
        let l = Self::new(gram)?;
        if !l.is_even() {
            return Err(LatticeError::NotEven);
        }
        Ok(l)
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    /// Accepts a rational Gram matrix as long as it is integral.
    pub fn from_rational(gram: &QMat<I>) -> Result<Self, LatticeError> {
        let mut out = Vec::with_capacity(gram.len());
        for r in gram {
            let mut row = Vec::with_capacity(r.len());
            for x in r {
                if !x.is_integer() {
                    return Err(LatticeError::NotIntegral);
                }
                row.push(x.to_integer());
            }
            out.push(row);
        }
        Self::new(out)
    }

    pub fn from_json(s: &str) -> Result<Self, LatticeError> {
        let j: LatticeJson = serde_json::from_str(s).map_err(|e| LatticeError::Json(e.to_string()))?;
        let mut l = Self::from_i64(&j.gram)?;
        if let Some(lab) = &j.labels {
            if lab.len() != l.rank() {
                return Err(LatticeError::Json("label count does not match rank".into()));
            }
        }
        l.labels = j.labels;
        Ok(l)
    }

    pub fn to_json(&self) -> String {
        let j = LatticeJson {
            gram: self
                .gram
                .iter()
                .map(|r| r.iter().map(|x| x.to_i64().expect("entry out of i64 range")).collect())
                .collect(),
            labels: self.labels.clone(),
        };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.rank());
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IMat<I> {
        &self.gram
    }

    pub fn is_even(&self) -> bool {
        let two = int::<I>(2);
        (0..self.rank()).all(|i| (self.gram[i][i].clone() % two.clone()).is_zero())
    }

    pub fn pairing(&self, x: &[Rat<I>], y: &[Rat<I>]) -> Rat<I> {
        matrix::bilinear(&self.gram, x, y)
    }

    pub fn ipairing(&self, x: &[I], y: &[I]) -> I {
        matrix::ibilinear(&self.gram, x, y)
    }

    pub fn norm(&self, x: &[I]) -> I {
        self.ipairing(x, x)
    }

    pub fn determinant(&self) -> I {
        matrix::det(&self.gram)
    }

    /// det of the Gram matrix; zero is an error.
    pub fn discriminant(&self) -> Result<I, LatticeError> {
        let d = self.determinant();
        if d.is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(d)
    }

    /// Counts of positive, negative and zero squares in a rational
    /// diagonalization.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a: QMat<I> = matrix::to_q(&self.gram);
        let mut sig = Signature { pos: 0, neg: 0, null: 0 };
        let mut alive: Vec<usize> = (0..n).collect();
        while !alive.is_empty() {
            let piv = alive.iter().copied().find(|&i| !a[i][i].is_zero());
            let p = match piv {
                Some(p) => p,
                None => {
                    // all diagonal entries vanish; look for an off-diagonal one
                    let mut hit = None;
                    'outer: for &i in &alive {
                        for &j in &alive {
                            if i != j && !a[i][j].is_zero() {
                                hit = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    match hit {
                        None => {
                            sig.null += alive.len();
                            break;
                        }
                        Some((i, j)) => {
                            // e_i <- e_i + e_j makes a[i][i] = 2 a[i][j] != 0
                            for k in 0..n {
                                let v = a[j][k].clone();
                                a[i][k] = a[i][k].clone() + v;
                            }
                            for k in 0..n {
                                let v = a[k][j].clone();
                                a[k][i] = a[k][i].clone() + v;
                            }
                            i
                        }
                    }
                }
            };
            let d = a[p][p].clone();
            if d.is_positive() {
                sig.pos += 1;
            } else {
                sig.neg += 1;
            }
            alive.retain(|&i| i != p);
            for &i in &alive {
                if a[i][p].is_zero() {
                    continue;
                }
                let f = a[i][p].clone() / d.clone();
                for &j in &alive {
                    let v = f.clone() * a[p][j].clone();
                    a[i][j] = a[i][j].clone() - v;
                }
            }
            for &i in &alive {
                a[i][p] = Rat::<I>::zero();
                a[p][i] = Rat::<I>::zero();
            }
        }
        sig
    }

    pub fn is_negative_definite(&self) -> bool {
        let s = self.signature();
        s.pos == 0 && s.null == 0
    }

    pub fn is_positive_definite(&self) -> bool {
        let s = self.signature();
        s.neg == 0 && s.null == 0
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup<I>, LatticeError> {
        DiscriminantGroup::of(self)
    }

    /// (2-elementary, type 2) where type 2 means x^2 is integral on the dual.
    pub fn is_two_elementary_type2(&self) -> Result<(bool, bool), LatticeError> {
        let d = self.discriminant_group()?;
        let two = int::<I>(2);
        let elementary = d.orders.iter().all(|o| *o == two);
        let type2 = d.elements().iter().all(|x| d.q(x).is_integer());
        Ok((elementary, type2))
    }

    /// Is the rational vector (lattice coordinates) in the dual lattice?
    pub fn in_dual(&self, x: &[Rat<I>]) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            let mut s = Rat::<I>::zero();
            for j in 0..n {
                if !x[j].is_zero() {
                    s = s + x[j].clone() * Ratio::from_integer(self.gram[i][j].clone());
                }
            }
            s.is_integer()
        })
    }

    /// Reflection in a root v: x + <x,v> v (valid for v^2 = -2).
    pub fn reflect(&self, x: &[I], v: &[I]) -> Vec<I> {
        let c = self.ipairing(x, v);
        x.iter().zip(v).map(|(a, b)| a.clone() + c.clone() * b.clone()).collect()
    }

    /// The lattice spanned by the given rows (lattice coordinates).
    pub fn sublattice(&self, basis: &IMat<I>) -> Self {
        let gb = matrix::mul(basis, &self.gram);
        let g = matrix::mul(&gb, &matrix::transpose(basis));
        Self { gram: g, labels: None }
    }

    /// Gram matrix of rational vectors; fails if not integral.
    pub fn rational_sublattice(&self, basis: &QMat<I>) -> Result<Self, LatticeError> {
        let g = matrix::to_q(&self.gram);
        let gb = matrix::qmul(basis, &g);
        Self::from_rational(&matrix::qmul(&gb, &matrix::transpose(basis)))
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.rank(), other.rank());
        let mut g = vec![vec![I::zero(); a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                g[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                g[a + i][a + j] = other.gram[i][j].clone();
            }
        }
        let labels = match (&self.labels, &other.labels) {
            (Some(x), Some(y)) => Some(x.iter().chain(y).cloned().collect()),
            _ => None,
        };
        Self { gram: g, labels }
    }

    /// Orthogonal complement of the given vectors, as an integer basis in
    /// lattice coordinates.
    pub fn orthogonal_complement_basis(&self, vs: &IMat<I>) -> IMat<I> {
        // x G v^T = 0 for every v
        let gv = matrix::mul(&self.gram, &matrix::transpose(vs));
        matrix::left_kernel(&gv)
    }

    /// The lattice scaled by an integer factor.
    pub fn scaled(&self, c: i64) -> Self {
        let c = int::<I>(c);
        Self {
            gram: self.gram.iter().map(|r| r.iter().map(|x| x.clone() * c.clone()).collect()).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1)
    }

    pub fn roots(&self) -> Result<Vec<Vec<I>>, LatticeError> {
        roots::roots(self)
    }

    /// All vectors with x^2 = target (up to sign) of a definite lattice.
    pub fn vectors_of_norm(&self, target: i64) -> Result<Vec<Vec<I>>, LatticeError> {
        roots::vectors_of_norm(self, target)
    }
}

/// Root lattice of type A_n with negative-definite convention.
pub fn root_lattice_a<I: Scalar>(n: usize) -> GramLattice<I> {
    let mut g = vec![vec![I::zero(); n]; n];
    for i in 0..n {
        g[i][i] = int(-2);
        if i + 1 < n {
            g[i][i + 1] = I::one();
            g[i + 1][i] = I::one();
        }
    }
    GramLattice { gram: g, labels: None }
}

/// D_n, n >= 4: a chain 0..n-2 with node n-1 attached to node n-3.
pub fn root_lattice_d<I: Scalar>(n: usize) -> GramLattice<I> {
    assert!(n >= 4);
    let mut l = root_lattice_a::<I>(n - 1).gram;
    for r in l.iter_mut() {
        r.push(I::zero());
    }
    l.push(vec![I::zero(); n]);
    l[n - 1][n - 1] = int(-2);
    l[n - 1][n - 3] = I::one();
    l[n - 3][n - 1] = I::one();
    GramLattice { gram: l, labels: None }
}

/// E_n, n in 6..=8: chain 0..n-2 with node n-1 attached to node 2.
pub fn root_lattice_e<I: Scalar>(n: usize) -> GramLattice<I> {
    assert!((6..=8).contains(&n));
    let mut l = root_lattice_a::<I>(n - 1).gram;
    for r in l.iter_mut() {
        r.push(I::zero());
    }
    l.push(vec![I::zero(); n]);
    l[n - 1][n - 1] = int(-2);
    l[n - 1][2] = I::one();
    l[2][n - 1] = I::one();
    GramLattice { gram: l, labels: None }
}

pub fn diagonal<I: Scalar>(entries: &[i64]) -> GramLattice<I> {
    let n = entries.len();
    let mut g = vec![vec![I::zero(); n]; n];
    for i in 0..n {
        g[i][i] = int(entries[i]);
    }
    GramLattice { gram: g, labels: None }
}
