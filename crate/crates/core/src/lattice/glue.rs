//! Saturation, overlattices and glueing along isomorphic subgroups of
//! discriminant groups.

use std::collections::HashMap;

use num_rational::Ratio;
use num_traits::{One, Zero};

use super::disc::reduce_mod1;
use super::matrix::{self, IMat, QMat};
use super::{GramLattice, LatticeError};
use crate::scalar::{int, rat_mod, Rat, Scalar};

#[derive(Clone, Debug)]
pub struct Saturation<I> {
    /// Basis of (M tensor Q) cap L in lattice coordinates.
    pub basis: IMat<I>,
    /// [saturation : M]
    pub index: I,
    pub lattice: GramLattice<I>,
}

/// Saturation of the sublattice spanned by the rows of `m`.
pub fn saturation<I: Scalar>(l: &GramLattice<I>, m: &IMat<I>) -> Result<Saturation<I>, LatticeError> {
    let n = l.rank();
    if m.iter().any(|r| r.len() != n) {
        return Err(LatticeError::Dimension);
    }
    let h = matrix::hermite(m, n);
    let r = h.len();
    let rk = matrix::right_kernel(&if m.is_empty() { vec![vec![I::zero(); n]] } else { m.clone() });
    let sat = if rk.is_empty() { matrix::identity::<I>(n) } else { matrix::left_kernel(&matrix::transpose(&rk)) };
    debug_assert_eq!(sat.len(), r);
    let satq = matrix::to_q(&sat);
    let mut c: QMat<I> = Vec::with_capacity(r);
    for row in &h {
        let t: Vec<Rat<I>> = row.iter().map(|x| Ratio::from_integer(x.clone())).collect();
        c.push(matrix::solve_row(&satq, &t).ok_or(LatticeError::Dimension)?);
    }
    let ci: IMat<I> = c.iter().map(|row| row.iter().map(|x| x.to_integer()).collect()).collect();
    let index = matrix::det(&ci).abs();
    let lattice = l.sublattice(&sat);
    Ok(Saturation { basis: sat, index, lattice })
}

/// Z-basis of the lattice generated by L (unit rows) and extra rational
/// vectors in lattice coordinates.
pub fn overlattice_basis<I: Scalar>(n: usize, extra: &QMat<I>) -> QMat<I> {
    let mut den = I::one();
    for v in extra {
        for c in v {
            den = den.lcm(c.denom());
        }
    }
    let mut gens: IMat<I> = matrix::identity::<I>(n)
        .into_iter()
        .map(|r| r.into_iter().map(|x| x * den.clone()).collect())
        .collect();
    for v in extra {
        gens.push(v.iter().map(|c| (c.clone() * Ratio::from_integer(den.clone())).to_integer()).collect());
    }
    let h = matrix::hermite(&gens, n);
    h.into_iter().map(|r| r.into_iter().map(|x| Ratio::new(x, den.clone())).collect()).collect()
}

/// The overlattice as a Gram lattice together with its basis.
pub fn overlattice<I: Scalar>(l: &GramLattice<I>, extra: &QMat<I>) -> Result<(QMat<I>, GramLattice<I>), LatticeError> {
    for v in extra {
        if !l.in_dual(v) {
            return Err(LatticeError::NotInDual);
        }
    }
    let b = overlattice_basis(l.rank(), extra);
    let g = l.rational_sublattice(&b)?;
    Ok((b, g))
}

/// Subgroups M1 of L1^v/L1, M2 of L2^v/L2 and psi given by images of
/// generators: psi(m1[i]) = m2[i].
#[derive(Clone, Debug)]
pub struct GlueData<I> {
    pub m1: QMat<I>,
    pub m2: QMat<I>,
}

#[derive(Clone, Debug)]
pub struct Glued<I> {
    pub lattice: GramLattice<I>,
    /// Basis in coordinates of L1 + L2.
    pub basis: QMat<I>,
    pub index: I,
}

/// Enumerate the graph {(x, psi x)} of the glue map modulo L1 + L2.
pub fn glue_graph<I: Scalar>(data: &GlueData<I>, n1: usize, n2: usize) -> Result<Vec<Vec<Rat<I>>>, LatticeError> {
    if data.m1.len() != data.m2.len() {
        return Err(LatticeError::Dimension);
    }
    let gens: Vec<Vec<Rat<I>>> = data
        .m1
        .iter()
        .zip(&data.m2)
        .map(|(a, b)| {
            if a.len() != n1 || b.len() != n2 {
                return Err(LatticeError::Dimension);
            }
            Ok(reduce_mod1(&a.iter().chain(b.iter()).cloned().collect::<Vec<_>>()))
        })
        .collect::<Result<_, _>>()?;
    let zero = vec![Rat::<I>::zero(); n1 + n2];
    let mut elems = vec![zero.clone()];
    let mut seen: HashMap<Vec<Rat<I>>, ()> = HashMap::new();
    seen.insert(zero, ());
    let mut i = 0;
    while i < elems.len() {
        let x = elems[i].clone();
        for g in &gens {
            let y = reduce_mod1(&x.iter().zip(g).map(|(a, b)| a.clone() + b.clone()).collect::<Vec<_>>());
            if seen.insert(y.clone(), ()).is_none() {
                elems.push(y);
            }
        }
        i += 1;
    }
    // psi must be a well-defined injective map
    let mut left: HashMap<Vec<Rat<I>>, Vec<Rat<I>>> = HashMap::new();
    let mut right: HashMap<Vec<Rat<I>>, Vec<Rat<I>>> = HashMap::new();
    for e in &elems {
        let (a, b) = (e[..n1].to_vec(), e[n1..].to_vec());
        if let Some(prev) = left.insert(a.clone(), b.clone()) {
            if prev != b {
                return Err(LatticeError::GlueForm("map is not well defined".into()));
            }
        }
        if let Some(prev) = right.insert(b, a.clone()) {
            if prev != a {
                return Err(LatticeError::GlueForm("map is not injective".into()));
            }
        }
    }
    Ok(elems)
}

/// Glue L1 and L2 along psi: M1 -> M2. Requires q1(x) + q2(psi x) = 0 in
/// Q/2Z on all of M1, and verifies evenness, the index and saturation of
/// both summands in the result.
pub fn glue<I: Scalar>(l1: &GramLattice<I>, l2: &GramLattice<I>, data: &GlueData<I>) -> Result<Glued<I>, LatticeError> {
    let (n1, n2) = (l1.rank(), l2.rank());
    for v in &data.m1 {
        if v.len() != n1 || !l1.in_dual(v) {
            return Err(LatticeError::NotInDual);
        }
    }
    for v in &data.m2 {
        if v.len() != n2 || !l2.in_dual(v) {
            return Err(LatticeError::NotInDual);
        }
    }
    let graph = glue_graph(data, n1, n2)?;
    let sum = l1.direct_sum(l2);
    let two = int::<I>(2);
    for e in &graph {
        let q = rat_mod(&sum.pairing(e, e), &two);
        if !q.is_zero() {
            return Err(LatticeError::GlueForm(format!("q1 + q2 = {q} on a glue element")));
        }
    }
    let extra: QMat<I> = data.m1.iter().zip(&data.m2).map(|(a, b)| a.iter().chain(b.iter()).cloned().collect()).collect();
    let (basis, lat) = overlattice(&sum, &extra).map_err(|e| match e {
        LatticeError::NotIntegral => LatticeError::GlueCheck("glued Gram matrix is not integral".into()),
        other => other,
    })?;
    if !lat.is_even() {
        return Err(LatticeError::GlueCheck("glued lattice is not even".into()));
    }
    let index = I::from_usize(graph.len()).unwrap();
    let d_sum = sum.discriminant()?;
    let d_new = lat.discriminant()?;
    if d_sum.clone() != d_new * index.clone() * index.clone() {
        return Err(LatticeError::GlueCheck("index does not match |M1|".into()));
    }
    // saturation of each summand in the glued lattice
    for (offset, len) in [(0, n1), (n1, n2)] {
        let rows = embed_rows(&basis, offset, len)?;
        if !saturation(&lat, &rows)?.index.is_one() {
            return Err(LatticeError::GlueCheck("summand is not saturated".into()));
        }
    }
    Ok(Glued { lattice: lat, basis, index })
}

/// Coordinates, in terms of `basis`, of the unit vectors offset..offset+len.
pub fn embed_rows<I: Scalar>(basis: &QMat<I>, offset: usize, len: usize) -> Result<IMat<I>, LatticeError> {
    let n = basis.len();
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let mut t = vec![Rat::<I>::zero(); n];
        t[offset + i] = Rat::<I>::one();
        out.push(express(basis, &t)?);
    }
    Ok(out)
}

/// Integer coordinates of an ambient vector in terms of a basis.
pub fn express<I: Scalar>(basis: &QMat<I>, v: &[Rat<I>]) -> Result<Vec<I>, LatticeError> {
    let c = matrix::solve_row(basis, v).ok_or(LatticeError::Dimension)?;
    if c.iter().any(|x| !x.is_integer()) {
        return Err(LatticeError::Dimension);
    }
    Ok(c.into_iter().map(|x| x.to_integer()).collect())
}
