//! ADE classification of root systems via simple roots and Dynkin graphs.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{matrix, GramLattice, LatticeError};
use crate::scalar::{int, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AdeKind {
    A,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AdeComponent {
    pub kind: AdeKind,
    pub rank: usize,
}

impl AdeComponent {
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.kind {
            AdeKind::A => n * (n + 1),
            AdeKind::D => 2 * n * (n - 1),
            AdeKind::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
        }
    }
}

impl fmt::Display for AdeComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.rank)
    }
}

/// Multiset of components, printed like `16A1` or `13A1+1D4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdeType(pub Vec<AdeComponent>);

impl AdeType {
    pub fn rank(&self) -> usize {
        self.0.iter().map(|c| c.rank).sum()
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut counts: BTreeMap<AdeComponent, usize> = BTreeMap::new();
        for c in &self.0 {
            *counts.entry(*c).or_default() += 1;
        }
        let parts: Vec<String> = counts.iter().map(|(c, k)| format!("{k}{c}")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

fn classify_tree(n: usize, edges: &[(usize, usize)]) -> Option<AdeComponent> {
    if edges.len() + 1 != n {
        return None;
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    // connectivity
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    if adj.iter().any(|a| a.len() > 3) || branch.len() > 1 {
        return None;
    }
    if branch.is_empty() {
        return Some(AdeComponent { kind: AdeKind::A, rank: n });
    }
    let c = branch[0];
    let mut arms: Vec<usize> = adj[c]
        .iter()
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (c, start, 1);
            loop {
                let next: Vec<usize> = adj[cur].iter().copied().filter(|&w| w != prev).collect();
                if next.is_empty() {
                    break len;
                }
                prev = cur;
                cur = next[0];
                len += 1;
            }
        })
        .collect();
    arms.sort();
    match (arms[0], arms[1], arms[2]) {
        (1, 1, k) => Some(AdeComponent { kind: AdeKind::D, rank: k + 3 }),
        (1, 2, 2) => Some(AdeComponent { kind: AdeKind::E, rank: 6 }),
        (1, 2, 3) => Some(AdeComponent { kind: AdeKind::E, rank: 7 }),
        (1, 2, 4) => Some(AdeComponent { kind: AdeKind::E, rank: 8 }),
        _ => None,
    }
}

/// Classify a root system given one representative per sign pair.
/// Components are found from the pairing graph, simple roots from a
/// generic linear functional, and the Dynkin graph is matched against
/// A/D/E with a root-count cross-check.
pub fn ade_type<I: Scalar>(l: &GramLattice<I>, roots: &[Vec<I>]) -> Result<AdeType, LatticeError> {
    let m2 = int::<I>(-2);
    let all: Vec<Vec<I>> = roots
        .iter()
        .flat_map(|r| [r.clone(), r.iter().map(|c| -c.clone()).collect()])
        .collect();
    if roots.iter().any(|r| l.norm(r) != m2) {
        return Err(LatticeError::NotAde);
    }
    let set: HashSet<Vec<I>> = all.iter().cloned().collect();
    if set.len() != all.len() {
        return Err(LatticeError::NotAde);
    }
    // components of the pairing graph on sign pairs
    let k = roots.len();
    let mut comp = vec![usize::MAX; k];
    let mut ncomp = 0;
    for s in 0..k {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = ncomp;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in 0..k {
                if comp[w] == usize::MAX && !l.ipairing(&roots[v], &roots[w]).is_zero() {
                    comp[w] = ncomp;
                    stack.push(w);
                }
            }
        }
        ncomp += 1;
    }
    let n = l.rank();
    // weights B^i with B > 2 max|coord|: a nonzero vector has nonzero height
    let coord = |x: &I| num_bigint::BigInt::from(x.to_i128().expect("root coordinate fits in i128"));
    let mut big = num_bigint::BigInt::one();
    for r in &all {
        for x in r {
            big = big.max(coord(x).abs());
        }
    }
    let base: num_bigint::BigInt = big * 2 + 1;
    let weights: Vec<num_bigint::BigInt> = (0..n).map(|i| num_traits::pow(base.clone(), i)).collect();
    let height = |r: &Vec<I>| {
        r.iter().zip(&weights).fold(num_bigint::BigInt::zero(), |s, (a, b)| s + coord(a) * b)
    };
    let mut out = Vec::new();
    for c in 0..ncomp {
        let pos: Vec<Vec<I>> = (0..k)
            .filter(|&i| comp[i] == c)
            .map(|i| {
                let r = &roots[i];
                if height(r).is_positive() {
                    r.clone()
                } else {
                    r.iter().map(|x| -x.clone()).collect()
                }
            })
            .collect();
        let posset: HashSet<Vec<I>> = pos.iter().cloned().collect();
        let simple: Vec<&Vec<I>> = pos
            .iter()
            .filter(|a| {
                !pos.iter().any(|b| {
                    let d: Vec<I> = a.iter().zip(b.iter()).map(|(x, y)| x.clone() - y.clone()).collect();
                    posset.contains(&d)
                })
            })
            .collect();
        let qs: Vec<Vec<num_rational::Ratio<I>>> = pos
            .iter()
            .map(|v| v.iter().map(|x| num_rational::Ratio::from_integer(x.clone())).collect())
            .collect();
        let rank = matrix::qrank(&qs);
        if simple.len() != rank {
            return Err(LatticeError::NotAde);
        }
        let mut edges = Vec::new();
        for i in 0..simple.len() {
            for j in i + 1..simple.len() {
                let p = l.ipairing(simple[i], simple[j]);
                if p.is_zero() {
                    continue;
                }
                if !p.is_one() {
                    return Err(LatticeError::NotAde);
                }
                edges.push((i, j));
            }
        }
        let t = classify_tree(simple.len(), &edges).ok_or(LatticeError::NotAde)?;
        if t.root_count() != 2 * pos.len() {
            return Err(LatticeError::NotAde);
        }
        out.push(t);
    }
    out.sort();
    Ok(AdeType(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{diagonal, root_lattice_a, root_lattice_d, root_lattice_e};

    #[test]
    fn irreducible_types() {
        for (l, s) in [
            (root_lattice_a::<i64>(5), "1A5"),
            (root_lattice_d::<i64>(4), "1D4"),
            (root_lattice_d::<i64>(7), "1D7"),
            (root_lattice_e::<i64>(6), "1E6"),
            (root_lattice_e::<i64>(7), "1E7"),
            (root_lattice_e::<i64>(8), "1E8"),
        ] {
            let r = l.roots().unwrap();
            assert_eq!(ade_type(&l, &r).unwrap().to_string(), s);
        }
    }

    #[test]
    fn sums() {
        let l = diagonal::<i64>(&[-2, -2, -2]).direct_sum(&root_lattice_d(4));
        let r = l.roots().unwrap();
        assert_eq!(ade_type(&l, &r).unwrap().to_string(), "3A1+1D4");
    }

    #[test]
    fn incomplete_set_is_rejected() {
        let l = root_lattice_a::<i64>(2);
        let r = l.roots().unwrap();
        assert_eq!(ade_type(&l, &r[..2]), Err(LatticeError::NotAde));
    }
}
