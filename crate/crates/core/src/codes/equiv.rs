//! Permutation equivalence of binary codes.
//!
//! Codes are bucketed by an invariant built from weights and pairwise
//! intersection sizes, then compared by a backtracking search for a
//! weight-preserving linear bijection whose column multisets agree.

use std::collections::HashMap;

use super::{weight, BinaryCode};

/// Sorted multiset of per-codeword signatures plus column statistics.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeInvariant {
    pub m: usize,
    pub dim: usize,
    pub words: Vec<WordSig>,
    pub columns: Vec<usize>,
}

/// Weight of a codeword and the sorted sizes of its intersections with
/// every other nonzero codeword.
pub type WordSig = (u32, Vec<u32>);

fn word_sigs(words: &[u32]) -> Vec<WordSig> {
    words
        .iter()
        .map(|&c| {
            let mut inter: Vec<u32> = words.iter().filter(|&&d| d != c).map(|&d| weight(c & d)).collect();
            inter.sort_unstable();
            (weight(c), inter)
        })
        .collect()
}

/// Multiplicities of equal columns (w.r.t. the stored basis), sorted.
pub fn column_classes(c: &BinaryCode) -> Vec<(u32, Vec<usize>)> {
    let mut map: HashMap<u32, Vec<usize>> = HashMap::new();
    for j in 0..c.m() {
        let col = c.basis().iter().enumerate().fold(0u32, |a, (i, b)| a | ((b >> j & 1) << i));
        map.entry(col).or_default().push(j);
    }
    let mut v: Vec<(u32, Vec<usize>)> = map.into_iter().collect();
    v.sort();
    v
}

pub fn invariant(c: &BinaryCode) -> CodeInvariant {
    let nonzero: Vec<u32> = c.codewords().into_iter().filter(|&w| w != 0).collect();
    let mut words = word_sigs(&nonzero);
    words.sort();
    let mut columns: Vec<usize> = column_classes(c).iter().map(|(_, v)| v.len()).collect();
    columns.sort_unstable();
    CodeInvariant { m: c.m(), dim: c.dim(), words, columns }
}

/// Column multiset of a code given by an ordered basis.
fn columns_of(m: usize, basis: &[u32]) -> Vec<u32> {
    let mut cols: Vec<u32> =
        (0..m).map(|j| basis.iter().enumerate().fold(0u32, |a, (i, b)| a | ((b >> j & 1) << i))).collect();
    cols.sort_unstable();
    cols
}

/// Is there a coordinate permutation mapping a onto b?
pub fn are_equivalent(a: &BinaryCode, b: &BinaryCode) -> bool {
    if a.m() != b.m() || a.dim() != b.dim() {
        return false;
    }
    let k = a.dim();
    if k == 0 {
        return true;
    }
    let wa: Vec<u32> = a.codewords().into_iter().filter(|&w| w != 0).collect();
    let wb: Vec<u32> = b.codewords().into_iter().filter(|&w| w != 0).collect();
    let sa = word_sigs(&wa);
    let sb = word_sigs(&wb);
    {
        let (mut x, mut y) = (sa.clone(), sb.clone());
        x.sort();
        y.sort();
        if x != y {
            return false;
        }
    }
    let sig_a: HashMap<u32, &WordSig> = wa.iter().copied().zip(sa.iter()).collect();
    // candidate images grouped by signature
    let target_cols = columns_of(a.m(), a.basis());
    let basis = a.basis().to_vec();
    let mut chosen: Vec<u32> = Vec::with_capacity(k);
    fn rec(
        basis: &[u32],
        chosen: &mut Vec<u32>,
        wb: &[u32],
        sb: &[WordSig],
        sig_a: &HashMap<u32, &WordSig>,
        m: usize,
        target_cols: &[u32],
    ) -> bool {
        let j = chosen.len();
        if j == basis.len() {
            return columns_of(m, chosen) == target_cols;
        }
        let need = sig_a[&basis[j]];
        for (idx, &cand) in wb.iter().enumerate() {
            if &sb[idx] != need {
                continue;
            }
            // every combination involving the new vector keeps its weight
            let ok = (0u32..(1 << j)).all(|s| {
                let mut x = basis[j];
                let mut y = cand;
                for i in 0..j {
                    if s >> i & 1 == 1 {
                        x ^= basis[i];
                        y ^= chosen[i];
                    }
                }
                weight(x) == weight(y)
            });
            if !ok {
                continue;
            }
            chosen.push(cand);
            if rec(basis, chosen, wb, sb, sig_a, m, target_cols) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    rec(&basis, &mut chosen, &wb, &sb, &sig_a, a.m(), &target_cols)
}

/// Partition into permutation-equivalence classes; returns indices of the
/// input grouped by class, classes in order of first appearance.
pub fn equivalence_classes(codes: &[BinaryCode]) -> Vec<Vec<usize>> {
    let mut buckets: HashMap<CodeInvariant, Vec<usize>> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, c) in codes.iter().enumerate() {
        let inv = invariant(c);
        let reps = buckets.entry(inv).or_default();
        let mut placed = false;
        for &ci in reps.iter() {
            if are_equivalent(&codes[classes[ci][0]], c) {
                classes[ci].push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            reps.push(classes.len());
            classes.push(vec![i]);
        }
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::build_v16;

    fn permute(c: &BinaryCode, perm: &[usize]) -> BinaryCode {
        let rows: Vec<u32> = c
            .basis()
            .iter()
            .map(|&b| (0..c.m()).fold(0u32, |a, j| a | ((b >> j & 1) << perm[j])))
            .collect();
        BinaryCode::new(c.m(), &rows).unwrap()
    }

    #[test]
    fn permuted_v16_is_equivalent() {
        let v = build_v16();
        let perm: Vec<usize> = (0..16).map(|j| (j * 7 + 3) % 16).collect();
        let w = permute(&v, &perm);
        assert!(are_equivalent(&v, &w));
        assert_eq!(invariant(&v), invariant(&w));
    }

    #[test]
    fn different_supports_are_not_equivalent() {
        let a = BinaryCode::new(12, &[0x0ff]).unwrap();
        let b = BinaryCode::new(12, &[0xff0]).unwrap();
        let c = BinaryCode::new(12, &[0xff0, 0xf0f]).unwrap();
        assert!(are_equivalent(&a, &b));
        assert!(!are_equivalent(&a, &c));
        assert_eq!(equivalence_classes(&[a, c, b]), vec![vec![0, 2], vec![1]]);
    }
}
