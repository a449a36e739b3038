//! Exhaustive classification of admissible codes by dimension.
//!
//! Codes are grown one word at a time. Coordinates with equal columns are
//! interchangeable under the automorphism group of the current code, so a
//! new word is determined up to symmetry by how many coordinates it takes
//! from each column class. Results are reduced to equivalence classes
//! after every level.

use std::collections::HashMap;

use serde::Serialize;

use super::equiv::{are_equivalent, column_classes, invariant, CodeInvariant};
use super::{f_bound, shortened_golay, weight, BinaryCode, CodeError};

/// Largest length handled by exhaustive search.
pub const EXHAUSTIVE_MAX: usize = 17;

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub m: usize,
    /// Best dimension found (exact when `exhaustive`).
    pub g: usize,
    pub f: usize,
    pub exhaustive: bool,
    /// Inequivalent admissible codes of each dimension (exhaustive mode).
    pub classes_per_dim: Vec<usize>,
    /// Representatives of maximal dimension.
    #[serde(skip)]
    pub maximal: Vec<BinaryCode>,
    pub candidates_checked: u64,
    /// Upper bound obtained from a neighbouring exhaustive value.
    pub upper_bound: usize,
}

/// All admissible codes of length m up to equivalence, level by level.
/// A returned count above `budget` means the search was cut short.
pub fn classify_admissible(m: usize, budget: u64) -> Result<(Vec<Vec<BinaryCode>>, u64), CodeError> {
    if m > super::MAX_LEN {
        return Err(CodeError::TooLong(m));
    }
    let mut levels: Vec<Vec<BinaryCode>> = vec![vec![BinaryCode::zero(m)]];
    let mut checked = 0u64;
    loop {
        let cur = levels.last().unwrap();
        let mut buckets: HashMap<CodeInvariant, Vec<usize>> = HashMap::new();
        let mut next: Vec<BinaryCode> = Vec::new();
        for c in cur {
            let words = c.codewords();
            let classes = column_classes(c);
            let sizes: Vec<usize> = classes.iter().map(|(_, v)| v.len()).collect();
            let mut counts = vec![0usize; sizes.len()];
            loop {
                checked += 1;
                if checked > budget {
                    return Ok((levels, checked));
                }
                let w = classes
                    .iter()
                    .zip(&counts)
                    .fold(0u32, |a, ((_, coords), &n)| coords[..n].iter().fold(a, |a, &j| a | 1 << j));
                let wt = weight(w);
                if wt >= 8 && wt % 4 == 0 && !c.contains(w) && words.iter().all(|&x| {
                    let t = weight(x ^ w);
                    t >= 8 && t % 4 == 0
                }) {
                    let d = c.with_word(w);
                    let inv = invariant(&d);
                    let reps = buckets.entry(inv).or_default();
                    if !reps.iter().any(|&r| are_equivalent(&next[r], &d)) {
                        reps.push(next.len());
                        next.push(d);
                    }
                }
                // odometer over counts
                let mut i = 0;
                while i < counts.len() {
                    if counts[i] < sizes[i] {
                        counts[i] += 1;
                        break;
                    }
                    counts[i] = 0;
                    i += 1;
                }
                if i == counts.len() {
                    break;
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    Ok((levels, checked))
}

/// Exact g(m) for m <= 17 by exhaustive search; beyond that a witness
/// (shortened Golay) and the chain bound g(m) <= g(17) + (m - 17).
pub fn max_admissible_dim(m: usize, budget: u64) -> Result<SearchOutcome, CodeError> {
    let f = f_bound(m)?;
    if m <= EXHAUSTIVE_MAX {
        let (levels, checked) = classify_admissible(m, budget)?;
        let exhaustive = checked <= budget;
        let g = levels.len() - 1;
        return Ok(SearchOutcome {
            m,
            g,
            f,
            exhaustive,
            classes_per_dim: levels.iter().map(|l| l.len()).collect(),
            maximal: levels.last().cloned().unwrap_or_default(),
            candidates_checked: checked,
            upper_bound: if exhaustive { g } else { f },
        });
    }
    // witness mode
    let base = max_admissible_dim(EXHAUSTIVE_MAX, budget)?;
    let upper = if base.exhaustive { base.g + (m - EXHAUSTIVE_MAX) } else { f };
    let w = shortened_golay(m)?;
    let w = if w.is_kummer_admissible() { w } else { BinaryCode::zero(m) };
    Ok(SearchOutcome {
        m,
        g: w.dim(),
        f,
        exhaustive: false,
        classes_per_dim: Vec::new(),
        maximal: vec![w],
        candidates_checked: base.candidates_checked,
        upper_bound: upper,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GRow {
    pub m: usize,
    pub g: usize,
    pub f: usize,
    pub exhaustive: bool,
    pub maximal_classes: usize,
}

/// g(m) for 0 <= m <= max from a single classification at length max:
/// codes of length <= m are the codes of length max supported on m points.
pub fn g_table(max: usize, budget: u64) -> Result<Vec<GRow>, CodeError> {
    let top = max.min(EXHAUSTIVE_MAX);
    let (levels, checked) = classify_admissible(top, budget)?;
    let exhaustive = checked <= budget;
    let mut rows = Vec::new();
    for m in 0..=top {
        let mut best = 0;
        let mut count = 0;
        for (d, lvl) in levels.iter().enumerate() {
            let n = lvl.iter().filter(|c| c.support().count_ones() as usize <= m).count();
            if n > 0 {
                best = d;
                count = n;
            }
        }
        rows.push(GRow { m, g: best, f: f_bound(m)?, exhaustive, maximal_classes: count });
    }
    for m in top + 1..=max {
        let o = max_admissible_dim(m, budget)?;
        rows.push(GRow { m, g: o.g, f: o.f, exhaustive: o.g == o.upper_bound, maximal_classes: 1 });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::build_v16;

    #[test]
    fn small_lengths() {
        for m in 0..=12 {
            let o = max_admissible_dim(m, u64::MAX).unwrap();
            assert!(o.exhaustive);
            assert_eq!(o.g, o.f, "m = {m}");
        }
    }

    #[test]
    fn length_sixteen_is_v16() {
        let o = max_admissible_dim(16, u64::MAX).unwrap();
        assert_eq!(o.g, 5);
        assert_eq!(o.maximal.len(), 1);
        assert!(are_equivalent(&o.maximal[0], &build_v16()));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let o = max_admissible_dim(14, 10).unwrap();
        assert!(!o.exhaustive);
    }
}
