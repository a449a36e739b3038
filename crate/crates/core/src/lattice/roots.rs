//! Short vectors of definite lattices: integral LLL followed by
//! Fincke-Pohst enumeration in exact arithmetic.

use num_rational::Ratio;
use num_traits::Zero;

use super::matrix::{self, IMat};
use super::{GramLattice, LatticeError};
use crate::scalar::{int, Rat, Scalar};

/// Integral LLL (delta = 3/4) on a positive definite Gram matrix.
/// Returns (H, reduced Gram, lambda, d) with reduced basis = H * old basis.
pub struct Reduced<I> {
    pub h: IMat<I>,
    pub gram: IMat<I>,
    /// lambda[k][j] for j < k
    pub lambda: IMat<I>,
    /// d[0] = 1, d[i] = det of the leading i x i block
    pub d: Vec<I>,
}

pub fn lll_gram<I: Scalar>(gram: &IMat<I>) -> Reduced<I> {
    let n = gram.len();
    let mut g = gram.clone();
    let mut h = matrix::identity::<I>(n);
    let mut lam = vec![vec![I::zero(); n]; n];
    let mut d = vec![I::zero(); n + 1];
    d[0] = I::one();
    if n == 0 {
        return Reduced { h, gram: g, lambda: lam, d };
    }
    d[1] = g[0][0].clone();
    // 1-based indices below follow the textbook presentation
    let mut k = 2usize;
    let mut kmax = 1usize;
    let three = int::<I>(3);
    let four = int::<I>(4);

    fn redi<I: Scalar>(
        k: usize,
        l: usize,
        g: &mut IMat<I>,
        h: &mut IMat<I>,
        lam: &mut IMat<I>,
        d: &[I],
    ) {
        let two = int::<I>(2);
        let lk = lam[k - 1][l - 1].clone();
        if (two.clone() * lk.clone()).abs() <= d[l] {
            return;
        }
        // nearest integer to lk / d[l]
        let q = (two.clone() * lk + d[l].clone()).div_floor(&(two * d[l].clone()));
        let n = g.len();
        for c in 0..n {
            let v = q.clone() * h[l - 1][c].clone();
            h[k - 1][c] = h[k - 1][c].clone() - v;
        }
        for c in 0..n {
            let v = q.clone() * g[l - 1][c].clone();
            g[k - 1][c] = g[k - 1][c].clone() - v;
        }
        for r in 0..n {
            let v = q.clone() * g[r][l - 1].clone();
            g[r][k - 1] = g[r][k - 1].clone() - v;
        }
        lam[k - 1][l - 1] = lam[k - 1][l - 1].clone() - q.clone() * d[l].clone();
        for i in 1..l {
            let v = q.clone() * lam[l - 1][i - 1].clone();
            lam[k - 1][i - 1] = lam[k - 1][i - 1].clone() - v;
        }
    }

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = g[k - 1][j - 1].clone();
                for i in 1..j {
                    u = (d[i].clone() * u - lam[k - 1][i - 1].clone() * lam[j - 1][i - 1].clone()) / d[i - 1].clone();
                }
                if j < k {
                    lam[k - 1][j - 1] = u;
                } else {
                    d[k] = u;
                }
            }
        }
        loop {
            redi(k, k - 1, &mut g, &mut h, &mut lam, &d);
            let lhs = four.clone() * d[k].clone() * d[k - 2].clone();
            let l = lam[k - 1][k - 2].clone();
            let rhs = three.clone() * d[k - 1].clone() * d[k - 1].clone() - four.clone() * l.clone() * l.clone();
            if lhs < rhs {
                // swap k and k-1
                h.swap(k - 1, k - 2);
                g.swap(k - 1, k - 2);
                for r in g.iter_mut() {
                    r.swap(k - 1, k - 2);
                }
                for j in 1..k - 1 {
                    let t = lam[k - 1][j - 1].clone();
                    lam[k - 1][j - 1] = lam[k - 2][j - 1].clone();
                    lam[k - 2][j - 1] = t;
                }
                let lm = l;
                let b = (d[k - 2].clone() * d[k].clone() + lm.clone() * lm.clone()) / d[k - 1].clone();
                for i in k + 1..=kmax {
                    let t = lam[i - 1][k - 1].clone();
                    lam[i - 1][k - 1] =
                        (d[k].clone() * lam[i - 1][k - 2].clone() - lm.clone() * t.clone()) / d[k - 1].clone();
                    lam[i - 1][k - 2] = (b.clone() * t + lm.clone() * lam[i - 1][k - 1].clone()) / d[k].clone();
                }
                d[k - 1] = b;
                if k > 2 {
                    k -= 1;
                }
            } else {
                for l in (1..k - 1).rev() {
                    redi(k, l, &mut g, &mut h, &mut lam, &d);
                }
                k += 1;
                break;
            }
        }
    }
    Reduced { h, gram: g, lambda: lam, d }
}

/// Definite lattice as a positive definite Gram matrix plus the sign used.
fn positive_form<I: Scalar>(l: &GramLattice<I>) -> Result<(IMat<I>, i64), LatticeError> {
    let s = l.signature();
    if s.null > 0 || (s.pos > 0 && s.neg > 0) {
        return Err(LatticeError::NotDefinite);
    }
    if s.neg > 0 {
        Ok((l.negated().gram().clone(), -1))
    } else {
        Ok((l.gram().clone(), 1))
    }
}

/// All x != 0 with Q(x) <= bound for a positive definite integral form,
/// in the coordinates of the reduced basis, one per sign pair.
fn enumerate<I: Scalar>(red: &Reduced<I>, bound: &I, exact: bool) -> Vec<Vec<I>> {
    let n = red.gram.len();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut x = vec![I::zero(); n];
    // remaining budget at each level, as a rational
    let budget = Ratio::from_integer(bound.clone());
    descend(red, n - 1, &mut x, budget, bound, exact, &mut out);
    out
}

fn descend<I: Scalar>(
    red: &Reduced<I>,
    k: usize,
    x: &mut Vec<I>,
    budget: Rat<I>,
    bound: &I,
    exact: bool,
    out: &mut Vec<Vec<I>>,
) {
    let n = x.len();
    // N = sum_{j>k} lambda[j][k] x_j ; term = (x_k d_k + N)^2 / (d_k d_{k-1})
    let mut nk = I::zero();
    for j in k + 1..n {
        if !x[j].is_zero() {
            nk = nk + red.lambda[j][k].clone() * x[j].clone();
        }
    }
    let dk = red.d[k + 1].clone();
    let dkm = red.d[k].clone();
    let denom = dk.clone() * dkm;
    let term = |xv: &I| -> Rat<I> {
        let t = xv.clone() * dk.clone() + nk.clone();
        Ratio::new(t.clone() * t, denom.clone())
    };
    // integer nearest to the center -nk/dk
    let two = int::<I>(2);
    let c0 = (two.clone() * (-nk.clone()) + dk.clone()).div_floor(&(two * dk.clone()));
    let visit = |xv: I, x: &mut Vec<I>, out: &mut Vec<Vec<I>>| -> bool {
        let t = term(&xv);
        if t > budget {
            return false;
        }
        x[k] = xv;
        let rest = budget.clone() - t;
        if k == 0 {
            let nonzero = x.iter().any(|v| !v.is_zero());
            let ok = if exact { rest.is_zero() } else { true };
            if nonzero && ok {
                // keep the representative whose last nonzero coordinate is positive
                let last = x.iter().rev().find(|v| !v.is_zero()).unwrap();
                if last.is_positive() {
                    out.push(x.clone());
                }
            }
        } else {
            descend(red, k - 1, x, rest, bound, exact, out);
        }
        x[k] = I::zero();
        true
    };
    // walk outward from the center on both sides
    let mut up = c0.clone();
    while visit(up.clone(), x, out) {
        up = up + I::one();
    }
    let mut down = c0 - I::one();
    while visit(down.clone(), x, out) {
        down = down - I::one();
    }
}

fn canonical_sign<I: Scalar>(v: Vec<I>) -> Vec<I> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => v.into_iter().map(|c| -c).collect(),
        _ => v,
    }
}

/// Vectors with x^2 = target, one per sign pair, first nonzero coordinate
/// positive, sorted.
pub fn vectors_of_norm<I: Scalar>(l: &GramLattice<I>, target: i64) -> Result<Vec<Vec<I>>, LatticeError> {
    let (g, sign) = positive_form(l)?;
    let t = target * sign;
    if t <= 0 {
        return Ok(Vec::new());
    }
    let red = lll_gram(&g);
    let found = enumerate(&red, &int(t), true);
    let mut out: Vec<Vec<I>> = found
        .into_iter()
        .map(|y| {
            // back to original coordinates: y * H
            let v: Vec<I> = (0..g.len())
                .map(|c| {
                    let mut s = I::zero();
                    for (r, yr) in y.iter().enumerate() {
                        if !yr.is_zero() {
                            s = s + yr.clone() * red.h[r][c].clone();
                        }
                    }
                    s
                })
                .collect();
            canonical_sign(v)
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn roots<I: Scalar>(l: &GramLattice<I>) -> Result<Vec<Vec<I>>, LatticeError> {
    let s = l.signature();
    if s.null > 0 || (s.pos > 0 && s.neg > 0) {
        return Err(LatticeError::NotDefinite);
    }
    vectors_of_norm(l, -2)
}

/// Count of vectors with Q(x) <= bound (both signs, excluding 0), used to
/// cross-check the enumeration in tests.
pub fn count_short<I: Scalar>(l: &GramLattice<I>, bound: i64) -> Result<usize, LatticeError> {
    let (g, _) = positive_form(l)?;
    let red = lll_gram(&g);
    Ok(2 * enumerate(&red, &int(bound), false).len())
}
