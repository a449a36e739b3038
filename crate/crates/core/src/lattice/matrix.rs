//! Dense integer and rational matrices: Bareiss determinant, Hermite rows,
//! integer kernels and Smith normal form.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::scalar::{Rat, Scalar};

pub type IMat<I> = Vec<Vec<I>>;
pub type QMat<I> = Vec<Vec<Rat<I>>>;

pub fn identity<I: Scalar>(n: usize) -> IMat<I> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { I::one() } else { I::zero() }).collect())
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mul<I: Scalar>(a: &IMat<I>, b: &IMat<I>) -> IMat<I> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| {
                    let mut s = I::zero();
                    for k in 0..inner {
                        if !r[k].is_zero() && !b[k][j].is_zero() {
                            s = s + r[k].clone() * b[k][j].clone();
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn qmul<I: Scalar>(a: &QMat<I>, b: &QMat<I>) -> QMat<I> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| {
                    let mut s = Rat::<I>::zero();
                    for k in 0..inner {
                        if !r[k].is_zero() && !b[k][j].is_zero() {
                            s = s + r[k].clone() * b[k][j].clone();
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn to_q<I: Scalar>(a: &IMat<I>) -> QMat<I> {
    a.iter().map(|r| r.iter().map(|x| Ratio::from_integer(x.clone())).collect()).collect()
}

/// x^T G y for rational vectors against an integer Gram matrix.
pub fn bilinear<I: Scalar>(g: &IMat<I>, x: &[Rat<I>], y: &[Rat<I>]) -> Rat<I> {
    let mut s = Rat::<I>::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        let mut t = Rat::<I>::zero();
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() && !g[i][j].is_zero() {
                t = t + yj.clone() * Ratio::from_integer(g[i][j].clone());
            }
        }
        s = s + xi.clone() * t;
    }
    s
}

pub fn ibilinear<I: Scalar>(g: &IMat<I>, x: &[I], y: &[I]) -> I {
    let mut s = I::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() && !g[i][j].is_zero() {
                s = s + xi.clone() * yj.clone() * g[i][j].clone();
            }
        }
    }
    s
}

/// Fraction-free Gaussian elimination.
pub fn det<I: Scalar>(a: &IMat<I>) -> I {
    let n = a.len();
    if n == 0 {
        return I::one();
    }
    let mut m = a.clone();
    let mut sign = I::one();
    let mut prev = I::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return I::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = v / prev.clone();
            }
            m[i][k] = I::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Reduced row echelon form over Q; returns the pivot columns.
pub fn rref<I: Scalar>(a: &mut QMat<I>) -> Vec<usize> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = f.clone() * a[r][j].clone();
                    a[i][j] = a[i][j].clone() - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn qrank<I: Scalar>(a: &QMat<I>) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

pub fn qinverse<I: Scalar>(a: &QMat<I>) -> Option<QMat<I>> {
    let n = a.len();
    let mut aug: QMat<I> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::<I>::one() } else { Rat::<I>::zero() }));
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve c * basis = target for a row vector c, if a solution exists.
pub fn solve_row<I: Scalar>(basis: &QMat<I>, target: &[Rat<I>]) -> Option<Vec<Rat<I>>> {
    let k = basis.len();
    let n = target.len();
    // columns of the system are the basis rows
    let mut aug: QMat<I> = (0..n)
        .map(|j| {
            let mut row: Vec<Rat<I>> = (0..k).map(|i| basis[i][j].clone()).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&k) {
        return None;
    }
    let mut sol = vec![Rat::<I>::zero(); k];
    for (r, &c) in piv.iter().enumerate() {
        sol[c] = aug[r][k].clone();
    }
    Some(sol)
}

fn row_combine<I: Scalar>(m: &mut IMat<I>, i: usize, j: usize, a: &I, b: &I, c: &I, d: &I) {
    // (row_i, row_j) <- (a row_i + b row_j, c row_i + d row_j)
    for k in 0..m[i].len() {
        let x = m[i][k].clone();
        let y = m[j][k].clone();
        m[i][k] = a.clone() * x.clone() + b.clone() * y.clone();
        m[j][k] = c.clone() * x + d.clone() * y;
    }
}

/// Row-style Hermite normal form of the integer span of `rows`.
/// Returns the nonzero rows and, if requested, the transformation.
pub fn hermite<I: Scalar>(rows: &IMat<I>, ncols: usize) -> IMat<I> {
    let mut m: IMat<I> = rows.to_vec();
    let nrows = m.len();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let mut any = false;
        for i in r..nrows {
            if m[i][c].is_zero() {
                continue;
            }
            if !any {
                m.swap(r, i);
                any = true;
                continue;
            }
            let (a, b) = (m[r][c].clone(), m[i][c].clone());
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (ag, bg) = (a / g.clone(), b / g);
            row_combine(&mut m, r, i, &x, &y, &-bg, &ag);
        }
        if !any {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let p = m[r][c].clone();
        for i in 0..r {
            let q = m[i][c].div_floor(&p);
            if !q.is_zero() {
                for k in 0..ncols {
                    let d = q.clone() * m[r][k].clone();
                    m[i][k] = m[i][k].clone() - d;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Integer basis of { x : x * A = 0 } for an n x k matrix A.
pub fn left_kernel<I: Scalar>(a: &IMat<I>) -> IMat<I> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let k = a[0].len();
    let aug: IMat<I> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { I::one() } else { I::zero() }));
            row
        })
        .collect();
    let h = hermite(&aug, k + n);
    h.into_iter()
        .filter(|r| r[..k].iter().all(|x| x.is_zero()))
        .map(|r| r[k..].to_vec())
        .collect()
}

/// Integer basis of { y : A y = 0 }.
pub fn right_kernel<I: Scalar>(a: &IMat<I>) -> IMat<I> {
    left_kernel(&transpose(a))
}

#[derive(Clone, Debug)]
pub struct Smith<I> {
    /// Unimodular row transform.
    pub u: IMat<I>,
    /// Unimodular column transform.
    pub v: IMat<I>,
    /// Diagonal entries, nonnegative, each dividing the next; zeros last.
    pub diag: Vec<I>,
}

/// Smith normal form: U A V = diag.
pub fn smith<I: Scalar>(a: &IMat<I>) -> Smith<I> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = a.to_vec();
    let mut u = identity::<I>(rows);
    let mut v = identity::<I>(cols);
    let steps = rows.min(cols);
    let mut diag = Vec::with_capacity(steps);
    for t in 0..steps {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero() {
                        let better = match best {
                            None => true,
                            Some((bi, bj)) => m[i][j].abs() < m[bi][bj].abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            m.swap(t, bi);
            u.swap(t, bi);
            for r in m.iter_mut() {
                r.swap(t, bj);
            }
            for r in v.iter_mut() {
                r.swap(t, bj);
            }
            let p = m[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_floor(&p);
                if !q.is_zero() {
                    for k in 0..cols {
                        let d = q.clone() * m[t][k].clone();
                        m[i][k] = m[i][k].clone() - d;
                    }
                    for k in 0..rows {
                        let d = q.clone() * u[t][k].clone();
                        u[i][k] = u[i][k].clone() - d;
                    }
                }
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j].div_floor(&p);
                if !q.is_zero() {
                    for k in 0..rows {
                        let d = q.clone() * m[k][t].clone();
                        m[k][j] = m[k][j].clone() - d;
                    }
                    for k in 0..cols {
                        let d = q.clone() * v[k][t].clone();
                        v[k][j] = v[k][j].clone() - d;
                    }
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(m[i][j].clone() % p.clone()).is_zero()));
            match bad {
                Some(i) => {
                    for k in 0..cols {
                        let x = m[i][k].clone();
                        m[t][k] = m[t][k].clone() + x;
                    }
                    for k in 0..rows {
                        let x = u[i][k].clone();
                        u[t][k] = u[t][k].clone() + x;
                    }
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for k in 0..cols {
                m[t][k] = -m[t][k].clone();
            }
            for k in 0..rows {
                u[t][k] = -u[t][k].clone();
            }
        }
        diag.push(m[t][t].clone());
    }
    Smith { u, v, diag }
}
