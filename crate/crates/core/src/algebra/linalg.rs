//! Dense matrices over a finite field.

use super::field::{Fe, Field};
use super::upoly::UPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    pub rows: usize,
    pub cols: usize,
    a: Vec<Fe>,
}

impl Mat {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Self {
        Mat { field: field.clone(), rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Fe>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.a[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.a[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let f = &self.field;
        let mut r = Self::zero(f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = f.add(r.get(i, j), f.mul(a, o.get(k, j)));
                    r.set(i, j, v);
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(0, |s, (&a, &b)| f.add(s, f.mul(a, b)))).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = &self.field;
        let mut r = self.clone();
        for (x, &y) in r.a.iter_mut().zip(&o.a) {
            *x = f.add(*x, y);
        }
        r
    }

    pub fn scale(&self, c: Fe) -> Self {
        let mut r = self.clone();
        for x in r.a.iter_mut() {
            *x = self.field.mul(*x, c);
        }
        r
    }

    /// self - c * I.
    pub fn shift(&self, c: Fe) -> Self {
        let mut r = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = self.field.sub(r.get(i, i), c);
            r.set(i, i, v);
        }
        r
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut r = Self::identity(&self.field, self.rows);
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        r
    }

    /// Stack rows of `o` below self.
    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut r = self.clone();
        r.rows += o.rows;
        r.a.extend_from_slice(&o.a);
        r
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            for j in 0..self.cols {
                self.a.swap(p * self.cols + j, r * self.cols + j);
            }
            let inv = f.inv(self.get(r, c));
            for j in 0..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                let m = self.get(i, c);
                if i == r || m == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(m, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of {v : self * v = 0}.
    pub fn nullspace(&self) -> Vec<Vec<Fe>> {
        let f = &self.field;
        let mut m = self.clone();
        let piv = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (r, &pc) in piv.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial det(t I - self) via Hessenberg reduction.
    pub fn charpoly(&self) -> UPoly {
        assert_eq!(self.rows, self.cols);
        let f = self.field.clone();
        let n = self.rows;
        let mut h = self.clone();
        // similarity transform to upper Hessenberg form
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&i| h.get(i, c) != 0) else {
                continue;
            };
            if p != c + 1 {
                for j in 0..n {
                    h.a.swap(p * n + j, (c + 1) * n + j);
                }
                for i in 0..n {
                    h.a.swap(i * n + p, i * n + c + 1);
                }
            }
            let inv = f.inv(h.get(c + 1, c));
            for i in c + 2..n {
                let m = f.mul(h.get(i, c), inv);
                if m == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(h.get(i, j), f.mul(m, h.get(c + 1, j)));
                    h.set(i, j, v);
                }
                for j in 0..n {
                    let v = f.add(h.get(j, c + 1), f.mul(m, h.get(j, i)));
                    h.set(j, c + 1, v);
                }
            }
        }
        // p_k = det of leading k x k block of (tI - H)
        let t = UPoly::t(&f);
        let mut ps = vec![UPoly::constant(&f, 1)];
        for k in 0..n {
            let mut pk = t.sub(&UPoly::constant(&f, h.get(k, k))).mul(&ps[k]);
            let mut prod = 1;
            for i in (0..k).rev() {
                prod = f.mul(prod, h.get(i + 1, i));
                let term = ps[i].scale(f.mul(prod, h.get(i, k)));
                pk = pk.sub(&term);
            }
            ps.push(pk);
        }
        ps.pop().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random(f: &Field, r: usize, c: usize, rng: &mut ChaCha8Rng) -> Mat {
        let rows: Vec<Vec<Fe>> = (0..r).map(|_| (0..c).map(|_| f.random(rng)).collect()).collect();
        Mat::from_rows(f, &rows)
    }

    #[test]
    fn nullspace_is_killed() {
        let f = Field::binary(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = random(&f, 4, 7, &mut rng);
            let ns = a.nullspace();
            assert_eq!(ns.len() + a.rank(), 7);
            for v in ns {
                assert!(a.mul_vec(&v).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn cayley_hamilton() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for f in [Field::binary(1), Field::binary(5), Field::new(3, 2).unwrap()] {
            for n in 1..7 {
                let a = random(&f, n, n, &mut rng);
                let chi = a.charpoly();
                assert_eq!(chi.degree(), n as isize);
                let mut acc = Mat::zero(&f, n, n);
                for &c in chi.coeffs().iter().rev() {
                    acc = acc.mul(&a).add(&Mat::identity(&f, n).scale(c));
                }
                assert!(acc.a.iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn charpoly_of_diagonal() {
        let f = Field::binary(3);
        let mut a = Mat::zero(&f, 3, 3);
        for (i, v) in [2, 5, 5].into_iter().enumerate() {
            a.set(i, i, v);
        }
        let want = [2, 5, 5].iter().fold(UPoly::constant(&f, 1), |p, &r| p.mul(&UPoly::new(&f, vec![r, 1])));
        assert_eq!(a.charpoly(), want);
    }
}
