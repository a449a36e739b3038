//! The finite algebra k[x, y]/(r0, r1) when the leading terms of r0, r1 are
//! coprime pure powers for a weighted order.

use std::collections::BTreeMap;

use super::SurfaceError;
use crate::algebra::{Fe, Field, FqPoly, Mat};

#[derive(Clone, Debug)]
pub struct Quotient {
    field: Field,
    weights: (u32, u32),
    /// x^a = tail_x, y^b = tail_y in the quotient.
    a: u32,
    b: u32,
    tail_x: Vec<((u32, u32), Fe)>,
    tail_y: Vec<((u32, u32), Fe)>,
    basis: Vec<(u32, u32)>,
    squares: Vec<Vec<Fe>>,
}

type Key = (u32, u32, u32);

impl Quotient {
    /// Order key: weighted degree, then y-degree.
    fn key(&self, (i, j): (u32, u32)) -> Key {
        (i * self.weights.0 + j * self.weights.1, j, i)
    }

    pub fn new(r0: &FqPoly, r1: &FqPoly, weights: (u32, u32)) -> Result<Self, SurfaceError> {
        let field = r0.field().clone();
        let mut q = Quotient {
            field: field.clone(),
            weights,
            a: 0,
            b: 0,
            tail_x: vec![],
            tail_y: vec![],
            basis: vec![],
            squares: vec![],
        };
        let mut leads = Vec::new();
        for r in [r0, r1] {
            let (lead, c) = r
                .terms()
                .map(|(e, &c)| ((e[0], e[1]), c))
                .max_by_key(|&(e, _)| q.key(e))
                .ok_or_else(|| SurfaceError::LeadingTerm("zero relation".into()))?;
            let inv = field.inv(c);
            let tail: Vec<_> = r
                .terms()
                .map(|(e, &v)| ((e[0], e[1]), field.neg(field.mul(v, inv))))
                .filter(|&(e, _)| e != lead)
                .collect();
            leads.push((lead, tail));
        }
        if leads[0].0 .0 == 0 {
            leads.swap(0, 1);
        }
        let ((a, a0), tx) = leads[0].clone();
        let ((b0, b), ty) = leads[1].clone();
        if a0 != 0 || b0 != 0 || a == 0 || b == 0 {
            return Err(SurfaceError::LeadingTerm(format!("leading terms x^{a}*y^{a0}, x^{b0}*y^{b}")));
        }
        q.a = a;
        q.b = b;
        q.tail_x = tx;
        q.tail_y = ty;
        q.basis = (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).collect();
        q.squares = (0..q.basis.len())
            .map(|k| {
                let (i, j) = q.basis[k];
                q.reduce_map(BTreeMap::from([((2 * i, 2 * j), 1)]))
            })
            .collect();
        Ok(q)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(u32, u32)] {
        &self.basis
    }

    pub fn leading_exponents(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    fn reduce_map(&self, mut m: BTreeMap<(u32, u32), Fe>) -> Vec<Fe> {
        let f = &self.field;
        let mut out = vec![0; self.basis.len()];
        loop {
            m.retain(|_, v| *v != 0);
            let Some(&e) = m.keys().filter(|&&(i, j)| i >= self.a || j >= self.b).max_by_key(|&&e| self.key(e)) else {
                break;
            };
            let c = m.remove(&e).unwrap();
            let (shift, tail) =
                if e.0 >= self.a { ((e.0 - self.a, e.1), &self.tail_x) } else { ((e.0, e.1 - self.b), &self.tail_y) };
            for &((i, j), v) in tail {
                let k = (i + shift.0, j + shift.1);
                let cur = m.get(&k).copied().unwrap_or(0);
                m.insert(k, f.add(cur, f.mul(c, v)));
            }
        }
        for ((i, j), v) in m {
            out[(i * self.b + j) as usize] = v;
        }
        out
    }

    pub fn normal_form(&self, p: &FqPoly) -> Vec<Fe> {
        self.reduce_map(p.terms().map(|(e, &c)| ((e[0], e[1]), c)).collect())
    }

    /// Matrix of multiplication by p; column k is p * basis[k].
    pub fn mult_matrix(&self, p: &FqPoly) -> Mat {
        let n = self.dim();
        let mut m = Mat::zero(&self.field, n, n);
        for (k, &(i, j)) in self.basis.iter().enumerate() {
            let mut prod = BTreeMap::new();
            for (e, &c) in p.terms() {
                let key = (e[0] + i, e[1] + j);
                let cur = prod.get(&key).copied().unwrap_or(0);
                prod.insert(key, self.field.add(cur, c));
            }
            for (r, v) in self.reduce_map(prod).into_iter().enumerate() {
                m.set(r, k, v);
            }
        }
        m
    }

    /// v -> v^2 in characteristic 2.
    pub fn square(&self, v: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let mut out = vec![0; self.dim()];
        for (k, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c2 = f.mul(c, c);
            for (o, &s) in out.iter_mut().zip(&self.squares[k]) {
                *o = f.add(*o, f.mul(c2, s));
            }
        }
        out
    }

    /// The q-power map, linear over F_q.
    pub fn frobenius_matrix(&self) -> Mat {
        assert_eq!(self.field.p(), 2);
        let n = self.dim();
        let mut m = Mat::zero(&self.field, n, n);
        for k in 0..n {
            let mut v = vec![0; n];
            v[k] = 1;
            for _ in 0..self.field.e() {
                v = self.square(&v);
            }
            for (r, x) in v.into_iter().enumerate() {
                m.set(r, k, x);
            }
        }
        m
    }

    /// Number of geometric points of Spec of the algebra (reduced quotient).
    pub fn point_count(&self) -> usize {
        let phi = self.frobenius_matrix();
        let mut k = 1u64;
        let mut qk = self.field.q();
        while qk < self.dim() as u128 {
            qk = qk.saturating_mul(self.field.q());
            k += 1;
        }
        phi.pow(k).rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_are_associative() {
        let f = Field::binary(3);
        let v = ["x", "y"];
        let hx = FqPoly::from_terms(&f, &v, [(vec![0, 4], 1), (vec![2, 0], 3), (vec![0, 1], 5), (vec![0, 0], 1)]);
        let hy = FqPoly::from_terms(&f, &v, [(vec![4, 0], 1), (vec![0, 2], 2), (vec![1, 0], 7)]);
        let q = Quotient::new(&hx, &hy, (1, 1)).unwrap();
        assert_eq!(q.dim(), 16);
        let x = FqPoly::var(&f, &v, 0);
        let y = FqPoly::var(&f, &v, 1);
        let mx = q.mult_matrix(&x);
        let my = q.mult_matrix(&y);
        assert_eq!(mx.mul(&my), my.mul(&mx));
        // relations act as zero
        assert!(q.normal_form(&hx).iter().all(|&c| c == 0));
        assert!(q.normal_form(&hy.mul(&x)).iter().all(|&c| c == 0));
        let p = x.mul(&y).add(&x.pow(3));
        assert_eq!(q.mult_matrix(&p), mx.mul(&my).add(&mx.pow(3)));
    }
}
