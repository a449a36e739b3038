//! Dense univariate polynomials over a finite field and their factorization
//! (squarefree, distinct-degree, equal-degree splitting).

use std::fmt;

use rand::{Rng, SeedableRng};

use super::field::{Embedding, Fe, Field, FieldError};

#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    field: Field,
    /// Coefficients, constant term first, no trailing zeros.
    c: Vec<Fe>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| format!("{}*t^{}", self.field.encode(a), i))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl UPoly {
    pub fn new(field: &Field, mut c: Vec<Fe>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        UPoly { field: field.clone(), c }
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: &Field, a: Fe) -> Self {
        Self::new(field, vec![a])
    }

    /// c * t^k.
    pub fn monomial(field: &Field, a: Fe, k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = a;
        Self::new(field, c)
    }

    /// t.
    pub fn t(field: &Field) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lead(&self) -> Fe {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        Self::new(f, (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        Self::new(f, (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn scale(&self, a: Fe) -> Self {
        Self::new(&self.field, self.c.iter().map(|&x| self.field.mul(x, a)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut r = vec![0; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                r[i + j] = f.add(r[i + j], f.mul(a, b));
            }
        }
        Self::new(f, r)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::constant(&self.field, 1);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = &self.field;
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        if r.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let inv = f.inv(d.lead());
        let mut q = vec![0; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dd], inv);
            q[k] = c;
            if c != 0 {
                for (i, &di) in d.c.iter().enumerate() {
                    r[k + i] = f.sub(r[k + i], f.mul(c, di));
                }
            }
        }
        r.truncate(dd);
        (Self::new(f, q), Self::new(f, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()))
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        Self::new(f, (1..self.c.len()).map(|i| f.mul(f.from_int(i as i64), self.c[i])).collect())
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
    }

    pub fn mulmod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    /// self^k mod m.
    pub fn powmod(&self, mut k: u128, m: &Self) -> Self {
        let mut r = Self::constant(&self.field, 1).rem(m);
        let mut b = self.rem(m);
        while k > 0 {
            if k & 1 == 1 {
                r = r.mulmod(&b, m);
            }
            b = b.mulmod(&b, m);
            k >>= 1;
        }
        r
    }

    /// p-th root of a polynomial in t^p.
    pub fn root_p(&self) -> Option<Self> {
        let f = &self.field;
        let p = f.p() as usize;
        if self.c.iter().enumerate().any(|(i, &a)| a != 0 && i % p != 0) {
            return None;
        }
        Some(Self::new(f, self.c.iter().step_by(p).map(|&a| f.root_p(a)).collect()))
    }

    /// Squarefree decomposition of a monic polynomial: pairs (s_i, i) with
    /// self = prod s_i^i, each s_i squarefree, pairwise coprime, nonconstant.
    pub fn squarefree(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        self.squarefree_into(1, &mut out);
        // merge equal multiplicities
        out.sort_by_key(|(_, m)| *m);
        let mut merged: Vec<(UPoly, u32)> = Vec::new();
        for (s, m) in out {
            match merged.last_mut() {
                Some((t, k)) if *k == m => *t = t.mul(&s),
                _ => merged.push((s, m)),
            }
        }
        merged
    }

    fn squarefree_into(&self, scale: u32, out: &mut Vec<(UPoly, u32)>) {
        let a = self.monic();
        if a.degree() <= 0 {
            return;
        }
        let p = a.field.p();
        let d = a.derivative();
        if d.is_zero() {
            a.root_p().expect("zero derivative means a p-th power").squarefree_into(scale * p, out);
            return;
        }
        // Yun-style loop for the part with multiplicities prime to p
        let mut c = a.gcd(&d);
        let mut w = a.divrem(&c).0;
        let mut i = 1;
        while w.degree() > 0 {
            let y = w.gcd(&c);
            let z = w.divrem(&y).0;
            if z.degree() > 0 {
                out.push((z.monic(), i * scale));
            }
            i += 1;
            w = y;
            c = c.divrem(&w).0;
        }
        if c.degree() > 0 {
            c.root_p().expect("remaining cofactor is a p-th power").squarefree_into(scale * p, out);
        }
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn distinct_degree(&self) -> Vec<(UPoly, u32)> {
        let f = &self.field;
        let q = f.q();
        let mut out = Vec::new();
        let mut rest = self.monic();
        let t = Self::t(f);
        let mut h = t.rem(&rest);
        let mut d = 0;
        while rest.degree() >= 2 * (d + 1) as isize {
            d += 1;
            h = h.powmod(q, &rest);
            let g = rest.gcd(&h.sub(&t));
            if g.degree() > 0 {
                out.push((g.clone(), d));
                rest = rest.divrem(&g).0;
                h = h.rem(&rest);
            }
        }
        if rest.degree() > 0 {
            let dg = rest.degree() as u32;
            out.push((rest, dg));
        }
        out
    }

    /// Split a monic squarefree product of irreducibles of degree d.
    pub fn equal_degree<R: Rng + ?Sized>(&self, d: u32, rng: &mut R) -> Vec<UPoly> {
        let n = self.degree();
        if n <= d as isize {
            return vec![self.monic()];
        }
        let f = &self.field;
        loop {
            let a = Self::new(f, (0..n as usize).map(|_| f.random(rng)).collect());
            if a.degree() <= 0 {
                continue;
            }
            let b = if f.p() == 2 {
                // trace map from F_{q^d} down to F_2
                let mut s = a.rem(self);
                let mut acc = s.clone();
                for _ in 1..(f.e() * d) {
                    s = s.mulmod(&s, self);
                    acc = acc.add(&s);
                }
                acc
            } else {
                let exp = (f.q().pow(d) - 1) / 2;
                a.powmod(exp, self).sub(&Self::constant(f, 1))
            };
            let g = self.gcd(&b);
            if g.degree() > 0 && g.degree() < n {
                let h = self.divrem(&g).0;
                let mut out = g.equal_degree(d, rng);
                out.extend(h.equal_degree(d, rng));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients). The leading coefficient is dropped.
    pub fn factor<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        for (s, m) in self.squarefree() {
            for (g, d) in s.distinct_degree() {
                for h in g.equal_degree(d, rng) {
                    out.push((h, m));
                }
            }
        }
        out.sort_by(|a, b| (a.0.degree(), &a.0.c, a.1).cmp(&(b.0.degree(), &b.0.c, b.1)));
        out
    }

    /// Distinct roots in the coefficient field, sorted.
    pub fn roots<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Fe> {
        if self.degree() <= 0 {
            return Vec::new();
        }
        let f = &self.field;
        let sq: UPoly = self.squarefree().into_iter().fold(Self::constant(f, 1), |a, (s, _)| a.mul(&s));
        // the linear part of sq is gcd(sq, t^q - t)
        let t = Self::t(f);
        let lin = sq.gcd(&t.powmod(f.q(), &sq).sub(&t));
        let mut r: Vec<Fe> = lin.equal_degree(1, rng).iter().map(|l| f.neg(l.coeff(0))).collect();
        r.sort_unstable();
        r
    }
}

/// An embedding of `from` into `to`, sending the generator to the smallest
/// root of its modulus.
pub fn embed_field(from: &Field, to: &Field) -> Result<Embedding, FieldError> {
    if from == to {
        return Ok(Embedding::identity(from));
    }
    if from.p() != to.p() || to.e() % from.e() != 0 {
        return Err(FieldError::NoEmbedding(from.to_string(), to.to_string()));
    }
    let m = UPoly::new(to, from.spec().modulus.iter().map(|&c| to.from_int(c as i64)).collect());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6b756d6d);
    let r = *m.roots(&mut rng).first().ok_or_else(|| FieldError::NoEmbedding(from.to_string(), to.to_string()))?;
    Embedding::with_root(from, to, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn embeddings_respect_arithmetic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (a, b) in [(2, 12), (4, 12), (5, 10), (8, 120)] {
            let (fa, fb) = (Field::binary(a), Field::binary(b));
            let emb = embed_field(&fa, &fb).unwrap();
            for _ in 0..50 {
                let (x, y) = (fa.random(&mut rng), fa.random(&mut rng));
                assert_eq!(emb.apply(fa.mul(x, y)), fb.mul(emb.apply(x), emb.apply(y)));
                assert_eq!(emb.apply(fa.add(x, y)), fb.add(emb.apply(x), emb.apply(y)));
            }
        }
        assert!(embed_field(&Field::binary(3), &Field::binary(8)).is_err());
    }

    fn random_monic(f: &Field, d: usize, rng: &mut ChaCha8Rng) -> UPoly {
        let mut c: Vec<Fe> = (0..d).map(|_| f.random(rng)).collect();
        c.push(1);
        UPoly::new(f, c)
    }

    #[test]
    fn x2_plus_x() {
        let f = Field::binary(1);
        let p = UPoly::new(&f, vec![0, 1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let fac = p.factor(&mut rng);
        assert_eq!(fac, vec![(UPoly::new(&f, vec![0, 1]), 1), (UPoly::new(&f, vec![1, 1]), 1)]);
    }

    #[test]
    fn square_in_char_two() {
        let f = Field::binary(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let c = f.random(&mut rng);
            let p = UPoly::new(&f, vec![c, 0, 1]);
            let r = f.sqrt(c);
            assert_eq!(p.factor(&mut rng), vec![(UPoly::new(&f, vec![r, 1]), 2)]);
        }
    }

    #[test]
    fn factor_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for f in [Field::binary(1), Field::binary(3), Field::binary(6), Field::new(3, 2).unwrap(), Field::binary(40)] {
            for _ in 0..15 {
                let mut p = UPoly::constant(&f, 1);
                for _ in 0..3 {
                    let d = rng.gen_range(1..4);
                    let k = rng.gen_range(1..4);
                    p = p.mul(&random_monic(&f, d, &mut rng).pow(k));
                }
                let fac = p.factor(&mut rng);
                let back = fac.iter().fold(UPoly::constant(&f, 1), |a, (g, m)| a.mul(&g.pow(*m)));
                assert_eq!(back, p);
                for (g, _) in &fac {
                    // irreducible: a single distinct-degree block of full degree
                    let dd = g.distinct_degree();
                    assert_eq!(dd.len(), 1);
                    assert_eq!(dd[0].1 as isize, g.degree());
                }
            }
        }
    }

    #[test]
    fn roots_of_product_of_linears() {
        let f = Field::binary(8);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut want: Vec<Fe> = (0..6).map(|_| f.random(&mut rng)).collect();
        let p = want.iter().fold(UPoly::constant(&f, 1), |a, &r| a.mul(&UPoly::new(&f, vec![r, 1])));
        want.sort_unstable();
        want.dedup();
        assert_eq!(p.roots(&mut rng), want);
    }
}
