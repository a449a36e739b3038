//! Sparse polynomials in a few named variables over a finite field.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::field::{Embedding, Fe, Field};
use super::upoly::UPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("not a square: odd exponent in {0}")]
    NotASquare(String),
    #[error("not a p-th power: exponent in {0} not divisible by p")]
    NotPthPower(String),
    #[error("variable sets differ")]
    VarMismatch,
    #[error("division is not exact")]
    Inexact,
    #[error("all partial derivatives vanish")]
    AllPartialsZero,
    #[error("polynomial lies in k[x^p, y^p]; eta_0 is undefined")]
    EtaUndefined,
    #[error("unsupported characteristic {0}")]
    Unsupported(u32),
}

/// Exponent vector -> nonzero coefficient. BTreeMap order is lex with the
/// first variable most significant; graded lex is used for display.
#[derive(Clone, PartialEq, Eq)]
pub struct FqPoly {
    field: Field,
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Fe>,
}

/// JSON form: variables plus [exponents..., element] rows.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<(Vec<u32>, String)>,
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

impl FqPoly {
    pub fn zero(field: &Field, vars: &[&str]) -> Self {
        FqPoly { field: field.clone(), vars: vars.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() }
    }

    fn empty_like(&self) -> Self {
        FqPoly { field: self.field.clone(), vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Fe)>>(field: &Field, vars: &[&str], it: I) -> Self {
        let mut p = Self::zero(field, vars);
        for (e, c) in it {
            assert_eq!(e.len(), vars.len(), "exponent arity");
            p.add_term(e, c);
        }
        p
    }

    pub fn constant(field: &Field, vars: &[&str], c: Fe) -> Self {
        Self::from_terms(field, vars, [(vec![0; vars.len()], c)])
    }

    pub fn var(field: &Field, vars: &[&str], k: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[k] = 1;
        Self::from_terms(field, vars, [(e, 1)])
    }

    pub fn monomial(&self, e: Vec<u32>, c: Fe) -> Self {
        let mut p = self.empty_like();
        p.add_term(e, c);
        p
    }

    pub fn constant_like(&self, c: Fe) -> Self {
        self.monomial(vec![0; self.nvars()], c)
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Fe) {
        if c == 0 {
            return;
        }
        let f = &self.field;
        let v = f.add(self.terms.get(&e).copied().unwrap_or(0), c);
        if v == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Fe)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Fe {
        self.terms.get(e).copied().unwrap_or(0)
    }

    /// Coefficient of x^i y^j in a bivariate polynomial.
    pub fn c2(&self, i: u32, j: u32) -> Fe {
        self.coeff(&[i, j])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|e| e.iter().sum::<u32>() as i64).max().unwrap_or(-1)
    }

    pub fn degree_in(&self, k: usize) -> i64 {
        self.terms.keys().map(|e| e[k] as i64).max().unwrap_or(-1)
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.vars, o.vars, "variable sets differ");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let mut r = self.clone();
        for (e, &c) in &o.terms {
            r.add_term(e.clone(), c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = self.empty_like();
        for (e, &c) in &self.terms {
            r.terms.insert(e.clone(), self.field.neg(c));
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: Fe) -> Self {
        let mut r = self.empty_like();
        for (e, &c) in &self.terms {
            r.add_term(e.clone(), self.field.mul(a, c));
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let f = &self.field;
        let mut r = self.empty_like();
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, f.mul(c1, c2));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = self.constant_like(1);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Formal partial derivative in variable k.
    pub fn partial(&self, k: usize) -> Self {
        let f = &self.field;
        let mut r = self.empty_like();
        for (e, &c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let m = f.from_int(e[k] as i64);
            let mut e2 = e.clone();
            e2[k] -= 1;
            r.add_term(e2, f.mul(m, c));
        }
        r
    }

    /// (d/dx_k)^times.
    pub fn partial_power(&self, k: usize, times: u32) -> Self {
        (0..times).fold(self.clone(), |p, _| p.partial(k))
    }

    /// Square root of an element of k[x_1^2, ..., x_n^2] in characteristic 2.
    pub fn sqrt_poly(&self) -> Result<Self, PolyError> {
        assert_eq!(self.field.p(), 2, "sqrt_poly is a characteristic-2 operation");
        self.root_p_poly().map_err(|e| match e {
            PolyError::NotPthPower(s) => PolyError::NotASquare(s),
            e => e,
        })
    }

    /// p-th root of an element of k[x_1^p, ..., x_n^p].
    pub fn root_p_poly(&self) -> Result<Self, PolyError> {
        let f = &self.field;
        let p = f.p();
        let mut r = self.empty_like();
        for (e, &c) in &self.terms {
            if e.iter().any(|&k| k % p != 0) {
                return Err(PolyError::NotPthPower(self.term_string(e, c)));
            }
            r.terms.insert(e.iter().map(|&k| k / p).collect(), f.root_p(c));
        }
        Ok(r)
    }

    /// Apply the Frobenius to every coefficient.
    pub fn frob_coeffs(&self) -> Self {
        self.map_coeffs(&self.field, |c| self.field.frob(c))
    }

    pub fn map_coeffs<F: Fn(Fe) -> Fe>(&self, to: &Field, g: F) -> Self {
        let mut r = FqPoly { field: to.clone(), vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, &c) in &self.terms {
            r.add_term(e.clone(), g(c));
        }
        r
    }

    /// Move coefficients into a larger field.
    pub fn embed(&self, emb: &Embedding) -> Self {
        self.map_coeffs(&emb.to, |c| emb.apply(c))
    }

    pub fn eval(&self, pt: &[Fe]) -> Fe {
        let f = &self.field;
        let mut acc = 0;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (k, &x) in e.iter().zip(pt) {
                t = f.mul(t, f.pow(x, *k as u128));
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Substitute polynomials for each variable.
    pub fn compose(&self, subs: &[FqPoly]) -> FqPoly {
        assert_eq!(subs.len(), self.nvars());
        let target = &subs[0];
        let mut acc = target.empty_like();
        for (e, &c) in &self.terms {
            let mut t = target.constant_like(c);
            for (k, &d) in e.iter().enumerate() {
                if d > 0 {
                    t = t.mul(&subs[k].pow(d));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Replace x_k by x_k + a_k.
    pub fn shift(&self, a: &[Fe]) -> FqPoly {
        let subs: Vec<FqPoly> = (0..self.nvars())
            .map(|k| {
                let mut e = vec![0; self.nvars()];
                e[k] = 1;
                self.monomial(e, 1).add(&self.constant_like(a[k]))
            })
            .collect();
        self.compose(&subs)
    }

    /// Restrict a polynomial with one variable to a dense univariate one.
    pub fn to_univariate(&self, k: usize) -> Option<UPoly> {
        let mut c = vec![0; (self.degree_in(k).max(0) + 1) as usize];
        for (e, &v) in &self.terms {
            if e.iter().enumerate().any(|(i, &d)| i != k && d != 0) {
                return None;
            }
            c[e[k] as usize] = v;
        }
        Some(UPoly::new(&self.field, c))
    }

    pub fn from_univariate(u: &UPoly, vars: &[&str], k: usize) -> Self {
        let mut p = Self::zero(u.field(), vars);
        for (i, &c) in u.coeffs().iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[k] = i as u32;
            p.add_term(e, c);
        }
        p
    }

    /// Leading (exponent, coefficient) in lex order.
    pub fn lead(&self) -> Option<(&Vec<u32>, Fe)> {
        self.terms.iter().next_back().map(|(e, &c)| (e, c))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c)),
        }
    }

    /// Exact division; Err if d does not divide self.
    pub fn div_exact(&self, d: &Self) -> Result<Self, PolyError> {
        self.check(d);
        let (de, dc) = d.lead().ok_or(PolyError::Inexact)?;
        let de = de.clone();
        let inv = self.field.inv(dc);
        let mut r = self.clone();
        let mut q = self.empty_like();
        while let Some((e, c)) = r.lead() {
            if e.iter().zip(&de).any(|(a, b)| a < b) {
                return Err(PolyError::Inexact);
            }
            let m: Vec<u32> = e.iter().zip(&de).map(|(a, b)| a - b).collect();
            let t = self.monomial(m, self.field.mul(c, inv));
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Ok(q)
    }

    /// Coefficients in variable k: entry i is the coefficient of x_k^i.
    fn coeffs_in(&self, k: usize) -> Vec<FqPoly> {
        let n = (self.degree_in(k).max(0) + 1) as usize;
        let mut out = vec![self.empty_like(); n];
        for (e, &c) in &self.terms {
            let mut e2 = e.clone();
            e2[k] = 0;
            out[e[k] as usize].add_term(e2, c);
        }
        out
    }

    fn vars_used(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&k| self.terms.keys().any(|e| e[k] > 0)).collect()
    }

    /// Monic (lex) greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        self.check(o);
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        let mut vs = self.vars_used();
        for v in o.vars_used() {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs.sort_unstable();
        gcd_rec(self, o, &vs).monic()
    }

    /// Graded-lex sorted terms, highest first.
    pub fn sorted_terms(&self) -> Vec<(Vec<u32>, Fe)> {
        let mut v: Vec<(Vec<u32>, Fe)> = self.terms.iter().map(|(e, &c)| (e.clone(), c)).collect();
        v.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(&a.0))
        });
        v
    }

    fn term_string(&self, e: &[u32], c: Fe) -> String {
        let mono: Vec<String> = e
            .iter()
            .zip(&self.vars)
            .filter(|(&k, _)| k > 0)
            .map(|(&k, v)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
            .collect();
        let cs = self.field.encode(c);
        if mono.is_empty() {
            cs
        } else if c == 1 {
            mono.join("*")
        } else {
            format!("[{}]*{}", cs, mono.join("*"))
        }
    }

    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.sorted_terms().iter().map(|(e, c)| self.term_string(e, *c)).collect::<Vec<_>>().join(" + ")
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.vars.clone(),
            terms: self.sorted_terms().into_iter().map(|(e, c)| (e, self.field.encode(c))).collect(),
        }
    }

    pub fn from_json(field: &Field, j: &PolyJson) -> Result<Self, super::field::FieldError> {
        let vars: Vec<&str> = j.vars.iter().map(|s| s.as_str()).collect();
        let mut p = Self::zero(field, &vars);
        for (e, s) in &j.terms {
            p.add_term(e.clone(), field.decode(s)?);
        }
        Ok(p)
    }
}

fn content_in(p: &FqPoly, k: usize, rest: &[usize]) -> FqPoly {
    p.coeffs_in(k).into_iter().filter(|c| !c.is_zero()).fold(p.empty_like(), |g, c| {
        if g.is_zero() {
            c.monic()
        } else {
            gcd_rec(&g, &c, rest).monic()
        }
    })
}

fn pseudo_rem(a: &FqPoly, b: &FqPoly, k: usize) -> FqPoly {
    let db = b.degree_in(k);
    let bc = b.coeffs_in(k);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(k) >= db {
        let dr = r.degree_in(k);
        let lr = r.coeffs_in(k)[dr as usize].clone();
        let mut e = vec![0; a.nvars()];
        e[k] = (dr - db) as u32;
        r = r.mul(&lb).sub(&lr.mul(&a.monomial(e, 1)).mul(b));
    }
    r
}

/// Recursive primitive PRS over the listed variables.
fn gcd_rec(a: &FqPoly, b: &FqPoly, vs: &[usize]) -> FqPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() && b.is_constant() {
        return a.constant_like(1);
    }
    let Some((&k, rest)) = vs.split_last() else {
        return a.constant_like(1);
    };
    let ca = content_in(a, k, rest);
    let cb = content_in(b, k, rest);
    let c = gcd_rec(&ca, &cb, rest).monic();
    let mut x = a.div_exact(&ca).expect("content divides");
    let mut y = b.div_exact(&cb).expect("content divides");
    if x.degree_in(k) < y.degree_in(k) {
        std::mem::swap(&mut x, &mut y);
    }
    loop {
        if y.degree_in(k) == 0 {
            return c;
        }
        let r = pseudo_rem(&x, &y, k);
        if r.is_zero() {
            return y.mul(&c);
        }
        x = y;
        let cr = content_in(&r, k, rest);
        y = r.div_exact(&cr).expect("content divides");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const XY: [&str; 2] = ["x", "y"];

    fn rand_poly(f: &Field, vars: &[&str], deg: u32, n: usize, rng: &mut ChaCha8Rng) -> FqPoly {
        let mut p = FqPoly::zero(f, vars);
        for _ in 0..n {
            let e: Vec<u32> = (0..vars.len()).map(|_| rng.gen_range(0..=deg)).collect();
            p.add_term(e, f.random(rng));
        }
        p
    }

    #[test]
    fn partials_in_char_two() {
        let f = Field::binary(2);
        let x4y = FqPoly::from_terms(&f, &XY, [(vec![4, 1], 1)]);
        assert!(x4y.partial(0).is_zero());
        assert!(FqPoly::constant(&f, &XY, 3).partial(1).is_zero());
    }

    #[test]
    fn square_roots() {
        let f = Field::binary(4);
        let x2 = FqPoly::from_terms(&f, &XY, [(vec![2, 0], 1)]);
        assert_eq!(x2.sqrt_poly().unwrap(), FqPoly::var(&f, &XY, 0));
        let c = 7;
        let p = FqPoly::from_terms(&f, &XY, [(vec![2, 4], f.mul(c, c))]);
        assert_eq!(p.sqrt_poly().unwrap(), FqPoly::from_terms(&f, &XY, [(vec![1, 2], c)]));
        let x3 = FqPoly::from_terms(&f, &XY, [(vec![3, 0], 1)]);
        assert!(matches!(x3.sqrt_poly(), Err(PolyError::NotASquare(_))));
    }

    #[test]
    fn shift_is_invertible() {
        let f = Field::binary(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = rand_poly(&f, &XY, 4, 6, &mut rng);
        let a = [f.random(&mut rng), f.random(&mut rng)];
        let na = [f.neg(a[0]), f.neg(a[1])];
        assert_eq!(p.shift(&a).shift(&na), p);
        let pt = [f.random(&mut rng), f.random(&mut rng)];
        assert_eq!(p.shift(&a).eval(&pt), p.eval(&[f.add(pt[0], a[0]), f.add(pt[1], a[1])]));
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for f in [Field::binary(2), Field::new(3, 1).unwrap()] {
            for vars in [&["x", "y"][..], &["t", "x", "y"][..]] {
                for _ in 0..10 {
                    let g = rand_poly(&f, vars, 2, 3, &mut rng);
                    let a = rand_poly(&f, vars, 2, 3, &mut rng);
                    let b = rand_poly(&f, vars, 2, 3, &mut rng);
                    if g.is_zero() || a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let h = a.mul(&g).gcd(&b.mul(&g));
                    assert!(h.div_exact(&g.monic()).is_ok(), "{h:?} not a multiple of {g:?}");
                    assert!(a.mul(&g).div_exact(&h).is_ok());
                    assert!(b.mul(&g).div_exact(&h).is_ok());
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = Field::binary(5);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = rand_poly(&f, &XY, 5, 8, &mut rng);
        assert_eq!(FqPoly::from_json(&f, &p.to_json()).unwrap(), p);
    }
}
