//! The Cartier operator on forms g * eta_0 of a surface w^p = H(x, y), the
//! Z_i filtration of a finite monomial span, and the normalization gcd check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{Fe, Field};
use super::linalg::Mat;
use super::mpoly::{FqPoly, PolyError};
use super::upoly::UPoly;

/// (c_0 + c_1 w + ... + c_{p-1} w^{p-1}) * eta_0 on w^p = h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormElement {
    pub coeffs: Vec<FqPoly>,
    pub h: FqPoly,
}

impl FormElement {
    /// The w^0 part.
    pub fn a(&self) -> &FqPoly {
        &self.coeffs[0]
    }

    /// The w^1 part.
    pub fn b(&self) -> &FqPoly {
        &self.coeffs[1]
    }

    pub fn polynomial(g: FqPoly, h: &FqPoly) -> Self {
        let p = h.field().p() as usize;
        let mut coeffs = vec![g.constant_like(0); p];
        coeffs[0] = g;
        FormElement { coeffs, h: h.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        FormElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect(), h: self.h.clone() }
    }

    pub fn scale(&self, c: Fe) -> Self {
        FormElement { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(), h: self.h.clone() }
    }
}

pub fn partials(f: &FqPoly) -> (FqPoly, FqPoly) {
    (f.partial(0), f.partial(1))
}

/// J_{(p-1,p-1)}: the terms x^{pa+p-1} y^{pb+p-1} of J divided by x^{p-1} y^{p-1}.
pub fn corner_part(j: &FqPoly) -> FqPoly {
    let p = j.field().p();
    let mut r = j.constant_like(0);
    for (e, &c) in j.terms() {
        if e[0] % p == p - 1 && e[1] % p == p - 1 {
            r.add_term(vec![e[0] - (p - 1), e[1] - (p - 1)], c);
        }
    }
    r
}

/// C(g eta_0) = (w sqrt(g_xy) + sqrt((gH)_xy)) eta_0 in characteristic 2,
/// with J_xy = d/dx d/dy J.
pub fn cartier_p2(g: &FqPoly, h: &FqPoly) -> FormElement {
    assert_eq!(g.field().p(), 2, "cartier_p2 needs characteristic 2");
    let gxy = g.partial(0).partial(1);
    let ghxy = g.mul(h).partial(0).partial(1);
    FormElement {
        coeffs: vec![
            ghxy.sqrt_poly().expect("d/dx d/dy lands in k[x^2, y^2]"),
            gxy.sqrt_poly().expect("d/dx d/dy lands in k[x^2, y^2]"),
        ],
        h: h.clone(),
    }
}

/// sum_{a=0}^{p-1} w^{p-1-a} ((g H^a)_{(p-1,p-1)})^{1/p}.
pub fn cartier_general(g: &FqPoly, h: &FqPoly) -> Result<FormElement, PolyError> {
    let p = h.field().p();
    if ![2, 3, 5].contains(&p) {
        return Err(PolyError::Unsupported(p));
    }
    if h.terms().all(|(e, _)| e.iter().all(|&k| k % p == 0)) {
        return Err(PolyError::EtaUndefined);
    }
    let mut coeffs = vec![g.constant_like(0); p as usize];
    let mut gha = g.clone();
    for a in 0..p {
        coeffs[(p - 1 - a) as usize] = corner_part(&gha).root_p_poly()?;
        gha = gha.mul(h);
    }
    Ok(FormElement { coeffs, h: h.clone() })
}

/// dF = (F_x H_y - F_y H_x) eta_0; returns the coefficient.
pub fn differential(f: &FqPoly, h: &FqPoly) -> FqPoly {
    let (fx, fy) = partials(f);
    let (hx, hy) = partials(h);
    fx.mul(&hy).sub(&fy.mul(&hx))
}

/// Both identities (d/dt)^{p-1}(F_t F^a) = 0 for a <= p-2 and
/// (d/dt)^{p-1}(F_t F^{p-1}) = -F_t^p.
pub fn check_p1_derivative(f: &UPoly) -> bool {
    let p = f.field().p();
    let ft = f.derivative();
    let dp1 = |u: &UPoly| (0..p - 1).fold(u.clone(), |v, _| v.derivative());
    let mut fa = UPoly::constant(f.field(), 1);
    for _ in 0..p - 1 {
        if !dp1(&ft.mul(&fa)).is_zero() {
            return false;
        }
        fa = fa.mul(f);
    }
    let lhs = dp1(&ft.mul(&fa));
    let rhs = UPoly::zero(f.field()).sub(&ft.pow(p));
    lhs == rhs
}

/// f_ij = sum_{i1+i2=2i+1, j1+j2=2j+1} h_{i1 j1} g_{i2 j2}.
pub fn f_ij(g: &FqPoly, h: &FqPoly, i: u32, j: u32) -> Fe {
    let f = g.field();
    let mut acc = 0;
    for (eh, &ch) in h.terms() {
        let (i1, j1) = (eh[0], eh[1]);
        if i1 > 2 * i + 1 || j1 > 2 * j + 1 {
            continue;
        }
        acc = f.add(acc, f.mul(ch, g.c2(2 * i + 1 - i1, 2 * j + 1 - j1)));
    }
    acc
}

/// Row k, column l: f_{out[l]} for g = the monomial g_basis[k].
pub fn f_ij_table(g_basis: &[(u32, u32)], out: &[(u32, u32)], h: &FqPoly) -> Mat {
    let mut m = Mat::zero(h.field(), g_basis.len(), out.len());
    for (k, &(a, b)) in g_basis.iter().enumerate() {
        let g = h.monomial(vec![a, b], 1);
        for (l, &(i, j)) in out.iter().enumerate() {
            m.set(k, l, f_ij(&g, h, i, j));
        }
    }
    m
}

/// span{x^i y^j : (i, j) in monomials} * eta_0 (+ k w eta_0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambient {
    pub monomials: Vec<(u32, u32)>,
}

impl Ambient {
    /// I_1 for the class-4 family in (x, y).
    pub fn class4() -> Self {
        Ambient { monomials: vec![(0, 0), (1, 0), (2, 0), (0, 1), (0, 2), (1, 1)] }
    }

    /// I_1 for the class-2 family in (x, t).
    pub fn class2() -> Self {
        Ambient { monomials: vec![(1, 0), (0, 0), (0, 1), (0, 2), (0, 3), (0, 4)] }
    }

    /// Coordinates have length monomials + 1; the last one is w.
    pub fn dim(&self) -> usize {
        self.monomials.len() + 1
    }

    /// Coordinates of a form: ambient monomials, then w, then one slot per
    /// entry of `outside` (extended on demand).
    fn coords(&self, form: &FormElement, outside: &mut Vec<(bool, Vec<u32>)>) -> Vec<(usize, Fe)> {
        let m = self.monomials.len();
        let mut v = Vec::new();
        let mut slot = |key: (bool, Vec<u32>)| match outside.iter().position(|k| *k == key) {
            Some(k) => m + 1 + k,
            None => {
                outside.push(key);
                m + outside.len()
            }
        };
        for (e, &c) in form.a().terms() {
            match self.monomials.iter().position(|&(i, j)| e[..] == [i, j]) {
                Some(k) => v.push((k, c)),
                None => v.push((slot((false, e.clone())), c)),
            }
        }
        for (e, &c) in form.b().terms() {
            if e.iter().all(|&k| k == 0) {
                v.push((m, c));
            } else {
                v.push((slot((true, e.clone())), c));
            }
        }
        v
    }
}

/// Bases of Z_0 ⊇ Z_1 ⊇ ... ⊇ Z_depth inside the ambient span, as coordinate
/// vectors (monomial coordinates, then w). Z_1 is the polynomial part and
/// Z_{i+1} = {v in Z_i : C(v) in Z_i}. Terms of C(v) outside the span count
/// as lying outside every Z_i.
///
/// C(sum c_k b_k) = sum sqrt(c_k) C(b_k), so for a functional l killing Z_i the
/// condition sum sqrt(c_k) l(C b_k) = 0 is squared into the linear equation
/// sum c_k l(C b_k)^2 = 0.
pub fn z_filtration(h: &FqPoly, ambient: &Ambient, depth: usize) -> Vec<Vec<Vec<Fe>>> {
    let f = h.field().clone();
    assert_eq!(f.p(), 2, "z_filtration is implemented in characteristic 2");
    let m = ambient.monomials.len();
    let n = ambient.dim();
    // C(x^e eta_0) for each ambient monomial, in extended coordinates
    let mut outside = Vec::new();
    let sparse: Vec<Vec<(usize, Fe)>> = ambient
        .monomials
        .iter()
        .map(|&(i, j)| ambient.coords(&cartier_p2(&h.monomial(vec![i, j], 1), h), &mut outside))
        .collect();
    let big = n + outside.len();
    let cmon: Vec<Vec<Fe>> = sparse
        .iter()
        .map(|s| {
            let mut v = vec![0; big];
            for &(k, c) in s {
                v[k] = c;
            }
            v
        })
        .collect();
    let apply_c = |v: &[Fe]| -> Vec<Fe> {
        let mut out = vec![0; big];
        for (k, &c) in v[..m].iter().enumerate() {
            if c == 0 {
                continue;
            }
            let s = f.sqrt(c);
            for (o, &x) in out.iter_mut().zip(&cmon[k]) {
                *o = f.add(*o, f.mul(s, x));
            }
        }
        out
    };
    let unit = |k: usize| {
        let mut v = vec![0; n];
        v[k] = 1;
        v
    };
    let mut out: Vec<Vec<Vec<Fe>>> = vec![(0..n).map(unit).collect()];
    if depth >= 1 {
        out.push((0..m).map(unit).collect());
    }
    while out.len() <= depth {
        let z = out.last().unwrap();
        if z.is_empty() {
            out.push(Vec::new());
            continue;
        }
        let padded: Vec<Vec<Fe>> = z
            .iter()
            .map(|b| {
                let mut v = b.clone();
                v.resize(big, 0);
                v
            })
            .collect();
        let ann = Mat::from_rows(&f, &padded).nullspace();
        let images: Vec<Vec<Fe>> = z.iter().map(|b| apply_c(b)).collect();
        let rows: Vec<Vec<Fe>> = ann
            .iter()
            .map(|l| {
                images
                    .iter()
                    .map(|cb| {
                        let lv = cb.iter().zip(l).fold(0, |s, (&a, &b)| f.add(s, f.mul(a, b)));
                        f.mul(lv, lv)
                    })
                    .collect()
            })
            .collect();
        let sols = Mat::from_rows(&f, &rows).nullspace();
        let mut next: Vec<Vec<Fe>> = sols
            .iter()
            .map(|c| {
                let mut v = vec![0; n];
                for (ck, b) in c.iter().zip(z) {
                    for (o, &x) in v.iter_mut().zip(b) {
                        *o = f.add(*o, f.mul(*ck, x));
                    }
                }
                v
            })
            .collect();
        // canonical basis
        if !next.is_empty() {
            let mut mm = Mat::from_rows(&f, &next);
            let r = mm.rref().len();
            next = (0..r).map(|i| mm.row(i).to_vec()).collect();
        }
        out.push(next);
    }
    out
}

pub fn z_dimensions(h: &FqPoly, ambient: &Ambient, depth: usize) -> Vec<usize> {
    z_filtration(h, ambient, depth).iter().map(|b| b.len()).collect()
}

/// Complete factorization with a seeded generator for the splitting step.
pub fn factor_univariate(f: &UPoly, seed: u64) -> Vec<(UPoly, u32)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    f.factor(&mut rng)
}

/// Result of comparing the two gcds in the normalization statement.
#[derive(Clone, Debug)]
pub struct GcdCheck {
    /// gcd of the parts f_(i) with i != 0, where f = sum f_(i) x^i over i in {0,1}^m.
    pub g: FqPoly,
    /// gcd of the partial derivatives.
    pub g_prime: FqPoly,
    pub equal: bool,
}

pub fn divisorial_gcd_check(f: &FqPoly) -> Result<GcdCheck, PolyError> {
    assert_eq!(f.field().p(), 2, "divisorial_gcd_check needs characteristic 2");
    let n = f.nvars();
    let partials: Vec<FqPoly> = (0..n).map(|k| f.partial(k)).filter(|p| !p.is_zero()).collect();
    if partials.is_empty() {
        return Err(PolyError::AllPartialsZero);
    }
    let mut parts: std::collections::BTreeMap<Vec<u32>, FqPoly> = Default::default();
    for (e, &c) in f.terms() {
        let parity: Vec<u32> = e.iter().map(|k| k % 2).collect();
        if parity.iter().all(|&k| k == 0) {
            continue;
        }
        let sq: Vec<u32> = e.iter().zip(&parity).map(|(a, b)| a - b).collect();
        parts.entry(parity).or_insert_with(|| f.constant_like(0)).add_term(sq, c);
    }
    let gcd_all = |ps: &mut dyn Iterator<Item = &FqPoly>| ps.fold(f.constant_like(0), |g, p| g.gcd(p));
    let g = gcd_all(&mut parts.values());
    let g_prime = gcd_all(&mut partials.iter());
    let equal = g == g_prime;
    Ok(GcdCheck { g, g_prime, equal })
}

/// Random polynomial with `n` terms of degree at most `deg` in each variable.
pub fn random_poly<R: rand::Rng + ?Sized>(f: &Field, vars: &[&str], deg: u32, n: usize, rng: &mut R) -> FqPoly {
    let mut p = FqPoly::zero(f, vars);
    for _ in 0..n {
        let e: Vec<u32> = (0..vars.len()).map(|_| rng.gen_range(0..=deg)).collect();
        p.add_term(e, f.random(rng));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    const XY: [&str; 2] = ["x", "y"];

    fn class4(f: &Field, h: [Fe; 5]) -> FqPoly {
        let [h30, h21, h12, h03, h11] = h;
        FqPoly::from_terms(
            f,
            &XY,
            [
                (vec![4, 1], 1),
                (vec![1, 4], 1),
                (vec![3, 0], h30),
                (vec![2, 1], h21),
                (vec![1, 2], h12),
                (vec![0, 3], h03),
                (vec![1, 1], h11),
            ],
        )
    }

    #[test]
    fn class4_partials() {
        let f = Field::binary(4);
        let h = class4(&f, [2, 3, 4, 5, 6]);
        let (hx, hy) = partials(&h);
        let want_x = FqPoly::from_terms(&f, &XY, [(vec![0, 4], 1), (vec![2, 0], 2), (vec![0, 2], 4), (vec![0, 1], 6)]);
        let want_y = FqPoly::from_terms(&f, &XY, [(vec![4, 0], 1), (vec![2, 0], 3), (vec![0, 2], 5), (vec![1, 0], 6)]);
        assert_eq!(hx, want_x);
        assert_eq!(hy, want_y);
    }

    #[test]
    fn c_of_eta0_is_sqrt_h11() {
        let f = Field::binary(4);
        let h = class4(&f, [2, 3, 4, 5, 6]);
        let c = cartier_p2(&h.constant_like(1), &h);
        assert!(c.b().is_zero());
        assert_eq!(c.a(), &h.constant_like(f.sqrt(6)));
        let h0 = class4(&f, [2, 3, 4, 5, 0]);
        assert!(cartier_p2(&h0.constant_like(1), &h0).is_zero());
    }

    #[test]
    fn p3_corner_coefficient() {
        let f = Field::new(3, 1).unwrap();
        let h = FqPoly::from_terms(&f, &XY, [(vec![2, 2], 1)]);
        let c = cartier_general(&h.constant_like(1), &h).unwrap();
        // a = 1 term: H_(2,2) = 1 sits on w^{p-2}
        assert_eq!(c.coeffs[1], h.constant_like(1));
        assert!(c.coeffs[0].is_zero() && c.coeffs[2].is_zero());
    }

    #[test]
    fn eta_undefined_and_unsupported() {
        let f = Field::binary(2);
        let h = FqPoly::from_terms(&f, &XY, [(vec![2, 4], 1)]);
        assert_eq!(cartier_general(&h, &h), Err(PolyError::EtaUndefined));
        let f7 = Field::new(7, 1).unwrap();
        let h7 = FqPoly::from_terms(&f7, &XY, [(vec![1, 1], 1)]);
        assert_eq!(cartier_general(&h7, &h7), Err(PolyError::Unsupported(7)));
    }

    #[test]
    fn p1_derivative_small_cases() {
        let f2 = Field::binary(1);
        assert!(check_p1_derivative(&UPoly::t(&f2)));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f8 = Field::binary(3);
        let f9 = Field::new(3, 2).unwrap();
        let f25 = Field::new(5, 2).unwrap();
        for _ in 0..20 {
            for (fld, d) in [(&f8, 6), (&f9, 4), (&f25, 5)] {
                let u = UPoly::new(fld, (0..=d).map(|_| fld.random(&mut rng)).collect());
                assert!(check_p1_derivative(&u));
            }
        }
    }

    #[test]
    fn f_ij_of_unit_g() {
        let f = Field::binary(4);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = random_poly(&f, &XY, 5, 20, &mut rng);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(f_ij(&h.constant_like(1), &h, i, j), h.c2(2 * i + 1, 2 * j + 1));
            }
        }
    }

    #[test]
    fn f_ij_matches_cartier() {
        let f = Field::binary(4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let h = random_poly(&f, &XY, 4, 12, &mut rng);
            let g = random_poly(&f, &XY, 2, 5, &mut rng);
            let c = cartier_p2(&g, &h);
            for i in 0..6 {
                for j in 0..6 {
                    assert_eq!(f.sqrt(f_ij(&g, &h, i, j)), c.a().c2(i, j));
                }
            }
        }
    }

    #[test]
    fn class4_filtration_dims() {
        let f = Field::binary(4);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10 {
            let hs = [0; 5].map(|_| f.random_nonzero(&mut rng));
            let h = class4(&f, hs);
            assert_eq!(z_dimensions(&h, &Ambient::class4(), 5), vec![7, 6, 5, 5, 5, 5]);
        }
    }

    #[test]
    fn gcd_check_examples() {
        let f = Field::binary(2);
        let x = FqPoly::var(&f, &XY, 0);
        let r = divisorial_gcd_check(&x).unwrap();
        assert!(r.equal && r.g.is_constant());
        let txy = ["t", "x", "y"];
        let p = FqPoly::from_terms(&f, &txy, [(vec![2, 1, 0], 1), (vec![2, 0, 1], 1)]);
        let r = divisorial_gcd_check(&p).unwrap();
        assert_eq!(r.g, FqPoly::from_terms(&f, &txy, [(vec![2, 0, 0], 1)]));
        assert!(r.equal);
        let sq = FqPoly::from_terms(&f, &XY, [(vec![2, 2], 1)]);
        assert_eq!(divisorial_gcd_check(&sq).unwrap_err(), PolyError::AllPartialsZero);
    }
}
