//! Derivations D = f d/ds + g d/dt on the coordinate ring of the cover, the
//! group structure of their fixed loci, and the conditions (i) to (iv)
//! singling out Hamiltonian derivations.

use serde::{Deserialize, Serialize};

use super::quotient::Quotient;
use super::{Family, SurfaceError, SurfaceSpec, SurfaceSpecJson};
use crate::algebra::{embed_field, Fe, Field, FqPoly, PolyJson};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpec {
    pub family: Family,
    pub f: FqPoly,
    pub g: FqPoly,
    /// D^2 = c D.
    pub c: Fe,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationJson {
    pub family: Family,
    pub f: PolyJson,
    pub g: PolyJson,
    pub c: String,
    pub closure_verified: bool,
}

impl DerivationSpec {
    pub fn field(&self) -> &Field {
        self.f.field()
    }

    pub fn apply(&self, p: &FqPoly) -> FqPoly {
        self.f.mul(&p.partial(0)).add(&self.g.mul(&p.partial(1)))
    }

    /// D^2 = c D on both coordinate functions.
    pub fn closure_holds(&self) -> bool {
        [&self.f, &self.g].iter().all(|d| self.apply(d) == d.scale(self.c))
    }

    pub fn to_json(&self) -> DerivationJson {
        DerivationJson {
            family: self.family,
            f: self.f.to_json(),
            g: self.g.to_json(),
            c: self.field().encode(self.c),
            closure_verified: self.closure_holds(),
        }
    }
}

pub fn cover_vars(f: Family) -> [&'static str; 2] {
    match f {
        Family::Class4 => ["s", "t"],
        Family::Class2 => ["s", "u"],
    }
}

/// Coefficient-wise square root, renaming variables to the cover's.
fn root_on_cover(p: &FqPoly, fam: Family) -> FqPoly {
    let f = p.field();
    let mut r = FqPoly::zero(f, &cover_vars(fam));
    for (e, &c) in p.terms() {
        r.add_term(e.clone(), f.sqrt(c));
    }
    r
}

/// The derivation whose fixed locus maps onto the singular points: on
/// k[s, t] with s^2 = x, t^2 = y it sends s to sqrt(H_y) and t to sqrt(H_x),
/// divided by sqrt(h11) when that is nonzero.
pub fn covering_derivation(s: &SurfaceSpec) -> Result<DerivationSpec, SurfaceError> {
    if !s.is_normalized() {
        return Err(SurfaceError::NotNormalized);
    }
    let fld = s.field();
    let h = s.poly();
    let h11 = s.h(1, 1);
    let (scale, c) = if h11 != 0 { (fld.inv(fld.sqrt(h11)), 1) } else { (1, 0) };
    let d = DerivationSpec {
        family: s.family,
        f: root_on_cover(&h.partial(1), s.family).scale(scale),
        g: root_on_cover(&h.partial(0), s.family).scale(scale),
        c,
    };
    if !d.closure_holds() {
        return Err(SurfaceError::Inconsistent("D^2 != cD for the covering derivation".into()));
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedLocus {
    pub generators: [FqPoly; 2],
    pub additive: bool,
    pub order: usize,
    /// For class 2: the generator with the first variable eliminated.
    pub witness: Option<FqPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedLocusJson {
    pub generators: [String; 2],
    pub additive: bool,
    pub order: usize,
    pub witness: Option<String>,
    pub witness_support: Option<Vec<u32>>,
}

impl FixedLocus {
    pub fn witness_support(&self) -> Option<Vec<u32>> {
        self.witness.as_ref().map(|w| {
            let mut v: Vec<u32> = w.terms().map(|(e, _)| e[1]).collect();
            v.sort_unstable();
            v
        })
    }

    pub fn to_json(&self) -> FixedLocusJson {
        FixedLocusJson {
            generators: [self.generators[0].pretty(), self.generators[1].pretty()],
            additive: self.additive,
            order: self.order,
            witness: self.witness.as_ref().map(FqPoly::pretty),
            witness_support: self.witness_support(),
        }
    }
}

fn is_additive(p: &FqPoly) -> bool {
    p.terms().all(|(e, _)| {
        let nz: Vec<u32> = e.iter().copied().filter(|&k| k > 0).collect();
        nz.is_empty() || (nz.len() == 1 && nz[0].is_power_of_two())
    })
}

fn weights(fam: Family) -> (u32, u32) {
    match fam {
        Family::Class4 => (1, 1),
        Family::Class2 => (4, 1),
    }
}

/// The fixed locus {D(s) = D(t) = 0} as a subscheme of the plane: it is a
/// subgroup scheme when both generators are additive (up to constants), of
/// order the dimension of its coordinate ring.
pub fn fixed_locus_subgroup_check(d: &DerivationSpec) -> Result<FixedLocus, SurfaceError> {
    let (f, g) = (&d.f, &d.g);
    let q = Quotient::new(g, f, weights(d.family)).map_err(|_| SurfaceError::NotZeroDimensional)?;
    let witness = if d.family == Family::Class2 { eliminate_first(f, g) } else { None };
    Ok(FixedLocus {
        generators: [g.clone(), f.clone()],
        additive: is_additive(f) && is_additive(g),
        order: q.dim(),
        witness,
    })
}

/// With g = c s^2 + g0(u) and f of degree at most one in s, the combination
/// f_s^2 g + c f^2 lies in k[u].
fn eliminate_first(f: &FqPoly, g: &FqPoly) -> Option<FqPoly> {
    if f.degree_in(0) > 1 || g.degree_in(0) != 2 || g.terms().any(|(e, _)| e[0] == 1 || (e[0] == 2 && e[1] > 0)) {
        return None;
    }
    let fs = f.partial(0);
    if !(fs.is_constant() || fs.is_zero()) {
        return None;
    }
    let c = g.c2(2, 0);
    let w = g.scale(f.field().mul(fs.c2(0, 0), fs.c2(0, 0))).add(&f.mul(f).scale(c));
    (w.degree_in(0) <= 0).then_some(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationVerdict {
    pub closure: bool,
    pub c: Option<String>,
    pub divisor_constraints: bool,
    pub f4_stable: bool,
    pub divisor: bool,
    pub coprime: bool,
    pub hamiltonian: Option<SurfaceSpecJson>,
    pub subgroup: Option<bool>,
    pub fixed_locus: Option<FixedLocusJson>,
}

impl DerivationVerdict {
    pub fn all_pass(&self) -> bool {
        self.closure && self.divisor && self.coprime && self.subgroup == Some(true)
    }
}

fn support_within(p: &FqPoly, allowed: &[(u32, u32)]) -> bool {
    p.terms().all(|(e, _)| allowed.contains(&(e[0], e[1])))
}

fn in_box(p: &FqPoly, imax: u32, jmax: u32) -> bool {
    p.terms().all(|(e, _)| e[0] <= imax && e[1] <= jmax)
}

/// y -> y + a x for every a in F_4 keeps f and g inside their degree boxes.
fn f4_stable(d: &DerivationSpec) -> Result<bool, SurfaceError> {
    let base = d.field();
    let ext = if base.e() % 2 == 0 { base.clone() } else { Field::binary(base.e() * 2) };
    let emb = embed_field(base, &ext)?;
    let (f, g) = (d.f.embed(&emb), d.g.embed(&emb));
    let vars: Vec<&str> = f.vars().iter().map(String::as_str).collect();
    let x = FqPoly::var(&ext, &vars, 0);
    let y = FqPoly::var(&ext, &vars, 1);
    for a in ext.subfield_elements(2).expect("even degree contains F_4") {
        let sub = [x.clone(), y.add(&x.scale(a))];
        let f2 = f.compose(&sub);
        let g2 = g.add(&f.scale(a)).compose(&sub);
        if !in_box(&f2, 4, 2) || !in_box(&g2, 2, 4) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Does H_y = f, H_x = g for some member H of the extended family, after
/// scaling? H collects c xy and the antiderivatives of the remaining terms.
fn hamiltonian(d: &DerivationSpec, c: Fe) -> Option<SurfaceSpec> {
    let fld = d.field();
    let lead = match d.family {
        Family::Class4 => d.f.c2(4, 0),
        Family::Class2 => d.f.c2(0, 8),
    };
    if lead == 0 {
        return None;
    }
    let vars = d.family.vars();
    let mut h = FqPoly::zero(fld, &vars);
    h.add_term(vec![1, 1], c);
    for (e, &v) in d.f.terms() {
        if (e[0], e[1]) != (1, 0) {
            h.add_term(vec![e[0], e[1] + 1], v);
        }
    }
    for (e, &v) in d.g.terms() {
        if (e[0], e[1]) != (0, 1) {
            h.add_term(vec![e[0] + 1, e[1]], v);
        }
    }
    let rename = |p: &FqPoly| FqPoly::from_terms(fld, &vars, p.terms().map(|(e, &v)| (e.clone(), v)));
    if h.partial(1) != rename(&d.f) || h.partial(0) != rename(&d.g) {
        return None;
    }
    SurfaceSpec::from_poly(d.family, &h.scale(fld.inv(lead))).ok()
}

/// Conditions (i) to (iv) for a candidate derivation.
pub fn classify_derivations(d: &DerivationSpec) -> Result<DerivationVerdict, SurfaceError> {
    if d.f.nvars() != 2 || d.g.nvars() != 2 || d.f.field() != d.g.field() {
        return Err(SurfaceError::MalformedCandidate("need two polynomials in two variables over one field".into()));
    }
    if d.f.is_zero() && d.g.is_zero() {
        return Err(SurfaceError::MalformedCandidate("zero derivation".into()));
    }
    if d.field().p() != 2 {
        return Err(SurfaceError::MalformedCandidate("characteristic must be 2".into()));
    }
    // (i)
    let fx = d.f.partial(0);
    let c = fx.is_constant().then(|| fx.c2(0, 0));
    let closure = match c {
        Some(c) => d.f.partial(1).is_zero() && d.g.partial(0).is_zero() && d.g.partial(1) == d.f.constant_like(c),
        None => false,
    };
    // (ii)
    let (divisor_constraints, f4) = match d.family {
        Family::Class4 => {
            let ok = support_within(&d.f, &[(0, 0), (1, 0), (2, 0), (4, 0), (0, 2)])
                && support_within(&d.g, &[(0, 0), (0, 1), (2, 0), (0, 2), (0, 4)])
                && d.f.c2(4, 0) != 0
                && d.f.c2(4, 0) == d.g.c2(0, 4);
            (ok, f4_stable(d)?)
        }
        Family::Class2 => {
            let ok = support_within(&d.f, &[(0, 8), (2, 0), (1, 0), (0, 2), (0, 4), (0, 6), (0, 0)])
                && support_within(&d.g, &[(2, 0), (0, 1), (0, 2), (0, 4), (0, 0)])
                && d.f.c2(0, 8) != 0
                && d.f.c2(0, 8) == d.g.c2(2, 0);
            (ok, true)
        }
    };
    // (iii)
    let coprime = !d.f.is_zero() && !d.g.is_zero() && d.f.gcd(&d.g).is_constant();
    let ham = c.filter(|_| closure).and_then(|c| hamiltonian(d, c));
    let fixed = fixed_locus_subgroup_check(d).ok();
    Ok(DerivationVerdict {
        closure,
        c: c.map(|c| d.field().encode(c)),
        divisor_constraints,
        f4_stable: f4,
        divisor: divisor_constraints && f4,
        coprime,
        hamiltonian: ham.map(|h| h.to_json()),
        subgroup: fixed.as_ref().map(|l| l.additive && l.order == 16),
        fixed_locus: fixed.map(|l| l.to_json()),
    })
}

/// D = H_y d/dx + H_x d/dy for any member of the extended family.
pub fn hamiltonian_derivation(s: &SurfaceSpec) -> DerivationSpec {
    let h = s.poly();
    DerivationSpec { family: s.family, f: h.partial(1), g: h.partial(0), c: s.h(1, 1) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{sample_spec, Branch};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn covering_derivations_close_up() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = Field::binary(4);
        for fam in [Family::Class4, Family::Class2] {
            for b in Branch::ALL {
                let s = sample_spec(fam, b, &f, &mut rng).unwrap();
                let d = covering_derivation(&s).unwrap();
                assert_eq!(d.c, if b == Branch::A1x16 { 1 } else { 0 });
                let v = classify_derivations(&d).unwrap();
                assert!(v.all_pass(), "{s:?}: {v:?}");
            }
        }
    }

    #[test]
    fn class4_generators() {
        let f = Field::binary(2);
        let s = SurfaceSpec::new(Family::Class4, &f, &[((3, 0), 2), ((0, 3), 3), ((1, 1), 1)]).unwrap();
        let d = covering_derivation(&s).unwrap();
        let l = fixed_locus_subgroup_check(&d).unwrap();
        assert!(l.additive);
        assert_eq!(l.order, 16);
        // sqrt(H_x) = t^4 + sqrt(h30) s^2 + t
        let want = FqPoly::from_terms(&f, &["s", "t"], [(vec![0, 4], 1), (vec![2, 0], f.sqrt(2)), (vec![0, 1], 1)]);
        assert_eq!(l.generators[0], want);
    }
}
