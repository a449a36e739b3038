//! The two explicit families w^2 = H(x, y) (class 4) and y^2 = H(x, t)
//! (class 2): coefficient data, the singularity table, samplers and
//! normalization of the extended families.

pub mod derivation;
pub mod quotient;
pub mod singular;

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Embedding, Fe, Field, FieldError, FieldSpec, FqPoly};

pub use derivation::{classify_derivations, covering_derivation, fixed_locus_subgroup_check, DerivationSpec};
pub use singular::{classify_full, singular_points, translate_to_origin, SingularPoint, SingularityReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("coefficient {0} is not part of the {1} family")]
    UnknownCoefficient(String, Family),
    #[error("coefficient {0} does not lie in {1}")]
    NotInField(String, String),
    #[error("spec is not normalized (h10, h01, or for class 2 h21, h14 nonzero)")]
    NotNormalized,
    #[error("no table entry: {0}")]
    OutsideTable(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("points need F_(2^{0}), beyond the supported degree")]
    FieldTooLarge(u32),
    #[error("point is not singular: c10 = {0}, c01 = {1}")]
    NotSingular(String, String),
    #[error("translation leaves non-square terms: {0}")]
    NonSquareResidual(String),
    #[error("unexpected leading structure: {0}")]
    LeadingTerm(String),
    #[error("fixed locus is not zero-dimensional")]
    NotZeroDimensional,
    #[error("malformed candidate: {0}")]
    MalformedCandidate(String),
    #[error("unknown branch {0}")]
    UnknownBranch(String),
    #[error("no {1} member of the {0} family over {2}")]
    EmptyBranch(Family, Branch, String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Class4,
    Class2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Class4 => "class4",
            Family::Class2 => "class2",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "class4" | "4" => Ok(Family::Class4),
            "class2" | "2" => Ok(Family::Class2),
            _ => Err(format!("unknown family {s}")),
        }
    }
}

impl Family {
    pub fn vars(self) -> [&'static str; 2] {
        match self {
            Family::Class4 => ["x", "y"],
            Family::Class2 => ["x", "t"],
        }
    }

    /// Coefficients of the normalized equation.
    pub fn core_keys(self) -> &'static [(u32, u32)] {
        match self {
            Family::Class4 => &[(3, 0), (2, 1), (1, 2), (0, 3), (1, 1)],
            Family::Class2 => &[(1, 1), (1, 2), (0, 3), (0, 5), (0, 7)],
        }
    }

    /// Coefficients removable by automorphisms.
    pub fn extra_keys(self) -> &'static [(u32, u32)] {
        match self {
            Family::Class4 => &[(1, 0), (0, 1)],
            Family::Class2 => &[(2, 1), (1, 4), (1, 0), (0, 1)],
        }
    }

    pub fn is_key(self, k: (u32, u32)) -> bool {
        self.core_keys().contains(&k) || self.extra_keys().contains(&k)
    }

    /// The fixed part of H.
    pub fn fixed_terms(self) -> [(u32, u32); 2] {
        match self {
            Family::Class4 => [(4, 1), (1, 4)],
            Family::Class2 => [(3, 0), (0, 9)],
        }
    }
}

pub fn key_name(k: (u32, u32)) -> String {
    format!("h{}{}", k.0, k.1)
}

pub fn parse_key(s: &str) -> Option<(u32, u32)> {
    let d = s.strip_prefix('h')?;
    let b = d.as_bytes();
    if b.len() != 2 || !b.iter().all(u8::is_ascii_digit) {
        return None;
    }
    Some(((b[0] - b'0') as u32, (b[1] - b'0') as u32))
}

/// A member of one of the two families over an explicit finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub family: Family,
    field: Field,
    coeffs: BTreeMap<(u32, u32), Fe>,
}

impl fmt::Debug for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> =
            self.coeffs.iter().map(|(&k, &v)| format!("{}={}", key_name(k), self.field.encode(v))).collect();
        write!(f, "{} over {} [{}]", self.family, self.field, c.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSpecJson {
    pub family: Family,
    pub field: FieldSpec,
    pub coeffs: BTreeMap<String, String>,
    pub normalized: bool,
}

impl SurfaceSpec {
    pub fn new(family: Family, field: &Field, coeffs: &[((u32, u32), Fe)]) -> Result<Self, SurfaceError> {
        let mut s = SurfaceSpec { family, field: field.clone(), coeffs: BTreeMap::new() };
        for &(k, v) in coeffs {
            s.set(k, v)?;
        }
        Ok(s)
    }

    pub fn set(&mut self, k: (u32, u32), v: Fe) -> Result<(), SurfaceError> {
        if !self.family.is_key(k) {
            return Err(SurfaceError::UnknownCoefficient(key_name(k), self.family));
        }
        if !self.field.contains(v) {
            return Err(SurfaceError::NotInField(key_name(k), self.field.to_string()));
        }
        if v == 0 {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, v);
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn h(&self, i: u32, j: u32) -> Fe {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), Fe> {
        &self.coeffs
    }

    /// Extra coefficients all vanish.
    pub fn is_normalized(&self) -> bool {
        self.family.extra_keys().iter().all(|&(i, j)| self.h(i, j) == 0)
    }

    pub fn poly(&self) -> FqPoly {
        let vars = self.family.vars();
        let mut p = FqPoly::zero(&self.field, &vars);
        for (i, j) in self.family.fixed_terms() {
            p.add_term(vec![i, j], 1);
        }
        for (&(i, j), &c) in &self.coeffs {
            p.add_term(vec![i, j], c);
        }
        p
    }

    /// Read a spec back from H; every monomial must be a fixed term with
    /// coefficient 1 or a family coefficient.
    pub fn from_poly(family: Family, h: &FqPoly) -> Result<Self, SurfaceError> {
        let mut s = SurfaceSpec { family, field: h.field().clone(), coeffs: BTreeMap::new() };
        let fixed = family.fixed_terms();
        for &(i, j) in &fixed {
            if h.c2(i, j) != 1 {
                return Err(SurfaceError::OutsideTable(format!("coefficient of x^{i}*{}^{j} is not 1", family.vars()[1])));
            }
        }
        for (e, &c) in h.terms() {
            let k = (e[0], e[1]);
            if fixed.contains(&k) {
                continue;
            }
            s.set(k, c)?;
        }
        Ok(s)
    }

    pub fn embed(&self, emb: &Embedding) -> SurfaceSpec {
        SurfaceSpec {
            family: self.family,
            field: emb.to.clone(),
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k, emb.apply(v))).collect(),
        }
    }

    pub fn to_json(&self) -> SurfaceSpecJson {
        SurfaceSpecJson {
            family: self.family,
            field: self.field.spec().clone(),
            coeffs: self.coeffs.iter().map(|(&k, &v)| (key_name(k), self.field.encode(v))).collect(),
            normalized: self.is_normalized(),
        }
    }

    pub fn from_json(j: &SurfaceSpecJson) -> Result<Self, SurfaceError> {
        let field = Field::from_spec(&j.field)?;
        let mut s = SurfaceSpec { family: j.family, field: field.clone(), coeffs: BTreeMap::new() };
        for (name, v) in &j.coeffs {
            let k = parse_key(name).ok_or_else(|| SurfaceError::UnknownCoefficient(name.clone(), j.family))?;
            s.set(k, field.decode(v)?)?;
        }
        Ok(s)
    }
}

/// Configurations of the affine singular points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "16A_1")]
    A1x16,
    #[serde(rename = "4D_4^0")]
    D4x4,
    #[serde(rename = "2D_8^0")]
    D8x2,
    #[serde(rename = "1D_16^0")]
    D16,
    #[serde(rename = "2E_8^0")]
    E8x2,
    #[serde(rename = "non-RDP")]
    NonRdp,
}

impl Branch {
    pub const ALL: [Branch; 6] = [Branch::A1x16, Branch::D4x4, Branch::D8x2, Branch::D16, Branch::E8x2, Branch::NonRdp];

    /// (number of points, plane colength of each).
    pub fn profile(self) -> (usize, usize) {
        match self {
            Branch::A1x16 => (16, 1),
            Branch::D4x4 => (4, 4),
            Branch::D8x2 | Branch::E8x2 => (2, 8),
            Branch::D16 | Branch::NonRdp => (1, 16),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Branch::A1x16 => "16A_1",
            Branch::D4x4 => "4D_4^0",
            Branch::D8x2 => "2D_8^0",
            Branch::D16 => "1D_16^0",
            Branch::E8x2 => "2E_8^0",
            Branch::NonRdp => "non-RDP",
        }
    }

    pub fn is_rdp(self) -> bool {
        self != Branch::NonRdp
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Accepts the labels above and loose spellings such as "16A1", "D16" or "nonrdp".
impl std::str::FromStr for Branch {
    type Err = SurfaceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let clean: String =
            s.to_ascii_lowercase().replace("^0", "").chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        match clean.as_str() {
            "16a1" => Ok(Branch::A1x16),
            "4d4" => Ok(Branch::D4x4),
            "2d8" => Ok(Branch::D8x2),
            "1d16" | "d16" => Ok(Branch::D16),
            "2e8" => Ok(Branch::E8x2),
            "nonrdp" => Ok(Branch::NonRdp),
            _ => Err(SurfaceError::UnknownBranch(s.into())),
        }
    }
}

/// u1 u2 - u0 u3 = 0.
pub fn in_w(f: &Field, u: [Fe; 4]) -> bool {
    f.sub(f.mul(u[1], u[2]), f.mul(u[0], u[3])) == 0
}

pub fn z1_equations(f: &Field, u: [Fe; 4]) -> [Fe; 3] {
    [
        f.sub(f.mul(u[1], u[2]), f.mul(u[0], u[3])),
        f.sub(f.mul(u[1], u[1]), f.mul(u[0], u[2])),
        f.sub(f.mul(u[2], u[2]), f.mul(u[1], u[3])),
    ]
}

pub fn z2_equations(f: &Field, u: [Fe; 4]) -> [Fe; 3] {
    [
        f.sub(f.mul(u[1], u[2]), f.mul(u[0], u[3])),
        f.sub(f.mul(u[2], u[2]), f.mul(u[0], u[1])),
        f.sub(f.mul(u[1], u[1]), f.mul(u[2], u[3])),
    ]
}

pub fn in_z1(f: &Field, u: [Fe; 4]) -> bool {
    z1_equations(f, u).iter().all(|&v| v == 0)
}

pub fn in_z2(f: &Field, u: [Fe; 4]) -> bool {
    z2_equations(f, u).iter().all(|&v| v == 0)
}

/// u = (h30, h21, h12, h03).
pub fn class4_u(s: &SurfaceSpec) -> [Fe; 4] {
    [s.h(3, 0), s.h(2, 1), s.h(1, 2), s.h(0, 3)]
}

/// Branch read off the coefficient conditions.
pub fn classify_by_coefficients(s: &SurfaceSpec) -> Result<Branch, SurfaceError> {
    if !s.is_normalized() {
        return Err(SurfaceError::NotNormalized);
    }
    let f = &s.field;
    let nz = |i, j| s.h(i, j) != 0;
    Ok(match s.family {
        Family::Class4 => {
            let u = class4_u(s);
            if nz(1, 1) {
                Branch::A1x16
            } else if !in_w(f, u) {
                Branch::D4x4
            } else {
                match (in_z1(f, u), in_z2(f, u)) {
                    (false, false) => Branch::D8x2,
                    (false, true) => Branch::D16,
                    (true, false) => Branch::E8x2,
                    (true, true) => Branch::NonRdp,
                }
            }
        }
        Family::Class2 => {
            if nz(0, 7) {
                return Err(SurfaceError::OutsideTable("h07 != 0".into()));
            }
            if nz(1, 1) {
                Branch::A1x16
            } else if nz(0, 3) {
                Branch::D4x4
            } else {
                match (nz(1, 2), nz(0, 5)) {
                    (true, true) => Branch::D8x2,
                    (true, false) => Branch::D16,
                    (false, true) => Branch::E8x2,
                    (false, false) => Branch::NonRdp,
                }
            }
        }
    })
}

/// Points of Z_1 ∩ Z_2 for (a, b) in F_4 (or F_2 when F_4 is not a subfield).
fn z12_point(f: &Field, a: Fe, b: Fe, c: Fe) -> [Fe; 4] {
    let a2 = f.mul(a, a);
    let b2 = f.mul(b, b);
    [f.mul(c, f.mul(a2, a)), f.mul(c, f.mul(a2, b)), f.mul(c, f.mul(a, b2)), f.mul(c, f.mul(b2, b))]
}

/// Random normalized spec whose coefficients satisfy the conditions of
/// `branch`. Over F_2 and F_4 the class 4 branches 1D_16^0 and 2E_8^0 are
/// empty: every rational point of Z_1 or Z_2 comes from (a : b) in P^1(F_4).
pub fn sample_spec<R: Rng + ?Sized>(
    family: Family,
    branch: Branch,
    field: &Field,
    rng: &mut R,
) -> Result<SurfaceSpec, SurfaceError> {
    const TRIES: usize = 10_000;
    let f = field;
    let empty = || SurfaceError::EmptyBranch(family, branch, f.to_string());
    let retry = |rng: &mut R, gen: &dyn Fn(&mut R) -> [Fe; 4], keep: &dyn Fn([Fe; 4]) -> bool| {
        (0..TRIES).map(|_| gen(rng)).find(|&u| keep(u)).ok_or_else(empty)
    };
    let r = |rng: &mut R| f.random(rng);
    let nzr = |rng: &mut R| f.random_nonzero(rng);
    let mut s = SurfaceSpec { family, field: f.clone(), coeffs: BTreeMap::new() };
    let set = |s: &mut SurfaceSpec, k, v| s.set(k, v).expect("sampled coefficient lies in the field");
    match family {
        Family::Class4 => {
            let free = |rng: &mut R| [r(rng), r(rng), r(rng), r(rng)];
            let w_param = |rng: &mut R| {
                let (a, b, c, d) = (r(rng), r(rng), r(rng), r(rng));
                [f.mul(a, c), f.mul(a, d), f.mul(b, c), f.mul(b, d)]
            };
            let z1_param = |rng: &mut R| z12_point(f, r(rng), r(rng), r(rng));
            let z2_param = |rng: &mut R| {
                let [u0, u1, u2, u3] = z12_point(f, r(rng), r(rng), r(rng));
                [u0, u2, u1, u3]
            };
            let u = match branch {
                Branch::A1x16 => free(rng),
                Branch::D4x4 => retry(rng, &free, &|u| !in_w(f, u))?,
                Branch::D8x2 => retry(rng, &w_param, &|u| !in_z1(f, u) && !in_z2(f, u))?,
                Branch::D16 => retry(rng, &z2_param, &|u| !in_z1(f, u))?,
                Branch::E8x2 => retry(rng, &z1_param, &|u| !in_z2(f, u))?,
                Branch::NonRdp => {
                    let small = f.subfield_elements(2).unwrap_or_else(|| vec![0, 1]);
                    let a = small[rng.gen_range(0..small.len())];
                    let b = small[rng.gen_range(0..small.len())];
                    z12_point(f, a, b, r(rng))
                }
            };
            for (k, v) in [(3, 0), (2, 1), (1, 2), (0, 3)].into_iter().zip(u) {
                set(&mut s, k, v);
            }
            let h11 = if branch == Branch::A1x16 { nzr(rng) } else { 0 };
            set(&mut s, (1, 1), h11);
        }
        Family::Class2 => {
            let (h11, h03, h12, h05) = match branch {
                Branch::A1x16 => (nzr(rng), r(rng), r(rng), r(rng)),
                Branch::D4x4 => (0, nzr(rng), r(rng), r(rng)),
                Branch::D8x2 => (0, 0, nzr(rng), nzr(rng)),
                Branch::D16 => (0, 0, nzr(rng), 0),
                Branch::E8x2 => (0, 0, 0, nzr(rng)),
                Branch::NonRdp => (0, 0, 0, 0),
            };
            for (k, v) in [((1, 1), h11), ((0, 3), h03), ((1, 2), h12), ((0, 5), h05)] {
                set(&mut s, k, v);
            }
        }
    }
    Ok(s)
}

/// Every parametrized point c(a^3, a^2 b, a b^2, b^3), a, b in F_4, satisfies
/// the Z_1 and Z_2 equations, and over F_16 the common zeros are exactly
/// the parametrized points.
pub fn z1z2_parametrization_check(field: &Field) -> Result<bool, SurfaceError> {
    let f4 = field
        .subfield_elements(2)
        .ok_or_else(|| SurfaceError::OutsideTable(format!("{field} does not contain F_4")))?;
    let cs: Vec<Fe> = if field.q() <= 1 << 12 { field.elements().collect() } else { (0..4096).collect() };
    for &a in &f4 {
        for &b in &f4 {
            for &c in &cs {
                let u = z12_point(field, a, b, c);
                if !in_z1(field, u) || !in_z2(field, u) {
                    return Ok(false);
                }
            }
        }
    }
    // converse by exhaustion over F_16
    let f16 = Field::binary(4);
    let small = f16.subfield_elements(2).expect("F_4 inside F_16");
    let mut param = std::collections::HashSet::new();
    for &a in &small {
        for &b in &small {
            for c in f16.elements() {
                param.insert(z12_point(&f16, a, b, c));
            }
        }
    }
    for n in 0u32..1 << 16 {
        let u = [0, 1, 2, 3].map(|k| ((n >> (4 * k)) & 15) as Fe);
        if in_z1(&f16, u) && in_z2(&f16, u) && !param.contains(&u) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Apply the simplifying automorphisms. Class 2 first uses
/// x -> x + h21 t + sqrt(h14) t^2, which clears h21 and h14. The linear
/// coefficients are cleared by translating a singular point to the origin;
/// that translation only changes linear and square terms (class 4, or
/// class 2 with h07 = 0), so the result is the spec with h10 = h01 = 0 over
/// the same field. With h07 != 0 the translation also moves h03 and h05 and
/// is carried out over the field of definition of the point.
pub fn normalize(s: &SurfaceSpec) -> Result<SurfaceSpec, SurfaceError> {
    let f = s.field.clone();
    let mut cur = s.clone();
    if s.family == Family::Class2 && (s.h(2, 1) != 0 || s.h(1, 4) != 0) {
        let h = cur.poly();
        let x = FqPoly::var(&f, &s.family.vars(), 0);
        let t = FqPoly::var(&f, &s.family.vars(), 1);
        let shift = t.scale(s.h(2, 1)).add(&t.mul(&t).scale(f.sqrt(s.h(1, 4))));
        let moved = h.compose(&[x.add(&shift), t]);
        cur = SurfaceSpec::from_poly(s.family, &drop_squares(&moved))?;
    }
    if cur.h(1, 0) == 0 && cur.h(0, 1) == 0 {
        return Ok(cur);
    }
    if cur.family == Family::Class4 || cur.h(0, 7) == 0 {
        cur.coeffs.remove(&(1, 0));
        cur.coeffs.remove(&(0, 1));
        return Ok(cur);
    }
    let pts = singular_points(&cur)?;
    let p = pts.first().ok_or_else(|| SurfaceError::Inconsistent("no singular point".into()))?;
    singular::translate_general(&cur, p)
}

/// Remove the terms x^{2a} y^{2b}.
pub fn drop_squares(h: &FqPoly) -> FqPoly {
    let mut r = h.constant_like(0);
    for (e, &c) in h.terms() {
        if e.iter().any(|k| k % 2 == 1) {
            r.add_term(e.clone(), c);
        }
    }
    r
}
