//! Affine singular points of w^2 = H: the zeros of (H_x, H_y) with their
//! colengths, via the 16-dimensional algebra k[x, y]/(H_x, H_y).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::quotient::Quotient;
use super::{classify_by_coefficients, drop_squares, Branch, Family, SurfaceError, SurfaceSpec, SurfaceSpecJson};
use crate::algebra::{embed_field, Embedding, Fe, Field, FieldSpec, FqPoly, Mat, UPoly};

/// Largest extension degree over F_2 used for explicit points.
pub const MAX_POINT_DEGREE: u32 = 127;

const SEED: u64 = 0x7369_6e67;

fn weights(f: Family) -> (u32, u32) {
    match f {
        Family::Class4 => (1, 1),
        // t^8 and x^2 compete; t wins ties
        Family::Class2 => (4, 1),
    }
}

pub fn jacobian_algebra(s: &SurfaceSpec) -> Result<Quotient, SurfaceError> {
    let h = s.poly();
    Quotient::new(&h.partial(0), &h.partial(1), weights(s.family))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub field: Field,
    pub x: Fe,
    pub y: Fe,
    pub colength: usize,
    /// Degree over F_2 of the field generated by the coordinates.
    pub residue_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub x: String,
    pub y: String,
    pub field: FieldSpec,
    pub residue_degree: u32,
    pub colength: usize,
}

impl SingularPoint {
    pub fn to_json(&self) -> PointJson {
        PointJson {
            x: self.field.encode(self.x),
            y: self.field.encode(self.y),
            field: self.field.spec().clone(),
            residue_degree: self.residue_degree,
            colength: self.colength,
        }
    }
}

/// Point count and colength of each point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub points: usize,
    /// Sorted, largest first.
    pub colengths: Vec<usize>,
}

impl Profile {
    pub fn total(&self) -> usize {
        self.colengths.iter().sum()
    }

    pub fn matches(&self, b: Branch) -> bool {
        let (n, c) = b.profile();
        self.points == n && self.colengths.iter().all(|&x| x == c)
    }
}

fn frobenius_order(q: &Quotient) -> (usize, u32) {
    let phi = q.frobenius_matrix();
    let mut k = 1u64;
    let mut qk = q.field().q();
    while qk < q.dim() as u128 {
        qk = qk.saturating_mul(q.field().q());
        k += 1;
    }
    let base = phi.pow(k);
    let points = base.rank();
    let mut cur = base.clone();
    for o in 1..=MAX_POINT_DEGREE {
        cur = phi.mul(&cur);
        if cur == base {
            return (points, o);
        }
    }
    (points, u32::MAX)
}

fn extension(f: &Field, deg: u32) -> Result<(Field, Embedding), SurfaceError> {
    let e = f.e().checked_mul(deg).filter(|&e| e <= MAX_POINT_DEGREE).ok_or(SurfaceError::FieldTooLarge(f.e().saturating_mul(deg)))?;
    let k = Field::binary(e);
    let emb = embed_field(f, &k)?;
    Ok((k, emb))
}

fn embed_mat(m: &Mat, emb: &Embedding) -> Mat {
    let rows: Vec<Vec<Fe>> = (0..m.rows).map(|i| m.row(i).iter().map(|&a| emb.apply(a)).collect()).collect();
    Mat::from_rows(&emb.to, &rows)
}

fn embed_upoly(p: &UPoly, emb: &Embedding) -> UPoly {
    UPoly::new(&emb.to, p.coeffs().iter().map(|&a| emb.apply(a)).collect())
}

/// Number of points and their colengths from the characteristic polynomial
/// of a separating linear form x + l y.
pub fn profile(s: &SurfaceSpec) -> Result<Profile, SurfaceError> {
    let q = jacobian_algebra(s)?;
    let (points, _) = frobenius_order(&q);
    let f = s.field();
    let deg = (10 + f.e() - 1) / f.e();
    let (k, emb) = extension(f, deg)?;
    let x = FqPoly::var(f, &s.family.vars(), 0);
    let y = FqPoly::var(f, &s.family.vars(), 1);
    let mx = embed_mat(&q.mult_matrix(&x), &emb);
    let my = embed_mat(&q.mult_matrix(&y), &emb);
    for lambda in 0..k.q().min(1 << 16) {
        let chi = mx.add(&my.scale(lambda)).charpoly();
        let parts = chi.squarefree();
        if parts.iter().map(|(g, _)| g.degree() as usize).sum::<usize>() != points {
            continue;
        }
        let mut colengths: Vec<usize> =
            parts.iter().flat_map(|(g, m)| std::iter::repeat(*m as usize).take(g.degree() as usize)).collect();
        colengths.sort_unstable_by(|a, b| b.cmp(a));
        return Ok(Profile { points, colengths });
    }
    Err(SurfaceError::Inconsistent("no separating linear form".into()))
}

fn residue_degree(k: &Field, vals: &[Fe]) -> u32 {
    let e = k.e();
    (1..=e)
        .filter(|d| e % d == 0)
        .find(|&d| {
            vals.iter().all(|&a| {
                let mut b = a;
                for _ in 0..d {
                    b = k.mul(b, b);
                }
                b == a
            })
        })
        .unwrap_or(e)
}

/// Every zero of (H_x, H_y) over the closure, coordinates in the smallest
/// field F_(q^o) that holds them all, with local colengths.
pub fn singular_points(s: &SurfaceSpec) -> Result<Vec<SingularPoint>, SurfaceError> {
    let q = jacobian_algebra(s)?;
    let (_, o) = frobenius_order(&q);
    if o == u32::MAX {
        return Err(SurfaceError::FieldTooLarge(MAX_POINT_DEGREE + 1));
    }
    let f = s.field();
    let (k, emb) = extension(f, o)?;
    let vars = s.family.vars();
    let x = FqPoly::var(f, &vars, 0);
    let y = FqPoly::var(f, &vars, 1);
    let mx = q.mult_matrix(&x);
    let my = q.mult_matrix(&y);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let chi = embed_upoly(&mx.charpoly(), &emb);
    let h = s.poly().embed(&emb);
    let (hx, hy) = (h.partial(0), h.partial(1));
    let mxk = embed_mat(&mx, &emb);
    let myk = embed_mat(&my, &emb);
    let n = q.dim() as u64;
    let mut out = Vec::new();
    for a in chi.roots(&mut rng) {
        let gx = restrict(&hx, a);
        let gy = restrict(&hy, a);
        for b in gx.gcd(&gy).roots(&mut rng) {
            let stacked = mxk.shift(a).pow(n).vstack(&myk.shift(b).pow(n));
            let colength = stacked.nullspace().len();
            out.push(SingularPoint { field: k.clone(), x: a, y: b, colength, residue_degree: residue_degree(&k, &[a, b]) });
        }
    }
    let total: usize = out.iter().map(|p| p.colength).sum();
    if total != q.dim() {
        return Err(SurfaceError::Inconsistent(format!("colengths sum to {total}, expected {}", q.dim())));
    }
    out.sort_by_key(|p| (p.x, p.y));
    Ok(out)
}

/// g(x = a, y) as a univariate polynomial in y.
fn restrict(g: &FqPoly, a: Fe) -> UPoly {
    let f = g.field();
    let mut c = vec![0; (g.degree_in(1).max(0) + 1) as usize];
    for (e, &v) in g.terms() {
        let j = e[1] as usize;
        c[j] = f.add(c[j], f.mul(v, f.pow(a, e[0] as u128)));
    }
    UPoly::new(f, c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub spec: SurfaceSpecJson,
    pub branch: Branch,
    pub point_count: usize,
    pub colengths: Vec<usize>,
    pub affine_colength_total: usize,
    /// Tyurina numbers on the double cover, twice the plane colengths.
    pub tyurina: Vec<usize>,
    pub tyurina_total: usize,
    pub points: Option<Vec<PointJson>>,
}

/// Branch from the coefficients, cross-checked against the point profile.
pub fn classify_full(s: &SurfaceSpec, explicit_points: bool) -> Result<SingularityReport, SurfaceError> {
    let branch = classify_by_coefficients(s)?;
    let prof = profile(s)?;
    if !prof.matches(branch) {
        return Err(SurfaceError::Inconsistent(format!(
            "coefficients give {branch} but the points are {} with colengths {:?}",
            prof.points, prof.colengths
        )));
    }
    if prof.total() != 16 {
        return Err(SurfaceError::Inconsistent(format!("colength total {}", prof.total())));
    }
    let points = if explicit_points {
        let pts = singular_points(s)?;
        let mut c: Vec<usize> = pts.iter().map(|p| p.colength).collect();
        c.sort_unstable_by(|a, b| b.cmp(a));
        if c != prof.colengths {
            return Err(SurfaceError::Inconsistent(format!("explicit colengths {c:?} vs profile {:?}", prof.colengths)));
        }
        Some(pts.iter().map(SingularPoint::to_json).collect())
    } else {
        None
    };
    Ok(SingularityReport {
        spec: s.to_json(),
        branch,
        point_count: prof.points,
        tyurina: prof.colengths.iter().map(|c| 2 * c).collect(),
        tyurina_total: 2 * prof.total(),
        affine_colength_total: prof.total(),
        colengths: prof.colengths,
        points,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    /// The same spec over the field of the point.
    pub spec: SurfaceSpec,
    /// H(X + a, Y + b) = H(X, Y) + f(X, Y)^2 up to a constant.
    pub f: FqPoly,
    pub constant: Fe,
}

fn shifted_difference(s: &SurfaceSpec, p: &SingularPoint) -> Result<(SurfaceSpec, FqPoly, FqPoly), SurfaceError> {
    let emb = embed_field(s.field(), &p.field)?;
    let sk = s.embed(&emb);
    let h = sk.poly();
    let moved = h.shift(&[p.x, p.y]);
    let (c10, c01) = (moved.c2(1, 0), moved.c2(0, 1));
    if c10 != 0 || c01 != 0 {
        return Err(SurfaceError::NotSingular(p.field.encode(c10), p.field.encode(c01)));
    }
    let diff = moved.sub(&h);
    Ok((sk, moved, diff))
}

/// Move a singular point to the origin. The difference of the two equations
/// must be a square plus a constant; the constant is the value of H at P.
pub fn translate_to_origin(s: &SurfaceSpec, p: &SingularPoint) -> Result<Translation, SurfaceError> {
    let (sk, _, diff) = shifted_difference(s, p)?;
    let odd = drop_squares(&diff);
    if !odd.is_zero() {
        return Err(SurfaceError::NonSquareResidual(odd.pretty()));
    }
    let constant = diff.c2(0, 0);
    let sq = diff.sub(&diff.constant_like(constant));
    let f = sq.sqrt_poly().map_err(|e| SurfaceError::NonSquareResidual(e.to_string()))?;
    Ok(Translation { spec: sk, f, constant })
}

/// Translate by a singular point and keep only the non-square part; the
/// result lies in the same family over the field of the point.
pub fn translate_general(s: &SurfaceSpec, p: &SingularPoint) -> Result<SurfaceSpec, SurfaceError> {
    let (_, moved, _) = shifted_difference(s, p)?;
    SurfaceSpec::from_poly(s.family, &drop_squares(&moved))
}
