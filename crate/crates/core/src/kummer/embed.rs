//! Saturated embeddings K(T) -> P with P even of signature (1,21),
//! 2-elementary of type 2 with discriminant (Z/2)^(2 sigma).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{build_kummer, build_q, glue_compatible, t_planes, u_classes_q4_literal, t_sets_q2, u_classes_q2, u_classes_q4, KummerError, KummerType};
use crate::lattice::glue::{express, glue, saturation, GlueData};
use crate::lattice::LatticeError;
use crate::scalar::rat;
use crate::{Lattice, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Complement {
    Q4,
    Q2,
}

impl fmt::Display for Complement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Complement {
    type Err = KummerError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "Q4" => Ok(Self::Q4),
            "Q2" => Ok(Self::Q2),
            _ => Err(KummerError::UnknownType(s.into())),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Embedding {
    pub kind: KummerType,
    pub sigma: u32,
    pub complement: Complement,
    /// log2 of the glue group order.
    pub glue_rank: usize,
    /// Which reading of the u_i formula was used.
    pub u_reading: &'static str,
    /// Whether the literal w_i reading would also satisfy q1 + q2 = 0.
    pub literal_reading_compatible: Option<bool>,
    #[serde(skip)]
    pub lattice: Lattice,
    pub rank: usize,
    pub signature: (usize, usize),
    pub even: bool,
    pub two_elementary: bool,
    pub type2: bool,
    pub disc_two_rank: Option<usize>,
    pub k_saturated: bool,
    pub complement_two_elementary: bool,
    pub complement_type2: bool,
    pub complement_disc_two_rank: Option<usize>,
    /// Roots of D^perp for a positive class D in the complement.
    pub roots_in_positive_perp: usize,
    /// Every such root lies in K or is orthogonal to K.
    pub roots_split: bool,
}

impl Embedding {
    pub fn all_verified(&self) -> bool {
        self.even
            && self.rank == 22
            && self.signature == (1, 21)
            && self.two_elementary
            && self.type2
            && self.disc_two_rank == Some(2 * self.sigma as usize)
            && self.k_saturated
            && self.complement_two_elementary
            && self.complement_type2
            && self.roots_split
    }
}

/// Positive class D with D^2 = 2 in the complement, Q coordinates.
fn positive_class(c: Complement) -> Vec<i64> {
    match c {
        Complement::Q4 => vec![2, 1, 1, 1, 1, 1],
        // twice the isotropic 2w1+w2+..+w5 plus w6
        Complement::Q2 => vec![4, 2, 2, 2, 2, 1],
    }
}

/// Number of glue generators needed for (T, sigma, Q), if any.
pub fn glue_rank(kind: KummerType, sigma: u32, c: Complement, a: usize) -> Result<usize, KummerError> {
    let (b, nmax) = match c {
        Complement::Q4 => (4, kind.glue_rank_q4()),
        Complement::Q2 => (
            2,
            match kind {
                KummerType::A1x16 | KummerType::D4x4 => 2,
                KummerType::D8x2 => 1,
                _ => 0,
            },
        ),
    };
    let total = a + b;
    let s2 = 2 * sigma as usize;
    if sigma == 0 || s2 > total || (total - s2) % 2 != 0 {
        return Err(KummerError::NoEmbedding);
    }
    let k = (total - s2) / 2;
    if k > nmax {
        return Err(KummerError::NoEmbedding);
    }
    Ok(k)
}

pub fn embed_kummer(kind: KummerType, sigma: u32, c: Complement, extended: bool) -> Result<Embedding, KummerError> {
    let needs_extended = c == Complement::Q2 && matches!(kind, KummerType::A1x16 | KummerType::D4x4 | KummerType::D8x2);
    if needs_extended && !extended {
        return Err(KummerError::ExtendedRequired);
    }
    let k = build_kummer(kind)?;
    let a = k.lattice.discriminant_group()?.two_rank().ok_or_else(|| KummerError::Check("K is not 2-elementary".into()))?;
    let n = glue_rank(kind, sigma, c, a)?;
    let q = build_q(c);
    let (ts, us): (Vec<Vec<Rational>>, Vec<Vec<Rational>>) = match c {
        Complement::Q4 => (t_planes()[..n].iter().map(|t| k.half_class(t)).collect(), u_classes_q4()[..n].to_vec()),
        Complement::Q2 => (t_sets_q2()[..n].iter().map(|t| k.half_class(t)).collect(), u_classes_q2()[..n].to_vec()),
    };
    let (u_reading, literal_reading_compatible) = match c {
        Complement::Q4 => {
            let lit = u_classes_q4_literal();
            ("u_i = 1/2 sum_{j>=2, j!=i+1} w_j", Some(glue_compatible(&k.lattice, &ts, &q, &lit[..n])))
        }
        Complement::Q2 => ("u_i = 1/2 (w_{2i} + w_3)", None),
    };
    let glued = glue(&k.lattice, &q, &GlueData { m1: ts, m2: us }).map_err(|e| match e {
        LatticeError::NotInDual | LatticeError::GlueForm(_) => KummerError::Check(e.to_string()),
        other => other.into(),
    })?;
    let p = glued.lattice;
    let sig = p.signature();
    let dg = p.discriminant_group()?;
    let (el, t2) = p.is_two_elementary_type2()?;
    let kr = k.lattice.rank();
    let k_rows = crate::lattice::glue::embed_rows(&glued.basis, 0, kr)?;
    let k_saturated = saturation(&p, &k_rows)?.index.is_one();
    // complement of K in P
    let comp_basis = p.orthogonal_complement_basis(&k_rows);
    let comp = p.sublattice(&comp_basis);
    let (cel, ct2) = comp.is_two_elementary_type2()?;
    let cdg = comp.discriminant_group()?;
    // roots of D^perp
    let mut dq = vec![Rational::zero(); kr];
    dq.extend(positive_class(c).iter().map(|&x| rat(x, 1)));
    let d_coords = express(&glued.basis, &dq)?;
    let perp_basis = p.orthogonal_complement_basis(&vec![d_coords.clone()]);
    let perp = p.sublattice(&perp_basis);
    let roots = perp.roots()?;
    let mut split = true;
    for r in &roots {
        // N coords -> P coords -> K + Q coords
        let pc: Vec<BigInt> = (0..p.rank())
            .map(|j| r.iter().zip(&perp_basis).fold(BigInt::zero(), |s, (a, row)| s + a * &row[j]))
            .collect();
        let amb: Vec<Rational> = (0..glued.basis[0].len())
            .map(|j| {
                pc.iter()
                    .zip(&glued.basis)
                    .fold(Rational::zero(), |s, (a, row)| s + Rational::from_integer(a.clone()) * &row[j])
            })
            .collect();
        let in_k = amb[kr..].iter().all(|x| x.is_zero());
        let perp_k = amb[..kr].iter().all(|x| x.is_zero());
        if !(in_k || perp_k) {
            split = false;
        }
    }
    Ok(Embedding {
        kind,
        sigma,
        complement: c,
        glue_rank: n,
        u_reading,
        literal_reading_compatible,
        rank: p.rank(),
        signature: (sig.pos, sig.neg),
        even: p.is_even(),
        two_elementary: el,
        type2: t2,
        disc_two_rank: dg.two_rank(),
        k_saturated,
        complement_two_elementary: cel,
        complement_type2: ct2,
        complement_disc_two_rank: cdg.two_rank(),
        roots_in_positive_perp: 2 * roots.len(),
        roots_split: split,
        lattice: p,
    })
}

/// Try Q_4 first, then Q_2 (main construction only).
pub fn embed_any(kind: KummerType, sigma: u32) -> Result<Embedding, KummerError> {
    match embed_kummer(kind, sigma, Complement::Q4, false) {
        Err(KummerError::NoEmbedding) => match embed_kummer(kind, sigma, Complement::Q2, false) {
            Err(KummerError::ExtendedRequired) => Err(KummerError::NoEmbedding),
            other => other,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_a1_sigma_one() {
        let e = embed_kummer(KummerType::A1x16, 1, Complement::Q4, false).unwrap();
        assert!(e.all_verified());
        assert_eq!(e.glue_rank, 4);
        assert_eq!(e.literal_reading_compatible, Some(false));
    }

    #[test]
    fn two_e8_is_direct_sum() {
        let e = embed_kummer(KummerType::E8x2, 2, Complement::Q4, false).unwrap();
        assert_eq!(e.glue_rank, 0);
        assert!(e.all_verified());
    }

    #[test]
    fn out_of_range_sigma() {
        assert_eq!(embed_kummer(KummerType::A1x16, 6, Complement::Q4, false).unwrap_err(), KummerError::NoEmbedding);
        assert_eq!(embed_kummer(KummerType::D16, 3, Complement::Q4, false).unwrap_err(), KummerError::NoEmbedding);
    }

    #[test]
    fn q2_requires_flag_for_glued_cases() {
        assert_eq!(embed_kummer(KummerType::D4x4, 1, Complement::Q2, false).unwrap_err(), KummerError::ExtendedRequired);
        assert!(embed_kummer(KummerType::D4x4, 1, Complement::Q2, true).unwrap().all_verified());
        assert!(embed_kummer(KummerType::D16, 1, Complement::Q2, false).unwrap().all_verified());
    }

    #[test]
    fn embed_any_covers_sigma_one() {
        for kind in KummerType::ALL {
            let e = embed_any(kind, 1).unwrap();
            assert_eq!(e.disc_two_rank, Some(2));
        }
    }
}
