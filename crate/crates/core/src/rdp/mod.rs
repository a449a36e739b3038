//! Invariants of rational double points: dim of the local B_n quotients,
//! B-indices, the (i, m, b) counts, and the exhaustive index-16 bound.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::f_bound;
use crate::surface::Branch;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdpError {
    #[error("illegal RDP type {0}")]
    Illegal(String),
    #[error("cannot parse RDP type {0:?}")]
    Parse(String),
    #[error("b_z is only tabulated for A_N, D_2l^0, D_(2l+1)^(1/2) and E^0 types, not {0}")]
    OutsideDisplay(String),
    #[error("collection not realizable on an RDP K3: dim H^0(B_{n}) would be {value}")]
    NotRealizable { n: u32, value: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A,
    D,
    E,
}

/// An RDP type in characteristic p. The coindex is stored doubled, so
/// D_7^{1/2} has r2 = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RdpType {
    pub kind: Kind,
    pub n: u32,
    pub r2: u32,
    pub p: u32,
}

impl RdpType {
    pub fn new(kind: Kind, n: u32, r2: u32, p: u32) -> Result<Self, RdpError> {
        let t = RdpType { kind, n, r2, p };
        t.check()?;
        Ok(t)
    }

    pub fn a(n: u32) -> Self {
        RdpType { kind: Kind::A, n, r2: 0, p: 2 }
    }

    /// D_n^r in characteristic 2, r given doubled.
    pub fn d(n: u32, r2: u32) -> Self {
        RdpType { kind: Kind::D, n, r2, p: 2 }
    }

    pub fn e(n: u32, r: u32) -> Self {
        RdpType { kind: Kind::E, n, r2: 2 * r, p: 2 }
    }

    /// Largest coindex (doubled) allowed in characteristic p.
    fn max_r2(&self) -> Option<u32> {
        match (self.kind, self.p) {
            (Kind::A, _) => Some(0),
            (Kind::D, 2) => Some(self.n - 2),
            (Kind::D, _) => Some(0),
            (Kind::E, 2) => Some(2 * [1, 3, 4][(self.n - 6) as usize]),
            (Kind::E, 3) => Some(2 * [1, 1, 2][(self.n - 6) as usize]),
            (Kind::E, 5) => Some(if self.n == 8 { 2 } else { 0 }),
            (Kind::E, _) => Some(0),
        }
    }

    pub fn check(&self) -> Result<(), RdpError> {
        let bad = || Err(RdpError::Illegal(self.to_string()));
        let size_ok = match self.kind {
            Kind::A => self.n >= 1,
            Kind::D => self.n >= 4,
            Kind::E => (6..=8).contains(&self.n),
        };
        if !size_ok || self.p < 2 {
            return bad();
        }
        let max = self.max_r2().unwrap_or(0);
        // D_odd in characteristic 2 uses half-integer coindices
        let parity_ok = if self.kind == Kind::D && self.p == 2 && self.n % 2 == 1 {
            self.r2 % 2 == 1
        } else {
            self.r2 % 2 == 0
        };
        if !parity_ok || self.r2 > max {
            return bad();
        }
        Ok(())
    }

    pub fn index(&self) -> u32 {
        self.n
    }

    /// (N/2 - r - 1) doubled, for D types.
    fn d_excess2(&self) -> u32 {
        self.n - self.r2 - 2
    }

    /// dim of the local quotient B_{n,z}; zero for F-injective types.
    pub fn dim_b_bar(&self, n: u32) -> Result<u32, RdpError> {
        self.check()?;
        let r = self.r2 / 2;
        let seq: &[u32] = match (self.kind, self.p, self.n, r) {
            (Kind::A, ..) => &[],
            (Kind::D, 2, ..) => {
                // ceil((1 - 2^-n) k) = k - floor(k / 2^n), k = N/2 - r - 1
                let k = self.d_excess2() / 2;
                let shift = n.min(31);
                return Ok(k - (k >> shift));
            }
            (Kind::D, ..) => &[],
            (Kind::E, 2, 8, 0) => &[2, 3, 4],
            (Kind::E, 2, 8, 1) | (Kind::E, 2, 7, 0) => &[1, 2, 3],
            (Kind::E, 2, 8, 2) | (Kind::E, 2, 7, 1) => &[1, 2],
            (Kind::E, 2, 8, 3) | (Kind::E, 2, 7, 2) | (Kind::E, 2, 6, 0) => &[1],
            (Kind::E, 3, 8, 0) => &[1, 2],
            (Kind::E, 3, 8, 1) | (Kind::E, 3, 7, 0) | (Kind::E, 3, 6, 0) => &[1],
            (Kind::E, 5, 8, 0) => &[1],
            (Kind::E, ..) => &[],
        };
        Ok(match n {
            0 => 0,
            _ => seq.get(n as usize - 1).or(seq.last()).copied().unwrap_or(0),
        })
    }

    /// Smallest n after which dim_b_bar is constant.
    pub fn b_index(&self) -> Result<u32, RdpError> {
        self.check()?;
        if self.kind == Kind::D && self.p == 2 {
            // ceil(log2(N/2 - r)); the doubled value is even here
            let k = self.d_excess2() / 2 + 1;
            return Ok(u32::BITS - (k - 1).leading_zeros());
        }
        let mut n = 0;
        while self.dim_b_bar(n + 1)? != self.dim_b_bar(n)? {
            n += 1;
        }
        Ok(n)
    }

    pub fn m_z(&self) -> u32 {
        let l = self.n / 2;
        match (self.kind, self.n % 2) {
            (Kind::A, 1) => l + 1,
            (Kind::A, _) => 0,
            (Kind::D, 0) => l + 1,
            (Kind::D, _) => 2,
            (Kind::E, _) => [0, 3, 0][(self.n - 6) as usize],
        }
    }

    pub fn b_z(&self) -> Result<u32, RdpError> {
        let l = self.n / 2;
        let outside = || Err(RdpError::OutsideDisplay(self.to_string()));
        if self.p != 2 {
            return outside();
        }
        match (self.kind, self.r2) {
            (Kind::A, _) => Ok(0),
            (Kind::D, 0) if self.n % 2 == 0 => Ok(l - 1),
            (Kind::D, 1) if self.n % 2 == 1 => Ok(l - 1),
            (Kind::E, 0) => Ok([1, 3, 4][(self.n - 6) as usize]),
            _ => outside(),
        }
    }

    /// (i_z, m_z, b_z).
    pub fn mzbz(&self) -> Result<(u32, u32, u32), RdpError> {
        self.check()?;
        Ok((self.index(), self.m_z(), self.b_z()?))
    }
}

impl fmt::Display for RdpType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            Kind::A => "A",
            Kind::D => "D",
            Kind::E => "E",
        };
        write!(f, "{k}_{}", self.n)?;
        if self.kind != Kind::A {
            if self.r2 % 2 == 1 {
                write!(f, "^{}/2", self.r2)?;
            } else {
                write!(f, "^{}", self.r2 / 2)?;
            }
        }
        Ok(())
    }
}

/// Accepts "D16r0", "D_16^0", "D7^1/2", "E8", "A_3"; a missing coindex is
/// 0 (1/2 for odd D), characteristic 2.
impl FromStr for RdpType {
    type Err = RdpError;
    fn from_str(s: &str) -> Result<Self, RdpError> {
        let err = || RdpError::Parse(s.to_string());
        let clean: String = s.chars().filter(|c| !matches!(c, '_' | '{' | '}' | ' ')).collect();
        let mut chars = clean.chars();
        let kind = match chars.next().ok_or_else(err)?.to_ascii_uppercase() {
            'A' => Kind::A,
            'D' => Kind::D,
            'E' => Kind::E,
            _ => return Err(err()),
        };
        let rest: String = chars.collect();
        let (num, co) = match rest.find(['r', '^']) {
            Some(i) => (&rest[..i], Some(&rest[i + 1..])),
            None => (&rest[..], None),
        };
        let n: u32 = num.parse().map_err(|_| err())?;
        let r2 = match co {
            None => u32::from(kind == Kind::D && n % 2 == 1),
            Some(c) => match c.split_once('/') {
                Some((a, "2")) => a.parse::<u32>().map_err(|_| err())?,
                Some(_) => return Err(err()),
                None => 2 * c.parse::<u32>().map_err(|_| err())?,
            },
        };
        RdpType::new(kind, n, r2, 2)
    }
}

impl Serialize for RdpCollection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A multiset of RDP types.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RdpCollection {
    counts: BTreeMap<RdpType, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Aggregates {
    pub i: u32,
    pub m: u32,
    pub b: u32,
    pub n_b: u32,
}

impl RdpCollection {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_types(ts: &[(RdpType, u32)]) -> Self {
        let mut c = Self::new();
        for &(t, k) in ts {
            c.add(t, k);
        }
        c
    }

    pub fn add(&mut self, t: RdpType, k: u32) {
        if k > 0 {
            *self.counts.entry(t).or_insert(0) += k;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RdpType, &u32)> {
        self.counts.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn aggregates(&self) -> Result<Aggregates, RdpError> {
        let mut a = Aggregates { i: 0, m: 0, b: 0, n_b: 0 };
        for (t, &k) in &self.counts {
            let (i, m, b) = t.mzbz()?;
            a.i += k * i;
            a.m += k * m;
            a.b += k * b;
            a.n_b = a.n_b.max(t.b_index()?);
        }
        Ok(a)
    }

    pub fn n_b(&self) -> Result<u32, RdpError> {
        self.counts.keys().try_fold(0, |a, t| Ok(a.max(t.b_index()?)))
    }

    /// The configuration of affine singular points in each branch.
    pub fn from_branch(b: Branch) -> Option<Self> {
        let (t, k) = match b {
            Branch::A1x16 => (RdpType::a(1), 16),
            Branch::D4x4 => (RdpType::d(4, 0), 4),
            Branch::D8x2 => (RdpType::d(8, 0), 2),
            Branch::D16 => (RdpType::d(16, 0), 1),
            Branch::E8x2 => (RdpType::e(8, 0), 2),
            Branch::NonRdp => return None,
        };
        Some(Self::from_types(&[(t, k)]))
    }
}

impl fmt::Display for RdpCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.counts.iter().map(|(t, k)| format!("{k}{t}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// "16A1", "13A_1 + D_4^0", "2E8r0".
impl FromStr for RdpCollection {
    type Err = RdpError;
    fn from_str(s: &str) -> Result<Self, RdpError> {
        let mut c = Self::new();
        if s.trim() == "0" || s.trim().is_empty() {
            return Ok(c);
        }
        for part in s.split('+') {
            let part = part.trim();
            let digits = part.chars().take_while(char::is_ascii_digit).count();
            let k = if digits == 0 { 1 } else { part[..digits].parse().map_err(|_| RdpError::Parse(s.into()))? };
            c.add(part[digits..].parse()?, k);
        }
        Ok(c)
    }
}

/// dim H^0(X^sm, B_n Omega^1) for an RDP K3 with the given singularities.
pub fn h0_bn_dim(c: &RdpCollection, n: u32) -> Result<u32, RdpError> {
    let nb = c.n_b()?;
    let n = n.min(nb);
    let mut total: i64 = 0;
    for (t, &k) in c.iter() {
        total += i64::from(k) * i64::from(t.dim_b_bar(n)?);
    }
    let value = total - i64::from(n);
    if value < 0 {
        return Err(RdpError::NotRealizable { n, value });
    }
    Ok(value as u32)
}

/// f(m) + b - n_B.
pub fn leq5_value(c: &RdpCollection) -> Result<i64, RdpError> {
    let a = c.aggregates()?;
    let f = f_bound(a.m as usize).map_err(|_| RdpError::Illegal(format!("m = {} out of range", a.m)))?;
    Ok(f as i64 + i64::from(a.b) - i64::from(a.n_b))
}

/// The types allowed in the index-16 statement, up to a given index.
pub fn allowed_types(max_index: u32) -> Vec<RdpType> {
    let mut v = Vec::new();
    for n in 1..=max_index {
        v.push(RdpType::a(n));
        if n >= 4 {
            v.push(RdpType::d(n, n % 2));
        }
        if (6..=8).contains(&n) {
            v.push(RdpType::e(n, 0));
        }
    }
    v
}

/// Every multiset of allowed types with total index at most max_index.
pub fn enumerate_collections(max_index: u32) -> Vec<RdpCollection> {
    fn rec(types: &[RdpType], start: usize, budget: u32, cur: &mut Vec<RdpType>, out: &mut Vec<RdpCollection>) {
        out.push(RdpCollection::from_types(&cur.iter().map(|&t| (t, 1)).collect::<Vec<_>>()));
        for (k, &t) in types.iter().enumerate().skip(start) {
            if t.n <= budget {
                cur.push(t);
                rec(types, k, budget - t.n, cur, out);
                cur.pop();
            }
        }
    }
    let types = allowed_types(max_index);
    let mut out = Vec::new();
    rec(&types, 0, max_index, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Leq5Result {
    pub max_index: u32,
    pub collections: usize,
    pub max_value: i64,
    pub equality_cases: Vec<RdpCollection>,
}

/// Maximum of f(m) + b - n_B over all allowed collections of total index
/// at most max_index, and the collections attaining it.
pub fn verify_leq5(max_index: u32) -> Result<Leq5Result, RdpError> {
    let all = enumerate_collections(max_index);
    let vals: Vec<i64> = all.par_iter().map(leq5_value).collect::<Result<_, _>>()?;
    let max_value = vals.iter().copied().max().unwrap_or(0);
    let mut equality_cases: Vec<RdpCollection> =
        all.iter().zip(&vals).filter(|(_, &v)| v == max_value).map(|(c, _)| c.clone()).collect();
    equality_cases.sort();
    Ok(Leq5Result { max_index, collections: all.len(), max_value, equality_cases })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZInftyBound {
    pub collection: RdpCollection,
    pub bound: i64,
    pub f_m: i64,
    pub b_minus_nb: i64,
    pub aggregates: Aggregates,
    /// Set when some non-A_1 point contributes to m; its curves then obey
    /// parity constraints the f(m) count ignores, so the bound may not be
    /// attained (13A_1 + D_4^0 is the standard example).
    pub possibly_not_sharp: bool,
}

/// f(m) + (b - n_B), an upper bound for dim H^0(X^sm, Z_infty Omega^1).
pub fn z_infty_upper_bound(c: &RdpCollection) -> Result<ZInftyBound, RdpError> {
    let a = c.aggregates()?;
    let f = f_bound(a.m as usize).map_err(|_| RdpError::Illegal(format!("m = {} out of range", a.m)))? as i64;
    let bm = i64::from(a.b) - i64::from(a.n_b);
    let uniform = c.counts.len() == 1;
    let possibly_not_sharp = !uniform && c.iter().any(|(t, _)| *t != RdpType::a(1) && t.m_z() > 0);
    Ok(ZInftyBound { collection: c.clone(), bound: f + bm, f_m: f, b_minus_nb: bm, aggregates: a, possibly_not_sharp })
}
