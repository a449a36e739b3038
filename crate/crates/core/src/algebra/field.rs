//! Finite fields F_{p^e}.
//!
//! Elements are integers whose base-p digits are the coordinates in the
//! basis 1, z, .., z^(e-1) where z is a root of the modulus. Small fields
//! (q <= 2^16) use log/exp tables; binary fields of degree up to 127 use
//! carry-less arithmetic on u128.

use std::fmt;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Fe = u128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("unsupported field: p = {p}, e = {e}")]
    Unsupported { p: u32, e: u32 },
    #[error("modulus is not irreducible of degree {0}")]
    Reducible(u32),
    #[error("element {0} out of range")]
    OutOfRange(String),
    #[error("no embedding of F_{{{0}}} into F_{{{1}}}")]
    NoEmbedding(String, String),
}

/// Conventional primitive binary moduli, bit i = coefficient of z^i.
const BINARY_MODULI: [u32; 17] = [
    0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x4443, 0x8003, 0x1100b,
];

/// Largest degree of a binary field.
pub const MAX_BINARY_DEGREE: u32 = 127;
/// Largest order of a table field.
pub const MAX_TABLE_ORDER: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    /// Monic modulus over F_p, lowest coefficient first (length e + 1).
    pub modulus: Vec<u32>,
}

enum Backend {
    Table { exp: Vec<u32>, log: Vec<u32> },
    Binary { modulus: u128 },
}

struct Data {
    spec: FieldSpec,
    q: u128,
    backend: Backend,
}

/// A finite field; cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Data>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p(), self.e())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p(), self.e())
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// --- polynomials over F_p as coefficient vectors (construction only) ---

fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let inv = fp_inv(m[dm], p);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = r[d] * inv % p;
        for (i, &mi) in m.iter().enumerate() {
            let k = d - dm + i;
            r[k] = (r[k] + p * p - c * mi % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    fp_rem(&r, m, p)
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        k >>= 1;
    }
    r as u32
}

fn fp_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// x^(p^k) mod m by repeated p-th powering.
fn fp_frob_power(m: &[u32], p: u32, k: u32) -> Vec<u32> {
    let mut x = fp_rem(&[0, 1], m, p);
    for _ in 0..k {
        let mut r = vec![1u32];
        let mut base = x.clone();
        let mut n = p;
        while n > 0 {
            if n & 1 == 1 {
                r = fp_mulmod(&r, &base, m, p);
            }
            base = fp_mulmod(&base, &base, m, p);
            n >>= 1;
        }
        x = r;
    }
    x
}

/// Rabin's test: m monic of degree e is irreducible over F_p.
fn fp_irreducible(m: &[u32], p: u32) -> bool {
    let e = (m.len() - 1) as u32;
    if e == 0 {
        return false;
    }
    let sub_x = |mut v: Vec<u32>| {
        if v.len() < 2 {
            v.resize(2, 0);
        }
        v[1] = (v[1] + p - 1) % p;
        fp_rem(&v, m, p)
    };
    if !sub_x(fp_frob_power(m, p, e)).is_empty() {
        return false;
    }
    for r in prime_factors(e as u128) {
        let g = fp_gcd(m, &sub_x(fp_frob_power(m, p, e / r as u32)), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Rabin's test for a binary polynomial of degree e <= 127 packed in bits.
fn bin_irreducible(m: u128, e: u32) -> bool {
    let x: u128 = if e == 1 { m ^ 2 } else { 2 };
    // x^(2^k) mod m
    let frob = |k: u32| (0..k).fold(x, |v, _| bmul(v, v, e, m));
    if frob(e) != x {
        return false;
    }
    let deg = |a: u128| 127 - a.leading_zeros() as i32;
    let gcd = |mut a: u128, mut b: u128| {
        while b != 0 {
            while a != 0 && deg(a) >= deg(b) {
                a ^= b << (deg(a) - deg(b));
            }
            std::mem::swap(&mut a, &mut b);
        }
        a
    };
    prime_factors(e as u128).into_iter().all(|r| gcd(m, frob(e / r as u32) ^ x) == 1)
}

fn binary_modulus(e: u32) -> Vec<u32> {
    let bits_to_vec = |m: u128| (0..=e).map(|i| (m >> i & 1) as u32).collect::<Vec<u32>>();
    if e <= 16 {
        return bits_to_vec(BINARY_MODULI[e as usize] as u128);
    }
    let top = 1u128 << e;
    for k in 1..e {
        let m = top | 1 << k | 1;
        if bin_irreducible(m, e) {
            return bits_to_vec(m);
        }
    }
    for a in 1..e {
        for b in a + 1..e {
            for c in b + 1..e {
                let m = top | 1 << a | 1 << b | 1 << c | 1;
                if bin_irreducible(m, e) {
                    return bits_to_vec(m);
                }
            }
        }
    }
    unreachable!("pentanomials exist in every degree checked")
}

/// First irreducible monic polynomial of degree e in lexicographic order.
fn search_modulus(p: u32, e: u32) -> Vec<u32> {
    let total = (p as u64).pow(e);
    for n in 0..total {
        let mut m: Vec<u32> = (0..e).map(|i| ((n / (p as u64).pow(i)) % p as u64) as u32).collect();
        m.push(1);
        if fp_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn bmul(mut a: u128, mut b: u128, e: u32, m: u128) -> u128 {
    let mut r = 0u128;
    let top = 1u128 << (e - 1);
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        if a & top != 0 {
            a = (a << 1) ^ m;
        } else {
            a <<= 1;
        }
    }
    r
}

impl Field {
    /// F_{p^e} with the default modulus. Constructed fields are cached.
    pub fn new(p: u32, e: u32) -> Result<Self, FieldError> {
        static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().unwrap().get(&(p, e)) {
            return Ok(f.clone());
        }
        let f = Self::build(p, e)?;
        cache.lock().unwrap().insert((p, e), f.clone());
        Ok(f)
    }

    fn build(p: u32, e: u32) -> Result<Self, FieldError> {
        if !is_prime(p) || e == 0 {
            return Err(FieldError::Unsupported { p, e });
        }
        let m = if p == 2 {
            if e > MAX_BINARY_DEGREE {
                return Err(FieldError::Unsupported { p, e });
            }
            binary_modulus(e)
        } else {
            if (p as u64).checked_pow(e).map_or(true, |q| q > MAX_TABLE_ORDER) {
                return Err(FieldError::Unsupported { p, e });
            }
            search_modulus(p, e)
        };
        Self::with_modulus(p, m)
    }

    /// The binary field F_{2^e}.
    pub fn binary(e: u32) -> Self {
        Self::new(2, e).expect("supported binary degree")
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self, FieldError> {
        Self::with_modulus(spec.p, spec.modulus.clone())
    }

    /// Field with an explicit monic modulus; irreducibility is verified.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        let e = modulus.len().saturating_sub(1) as u32;
        if !is_prime(p) || e == 0 || modulus.iter().any(|&c| c >= p) || modulus[e as usize] != 1 {
            return Err(FieldError::Unsupported { p, e });
        }
        let irreducible = if p == 2 && e <= MAX_BINARY_DEGREE {
            bin_irreducible(modulus.iter().enumerate().fold(0u128, |a, (i, &c)| a | (c as u128) << i), e)
        } else {
            fp_irreducible(&modulus, p)
        };
        if !irreducible {
            return Err(FieldError::Reducible(e));
        }
        let q = (p as u128).checked_pow(e).ok_or(FieldError::Unsupported { p, e })?;
        let spec = FieldSpec { p, e, modulus };
        let backend = if q <= MAX_TABLE_ORDER as u128 {
            Self::tables(&spec, q as u32)
        } else if p == 2 && e <= MAX_BINARY_DEGREE {
            let m = spec.modulus.iter().enumerate().fold(0u128, |a, (i, &c)| a | (c as u128) << i);
            Backend::Binary { modulus: m }
        } else {
            return Err(FieldError::Unsupported { p, e });
        };
        Ok(Field(Arc::new(Data { spec, q, backend })))
    }

    fn tables(spec: &FieldSpec, q: u32) -> Backend {
        let (p, e) = (spec.p, spec.e as usize);
        // multiplication of digit vectors mod the modulus
        let to_digits = |mut a: u32| {
            let mut d = vec![0u32; e];
            for x in d.iter_mut() {
                *x = a % p;
                a /= p;
            }
            d
        };
        let from_digits = |d: &[u32]| d.iter().rev().fold(0u32, |a, &x| a * p + x);
        let mul = |a: u32, b: u32| {
            let r = fp_mulmod(&to_digits(a), &to_digits(b), &spec.modulus, p);
            let mut r = r;
            r.resize(e, 0);
            from_digits(&r)
        };
        let order = q - 1;
        let factors = prime_factors(order as u128);
        let pow = |g: u32, mut k: u32| {
            let mut r = 1u32;
            let mut b = g;
            while k > 0 {
                if k & 1 == 1 {
                    r = mul(r, b);
                }
                b = mul(b, b);
                k >>= 1;
            }
            r
        };
        let g = (2..q.max(3))
            .find(|&g| factors.iter().all(|&r| pow(g, order / r as u32) != 1))
            .unwrap_or(1);
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order as usize {
            exp[i] = x;
            exp[i + order as usize] = x;
            log[x as usize] = i as u32;
            x = mul(x, g);
        }
        Backend::Table { exp, log }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }
    pub fn p(&self) -> u32 {
        self.0.spec.p
    }
    pub fn e(&self) -> u32 {
        self.0.spec.e
    }
    /// Number of elements.
    pub fn q(&self) -> u128 {
        self.0.q
    }

    pub fn zero(&self) -> Fe {
        0
    }
    pub fn one(&self) -> Fe {
        1
    }

    /// The image of an integer under Z -> F_p -> F.
    pub fn from_int(&self, n: i64) -> Fe {
        n.rem_euclid(self.p() as i64) as Fe
    }

    pub fn contains(&self, a: Fe) -> bool {
        a < self.0.q
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p() as u128;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut r, mut scale) = (a, b, 0u128, 1u128);
        while a > 0 || b > 0 {
            r += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        r
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.p() as u128;
        if p == 2 {
            return a;
        }
        let (mut a, mut r, mut scale) = (a, 0u128, 1u128);
        while a > 0 {
            r += ((p - a % p) % p) * scale;
            a /= p;
            scale *= p;
        }
        r
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.0.backend {
            Backend::Table { exp, log } => exp[(log[a as usize] + log[b as usize]) as usize] as Fe,
            Backend::Binary { modulus } => bmul(a, b, self.e(), *modulus),
        }
    }

    pub fn pow(&self, a: Fe, mut k: u128) -> Fe {
        if let Backend::Table { exp, log } = &self.0.backend {
            if a == 0 {
                return if k == 0 { 1 } else { 0 };
            }
            let order = (self.0.q - 1) as u128;
            return exp[((log[a as usize] as u128 * (k % order)) % order) as usize] as Fe;
        }
        let mut r = 1;
        let mut b = a;
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            k >>= 1;
        }
        r
    }

    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a != 0, "inverse of zero");
        match &self.0.backend {
            Backend::Table { exp, log } => {
                let order = self.0.q as u32 - 1;
                exp[((order - log[a as usize]) % order) as usize] as Fe
            }
            Backend::Binary { .. } => self.pow(a, self.0.q - 2),
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    /// a^p.
    pub fn frob(&self, a: Fe) -> Fe {
        self.pow(a, self.p() as u128)
    }

    /// The unique b with b^p = a.
    pub fn root_p(&self, a: Fe) -> Fe {
        let mut b = a;
        for _ in 1..self.e() {
            b = self.frob(b);
        }
        b
    }

    /// Square root in characteristic 2.
    pub fn sqrt(&self, a: Fe) -> Fe {
        debug_assert_eq!(self.p(), 2);
        self.root_p(a)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        if self.e() == 127 {
            return rng.gen::<u128>() & ((1u128 << 127) - 1);
        }
        rng.gen_range(0..self.0.q)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        loop {
            let a = self.random(rng);
            if a != 0 {
                return a;
            }
        }
    }

    /// All elements, for fields of order at most 2^16.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        assert!(self.0.q <= MAX_TABLE_ORDER as u128, "field too large to enumerate");
        0..self.0.q
    }

    /// Coordinates in the basis 1, z, .., z^(e-1).
    pub fn digits(&self, a: Fe) -> Vec<u32> {
        let p = self.p() as u128;
        let mut a = a;
        (0..self.e())
            .map(|_| {
                let d = (a % p) as u32;
                a /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> Fe {
        d.iter().rev().fold(0u128, |a, &x| a * self.p() as u128 + x as u128)
    }

    /// Little-endian digit string ("0110" for p = 2).
    pub fn encode(&self, a: Fe) -> String {
        self.digits(a).iter().map(|d| char::from_digit(*d, 36).unwrap()).collect()
    }

    pub fn decode(&self, s: &str) -> Result<Fe, FieldError> {
        let s = s.trim();
        if s.len() > self.e() as usize || s.is_empty() {
            return Err(FieldError::OutOfRange(s.into()));
        }
        let mut d = Vec::new();
        for ch in s.chars() {
            match ch.to_digit(36) {
                Some(x) if x < self.p() => d.push(x),
                _ => return Err(FieldError::OutOfRange(s.into())),
            }
        }
        Ok(self.from_digits(&d))
    }

    /// A generator of the multiplicative group of F_{p^k} inside this
    /// field, for k dividing e.
    pub fn subfield_generator(&self, k: u32) -> Option<Fe> {
        if k == 0 || self.e() % k != 0 {
            return None;
        }
        let small = (self.p() as u128).pow(k) - 1;
        let cof = (self.0.q - 1) / small;
        let factors = prime_factors(small);
        // images of successive elements under x -> x^cof land in the subfield
        let mut a: Fe = 1;
        loop {
            a += 1;
            if a >= self.0.q {
                return if small == 1 { Some(1) } else { None };
            }
            let g = self.pow(a, cof);
            if small == 1 || factors.iter().all(|&r| self.pow(g, small / r) != 1) {
                return Some(g);
            }
        }
    }

    /// Elements of the subfield F_{p^k}.
    pub fn subfield_elements(&self, k: u32) -> Option<Vec<Fe>> {
        let g = self.subfield_generator(k)?;
        let n = (self.p() as u128).pow(k) - 1;
        let mut out = vec![0];
        let mut x = 1;
        for _ in 0..n {
            out.push(x);
            x = self.mul(x, g);
        }
        out.sort_unstable();
        Some(out)
    }

    /// Evaluate a polynomial over F_p (digit coefficients) at a.
    fn eval_fp(&self, coeffs: &[u32], a: Fe) -> Fe {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, a), c as Fe))
    }
}

/// A field homomorphism from a smaller field into a larger one, given by
/// the image of the generator z.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub from: Field,
    pub to: Field,
    /// Images of z^i.
    powers: Vec<Fe>,
}

impl Embedding {
    pub fn identity(f: &Field) -> Self {
        let z = if f.e() == 1 { 1 } else { f.p() as Fe };
        let mut powers = vec![1];
        for _ in 1..f.e() {
            let last = *powers.last().unwrap();
            powers.push(f.mul(last, z));
        }
        Embedding { from: f.clone(), to: f.clone(), powers }
    }

    /// Embedding determined by a root r of the modulus of `from` in `to`.
    pub fn with_root(from: &Field, to: &Field, r: Fe) -> Result<Self, FieldError> {
        if from.p() != to.p() || to.e() % from.e() != 0 || to.eval_fp(&from.spec().modulus, r) != 0 {
            return Err(FieldError::NoEmbedding(from.to_string(), to.to_string()));
        }
        let mut powers = vec![1];
        for _ in 1..from.e() {
            let last = *powers.last().unwrap();
            powers.push(to.mul(last, r));
        }
        Ok(Embedding { from: from.clone(), to: to.clone(), powers })
    }

    pub fn apply(&self, a: Fe) -> Fe {
        if self.from == self.to {
            return a;
        }
        self.from
            .digits(a)
            .iter()
            .zip(&self.powers)
            .fold(0, |acc, (&d, &zp)| self.to.add(acc, self.to.mul(d as Fe, zp)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn axioms(f: &Field) {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            assert_eq!(f.frob(f.root_p(a)), a);
            assert_eq!(f.pow(a, f.q()), a);
        }
    }

    #[test]
    fn small_and_large_fields() {
        for (p, e) in [(2, 1), (2, 2), (2, 4), (2, 8), (2, 16), (3, 2), (5, 2), (3, 5), (2, 17), (2, 40), (2, 120)] {
            axioms(&Field::new(p, e).unwrap());
        }
    }

    #[test]
    fn table_moduli_are_primitive() {
        for e in 1..=16 {
            let f = Field::binary(e);
            // z itself generates
            let z = if e == 1 { 1 } else { 2 };
            let order = f.q() - 1;
            for r in prime_factors(order) {
                if order > 1 {
                    assert_ne!(f.pow(z, order / r), 1, "e = {e}");
                }
            }
        }
    }

    #[test]
    fn bit_packed_rabin_agrees() {
        for e in 1..=10u32 {
            for low in 0..(1u128 << e) {
                let m = low | 1 << e;
                let v: Vec<u32> = (0..=e).map(|i| (m >> i & 1) as u32).collect();
                assert_eq!(bin_irreducible(m, e), fp_irreducible(&v, 2), "{m:b}");
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert_eq!(Field::with_modulus(2, vec![1, 0, 1]).unwrap_err(), FieldError::Reducible(2));
    }

    #[test]
    fn f4_inside_f16() {
        let f = Field::binary(4);
        let f4 = f.subfield_elements(2).unwrap();
        assert_eq!(f4.len(), 4);
        for &a in &f4 {
            assert_eq!(f.pow(a, 4), a);
        }
        assert!(Field::binary(5).subfield_elements(2).is_none());
    }

    #[test]
    fn encode_round_trip() {
        let f = Field::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.decode(&f.encode(a)).unwrap(), a);
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let small = Field::binary(3);
        let big = Field::binary(6);
        let r = big.elements().find(|&r| big.eval_fp(&small.spec().modulus, r) == 0).unwrap();
        let emb = Embedding::with_root(&small, &big, r).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb.apply(small.mul(a, b)), big.mul(emb.apply(a), emb.apply(b)));
                assert_eq!(emb.apply(small.add(a, b)), big.add(emb.apply(a), emb.apply(b)));
            }
        }
    }
}
