//! Exact integer scalars used by the lattice code.
//!
//! Everything in `lattice` is generic over [`Scalar`]; rationals are
//! `Ratio<I>` for the same `I`. Machine integers are fast but the caller
//! is responsible for staying in range, `BigInt` never overflows.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("value out of range for scalar")
    }
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

pub type Rat<I> = Ratio<I>;

pub fn int<I: Scalar>(v: i64) -> I {
    <I as Scalar>::from_i64(v)
}

pub fn rat<I: Scalar>(n: i64, d: i64) -> Rat<I> {
    Ratio::new(int(n), int(d))
}

/// Largest integer whose square is at most `r` (r >= 0).
pub fn isqrt_floor(r: &BigInt) -> BigInt {
    r.sqrt()
}

/// Reduce a rational into [0, m) for a positive integer modulus m.
pub fn rat_mod<I: Scalar>(x: &Rat<I>, m: &I) -> Rat<I> {
    let m = Ratio::from_integer(m.clone());
    let q = (x / &m).floor();
    x - q * m
}
