//! Exact computations around Kummer-type lattices, binary codes and
//! characteristic-2 surfaces.

pub mod algebra;
pub mod kummer;
pub mod lattice;
pub mod codes;
pub mod rdp;
pub mod report;
pub mod scalar;
pub mod surface;

use num_bigint::BigInt;

/// Lattice with arbitrary-precision entries; the default everywhere.
pub type Lattice = lattice::GramLattice<BigInt>;
/// Lattice with machine integers for small inputs.
pub type Lattice64 = lattice::GramLattice<i64>;
pub type Int = BigInt;
pub type Rational = num_rational::Ratio<BigInt>;
