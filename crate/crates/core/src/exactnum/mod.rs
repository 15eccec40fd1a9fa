//! Exact arithmetic in cyclotomic fields Q(ζₙ) and their cubic subfields.

mod cubic;
mod elem;
pub mod field;
mod intsum;
pub mod linalg;
pub mod sign;

use num_bigint::BigInt;

pub use cubic::{is_cubic_conductor, CubicFieldDesc};
pub use elem::CycloElem;
pub use intsum::{ratio_stabilizer, IntRootSum};
pub use sign::{cmp_real, sign_at_standard_embedding};

/// Arbitrary-precision rational, always in lowest terms.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}
