//! Scalar traits the algorithms are written against.
//!
//! Exact code is generic over an [`Integral`] ring (machine integers for small
//! inputs, [`num_bigint::BigInt`] otherwise) and its fraction field
//! `Ratio<T>`. Numerical evaluation is generic over a [`Real`] float.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed, ToPrimitive};

/// An exact integer type usable by the linear algebra and homology code.
///
/// Fixed-width integers are accepted but may overflow on large inputs; use
/// `BigInt` whenever the entries or minors are not known to be small.
pub trait Integral:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Residue of `self` modulo `m > 0`, in `0..m`.
    fn residue(&self, m: u64) -> u64 {
        let m_t = Self::from_u64(m).expect("modulus fits the scalar type");
        self.mod_floor(&m_t)
            .to_u64()
            .expect("residue below modulus fits u64")
    }
}

impl<T> Integral for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// A floating-point type used for complex evaluation.
pub trait Real: Float + FloatConst + NumAssign + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<F> Real for F where
    F: Float + FloatConst + NumAssign + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}
