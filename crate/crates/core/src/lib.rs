//! Exact invariants of rational homology 3-spheres from integer surgery
//! presentations.
//!
//! Given the linking matrix `L` of a framed surgery link, this crate computes
//! the torsion group `H₁(M) = ℤ_{p₁} ⊕ ⋯ ⊕ ℤ_{p_w}`, the `ℚ/ℤ`-valued linking
//! form `Q`, the normalized U(1) Chern–Simons partition function `Z_k` as an
//! exact sum of roots of unity, and the abelian Reshetikhin–Turaev invariant
//! `I_k`, and checks `Z_k = √(p₁⋯p_w)·I_k`.
//!
//! ```
//! use u1cs::{catalog, verify_relation, CatalogKind};
//!
//! let m = catalog(CatalogKind::M26).unwrap();
//! let report = verify_relation(&m, 2, 1e-9).unwrap();
//! assert!(report.pass);
//! assert_eq!(report.sqrt_p, 12f64.sqrt());
//! ```
//!
//! The exact algorithms are generic over an [`Integral`] scalar and the
//! numerical ones over a [`Real`] scalar; the aliases below fix the usual
//! choices (arbitrary-precision integers, `f64`).

pub mod error;
pub mod homology;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod scalar;
pub mod surgery;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use error::{Error, Result};
pub use homology::{
    analyze, linking_form, self_linking_oracle, torsion_presentation, LinkingForm, TorsionPresentation,
};
pub use invariants::{
    evaluate, is_exactly_zero, partition_function, partition_function_of, reciprocity_check, rt_invariant,
    rt_invariant_with, verify_relation, verify_relation_with, CyclotomicSum, InvariantReport, Phase,
    ReciprocityCheck, RtOptions,
};
pub use linalg::{determinant, inverse_rational, signature, smith_normal_form, SmithDecomposition};
pub use matrix::Matrix;
pub use scalar::{Integral, Real};
pub use surgery::{catalog, parse_presentation, CatalogKind, Format, SurgeryPresentation};

/// Arbitrary-precision integer matrix (linking matrices, generator matrices).
pub type IntMatrix = Matrix<BigInt>;
/// Exact rational matrix (inverses, linking forms).
pub type RatMatrix = Matrix<BigRational>;
/// Double-precision complex value.
pub type ComplexValue = num_complex::Complex64;
/// Smith decomposition over arbitrary-precision integers.
pub type IntSmith = SmithDecomposition<BigInt>;
