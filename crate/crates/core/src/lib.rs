//! Exact computer algebra for spinor tensor powers.
//!
//! The crate builds Clifford algebras, the spinor modules of `U_q so_N`, the
//! invariant element `C` acting on two tensor factors, and checks the
//! identities relating them: commutation, spectra, the relations of the
//! nonstandard algebra `U'_q so_l`, and the duality between the two actions
//! on `S^{⊗n}`.
//!
//! All arithmetic is exact. Coefficients live in [`scalar::Scalar`], the
//! field of rational functions in `v` with `q = v^4`; large instances are
//! specialized at an [`scalar::EvalPoint`].

pub mod clifford;
pub mod field;
pub mod invariant;
pub mod linalg;
pub mod qspin;
pub mod report;
pub mod scalar;
pub mod weights;

pub use clifford::CliffordElement;
pub use field::{Field, QuadExt};
pub use invariant::{InvariantElement, Parity};
pub use linalg::SparseMat;
pub use qspin::GeneratorAction;
pub use report::{Check, VerificationReport};
pub use scalar::{EvalPoint, HalfInt, Scalar};
pub use weights::{BratteliDiagram, Family, PinLabel, RootData, SpinWeight};
