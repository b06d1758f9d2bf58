//! Exact big-bracket calculus on the graded symplectic manifold `T*[2]A[1]`.
//!
//! Courant and Lie algebroid structures are encoded as elements of the
//! function algebra, and Nijenhuis-type tensor conditions (Poisson-Nijenhuis,
//! ΩN, PΩ, Hitchin pairs, Poisson quasi-Nijenhuis with background,
//! complementary forms) are decided by exact computation, each through two
//! independent routes whose agreement is reported.
//!
//! The core is generic over the coefficient field (see [`Scalar`]); the
//! aliases below fix it to arbitrary-precision rationals.

pub mod cli_io;
pub mod courant;
pub mod error;
pub mod graded_algebra;
pub mod hierarchy;
pub mod random;
pub mod report;
pub mod scalar;
pub mod structures;
pub mod supergeometry;
pub mod tensor_calculus;

pub use courant::{CourantStructure, Section};
pub use error::{Error, Result};
pub use graded_algebra::{big_bracket, bidegree_component, multiply, Generator, GradedElement, MonomialKey};
pub use report::{Condition, CrossCheck, Outcome, StructureKind, StructureReport, Witness};
pub use scalar::Scalar;
pub use supergeometry::{
    dualize, dualize_space, identity_element, mu_from_spec, pairing, AlgebroidSpec, PhaseSpace,
};
pub use tensor_calculus::{EndoTensor, Matrix};

/// Arbitrary-precision rational coefficients.
pub type Rational = num_rational::BigRational;

pub type Element = GradedElement<Rational>;
pub type Algebroid = AlgebroidSpec<Rational>;
pub type Tensor = EndoTensor<Rational>;
pub type RMatrix = Matrix<Rational>;
pub type Courant = CourantStructure<Rational>;
pub type Report = StructureReport<Rational>;
