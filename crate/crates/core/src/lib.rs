//! Exact arithmetic for extended affine Weyl groups.
//!
//! The library models the extended affine Weyl group attached to a finite
//! crystallographic root system, together with an optional group of diagram
//! automorphisms acting on it.  Every element is stored in the canonical form
//! `t^lambda · w · d` (translation part, finite Weyl part, twist), and all
//! arithmetic is exact: integer coweight coordinates, rational barycenters and
//! Newton points, arbitrary-precision Laurent polynomial coefficients.
//!
//! Module map:
//!
//! * [`rootdata`] — root systems, finite Weyl groups, diagram automorphisms,
//!   and the coweight lattice quotient `P/Q`.
//! * [`eaw`] — extended affine elements, multiplication, three independent
//!   length computations, reduced words, and the text format for elements.
//! * [`newton`] — Newton points, fixed affine subspaces, straightness,
//!   twisted Coxeter elements, and finite-order certificates.
//! * [`conjmin`] — length reduction by conjugation, conjugacy-class keys,
//!   exact conjugacy decision, and the nice-class tests.
//! * [`hecke`] — the affine Hecke algebra with its standard basis, class
//!   polynomials, and cocenter expressions.

pub mod conjmin;
pub mod eaw;
pub mod hecke;
mod linalg;
pub mod newton;
pub mod rootdata;

pub use conjmin::Classifier;
pub use eaw::ExtAffineElement;
pub use rootdata::{RootSystem, TypeLabel};
