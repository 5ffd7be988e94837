//! Numerical laboratory for the *-algebraic transition probability and the
//! Bures distance between positive linear forms on finite-dimensional
//! *-algebras.
//!
//! An algebra here is a finite direct sum of full complex matrix blocks;
//! positive linear forms are represented by their density elements. On top of
//! that representation the crate provides
//!
//! - the transition probability `P` and Bures distance `d_B`, with the
//!   supremum over the coupling set realized independently through an
//!   explicit GNS purification and the commutant unit ball ([`fidelity`]);
//! - the variational characterizations of `√P` (geometric and arithmetic
//!   means over invertible positive elements, decompositions of unity,
//!   double systems) together with witness-producing minimization
//!   ([`estimators`]);
//! - factorization seminorms and the variational expression for the Bures
//!   distance between inner derived forms ([`seminorms`]);
//! - the structure of the set of minimizing elements ([`minimizers`]);
//! - abelian subalgebra analytics: restricted transition probability,
//!   minimizing/projective subalgebras and the least-minimizing-subalgebra
//!   decision ([`subalgebras`]);
//! - seeded random verification suites ([`suites`]), data-parallel via rayon
//!   when the `parallel` feature (default) is enabled.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything is safe to use from multiple threads.

pub mod algebra;
pub mod error;
pub mod estimators;
pub mod fidelity;
pub mod forms;
pub mod minimizers;
pub mod par;
pub mod sampling;
pub mod seminorms;
pub mod subalgebras;
pub mod suites;
pub mod tol;

pub use algebra::{Algebra, Element, SpectralResolution, C64};
pub use error::{Error, Result};
pub use forms::PositiveForm;
pub use subalgebras::AbelianSubalgebra;
