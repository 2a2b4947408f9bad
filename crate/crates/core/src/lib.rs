//! Exact computations with sequential direct and inverse limits of
//! coordinate vector lattices `R^n`, their order duals, band projections
//! and carriers.
//!
//! Scalars are exact rationals. Lattice homomorphisms between coordinate
//! lattices are kept in canonical weight/index form ([`CanonicalHom`]).
//! Direct limits are represented by germs ([`ColimElement`]) and inverse
//! limits by lazily generated threads ([`Thread`]); claims about infinite
//! objects are certified to an explicit depth.

pub mod band;
pub mod carrier;
pub mod cli;
pub mod colimit;
pub mod demo;
pub mod duality;
pub mod error;
pub mod feasibility;
pub mod hom;
pub mod limit;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod suites;
pub mod system;
pub mod vector;

pub use band::Band;
pub use colimit::ColimElement;
pub use duality::{ColimFunctional, LimFunctional};
pub use error::{Error, Result};
pub use hom::{CanonicalHom, PositiveMatrix};
pub use limit::Thread;
pub use scalar::Scalar;
pub use system::{DirectSystem, InverseSystem, SequentialSystem};
pub use vector::FinVector;
