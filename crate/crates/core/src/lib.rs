//! Discrete classical orthogonal polynomials (Hahn, dual Hahn, Racah,
//! Krawtchouk) and their continuous counterparts, built for every degree,
//! including degrees beyond the orthogonality cutoff `N`.
//!
//! The crate constructs the polynomials exactly, verifies their structural
//! identities, checks the Δ-Sobolev orthogonality that characterizes them
//! for all degrees, and locates their complex zeros.

pub mod algebra;
pub mod error;
pub mod families;
pub mod gamma;
pub mod identities;
pub mod sobolev;
pub mod zeros;

pub use algebra::{pochhammer, CPoly, Lattice, Poly, QPoly, Scalar, Var};
pub use error::{Error, Result};
pub use families::FamilySpec;
