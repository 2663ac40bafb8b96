//! Cohomology of flows on finite form models.
//!
//! A flow is presented by degree-one generators together with the values of
//! `d` and of the contraction `i_X` on them. From that data the crate builds
//! the Cartan operators exactly, extracts invariant, basic and relative
//! subcomplexes, the cokernel complex of the higher cohomological equation,
//! and the exact sequences relating them. Numeric companions solve the
//! cohomological equation on the 2-torus by Fourier inversion and check the
//! SL(2,R) operator tables against matrix flows.

pub mod complex;
pub mod error;
pub mod exterior;
pub mod field;
pub mod fourier;
pub mod identities;
pub mod linalg;
pub mod models;
pub mod report;
pub mod sequences;
pub mod sl2;

pub use error::{Error, Result};
