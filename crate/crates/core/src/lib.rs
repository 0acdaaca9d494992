//! Exact computation of two-sided Anick resolutions for algebras given by
//! quivers with relations, via algebraic Morse theory, together with a
//! homological perturbation laboratory on finite matrix complexes.

pub mod anick;
pub mod bimodule;
pub mod chains;
pub mod error;
pub mod gsb;
pub mod hpl;
pub mod matrix;
pub mod morse;
pub mod pathalg;
pub mod scalar;

pub use error::{Error, Result};
pub use gsb::{Certificate, GroebnerData, NormalForm, Presentation};
pub use pathalg::{compare, AdmissibleOrder, Arrow, FreeElement, Path, Quiver};
pub use scalar::{Field, Scalar};
