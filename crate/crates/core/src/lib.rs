//! Exact lattice models for the functor `Hom_{R<G>}(-, E)` on finitely presented
//! semilinear modules over endomorphism rings of CM elliptic curves.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: exact integer/rational matrices, Hermite and Smith normal forms,
//!   lattices and presented abelian groups.
//! * [`quad`]: imaginary quadratic fields, their orders and fractional ideals.
//! * [`twisted`]: twisted group rings `R<G>` for `G` of order 1 or 2.
//! * [`gmodule`]: finitely presented `R<G>`-modules, flattening, hom groups,
//!   the induction/coinduction adjunctions and semisimple decomposition.
//! * [`tori`]: complex tori with descent data, the kernel construction of the
//!   functor and isogeny certificates.
//! * [`classpoly`]: reduced forms, `j`-invariants and Hilbert class polynomials.

pub mod classpoly;
pub mod error;
pub mod gmodule;
pub mod linalg;
pub mod quad;
pub mod tori;
pub mod twisted;

pub use error::{Error, Result};

/// Library version recorded in certificates.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
