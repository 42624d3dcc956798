//! Exact linear algebra over the integers and the rationals.

pub mod abelian;
pub mod field;
pub mod lattice;
pub mod matrix;
pub mod normal;

pub use abelian::AbGroup;
pub use field::{Field, Rationals};
pub use lattice::{lattice_index, ZLattice};
pub use matrix::{DecimalString, IntMatrix, Matrix, RatMatrix};
pub use normal::{hnf, kernel_saturated, snf, CancelToken, Hnf, Snf};
