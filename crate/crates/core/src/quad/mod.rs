//! Imaginary quadratic fields, orders and fractional ideals.

pub mod field;
pub mod ideal;
pub mod order;

pub use field::{FieldElement, ImQuadField};
pub use ideal::{colon_ideal, ideal_index, ideal_mul, FracIdeal};
pub use order::{OrderElement, QuadOrder};
