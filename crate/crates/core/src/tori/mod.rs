//! Complex tori with descent data and the kernel construction of `Hom_{R<G>}(-, E)`.

pub mod functor;
pub mod isogeny;
pub mod torus;

pub use functor::{apply_ses, hom_ideal, hom_torus, hom_torus_full, induced_map, induced_map_lattice, realization, res_torus, HomTorus, SesReport};
pub use isogeny::{kernel_and_degree, kernel_and_degree_rational, maximal_order_isogeny, IsogenyCert};
pub use torus::{linear_rational, CMCurve, FiniteGroupData, LatticeTorus};
