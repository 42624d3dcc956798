//! Twisted group rings `R<G> = sum_g R*g` with `g r = g(r) g`.

pub mod coeff;
pub mod element;
pub mod group;

pub use coeff::{CoeffRing, Integers, IntegralRing};
pub use element::{TwistedMatrix, TwistedRingElement};
pub use group::{Action, GaloisGroup};
