//! Finitely presented modules over twisted group rings.

pub mod adjunction;
pub mod hom;
pub mod parse;
pub mod presented;
pub mod rational;
pub mod standard;

pub use adjunction::{CoinductionAdjunction, RestrictionAdjunction};
pub use hom::{hom_module, HomGroup, ModuleHom, ShortExactSequence};
pub use parse::{parse_module, parse_module_source, AnyModule, ModuleSource, RingSpec};
pub use presented::{FlatModel, ModuleVector, PresentedModule};
pub use rational::{decompose_c2, rationalize, split_surjection, C2Decomposition, RationalGModule};
