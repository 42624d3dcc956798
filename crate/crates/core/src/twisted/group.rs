use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the nontrivial group element acts on coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Trivial,
    Conjugation,
}

impl std::str::FromStr for Action {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "trivial" => Ok(Action::Trivial),
            "conj" | "conjugation" => Ok(Action::Conjugation),
            other => Err(Error::Parse { line: 0, msg: format!("unknown action {other:?}") }),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Trivial => "trivial",
            Action::Conjugation => "conjugation",
        })
    }
}

/// A finite cyclic group acting on a coefficient ring through
/// `g -> conj^g`. Elements are the indices `0..order`, `0` the identity.
///
/// Only orders 1 and 2 can be constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaloisGroup {
    order: usize,
    action: Action,
}

impl GaloisGroup {
    pub fn new(order: usize, action: Action) -> Result<Self> {
        match order {
            1 => Ok(GaloisGroup { order, action: Action::Trivial }),
            2 => Ok(GaloisGroup { order, action }),
            n => Err(Error::UnsupportedGroup(format!("groups of order {n}"))),
        }
    }

    pub fn trivial() -> Self {
        GaloisGroup { order: 1, action: Action::Trivial }
    }

    pub fn c2(action: Action) -> Self {
        GaloisGroup { order: 2, action }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn action(&self) -> Action {
        self.action
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        (g + h) % self.order
    }

    pub fn inv(&self, g: usize) -> usize {
        (self.order - g) % self.order
    }

    /// `true` when `g` acts on coefficients by conjugation.
    pub fn conjugates(&self, g: usize) -> bool {
        self.action == Action::Conjugation && g % 2 == 1
    }

    pub fn name(&self, g: usize) -> String {
        match g {
            0 => "1".into(),
            1 => "s".into(),
            k => format!("s^{k}"),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements().find(|&g| self.name(g) == name)
    }
}
