use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::field::{is_squarefree, FieldElement, ImQuadField};
use crate::error::{Error, Result};

/// The order `Z + f*O_F` of conductor `f`, with basis `(1, f*omega)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OrderRepr", into = "OrderRepr")]
pub struct QuadOrder {
    field: ImQuadField,
    f: u64,
}

#[derive(Serialize, Deserialize)]
struct OrderRepr {
    d: i64,
    f: u64,
}

impl TryFrom<OrderRepr> for QuadOrder {
    type Error = Error;
    fn try_from(r: OrderRepr) -> Result<Self> {
        QuadOrder::new(ImQuadField::new(r.d)?, r.f)
    }
}

impl From<QuadOrder> for OrderRepr {
    fn from(o: QuadOrder) -> Self {
        OrderRepr { d: o.field.d(), f: o.f }
    }
}

/// `x + y * f*omega`, integer coordinates in the order basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderElement {
    pub x: BigInt,
    pub y: BigInt,
}

impl OrderElement {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        OrderElement { x: x.into(), y: y.into() }
    }
}

impl QuadOrder {
    pub fn new(field: ImQuadField, f: u64) -> Result<Self> {
        if f == 0 {
            return Err(Error::BadField("conductor must be positive".into()));
        }
        let o = QuadOrder { field, f };
        (f as i128)
            .checked_mul(f as i128)
            .and_then(|ff| ff.checked_mul(field.disc() as i128))
            .filter(|&dd| dd >= i64::MIN as i128)
            .ok_or_else(|| Error::BadField(format!("discriminant overflows for f = {f}")))?;
        Ok(o)
    }

    pub fn maximal(field: ImQuadField) -> Self {
        QuadOrder { field, f: 1 }
    }

    /// Order of discriminant `disc`; splits `disc = f^2 * disc_K`.
    pub fn from_discriminant(disc: i64) -> Result<Self> {
        if disc >= 0 {
            return Err(Error::BadDiscriminant(disc, "must be negative".into()));
        }
        let r = disc.rem_euclid(4);
        if r != 0 && r != 1 {
            return Err(Error::BadDiscriminant(disc, "must be 0 or 1 mod 4".into()));
        }
        let mut f = 1i64;
        let mut best = None;
        while f * f <= -disc {
            if disc % (f * f) == 0 {
                if let Some(d) = fundamental_core(disc / (f * f)) {
                    best = Some((d, f));
                }
            }
            f += 1;
        }
        let (d, f) = best.ok_or_else(|| Error::BadDiscriminant(disc, "no fundamental part".into()))?;
        QuadOrder::new(ImQuadField::new(d)?, f as u64)
    }

    pub fn field(&self) -> ImQuadField {
        self.field
    }

    pub fn conductor(&self) -> u64 {
        self.f
    }

    pub fn is_maximal(&self) -> bool {
        self.f == 1
    }

    pub fn discriminant(&self) -> i64 {
        (self.f * self.f) as i64 * self.field.disc()
    }

    pub fn maximal_order(&self) -> QuadOrder {
        QuadOrder::maximal(self.field)
    }

    fn f_big(&self) -> BigInt {
        BigInt::from(self.f)
    }

    /// `f * omega`.
    pub fn phi(&self) -> FieldElement {
        self.field.omega().scale(&BigRational::from_integer(self.f_big()))
    }

    pub fn to_field(&self, e: &OrderElement) -> FieldElement {
        FieldElement::new(
            BigRational::from_integer(e.x.clone()),
            BigRational::from_integer(&e.y * self.f_big()),
        )
    }

    pub fn from_field(&self, x: &FieldElement) -> Option<OrderElement> {
        if !x.is_integral_coords() {
            return None;
        }
        let b = x.b.to_integer();
        let (q, r) = b.div_rem(&self.f_big());
        if r != BigInt::from(0) {
            return None;
        }
        Some(OrderElement { x: x.a.to_integer(), y: q })
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.from_field(x).is_some()
    }

    /// Canonical nonzero `alpha` in the order with `conj(alpha) = -alpha`: `f * sqrt d`.
    pub fn purely_imaginary_generator(&self) -> FieldElement {
        self.field.sqrt_d().scale(&BigRational::from_integer(self.f_big()))
    }
}

fn fundamental_core(disc: i64) -> Option<i64> {
    match disc.rem_euclid(4) {
        1 if is_squarefree(disc) => Some(disc),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3).then_some(m).filter(|&m| is_squarefree(m))
        }
        _ => None,
    }
}

impl fmt::Display for QuadOrder {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "order of conductor {} in {}", self.f, self.field)
    }
}
