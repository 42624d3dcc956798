use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::{FieldElement, ImQuadField};
use super::order::QuadOrder;
use crate::error::{Error, Result};
use crate::linalg::field::{inverse, Rationals};
use crate::linalg::{lattice_index, RatMatrix, ZLattice};

/// A full-rank lattice in an imaginary quadratic field, stored canonically in
/// coordinates over the basis `(1, omega)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IdealRepr", into = "IdealRepr")]
pub struct FracIdeal {
    field: ImQuadField,
    lattice: ZLattice,
}

#[derive(Serialize, Deserialize)]
struct IdealRepr {
    d: i64,
    basis: RatMatrix,
}

impl TryFrom<IdealRepr> for FracIdeal {
    type Error = Error;
    fn try_from(r: IdealRepr) -> Result<Self> {
        let field = ImQuadField::new(r.d)?;
        if r.basis.cols() != 2 {
            return Err(Error::DimensionMismatch("ideal basis must have 2 columns".into()));
        }
        FracIdeal::from_lattice(field, ZLattice::from_rat_rows(&r.basis))
    }
}

impl From<FracIdeal> for IdealRepr {
    fn from(i: FracIdeal) -> Self {
        IdealRepr { d: i.field.d(), basis: i.lattice.basis() }
    }
}

impl FracIdeal {
    pub fn from_lattice(field: ImQuadField, lattice: ZLattice) -> Result<Self> {
        match lattice.rank() {
            0 => Err(Error::ZeroIdeal),
            2 => Ok(FracIdeal { field, lattice }),
            r => Err(Error::RankMismatch(r, 2)),
        }
    }

    /// Lattice spanned by the given elements; they must span `F` over `Q`.
    pub fn from_generators(field: ImQuadField, gens: &[FieldElement]) -> Result<Self> {
        let rows = gens.iter().map(|g| g.coords().to_vec()).collect();
        Self::from_lattice(field, ZLattice::from_rat_rows(&RatMatrix::from_rows(2, rows)))
    }

    /// The order itself as a lattice.
    pub fn from_order(o: &QuadOrder) -> Self {
        Self::from_generators(o.field(), &[FieldElement::one(), o.phi()]).expect("order has rank 2")
    }

    /// `x * O` for a nonzero `x`.
    pub fn principal(o: &QuadOrder, x: &FieldElement) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        Ok(Self::from_order(o).scale(x))
    }

    pub fn field(&self) -> ImQuadField {
        self.field
    }

    pub fn lattice(&self) -> &ZLattice {
        &self.lattice
    }

    /// Canonical basis elements.
    pub fn basis(&self) -> [FieldElement; 2] {
        let b = self.lattice.basis();
        [FieldElement::from_coords(b.row(0)), FieldElement::from_coords(b.row(1))]
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.lattice.contains(&x.coords())
    }

    pub fn is_subset_of(&self, other: &FracIdeal) -> bool {
        self.lattice.is_sublattice_of(&other.lattice)
    }

    /// `x * self`.
    pub fn scale(&self, x: &FieldElement) -> Self {
        assert!(!x.is_zero(), "scaling by zero");
        FracIdeal {
            field: self.field,
            lattice: self.lattice.image(&self.field.mul_matrix(x)),
        }
    }

    pub fn conj(&self) -> Self {
        FracIdeal {
            field: self.field,
            lattice: self.lattice.image(&self.field.conj_matrix()),
        }
    }

    pub fn sum(&self, other: &FracIdeal) -> Self {
        FracIdeal {
            field: self.field,
            lattice: self.lattice.sum(&other.lattice),
        }
    }

    pub fn intersect(&self, other: &FracIdeal) -> Self {
        FracIdeal {
            field: self.field,
            lattice: self.lattice.intersect(&other.lattice),
        }
    }

    /// Multiplier ring `{ x : x * self in self }`.
    pub fn multiplier_ring(&self) -> QuadOrder {
        let ring = colon_ideal(self, self).expect("nonzero ideals");
        order_of_lattice(&ring).expect("multiplier ring is an order")
    }

    /// `true` when `o * self = self`.
    pub fn is_module_over(&self, o: &QuadOrder) -> bool {
        self.contains_scaled(&o.phi())
    }

    fn contains_scaled(&self, x: &FieldElement) -> bool {
        self.basis().iter().all(|b| self.contains(&self.field.mul(b, x)))
    }

    /// `true` when the multiplier ring is exactly `o`.
    pub fn is_proper_for(&self, o: &QuadOrder) -> bool {
        self.field == o.field() && self.multiplier_ring() == *o
    }
}

/// Reads `Z + f*omega*Z` off a canonical lattice.
fn order_of_lattice(l: &FracIdeal) -> Option<QuadOrder> {
    let basis = l.lattice.integer_basis()?;
    let one = BigInt::one();
    let zero = BigInt::zero();
    if basis.get(0, 0) != &one || basis.get(0, 1) != &zero || basis.get(1, 0) != &zero {
        return None;
    }
    let f: u64 = basis.get(1, 1).try_into().ok()?;
    QuadOrder::new(l.field, f).ok()
}

/// `(l : m) = { x in F : x * m in l }`.
pub fn colon_ideal(l: &FracIdeal, m: &FracIdeal) -> Result<FracIdeal> {
    if l.field != m.field {
        return Err(Error::RingMismatch("ideals live in different fields".into()));
    }
    let k = l.field;
    let mut acc: Option<ZLattice> = None;
    for g in m.basis() {
        // x * g in l  <=>  coords(x) in l * M_g^{-1}
        let inv = inverse(&Rationals, &k.mul_matrix(&g)).ok_or(Error::ZeroIdeal)?;
        let part = l.lattice.image(&inv);
        acc = Some(match acc {
            None => part,
            Some(a) => a.intersect(&part),
        });
    }
    FracIdeal::from_lattice(k, acc.expect("two basis elements"))
}

/// Lattice generated by all products `x * y`.
pub fn ideal_mul(l: &FracIdeal, m: &FracIdeal) -> Result<FracIdeal> {
    if l.field != m.field {
        return Err(Error::RingMismatch("ideals live in different fields".into()));
    }
    let k = l.field;
    let prods: Vec<FieldElement> = l
        .basis()
        .iter()
        .flat_map(|x| m.basis().into_iter().map(move |y| k.mul(x, &y)))
        .collect();
    FracIdeal::from_generators(k, &prods)
}

/// `[sup : sub]` for `sub` contained in `sup`.
pub fn ideal_index(sub: &FracIdeal, sup: &FracIdeal) -> Result<BigInt> {
    lattice_index(&sub.lattice, &sup.lattice)
}

/// Generalized index `det(sub) / det(sup)` for arbitrary full-rank lattices.
pub fn relative_covolume(sub: &FracIdeal, sup: &FracIdeal) -> BigRational {
    let det = |l: &FracIdeal| {
        let b = l.lattice.basis();
        (b.get(0, 0) * b.get(1, 1) - b.get(0, 1) * b.get(1, 0)).abs()
    };
    det(sub) / det(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(f: u64) -> QuadOrder {
        QuadOrder::new(ImQuadField::new(-1).unwrap(), f).unwrap()
    }

    #[test]
    fn colon_examples() {
        let z_i = FracIdeal::from_order(&gauss(1));
        let z_2i = FracIdeal::from_order(&gauss(2));
        assert_eq!(colon_ideal(&z_i, &z_i).unwrap(), z_i);
        let two = FieldElement::from_ints(2, 0);
        assert_eq!(colon_ideal(&z_2i, &z_i).unwrap(), z_i.scale(&two));
        assert_eq!(colon_ideal(&z_2i, &z_2i).unwrap(), z_2i);
    }

    #[test]
    fn multiplier_examples() {
        let z_i = FracIdeal::from_order(&gauss(1));
        assert_eq!(z_i.multiplier_ring(), gauss(1));
        assert_eq!(z_i.scale(&FieldElement::from_ints(2, 0)).multiplier_ring(), gauss(1));
        assert_eq!(FracIdeal::from_order(&gauss(2)).multiplier_ring(), gauss(2));
    }

    #[test]
    fn index_examples() {
        let z_i = FracIdeal::from_order(&gauss(1));
        let two_z_i = z_i.scale(&FieldElement::from_ints(2, 0));
        assert_eq!(ideal_index(&two_z_i, &z_i).unwrap(), 4.into());
        assert_eq!(ideal_index(&FracIdeal::from_order(&gauss(2)), &z_i).unwrap(), 2.into());
        assert_eq!(ideal_mul(&z_i, &two_z_i).unwrap(), two_z_i);
    }

    #[test]
    fn json_shape() {
        let z_2i = FracIdeal::from_order(&gauss(2));
        let s = serde_json::to_string(&z_2i).unwrap();
        assert_eq!(s, r#"{"d":-1,"basis":[["1","0"],["0","2"]]}"#);
        assert_eq!(serde_json::from_str::<FracIdeal>(&s).unwrap(), z_2i);
    }
}
