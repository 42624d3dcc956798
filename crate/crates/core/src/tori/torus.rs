use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gmodule::rational::{field_matrix_json, FieldMatrix};
use crate::linalg::field::{inverse, Rationals};
use crate::linalg::matrix::{decimal, decimal_vec};
use crate::linalg::normal::Snf;
use crate::linalg::{IntMatrix, Matrix, RatMatrix, ZLattice};
use crate::quad::{FieldElement, FracIdeal, ImQuadField, QuadOrder};
use crate::twisted::{Action, GaloisGroup};

/// An elliptic curve over the complex numbers with CM by `order`, given by its lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMCurve {
    order: QuadOrder,
    lattice: FracIdeal,
    action: Action,
}

impl CMCurve {
    pub fn new(order: QuadOrder, lattice: FracIdeal, action: Action) -> Result<Self> {
        if lattice.field() != order.field() {
            return Err(Error::RingMismatch("lattice lives in a different field".into()));
        }
        let m = lattice.multiplier_ring();
        if m != order {
            return Err(Error::RingMismatch(format!(
                "lattice has CM by the order of conductor {}, not {}",
                m.conductor(),
                order.conductor()
            )));
        }
        Ok(CMCurve { order, lattice, action })
    }

    /// `C / O`.
    pub fn standard(order: QuadOrder, action: Action) -> Self {
        CMCurve { order, lattice: FracIdeal::from_order(&order), action }
    }

    pub fn order(&self) -> &QuadOrder {
        &self.order
    }

    pub fn lattice(&self) -> &FracIdeal {
        &self.lattice
    }

    pub fn action(&self) -> Action {
        self.action
    }

    pub fn field(&self) -> ImQuadField {
        self.order.field()
    }

    pub fn group(&self) -> GaloisGroup {
        GaloisGroup::c2(self.action)
    }

    /// The curve as a one-dimensional torus `F / L`.
    pub fn torus(&self) -> LatticeTorus {
        LatticeTorus {
            field: self.field(),
            action: self.action,
            ambient: 1,
            lattice: self.lattice.lattice().clone(),
            descent: None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.field().d(),
            "f": self.order.conductor(),
            "lattice": self.lattice.lattice().basis(),
        })
    }
}

/// A complex torus `V / Lambda` with `V` the real span of `Lambda` inside
/// `F^ambient`. Lattice vectors are written in rational coordinates, two per
/// field coordinate (over the basis `1, omega`).
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeTorus {
    pub field: ImQuadField,
    pub action: Action,
    pub ambient: usize,
    pub lattice: ZLattice,
    /// `A` with `v -> A * conj(v)`, `conj` being the coefficient action.
    pub descent: Option<FieldMatrix>,
}

impl LatticeTorus {
    pub fn dim(&self) -> usize {
        self.lattice.rank() / 2
    }

    /// Row-convention rational matrix of the descent map.
    pub fn descent_rational(&self) -> Option<RatMatrix> {
        self.descent.as_ref().map(|a| semilinear_rational(&self.field, self.action, a))
    }

    pub fn descent_is_involution(&self) -> bool {
        self.descent_rational().is_none_or(|q| q.matmul(&q) == RatMatrix::identity(q.rows()))
    }

    pub fn descent_stabilizes_lattice(&self) -> bool {
        self.descent_rational().is_none_or(|q| stabilizes(&self.lattice, &q))
    }

    /// Lattice vectors as field coordinates.
    pub fn field_basis(&self) -> Vec<Vec<FieldElement>> {
        let b = self.lattice.basis();
        (0..b.rows())
            .map(|i| b.row(i).chunks(2).map(FieldElement::from_coords).collect())
            .collect()
    }

    /// Image of the lattice under `v -> v_coord / divisor` for a one-dimensional torus.
    pub fn chart(&self, coord: usize, divisor: &FieldElement) -> Result<FracIdeal> {
        if coord >= self.ambient {
            return Err(Error::DimensionMismatch(format!("coordinate {coord} of {}", self.ambient)));
        }
        let inv = self.field.inverse(divisor)?;
        let gens: Vec<FieldElement> = self.field_basis().iter().map(|v| self.field.mul(&v[coord], &inv)).collect();
        let ideal = FracIdeal::from_generators(self.field, &gens)?;
        if gens.len() != 2 {
            return Err(Error::RankMismatch(gens.len(), 2));
        }
        Ok(ideal)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.field.d(),
            "action": self.action,
            "ambient_dim": self.ambient,
            "dimension": self.dim(),
            "lattice": self.lattice.basis(),
            "descent": self.descent.as_ref().map(field_matrix_json),
        })
    }
}

/// Row-convention rational matrix of `v -> A * act(v)` on `F^n`.
pub(crate) fn semilinear_rational(k: &ImQuadField, action: Action, a: &FieldMatrix) -> RatMatrix {
    let c = match action {
        Action::Conjugation => k.conj_matrix(),
        Action::Trivial => RatMatrix::identity(2),
    };
    let n = a.rows();
    let mut out = RatMatrix::zeros(2 * a.cols(), 2 * n);
    for i in 0..n {
        for j in 0..a.cols() {
            out.set_block(2 * j, 2 * i, &c.matmul(&k.mul_matrix(a.get(i, j))));
        }
    }
    out
}

/// Row-convention rational matrix of the `F`-linear map `v -> M v`.
pub fn linear_rational(k: &ImQuadField, m: &FieldMatrix) -> RatMatrix {
    semilinear_rational(k, Action::Trivial, m)
}

pub(crate) fn stabilizes(l: &ZLattice, q: &RatMatrix) -> bool {
    let b = l.basis();
    (0..b.rows()).all(|i| l.contains(&q.apply_row(b.row(i))))
}

/// A finite abelian group `sum Z/d_i` with an optional action of the group element `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroupData {
    #[serde(with = "decimal_vec")]
    pub invariants: Vec<BigInt>,
    #[serde(with = "decimal")]
    pub order: BigInt,
    /// Row `i` gives the image of the `i`-th cyclic generator.
    pub sigma_action: Option<IntMatrix>,
}

impl FiniteGroupData {
    pub fn trivial() -> Self {
        FiniteGroupData { invariants: Vec::new(), order: BigInt::one(), sigma_action: None }
    }

    pub fn from_invariants(invariants: Vec<BigInt>) -> Self {
        let order = invariants.iter().product();
        FiniteGroupData { invariants, order, sigma_action: None }
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariants.len() <= 1
    }
}

/// Component group of `{ x : x * tz in Z^m } / Z^n` together with the induced
/// action of `sz` when `sz` preserves the kernel.
pub(crate) fn component_group(tz: &IntMatrix, snf: &Snf, sz: Option<&IntMatrix>) -> FiniteGroupData {
    let tors: Vec<usize> = (0..snf.invariant_factors.len())
        .filter(|&i| snf.invariant_factors[i] > BigInt::one())
        .collect();
    let mut data = FiniteGroupData::from_invariants(tors.iter().map(|&i| snf.invariant_factors[i].clone()).collect());
    let Some(sz) = sz else { return data };
    let q = &Rationals;
    let u = snf.u.to_rational();
    let Some(uinv) = inverse(q, &u) else { return data };
    let mut action = IntMatrix::zeros(tors.len(), tors.len());
    for (row, &i) in tors.iter().enumerate() {
        let d = num_rational::BigRational::from_integer(snf.invariant_factors[i].clone());
        let x: Vec<_> = u.row(i).iter().map(|c| c / &d).collect();
        let image = sz.to_rational().apply_row(&x);
        if !tz.to_rational().apply_row(&image).iter().all(|c| c.is_integer()) {
            return data;
        }
        let y = uinv.apply_row(&image);
        for (col, &k) in tors.iter().enumerate() {
            let dk = &snf.invariant_factors[k];
            let c = &y[k] * num_rational::BigRational::from_integer(dk.clone());
            if !c.is_integer() {
                return data;
            }
            let r = c.to_integer() % dk;
            action.set(row, col, if r < BigInt::zero() { r + dk } else { r });
        }
    }
    data.sigma_action = Some(action);
    data
}

/// Matrix of field elements built from a closure.
pub(crate) fn field_matrix(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> FieldElement) -> FieldMatrix {
    Matrix::from_fn(rows, cols, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_requires_matching_order() {
        let o = QuadOrder::from_discriminant(-16).unwrap();
        let of = FracIdeal::from_order(&o.maximal_order());
        assert!(matches!(CMCurve::new(o, of.clone(), Action::Conjugation), Err(Error::RingMismatch(_))));
        assert!(CMCurve::new(o.maximal_order(), of, Action::Conjugation).is_ok());
    }

    #[test]
    fn chart_of_curve_is_its_lattice() {
        let o = QuadOrder::from_discriminant(-27).unwrap();
        let e = CMCurve::standard(o, Action::Conjugation);
        assert_eq!(e.torus().chart(0, &FieldElement::one()).unwrap(), *e.lattice());
        assert_eq!(e.torus().dim(), 1);
    }
}
