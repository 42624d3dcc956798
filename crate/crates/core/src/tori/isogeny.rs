use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use super::functor::hom_ideal;
use super::torus::{linear_rational, CMCurve, FiniteGroupData, LatticeTorus};
use crate::error::{Error, Result};
use crate::gmodule::rational::{field_matrix_json, FieldMatrix};
use crate::linalg::normal::snf;
use crate::linalg::{RatMatrix, ZLattice};
use crate::quad::{FieldElement, FracIdeal};
use crate::twisted::Action;

/// Kernel and degree of `v -> v q` from `src` to `dst`, both lattices in rational coordinates.
pub fn kernel_and_degree_rational(q: &RatMatrix, src: &ZLattice, dst: &ZLattice) -> Result<(FiniteGroupData, BigInt)> {
    if q.rows() != src.ambient() || q.cols() != dst.ambient() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{} between ambients {} and {}",
            q.rows(),
            q.cols(),
            src.ambient(),
            dst.ambient()
        )));
    }
    let image = src.image(q);
    if !image.is_sublattice_of(dst) {
        return Err(Error::NotLatticeMap);
    }
    if image.rank() != src.rank() {
        return Err(Error::NotIsogeny);
    }
    if src.rank() == 0 {
        return Ok((FiniteGroupData::trivial(), BigInt::one()));
    }
    let b = src.basis().matmul(q);
    let rows = (0..b.rows())
        .map(|i| dst.coordinates(b.row(i)).ok_or(Error::NotLatticeMap))
        .collect::<Result<Vec<_>>>()?;
    let ci = RatMatrix::from_rows(dst.rank(), rows).to_integer().ok_or(Error::NotLatticeMap)?;
    let kernel = FiniteGroupData::from_invariants(snf(&ci).torsion());
    let degree = kernel.order.clone();
    Ok((kernel, degree))
}

/// Kernel and degree of the `F`-linear map `v -> M v` between tori.
pub fn kernel_and_degree(map: &FieldMatrix, src: &LatticeTorus, dst: &LatticeTorus) -> Result<(FiniteGroupData, BigInt)> {
    if src.field != dst.field {
        return Err(Error::RingMismatch("tori over different fields".into()));
    }
    if map.rows() != dst.ambient || map.cols() != src.ambient {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{}, tori have ambient {} and {}",
            map.rows(),
            map.cols(),
            dst.ambient,
            src.ambient
        )));
    }
    kernel_and_degree_rational(&linear_rational(&src.field, map), &src.lattice, &dst.lattice)
}

/// A checked isogeny `source -> target` given by an `F`-matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct IsogenyCert {
    pub source: CMCurve,
    pub target: CMCurve,
    pub matrix: FieldMatrix,
    pub degree: BigInt,
    pub kernel: FiniteGroupData,
    /// `j`-invariants as decimal strings, filled in by the class polynomial layer.
    pub j_source: Option<String>,
    pub j_target: Option<String>,
    pub alpha: Option<FieldElement>,
}

impl IsogenyCert {
    pub fn new(source: CMCurve, target: CMCurve, matrix: FieldMatrix) -> Result<Self> {
        let (kernel, degree) = kernel_and_degree(&matrix, &source.torus(), &target.torus())?;
        Ok(IsogenyCert { source, target, matrix, degree, kernel, j_source: None, j_target: None, alpha: None })
    }

    /// Recomputes degree and kernel from the map and compares.
    pub fn verify(&self) -> bool {
        kernel_and_degree(&self.matrix, &self.source.torus(), &self.target.torus())
            .is_ok_and(|(k, d)| d == self.degree && k.invariants == self.kernel.invariants && k.order == d)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "matrix": field_matrix_json(&self.matrix),
            "degree": self.degree.to_string(),
            "kernel": {
                "invariants": self.kernel.invariants.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "order": self.kernel.order.to_string(),
                "cyclic": self.kernel.is_cyclic(),
            },
            "j_source": self.j_source,
            "j_target": self.j_target,
            "alpha": self.alpha,
        })
    }
}

/// The isogeny `E' -> E` from `0 -> O -> O_F -> O_F / O -> 0`, where
/// `E' = Hom(O_F, E)` has CM by the maximal order and the map comes from `(L : O_F) in L`.
pub fn maximal_order_isogeny(e: &CMCurve) -> Result<IsogenyCert> {
    let of = FracIdeal::from_order(&e.order().maximal_order());
    let ep = hom_ideal(&of, e)?;
    let id = FieldMatrix::new(1, 1, vec![FieldElement::one()]);
    let mut cert = IsogenyCert::new(ep, e.clone(), id)?;
    let f = BigInt::from(e.order().conductor());
    if cert.degree != f || cert.kernel.order != f {
        return Err(Error::Invariant(format!("degree {} differs from the conductor {f}", cert.degree)));
    }
    if !cert.source.order().is_maximal() {
        return Err(Error::Invariant("Hom(O_F, E) does not have CM by the maximal order".into()));
    }
    if !cert.kernel.is_cyclic() {
        return Err(Error::Invariant("kernel is not cyclic".into()));
    }
    if e.action() == Action::Conjugation {
        cert.alpha = Some(e.order().purely_imaginary_generator());
    }
    Ok(cert)
}
