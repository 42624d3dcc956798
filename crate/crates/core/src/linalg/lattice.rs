//! Lattices in `Q^n` with canonical Hermite bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::{self, Rationals};
use super::matrix::{IntMatrix, RatMatrix};
use super::normal::{hnf, integer_left_kernel, nonzero_rows};
use crate::error::{Error, Result};

/// A finitely generated subgroup of `Q^ambient`, stored as `hnf / denom`.
///
/// The numerator is in row Hermite normal form without zero rows and
/// `gcd(content(hnf), denom) = 1`, so two lattices are equal exactly when
/// their stored forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "LatticeRepr", from = "LatticeRepr")]
pub struct ZLattice {
    ambient: usize,
    denom: BigInt,
    hnf: IntMatrix,
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    ambient: usize,
    basis: RatMatrix,
}

impl From<ZLattice> for LatticeRepr {
    fn from(l: ZLattice) -> Self {
        LatticeRepr { ambient: l.ambient, basis: l.basis() }
    }
}

impl From<LatticeRepr> for ZLattice {
    fn from(r: LatticeRepr) -> Self {
        if r.basis.rows() == 0 {
            return ZLattice::zero(r.ambient);
        }
        ZLattice::from_rat_rows(&r.basis)
    }
}

impl ZLattice {
    pub fn zero(ambient: usize) -> Self {
        ZLattice {
            ambient,
            denom: BigInt::one(),
            hnf: IntMatrix::zeros(0, ambient),
        }
    }

    pub fn standard(ambient: usize) -> Self {
        ZLattice {
            ambient,
            denom: BigInt::one(),
            hnf: IntMatrix::identity(ambient),
        }
    }

    /// Lattice spanned by the rows of an integer matrix.
    pub fn from_int_rows(gens: &IntMatrix) -> Self {
        Self::from_scaled(gens, BigInt::one())
    }

    /// Lattice spanned by the rows of a rational matrix.
    pub fn from_rat_rows(gens: &RatMatrix) -> Self {
        let d = gens.common_denominator();
        let scaled = gens.map(|x| x.numer() * (&d / x.denom()));
        Self::from_scaled(&scaled, d)
    }

    fn from_scaled(gens: &IntMatrix, denom: BigInt) -> Self {
        let ambient = gens.cols();
        let mut h = nonzero_rows(&hnf(gens));
        let g = h.entries().iter().fold(denom.clone(), |acc, x| acc.gcd(x));
        let denom = if g.is_one() || g.is_zero() {
            denom
        } else {
            h = h.map(|x| x / &g);
            denom / &g
        };
        if h.rows() == 0 {
            return Self::zero(ambient);
        }
        ZLattice { ambient, denom, hnf: h }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.hnf.rows()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    pub fn numerator(&self) -> &IntMatrix {
        &self.hnf
    }

    /// Canonical basis (rows).
    pub fn basis(&self) -> RatMatrix {
        self.hnf.map(|x| BigRational::new(x.clone(), self.denom.clone()))
    }

    /// Integer basis; `None` if the lattice is not inside `Z^n`.
    pub fn integer_basis(&self) -> Option<IntMatrix> {
        self.denom.is_one().then(|| self.hnf.clone())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::from_rat_rows(&self.basis().map(|x| x * s))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the rational span.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(v.len(), self.ambient);
        if self.rank() == 0 {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        let rhs = RatMatrix::new(1, self.ambient, v.to_vec());
        field::solve_left(&Rationals, &self.basis(), &rhs).map(|x| x.row(0).to_vec())
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coordinates(v)
            .is_some_and(|c| c.iter().all(BigRational::is_integer))
    }

    pub fn contains_int(&self, v: &[BigInt]) -> bool {
        let q: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        self.contains(&q)
    }

    pub fn is_sublattice_of(&self, sup: &ZLattice) -> bool {
        self.ambient == sup.ambient && self.basis().row_vecs().iter().all(|r| sup.contains(r))
    }

    /// `self + other`
    pub fn sum(&self, other: &ZLattice) -> Self {
        assert_eq!(self.ambient, other.ambient);
        Self::from_rat_rows(&self.basis().vstack(&other.basis()))
    }

    /// `self ∩ other`
    pub fn intersect(&self, other: &ZLattice) -> Self {
        assert_eq!(self.ambient, other.ambient);
        if self.rank() == 0 || other.rank() == 0 {
            return Self::zero(self.ambient);
        }
        // a * B1 = b * B2  <=>  (a, b) in left kernel of [B1; -B2]
        let d = self.denom.lcm(&other.denom);
        let b1 = self.hnf.map(|x| x * (&d / &self.denom));
        let b2 = other.hnf.map(|x| -(x * (&d / &other.denom)));
        let ker = integer_left_kernel(&b1.vstack(&b2));
        let coeffs = ker.select_cols(&(0..self.rank()).collect::<Vec<_>>());
        Self::from_rat_rows(&coeffs.to_rational().matmul(&self.basis()))
    }

    /// Image of the lattice under the row-vector map `v -> v * m`.
    pub fn image(&self, m: &RatMatrix) -> Self {
        assert_eq!(m.rows(), self.ambient);
        Self::from_rat_rows(&self.basis().matmul(m))
    }

    /// `{ v : v * m in self }` for an integer matrix `m` with `m.cols() = ambient`.
    pub fn preimage(&self, m: &IntMatrix) -> Self {
        assert_eq!(m.cols(), self.ambient);
        let n = m.rows();
        if self.rank() == 0 {
            return Self::from_int_rows(&integer_left_kernel(m));
        }
        // v * m * denom = c * hnf
        let scaled = m.map(|x| x * &self.denom);
        let stacked = scaled.vstack(&self.hnf.map(|x| -x));
        let ker = integer_left_kernel(&stacked);
        Self::from_int_rows(&ker.select_cols(&(0..n).collect::<Vec<_>>()))
    }

    /// Rational span as a reduced echelon basis.
    pub fn rational_span(&self) -> RatMatrix {
        field::rref(&Rationals, &self.basis()).0
    }

    /// Saturation `span_Q(self) ∩ Z^n`.
    pub fn saturation(&self) -> Self {
        if self.rank() == 0 {
            return self.clone();
        }
        let complement = field::right_kernel(&Rationals, &self.basis());
        if complement.rows() == 0 {
            return Self::standard(self.ambient);
        }
        let k = integer_left_kernel(&super::normal::clear_column_denominators(&complement.transpose()));
        Self::from_int_rows(&k)
    }
}

/// Index `[sup : sub]` of lattices of equal rank.
pub fn lattice_index(sub: &ZLattice, sup: &ZLattice) -> Result<BigInt> {
    if sub.ambient != sup.ambient {
        return Err(Error::DimensionMismatch(format!(
            "ambient {} vs {}",
            sub.ambient, sup.ambient
        )));
    }
    if sub.rank() != sup.rank() {
        return Err(Error::RankMismatch(sub.rank(), sup.rank()));
    }
    if sub.rank() == 0 {
        return Ok(BigInt::one());
    }
    let coords = field::solve_left(&Rationals, &sup.basis(), &sub.basis()).ok_or(Error::NotSublattice)?;
    let int = coords.to_integer().ok_or(Error::NotSublattice)?;
    let d = int.det().abs();
    if d.is_zero() {
        return Err(Error::Invariant("sublattice basis is degenerate".into()));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(r: usize, c: usize, d: &[i64]) -> ZLattice {
        ZLattice::from_int_rows(&IntMatrix::from_i64(r, c, d))
    }

    #[test]
    fn index_examples() {
        let z2 = ZLattice::standard(2);
        assert_eq!(lattice_index(&lat(2, 2, &[2, 0, 0, 3]), &z2).unwrap(), 6.into());
        assert_eq!(lattice_index(&z2, &z2).unwrap(), 1.into());
        assert_eq!(lattice_index(&lat(2, 2, &[1, 2, 0, 5]), &z2).unwrap(), 5.into());
    }

    #[test]
    fn index_errors() {
        let z2 = ZLattice::standard(2);
        assert_eq!(lattice_index(&z2, &lat(2, 2, &[2, 0, 0, 1])), Err(Error::NotSublattice));
        assert_eq!(lattice_index(&lat(1, 2, &[1, 0]), &z2), Err(Error::RankMismatch(1, 2)));
    }

    #[test]
    fn canonical_equality_ignores_generators() {
        let a = lat(3, 2, &[2, 0, 0, 2, 2, 2]);
        let b = lat(2, 2, &[2, 2, 0, 2]);
        assert_eq!(a, b);
        let half = ZLattice::from_rat_rows(&RatMatrix::new(
            1,
            2,
            vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 1.into())],
        ));
        assert_eq!(half.scale(&BigRational::from_integer(2.into())), lat(1, 2, &[1, 2]));
    }

    #[test]
    fn intersection_and_saturation() {
        let a = lat(2, 2, &[2, 0, 0, 1]);
        let b = lat(2, 2, &[1, 0, 0, 3]);
        assert_eq!(a.intersect(&b), lat(2, 2, &[2, 0, 0, 3]));
        let s = lat(1, 2, &[2, 4]).saturation();
        assert_eq!(s, lat(1, 2, &[1, 2]));
    }
}
