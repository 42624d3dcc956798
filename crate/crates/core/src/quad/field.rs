use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix::{decimal, RatMatrix};
use crate::linalg::Field;

/// The field `Q(sqrt d)` for squarefree `d < 0`, with integral basis `(1, omega)`.
///
/// `omega = (1 + sqrt d)/2` when `d = 1 mod 4`, otherwise `omega = sqrt d`.
/// Writing `t = tr(omega)` and `n = N(omega)`, `omega^2 = t*omega - n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct ImQuadField {
    d: i64,
}

impl TryFrom<i64> for ImQuadField {
    type Error = Error;
    fn try_from(d: i64) -> Result<Self> {
        ImQuadField::new(d)
    }
}

impl From<ImQuadField> for i64 {
    fn from(k: ImQuadField) -> i64 {
        k.d
    }
}

pub(crate) fn is_squarefree(n: i64) -> bool {
    let n = n.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl ImQuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::BadField(format!("d = {d} is not negative")));
        }
        if !is_squarefree(d) {
            return Err(Error::BadField(format!("d = {d} is not squarefree")));
        }
        Ok(ImQuadField { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// `1` when `d = 1 mod 4`, else `0`.
    pub fn t(&self) -> i64 {
        i64::from(self.d.rem_euclid(4) == 1)
    }

    /// `N(omega)`.
    pub fn n(&self) -> i64 {
        if self.t() == 1 {
            (1 - self.d) / 4
        } else {
            -self.d
        }
    }

    fn tq(&self) -> BigRational {
        BigRational::from_integer(self.t().into())
    }

    fn nq(&self) -> BigRational {
        BigRational::from_integer(self.n().into())
    }

    /// Fundamental discriminant.
    pub fn disc(&self) -> i64 {
        if self.t() == 1 {
            self.d
        } else {
            4 * self.d
        }
    }

    pub fn omega(&self) -> FieldElement {
        FieldElement::new(BigRational::zero(), BigRational::one())
    }

    /// `sqrt d = 2 omega - t`.
    pub fn sqrt_d(&self) -> FieldElement {
        if self.t() == 1 {
            FieldElement::from_ints(-1, 2)
        } else {
            self.omega()
        }
    }

    pub fn conj(&self, x: &FieldElement) -> FieldElement {
        FieldElement::new(&x.a + &x.b * self.tq(), -&x.b)
    }

    pub fn trace(&self, x: &FieldElement) -> BigRational {
        &x.a * BigInt::from(2) + &x.b * self.tq()
    }

    pub fn norm(&self, x: &FieldElement) -> BigRational {
        &x.a * &x.a + &x.a * &x.b * self.tq() + &x.b * &x.b * self.nq()
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let bb = &x.b * &y.b;
        let a = &x.a * &y.a - &bb * self.nq();
        let b = &x.a * &y.b + &x.b * &y.a + bb * self.tq();
        FieldElement::new(a, b)
    }

    pub fn inverse(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm(x);
        Ok(self.conj(x).scale(&n.recip()))
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.inverse(y)?))
    }

    /// Matrix of `v -> v * x` on coordinates in the basis `(1, omega)`, row convention.
    pub fn mul_matrix(&self, x: &FieldElement) -> RatMatrix {
        let n = BigRational::from_integer(self.n().into());
        let t = BigRational::from_integer(self.t().into());
        RatMatrix::new(
            2,
            2,
            vec![x.a.clone(), x.b.clone(), -(&x.b * n), &x.a + &x.b * t],
        )
    }

    /// Matrix of conjugation on coordinates, row convention.
    pub fn conj_matrix(&self) -> RatMatrix {
        let q = |v: i64| BigRational::from_integer(v.into());
        RatMatrix::new(2, 2, vec![q(1), q(0), q(self.t()), q(-1)])
    }

    /// Exact test `x = r * y` for some rational `r`.
    pub fn is_rational_multiple(&self, x: &FieldElement, y: &FieldElement) -> bool {
        &x.a * &y.b == &x.b * &y.a
    }

    pub fn pow(&self, x: &FieldElement, mut e: u32) -> FieldElement {
        let mut base = x.clone();
        let mut acc = FieldElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for ImQuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}

/// `a + b*omega` with rational `a`, `b`. The field is supplied by context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    #[serde(with = "decimal")]
    pub a: BigRational,
    #[serde(with = "decimal")]
    pub b: BigRational,
}

impl FieldElement {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        FieldElement { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        FieldElement::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn from_rational(a: BigRational) -> Self {
        FieldElement::new(a, BigRational::zero())
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integral_coords(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        FieldElement::new(&self.a * r, &self.b * r)
    }

    pub fn coords(&self) -> [BigRational; 2] {
        [self.a.clone(), self.b.clone()]
    }

    pub fn from_coords(c: &[BigRational]) -> Self {
        FieldElement::new(c[0].clone(), c[1].clone())
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::new(-&self.a, -&self.b)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*w", self.a, self.b)
    }
}

impl Field for ImQuadField {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement::zero()
    }
    fn one(&self) -> FieldElement {
        FieldElement::one()
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a + b
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        -a
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        ImQuadField::mul(self, a, b)
    }
    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        self.inverse(a).ok()
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rejects_bad_d() {
        assert!(ImQuadField::new(-4).is_err());
        assert!(ImQuadField::new(5).is_err());
        assert!(ImQuadField::new(-12).is_err());
        assert!(ImQuadField::new(-15).is_ok());
    }

    #[test]
    fn gaussian_examples() {
        let k = ImQuadField::new(-1).unwrap();
        let i = k.omega();
        let one_i = FieldElement::from_ints(1, 1);
        assert_eq!(k.norm(&one_i), q(2, 1));
        assert_eq!(k.trace(&i), q(0, 1));
        assert_eq!(k.mul(&i, &i), FieldElement::from_ints(-1, 0));
        assert_eq!(k.conj(&FieldElement::from_ints(3, 2)), FieldElement::from_ints(3, -2));
        assert_eq!(k.disc(), -4);
    }

    #[test]
    fn eisenstein_conjugate() {
        let k = ImQuadField::new(-3).unwrap();
        assert_eq!(k.conj(&k.omega()), FieldElement::from_ints(1, -1));
        assert_eq!(k.norm(&k.omega()), q(1, 1));
        assert_eq!(k.mul(&k.sqrt_d(), &k.sqrt_d()), FieldElement::from_ints(-3, 0));
        let r = FieldElement::from_rational(q(5, 7));
        assert_eq!(k.conj(&r), r);
    }

    #[test]
    fn mul_matrix_matches_mul() {
        let k = ImQuadField::new(-7).unwrap();
        let x = FieldElement::new(q(2, 3), q(-5, 2));
        let y = FieldElement::new(q(1, 4), q(3, 1));
        let m = k.mul_matrix(&x);
        let v = m.apply_row(&y.coords());
        assert_eq!(FieldElement::from_coords(&v), k.mul(&y, &x));
        let c = k.conj_matrix().apply_row(&y.coords());
        assert_eq!(FieldElement::from_coords(&c), k.conj(&y));
    }

    #[test]
    fn inverse_and_json() {
        let k = ImQuadField::new(-2).unwrap();
        let x = FieldElement::new(q(3, 1), q(-1, 2));
        assert_eq!(k.mul(&x, &k.inverse(&x).unwrap()), FieldElement::one());
        assert_eq!(k.inverse(&FieldElement::zero()), Err(Error::DivisionByZero));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"3","b":"-1/2"}"#);
        assert_eq!(serde_json::from_str::<FieldElement>(&s).unwrap(), x);
    }
}
