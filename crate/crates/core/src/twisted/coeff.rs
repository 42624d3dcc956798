//! Coefficient rings for twisted group rings.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::matrix::{DecimalString, IntMatrix};
use crate::quad::{FieldElement, ImQuadField, OrderElement, QuadOrder};

/// A commutative ring with an involution, given as a context object.
#[allow(clippy::wrong_self_convention)]
pub trait CoeffRing: Clone + PartialEq + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    /// Descriptor used in mismatch errors and JSON.
    fn descriptor(&self) -> Value;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_int(&self, n: i64) -> Self::Elem;
    /// The nontrivial automorphism (identity on `Z`).
    fn conj(&self, a: &Self::Elem) -> Self::Elem;
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// A coefficient ring that is a free `Z`-module of finite rank.
#[allow(clippy::wrong_self_convention)]
pub trait IntegralRing: CoeffRing {
    fn z_rank(&self) -> usize;
    fn coords(&self, a: &Self::Elem) -> Vec<BigInt>;
    fn from_coords(&self, c: &[BigInt]) -> Self::Elem;
    /// `coords(y * a) = coords(y) * mul_matrix(a)`.
    fn mul_matrix(&self, a: &Self::Elem) -> IntMatrix;
    /// `coords(conj y) = coords(y) * conj_matrix()`.
    fn conj_matrix(&self) -> IntMatrix;
    /// `Z`-basis, starting with `1`.
    fn z_basis(&self) -> Vec<Self::Elem> {
        let r = self.z_rank();
        (0..r)
            .map(|k| {
                let c: Vec<BigInt> = (0..r).map(|j| BigInt::from(u8::from(j == k))).collect();
                self.from_coords(&c)
            })
            .collect()
    }
    /// The ambient quadratic field, if any.
    fn quad_field(&self) -> Option<ImQuadField>;
    /// Embedding into the fraction field.
    fn to_field(&self, a: &Self::Elem) -> FieldElement;
}

/// The integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Integers;

impl CoeffRing for Integers {
    type Elem = BigInt;

    fn descriptor(&self) -> Value {
        json!({"kind": "Z"})
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: i64) -> BigInt {
        n.into()
    }
    fn conj(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
    fn elem_to_json(&self, a: &BigInt) -> Value {
        Value::String(a.to_decimal())
    }
    fn elem_from_json(&self, v: &Value) -> Result<BigInt> {
        v.as_str()
            .and_then(BigInt::from_decimal)
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("expected integer string, got {v}") })
    }
}

impl IntegralRing for Integers {
    fn z_rank(&self) -> usize {
        1
    }
    fn coords(&self, a: &BigInt) -> Vec<BigInt> {
        vec![a.clone()]
    }
    fn from_coords(&self, c: &[BigInt]) -> BigInt {
        c[0].clone()
    }
    fn mul_matrix(&self, a: &BigInt) -> IntMatrix {
        IntMatrix::new(1, 1, vec![a.clone()])
    }
    fn conj_matrix(&self) -> IntMatrix {
        IntMatrix::identity(1)
    }
    fn quad_field(&self) -> Option<ImQuadField> {
        None
    }
    fn to_field(&self, a: &BigInt) -> FieldElement {
        FieldElement::from_rational(BigRational::from_integer(a.clone()))
    }
}

impl CoeffRing for QuadOrder {
    type Elem = OrderElement;

    fn descriptor(&self) -> Value {
        json!({"kind": "order", "d": self.field().d(), "f": self.conductor()})
    }
    fn zero(&self) -> OrderElement {
        OrderElement::new(0, 0)
    }
    fn one(&self) -> OrderElement {
        OrderElement::new(1, 0)
    }
    fn add(&self, a: &OrderElement, b: &OrderElement) -> OrderElement {
        OrderElement::new(&a.x + &b.x, &a.y + &b.y)
    }
    fn neg(&self, a: &OrderElement) -> OrderElement {
        OrderElement::new(-&a.x, -&a.y)
    }
    fn mul(&self, a: &OrderElement, b: &OrderElement) -> OrderElement {
        // phi = f*omega, phi^2 = f*t*phi - f^2*n
        let k = self.field();
        let f = BigInt::from(self.conductor());
        let yy = &a.y * &b.y;
        let x = &a.x * &b.x - &yy * &f * &f * k.n();
        let y = &a.x * &b.y + &a.y * &b.x + yy * &f * k.t();
        OrderElement::new(x, y)
    }
    fn is_zero(&self, a: &OrderElement) -> bool {
        a.x.is_zero() && a.y.is_zero()
    }
    fn from_int(&self, n: i64) -> OrderElement {
        OrderElement::new(n, 0)
    }
    fn conj(&self, a: &OrderElement) -> OrderElement {
        let ft = BigInt::from(self.conductor()) * self.field().t();
        OrderElement::new(&a.x + &a.y * ft, -&a.y)
    }
    fn elem_to_json(&self, a: &OrderElement) -> Value {
        let fe = self.to_field(a);
        json!({"a": fe.a.to_decimal(), "b": fe.b.to_decimal()})
    }
    fn elem_from_json(&self, v: &Value) -> Result<OrderElement> {
        let fe: FieldElement = serde_json::from_value(v.clone())
            .map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
        self.from_field(&fe)
            .ok_or_else(|| Error::RingMismatch(format!("{fe} is not in the order")))
    }
}

impl IntegralRing for QuadOrder {
    fn z_rank(&self) -> usize {
        2
    }
    fn coords(&self, a: &OrderElement) -> Vec<BigInt> {
        vec![a.x.clone(), a.y.clone()]
    }
    fn from_coords(&self, c: &[BigInt]) -> OrderElement {
        OrderElement::new(c[0].clone(), c[1].clone())
    }
    fn mul_matrix(&self, a: &OrderElement) -> IntMatrix {
        let k = self.field();
        let f = BigInt::from(self.conductor());
        IntMatrix::new(
            2,
            2,
            vec![
                a.x.clone(),
                a.y.clone(),
                -(&a.y * &f * &f * k.n()),
                &a.x + &a.y * &f * k.t(),
            ],
        )
    }
    fn conj_matrix(&self) -> IntMatrix {
        let ft = BigInt::from(self.conductor()) * self.field().t();
        IntMatrix::new(2, 2, vec![1.into(), 0.into(), ft, (-1).into()])
    }
    fn quad_field(&self) -> Option<ImQuadField> {
        Some(self.field())
    }
    fn to_field(&self, a: &OrderElement) -> FieldElement {
        QuadOrder::to_field(self, a)
    }
}

impl CoeffRing for ImQuadField {
    type Elem = FieldElement;

    fn descriptor(&self) -> Value {
        json!({"kind": "field", "d": self.d()})
    }
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
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: i64) -> FieldElement {
        FieldElement::from_ints(n, 0)
    }
    fn conj(&self, a: &FieldElement) -> FieldElement {
        ImQuadField::conj(self, a)
    }
    fn elem_to_json(&self, a: &FieldElement) -> Value {
        serde_json::to_value(a).expect("field elements serialize")
    }
    fn elem_from_json(&self, v: &Value) -> Result<FieldElement> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })
    }
}
