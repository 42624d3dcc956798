use std::fmt;

use num_bigint::BigInt;
use serde_json::{Map, Value};

use super::coeff::{CoeffRing, IntegralRing};
use super::group::GaloisGroup;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// `sum_g r_g * g` in the twisted group ring `R<G>`; `coeffs[g] = r_g`.
#[derive(Clone, PartialEq)]
pub struct TwistedRingElement<R: CoeffRing> {
    ring: R,
    group: GaloisGroup,
    coeffs: Vec<R::Elem>,
}

impl<R: CoeffRing> fmt::Debug for TwistedRingElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .group
            .elements()
            .filter(|&g| !self.ring.is_zero(&self.coeffs[g]))
            .map(|g| format!("({:?})*{}", self.coeffs[g], self.group.name(g)))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn check_same<R: CoeffRing>(a: &TwistedRingElement<R>, b: &TwistedRingElement<R>) -> Result<()> {
    if a.group != b.group {
        return Err(Error::GroupMismatch);
    }
    if a.ring != b.ring {
        return Err(Error::RingMismatch(format!("{} vs {}", a.ring.descriptor(), b.ring.descriptor())));
    }
    Ok(())
}

impl<R: CoeffRing> TwistedRingElement<R> {
    pub fn from_coeffs(ring: R, group: GaloisGroup, coeffs: Vec<R::Elem>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(TwistedRingElement { ring, group, coeffs })
    }

    pub fn zero(ring: R, group: GaloisGroup) -> Self {
        let coeffs = group.elements().map(|_| ring.zero()).collect();
        TwistedRingElement { ring, group, coeffs }
    }

    /// `r * g`.
    pub fn monomial(ring: R, group: GaloisGroup, r: R::Elem, g: usize) -> Self {
        let mut x = Self::zero(ring, group);
        x.coeffs[g] = r;
        x
    }

    /// `r * 1`.
    pub fn scalar(ring: R, group: GaloisGroup, r: R::Elem) -> Self {
        Self::monomial(ring, group, r, 0)
    }

    pub fn one(ring: R, group: GaloisGroup) -> Self {
        let one = ring.one();
        Self::scalar(ring, group, one)
    }

    /// `1 * g`.
    pub fn group_element(ring: R, group: GaloisGroup, g: usize) -> Self {
        let one = ring.one();
        Self::monomial(ring, group, one, g)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn group(&self) -> GaloisGroup {
        self.group
    }

    pub fn coeff(&self, g: usize) -> &R::Elem {
        &self.coeffs[g]
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    /// Action of the group element `g` on a coefficient.
    pub fn act(ring: &R, group: &GaloisGroup, g: usize, r: &R::Elem) -> R::Elem {
        if group.conjugates(g) {
            ring.conj(r)
        } else {
            r.clone()
        }
    }

    pub fn tr_add(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| self.ring.add(a, b)).collect();
        Ok(TwistedRingElement { ring: self.ring.clone(), group: self.group, coeffs })
    }

    pub fn tr_neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.neg(a)).collect();
        TwistedRingElement { ring: self.ring.clone(), group: self.group, coeffs }
    }

    pub fn tr_sub(&self, other: &Self) -> Result<Self> {
        self.tr_add(&other.tr_neg())
    }

    /// Left scalar action `r * self`.
    pub fn tr_scalar(&self, r: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(r, a)).collect();
        TwistedRingElement { ring: self.ring.clone(), group: self.group, coeffs }
    }

    /// `(r g)(s h) = r * g(s) * gh`.
    pub fn tr_mul(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        let mut out = Self::zero(self.ring.clone(), self.group);
        for g in self.group.elements() {
            if self.ring.is_zero(&self.coeffs[g]) {
                continue;
            }
            for h in self.group.elements() {
                if self.ring.is_zero(&other.coeffs[h]) {
                    continue;
                }
                let twisted = Self::act(&self.ring, &self.group, g, &other.coeffs[h]);
                let gh = self.group.mul(g, h);
                let term = self.ring.mul(&self.coeffs[g], &twisted);
                out.coeffs[gh] = self.ring.add(&out.coeffs[gh], &term);
            }
        }
        Ok(out)
    }

    /// `{"ring": descriptor, "1": coeff, "s": coeff}`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("ring".into(), self.ring.descriptor());
        for g in self.group.elements() {
            m.insert(self.group.name(g), self.ring.elem_to_json(&self.coeffs[g]));
        }
        Value::Object(m)
    }

    pub fn from_json(ring: R, group: GaloisGroup, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse { line: 0, msg: "expected an object".into() })?;
        if let Some(desc) = obj.get("ring") {
            if *desc != ring.descriptor() {
                return Err(Error::RingMismatch(format!("{desc} vs {}", ring.descriptor())));
            }
        }
        let mut coeffs = Vec::with_capacity(group.order());
        for g in group.elements() {
            coeffs.push(match obj.get(&group.name(g)) {
                Some(c) => ring.elem_from_json(c)?,
                None => ring.zero(),
            });
        }
        Ok(TwistedRingElement { ring, group, coeffs })
    }
}

impl<R: IntegralRing> TwistedRingElement<R> {
    /// Integer coordinates indexed by `g * rank(R) + k`.
    pub fn flatten(&self) -> Vec<BigInt> {
        self.coeffs.iter().flat_map(|c| self.ring.coords(c)).collect()
    }

    pub fn unflatten(ring: R, group: GaloisGroup, v: &[BigInt]) -> Result<Self> {
        let r = ring.z_rank();
        if v.len() != r * group.order() {
            return Err(Error::DimensionMismatch(format!("expected {} coordinates", r * group.order())));
        }
        let coeffs = v.chunks(r).map(|c| ring.from_coords(c)).collect();
        Ok(TwistedRingElement { ring, group, coeffs })
    }

    /// Integer matrix of left multiplication `y -> self * y` on flattened coordinates.
    pub fn left_mul_matrix(&self) -> IntMatrix {
        self.mul_matrix(true)
    }

    /// Integer matrix of right multiplication `y -> y * self` on flattened coordinates.
    pub fn right_mul_matrix(&self) -> IntMatrix {
        self.mul_matrix(false)
    }

    fn mul_matrix(&self, left: bool) -> IntMatrix {
        let r = self.ring.z_rank();
        let n = r * self.group.order();
        let mut m = IntMatrix::zeros(n, n);
        for g in self.group.elements() {
            for (k, b) in self.ring.z_basis().into_iter().enumerate() {
                let y = Self::monomial(self.ring.clone(), self.group, b, g);
                let prod = if left { self.tr_mul(&y) } else { y.tr_mul(self) }.expect("same ring");
                for (j, v) in prod.flatten().into_iter().enumerate() {
                    m.set(g * r + k, j, v);
                }
            }
        }
        m
    }
}

/// A rectangular matrix over `R<G>`.
#[derive(Clone, PartialEq)]
pub struct TwistedMatrix<R: CoeffRing> {
    ring: R,
    group: GaloisGroup,
    rows: usize,
    cols: usize,
    entries: Vec<TwistedRingElement<R>>,
}

impl<R: CoeffRing> fmt::Debug for TwistedMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TwistedMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<R: CoeffRing> TwistedMatrix<R> {
    pub fn zeros(ring: R, group: GaloisGroup, rows: usize, cols: usize) -> Self {
        let z = TwistedRingElement::zero(ring.clone(), group);
        TwistedMatrix { ring, group, rows, cols, entries: vec![z; rows * cols] }
    }

    pub fn identity(ring: R, group: GaloisGroup, n: usize) -> Self {
        let mut m = Self::zeros(ring.clone(), group, n, n);
        for i in 0..n {
            m.set(i, i, TwistedRingElement::one(ring.clone(), group));
        }
        m
    }

    pub fn from_entries(
        ring: R,
        group: GaloisGroup,
        rows: usize,
        cols: usize,
        entries: Vec<TwistedRingElement<R>>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for {rows}x{cols}", entries.len())));
        }
        for e in &entries {
            if e.group != group {
                return Err(Error::GroupMismatch);
            }
            if e.ring != ring {
                return Err(Error::RingMismatch("matrix entry over a different ring".into()));
            }
        }
        Ok(TwistedMatrix { ring, group, rows, cols, entries })
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(ring: R, group: GaloisGroup, diag: Vec<TwistedRingElement<R>>) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zeros(ring.clone(), group, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            if d.group != group || d.ring != ring {
                return Err(Error::GroupMismatch);
            }
            m.set(i, i, d);
        }
        Ok(m)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn group(&self) -> GaloisGroup {
        self.group
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TwistedRingElement<R> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TwistedRingElement<R>) {
        assert!(v.group == self.group && v.ring == self.ring);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[TwistedRingElement<R>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let entries = idx.iter().flat_map(|&i| self.row(i).to_vec()).collect();
        TwistedMatrix { ring: self.ring.clone(), group: self.group, rows: idx.len(), cols: self.cols, entries }
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Self::from_entries(self.ring.clone(), self.group, self.rows + other.rows, self.cols, entries)
    }

    pub fn with_group(&self, group: GaloisGroup) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let mut c: Vec<R::Elem> = group.elements().map(|_| self.ring.zero()).collect();
                for g in e.group.elements() {
                    if g >= group.order() {
                        if !self.ring.is_zero(&e.coeffs[g]) {
                            return Err(Error::GroupMismatch);
                        }
                        continue;
                    }
                    c[g] = e.coeffs[g].clone();
                }
                TwistedRingElement::from_coeffs(self.ring.clone(), group, c)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(self.ring.clone(), group, self.rows, self.cols, entries)
    }

    pub fn tr_matrix_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch("matrix product over different rings".into()));
        }
        let mut out = Self::zeros(self.ring.clone(), self.group, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = TwistedRingElement::zero(self.ring.clone(), self.group);
                for k in 0..self.cols {
                    acc = acc.tr_add(&self.get(i, k).tr_mul(other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn tr_matrix_add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum shapes differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.tr_add(b))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(self.ring.clone(), self.group, self.rows, self.cols, entries)
    }

    /// Row vector times matrix: `v * self`.
    pub fn apply_row(&self, v: &[TwistedRingElement<R>]) -> Result<Vec<TwistedRingElement<R>>> {
        let m = Self::from_entries(self.ring.clone(), self.group, 1, v.len(), v.to_vec())?;
        Ok(m.tr_matrix_mul(self)?.entries)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array(self.row(i).iter().map(TwistedRingElement::to_json).collect()))
                .collect(),
        )
    }
}

impl<R: IntegralRing> TwistedMatrix<R> {
    /// Integer matrix of `v -> v * self` on flattened coordinates, where
    /// coordinate `(j, g, k)` of a row vector sits at index `j*|G|*rank + g*rank + k`.
    pub fn flatten_right_action(&self) -> IntMatrix {
        let b = self.ring.z_rank() * self.group.order();
        let mut m = IntMatrix::zeros(self.rows * b, self.cols * b);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set_block(i * b, j * b, &self.get(i, j).right_mul_matrix());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::super::group::Action;
    use super::*;
    use crate::quad::{FieldElement, ImQuadField};

    fn gauss_field() -> ImQuadField {
        ImQuadField::new(-1).unwrap()
    }

    #[test]
    fn sigma_times_i() {
        let k = gauss_field();
        let g = GaloisGroup::c2(Action::Conjugation);
        let sigma = TwistedRingElement::group_element(k, g, 1);
        let i = TwistedRingElement::scalar(k, g, k.omega());
        let expected = TwistedRingElement::monomial(k, g, FieldElement::from_ints(0, -1), 1);
        assert_eq!(sigma.tr_mul(&i).unwrap(), expected);
    }

    #[test]
    fn sigma_commutes_under_trivial_action() {
        let k = gauss_field();
        let g = GaloisGroup::c2(Action::Trivial);
        let sigma = TwistedRingElement::group_element(k, g, 1);
        let r = TwistedRingElement::scalar(k, g, FieldElement::from_ints(3, 5));
        assert_eq!(sigma.tr_mul(&r).unwrap(), r.tr_mul(&sigma).unwrap());
    }

    #[test]
    fn sigma_plus_one_times_sigma_minus_one() {
        let k = gauss_field();
        for action in [Action::Trivial, Action::Conjugation] {
            let g = GaloisGroup::c2(action);
            let s = TwistedRingElement::group_element(k, g, 1);
            let one = TwistedRingElement::one(k, g);
            let p = s.tr_add(&one).unwrap().tr_mul(&s.tr_sub(&one).unwrap()).unwrap();
            assert!(p.is_zero());
        }
    }

    #[test]
    fn mismatches_are_errors() {
        let k = gauss_field();
        let a = TwistedRingElement::one(k, GaloisGroup::c2(Action::Trivial));
        let b = TwistedRingElement::one(k, GaloisGroup::c2(Action::Conjugation));
        assert_eq!(a.tr_mul(&b), Err(Error::GroupMismatch));
        let c = TwistedRingElement::one(ImQuadField::new(-2).unwrap(), GaloisGroup::c2(Action::Trivial));
        assert!(matches!(a.tr_add(&c), Err(Error::RingMismatch(_))));
        let m = TwistedMatrix::identity(k, a.group(), 2);
        let n = TwistedMatrix::identity(k, a.group(), 3);
        assert!(matches!(m.tr_matrix_mul(&n), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn diag_sigma_times_diag_r() {
        let k = gauss_field();
        let g = GaloisGroup::c2(Action::Conjugation);
        let r = FieldElement::from_ints(2, 7);
        let s = TwistedMatrix::diagonal(k, g, vec![TwistedRingElement::group_element(k, g, 1)]).unwrap();
        let d = TwistedMatrix::diagonal(k, g, vec![TwistedRingElement::scalar(k, g, r.clone())]).unwrap();
        let prod = s.tr_matrix_mul(&d).unwrap();
        assert_eq!(*prod.get(0, 0), TwistedRingElement::monomial(k, g, k.conj(&r), 1));
    }

    #[test]
    fn json_shape() {
        let k = gauss_field();
        let g = GaloisGroup::c2(Action::Conjugation);
        let x = TwistedRingElement::from_coeffs(k, g, vec![FieldElement::from_ints(1, 0), FieldElement::from_ints(0, 2)])
            .unwrap();
        let v = x.to_json();
        assert_eq!(v["s"]["b"], "2");
        assert_eq!(TwistedRingElement::from_json(k, g, &v).unwrap(), x);
    }
}
