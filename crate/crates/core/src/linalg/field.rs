//! Gaussian elimination over an exact field given by a context object.
//!
//! The same routines serve the rationals and imaginary quadratic fields; the
//! field context carries whatever parameters the arithmetic needs.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::Matrix;

pub trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// The field of rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

pub fn identity<K: Field>(k: &K, n: usize) -> Matrix<K::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { k.one() } else { k.zero() })
}

pub fn zeros<K: Field>(k: &K, rows: usize, cols: usize) -> Matrix<K::Elem> {
    Matrix::from_fn(rows, cols, |_, _| k.zero())
}

pub fn mat_mul<K: Field>(k: &K, a: &Matrix<K::Elem>, b: &Matrix<K::Elem>) -> Matrix<K::Elem> {
    assert_eq!(a.cols(), b.rows(), "inner dimensions must agree");
    let mut out = zeros(k, a.rows(), b.cols());
    for i in 0..a.rows() {
        for t in 0..a.cols() {
            let x = a.get(i, t);
            if k.is_zero(x) {
                continue;
            }
            for j in 0..b.cols() {
                let y = b.get(t, j);
                if !k.is_zero(y) {
                    let v = k.add(out.get(i, j), &k.mul(x, y));
                    out.set(i, j, v);
                }
            }
        }
    }
    out
}

pub fn mat_add<K: Field>(k: &K, a: &Matrix<K::Elem>, b: &Matrix<K::Elem>) -> Matrix<K::Elem> {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    Matrix::from_fn(a.rows(), a.cols(), |i, j| k.add(a.get(i, j), b.get(i, j)))
}

pub fn mat_scale<K: Field>(k: &K, s: &K::Elem, a: &Matrix<K::Elem>) -> Matrix<K::Elem> {
    a.map(|x| k.mul(s, x))
}

/// Reduced row echelon form together with the pivot columns.
pub fn rref<K: Field>(k: &K, m: &Matrix<K::Elem>) -> (Matrix<K::Elem>, Vec<usize>) {
    let (r, _, pivots) = rref_with_transform(k, m);
    (r, pivots)
}

/// Returns `(R, T, pivots)` with `T * m = R` in reduced row echelon form.
pub fn rref_with_transform<K: Field>(
    k: &K,
    m: &Matrix<K::Elem>,
) -> (Matrix<K::Elem>, Matrix<K::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let mut t = identity(k, m.rows());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !k.is_zero(a.get(i, c))) else {
            continue;
        };
        a.swap_rows(p, r);
        t.swap_rows(p, r);
        let inv = k.inv(a.get(r, c)).expect("pivot is nonzero");
        scale_row(k, &mut a, r, &inv);
        scale_row(k, &mut t, r, &inv);
        for i in 0..a.rows() {
            if i == r || k.is_zero(a.get(i, c)) {
                continue;
            }
            let f = k.neg(a.get(i, c));
            add_row_multiple(k, &mut a, i, r, &f);
            add_row_multiple(k, &mut t, i, r, &f);
        }
        pivots.push(c);
        r += 1;
    }
    (a, t, pivots)
}

fn scale_row<K: Field>(k: &K, a: &mut Matrix<K::Elem>, row: usize, s: &K::Elem) {
    for j in 0..a.cols() {
        let v = k.mul(a.get(row, j), s);
        a.set(row, j, v);
    }
}

/// `row_dst += f * row_src`
fn add_row_multiple<K: Field>(k: &K, a: &mut Matrix<K::Elem>, dst: usize, src: usize, f: &K::Elem) {
    for j in 0..a.cols() {
        if k.is_zero(a.get(src, j)) {
            continue;
        }
        let v = k.add(a.get(dst, j), &k.mul(f, a.get(src, j)));
        a.set(dst, j, v);
    }
}

pub fn rank<K: Field>(k: &K, m: &Matrix<K::Elem>) -> usize {
    rref(k, m).1.len()
}

pub fn inverse<K: Field>(k: &K, m: &Matrix<K::Elem>) -> Option<Matrix<K::Elem>> {
    if !m.is_square() {
        return None;
    }
    let (_, t, pivots) = rref_with_transform(k, m);
    (pivots.len() == m.rows()).then_some(t)
}

pub fn det<K: Field>(k: &K, m: &Matrix<K::Elem>) -> K::Elem {
    assert!(m.is_square());
    let mut a = m.clone();
    let mut d = k.one();
    for c in 0..a.cols() {
        let Some(p) = (c..a.rows()).find(|&i| !k.is_zero(a.get(i, c))) else {
            return k.zero();
        };
        if p != c {
            a.swap_rows(p, c);
            d = k.neg(&d);
        }
        d = k.mul(&d, a.get(c, c));
        let inv = k.inv(a.get(c, c)).expect("pivot is nonzero");
        for i in c + 1..a.rows() {
            if k.is_zero(a.get(i, c)) {
                continue;
            }
            let f = k.neg(&k.mul(a.get(i, c), &inv));
            add_row_multiple(k, &mut a, i, c, &f);
        }
    }
    d
}

/// Basis (as rows) of the left kernel `{ v : v * m = 0 }`.
pub fn left_kernel<K: Field>(k: &K, m: &Matrix<K::Elem>) -> Matrix<K::Elem> {
    let (_, t, pivots) = rref_with_transform(k, m);
    t.select_rows(&(pivots.len()..m.rows()).collect::<Vec<_>>())
}

/// Basis (as columns, returned as rows of the transpose) of `{ x : m * x = 0 }`.
pub fn right_kernel<K: Field>(k: &K, m: &Matrix<K::Elem>) -> Matrix<K::Elem> {
    left_kernel(k, &m.transpose())
}

/// Solves `x * a = b` for `x` (rows of `b` independently). Returns `None` when
/// some row of `b` is not in the row space of `a`. When `a` has dependent rows
/// one particular solution is returned.
pub fn solve_left<K: Field>(
    k: &K,
    a: &Matrix<K::Elem>,
    b: &Matrix<K::Elem>,
) -> Option<Matrix<K::Elem>> {
    assert_eq!(a.cols(), b.cols());
    // x * a = b  <=>  a^T * x^T = b^T; eliminate on [a^T | b^T].
    let at = a.transpose();
    let aug = at.hstack(&b.transpose());
    let (r, pivots) = rref(k, &aug);
    let n = a.rows();
    if pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = zeros(k, b.rows(), n);
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.rows() {
            x.set(j, p, r.get(row, n + j).clone());
        }
    }
    Some(x)
}
