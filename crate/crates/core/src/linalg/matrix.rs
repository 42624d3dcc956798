use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors; `cols` is needed when there are no rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_rows(self.cols, idx.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Block-diagonal matrix from the given blocks.
    pub fn block_diag(blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    let slot = out.get_mut(i, j);
                    *slot = std::mem::replace(slot, T::zero()) + prod;
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                let b = self.get(k, j);
                if !b.is_zero() {
                    *slot = std::mem::replace(slot, T::zero()) + a * b;
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| s * x)
    }
}

impl<T> Add for &Matrix<T>
where
    T: Clone,
    for<'a> &'a T: Add<&'a T, Output = T>,
{
    type Output = Matrix<T>;

    fn add(self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl IntMatrix {
    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        Matrix::new(rows, cols, data.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub fn max_abs_bits(&self) -> u64 {
        self.data.iter().map(|x| x.abs().bits()).max().unwrap_or(0)
    }
}

impl RatMatrix {
    /// Returns `Some` when every entry is an integer.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.data
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

/// Scalars that serialize as decimal strings (`"12"`, `"-3/4"`).
pub trait DecimalString: Sized {
    fn to_decimal(&self) -> String;
    fn from_decimal(s: &str) -> Option<Self>;
}

impl DecimalString for BigInt {
    fn to_decimal(&self) -> String {
        self.to_string()
    }

    fn from_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl DecimalString for BigRational {
    fn to_decimal(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn from_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let d: BigInt = d.trim().parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n.trim().parse().ok()?, d))
            }
            None => Some(BigRational::from_integer(s.parse().ok()?)),
        }
    }
}

/// `#[serde(with = "decimal")]` for a single [`DecimalString`] field.
pub mod decimal {
    use super::DecimalString;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: DecimalString, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_decimal())
    }

    pub fn deserialize<'de, T: DecimalString, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        let s = String::deserialize(d)?;
        T::from_decimal(&s).ok_or_else(|| D::Error::custom(format!("bad number {s:?}")))
    }
}

/// `#[serde(with = "decimal_vec")]` for a `Vec` of [`DecimalString`] values.
pub mod decimal_vec {
    use super::DecimalString;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<T: DecimalString, S: Serializer>(xs: &[T], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(DecimalString::to_decimal).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, T: DecimalString, D: Deserializer<'de>>(d: D) -> Result<Vec<T>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| T::from_decimal(s).ok_or_else(|| D::Error::custom(format!("bad number {s:?}"))))
            .collect()
    }
}

impl<T: DecimalString + Clone> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(DecimalString::to_decimal).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de, T: DecimalString + Clone> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        let mut parsed = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != cols {
                return Err(D::Error::custom("ragged matrix rows"));
            }
            let row = r
                .iter()
                .map(|x| T::from_decimal(x).ok_or_else(|| D::Error::custom(format!("bad number {x:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            parsed.push(row);
        }
        Ok(Matrix::from_rows(cols, parsed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor_on_3x3() {
        let m = IntMatrix::from_i64(3, 3, &[2, -1, 0, 4, 3, 5, -2, 7, 1]);
        // 2(3-35) + 1(4+10) + 0 = -64 + 14
        assert_eq!(m.det(), BigInt::from(-50));
    }

    #[test]
    fn json_round_trip_keeps_big_entries() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let m = IntMatrix::new(1, 2, vec![big.clone(), -big]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["123456789012345678901234567890","-123456789012345678901234567890"]]"#);
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rational_strings() {
        let q = BigRational::from_decimal("-6/4").unwrap();
        assert_eq!(q.to_decimal(), "-3/2");
        assert!(BigRational::from_decimal("1/0").is_none());
    }
}
