//! Hermite and Smith normal forms over the integers.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// Cooperative cancellation flag for long eliminations.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }

    fn check(token: Option<&CancelToken>) -> Result<()> {
        match token {
            Some(t) if t.is_cancelled() => Err(Error::Cancelled),
            _ => Ok(()),
        }
    }
}

/// Row-style Hermite normal form `h = u * m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// `row_dst -= q * row_src` on both the working matrix and the transform.
fn row_sub(a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..a.cols() {
        let s = a.get(src, j);
        if s.is_zero() {
            continue;
        }
        let v = a.get(dst, j) - q * s;
        a.set(dst, j, v);
    }
}

fn col_sub(a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..a.rows() {
        let s = a.get(i, src);
        if s.is_zero() {
            continue;
        }
        let v = a.get(i, dst) - q * s;
        a.set(i, dst, v);
    }
}

fn negate_row(a: &mut IntMatrix, r: usize) {
    for j in 0..a.cols() {
        let v = -a.get(r, j);
        a.set(r, j, v);
    }
}

pub fn hnf(m: &IntMatrix) -> Hnf {
    hnf_cancellable(m, None).expect("no cancel token supplied")
}

/// Hermite normal form with an optional cancellation check between columns.
///
/// Pivots are positive; entries above a pivot are reduced into `[0, pivot)`;
/// zero rows are moved to the bottom.
pub fn hnf_cancellable(m: &IntMatrix, cancel: Option<&CancelToken>) -> Result<Hnf> {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..h.cols() {
        if r == h.rows() {
            break;
        }
        CancelToken::check(cancel)?;
        loop {
            let best = (r..h.rows())
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&a, &b| h.get(a, c).abs().cmp(&h.get(b, c).abs()));
            let Some(best) = best else { break };
            h.swap_rows(best, r);
            u.swap_rows(best, r);
            let mut clean = true;
            for i in r + 1..h.rows() {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                row_sub(&mut h, i, r, &q);
                row_sub(&mut u, i, r, &q);
                if !h.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h.get(i, c).div_floor(h.get(r, c));
            row_sub(&mut h, i, r, &q);
            row_sub(&mut u, i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    Ok(Hnf { h, u, pivots })
}

/// Smith normal form `u * m * v = diag(d_1, ..., d_k, 0, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    /// `min(rows, cols)` diagonal entries, `d_i | d_{i+1}`, zeros last.
    pub invariant_factors: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().filter(|d| !d.is_zero()).count()
    }

    /// Diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect()
    }

    pub fn diagonal(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(rows, cols);
        for (i, f) in self.invariant_factors.iter().enumerate() {
            d.set(i, i, f.clone());
        }
        d
    }
}

pub fn snf(m: &IntMatrix) -> Snf {
    snf_cancellable(m, None).expect("no cancel token supplied")
}

pub fn snf_cancellable(m: &IntMatrix, cancel: Option<&CancelToken>) -> Result<Snf> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        CancelToken::check(cancel)?;
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(pi, t);
        u.swap_rows(pi, t);
        a.swap_cols(pj, t);
        v.swap_cols(pj, t);

        let mut dirty = false;
        for i in t + 1..rows {
            if a.get(i, t).is_zero() {
                continue;
            }
            let q = a.get(i, t).div_floor(a.get(t, t));
            row_sub(&mut a, i, t, &q);
            row_sub(&mut u, i, t, &q);
            dirty |= !a.get(i, t).is_zero();
        }
        for j in t + 1..cols {
            if a.get(t, j).is_zero() {
                continue;
            }
            let q = a.get(t, j).div_floor(a.get(t, t));
            col_sub(&mut a, j, t, &q);
            col_sub(&mut v, j, t, &q);
            dirty |= !a.get(t, j).is_zero();
        }
        if dirty {
            continue;
        }
        // pivot isolated; enforce divisibility of the remaining block
        let p = a.get(t, t).clone();
        let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&p)));
        if let Some(i) = offender {
            // row_t += row_i
            row_sub(&mut a, t, i, &BigInt::from(-1));
            row_sub(&mut u, t, i, &BigInt::from(-1));
            continue;
        }
        if p.is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    let invariant_factors = (0..n).map(|i| a.get(i, i).clone()).collect();
    Ok(Snf { invariant_factors, u, v })
}

/// Saturated integer left kernel `{ v in Z^rows : v * m = 0 }`, rows in HNF.
pub fn kernel_saturated(m: &RatMatrix) -> IntMatrix {
    let int = clear_column_denominators(m);
    integer_left_kernel(&int)
}

/// Scales each column by the lcm of its denominators.
pub fn clear_column_denominators(m: &RatMatrix) -> IntMatrix {
    let mut out = IntMatrix::zeros(m.rows(), m.cols());
    for j in 0..m.cols() {
        let l = (0..m.rows()).fold(BigInt::one(), |acc, i| acc.lcm(m.get(i, j).denom()));
        for i in 0..m.rows() {
            let x = m.get(i, j);
            out.set(i, j, x.numer() * (&l / x.denom()));
        }
    }
    out
}

/// Integer left kernel of an integer matrix, canonicalized to HNF.
pub fn integer_left_kernel(m: &IntMatrix) -> IntMatrix {
    let res = hnf(m);
    let r = res.rank();
    let kernel = res.u.select_rows(&(r..m.rows()).collect::<Vec<_>>());
    let canon = hnf(&kernel);
    canon.h.select_rows(&(0..canon.rank()).collect::<Vec<_>>())
}

/// `true` when `|det m| = 1`.
pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.is_square() && m.det().abs().is_one()
}

/// Drops zero rows from an HNF result.
pub(crate) fn nonzero_rows(h: &Hnf) -> IntMatrix {
    h.h.select_rows(&(0..h.rank()).collect::<Vec<_>>())
}
