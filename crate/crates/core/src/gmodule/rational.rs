//! Finite-dimensional `F<G>`-modules and their decomposition for `|G| = 2`.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::presented::PresentedModule;
use crate::error::{Error, Result};
use crate::linalg::field::{self, identity, inverse, mat_add, mat_mul, mat_scale, rank, rref, solve_left, Rationals};
use crate::linalg::{Matrix, RatMatrix};
use crate::quad::{FieldElement, ImQuadField};
use crate::twisted::{Action, GaloisGroup, IntegralRing};

pub type FieldMatrix = Matrix<FieldElement>;

/// `F^dim` with `sigma v = S conj(v)`, where `conj` is the coefficient action
/// (the identity under the trivial action).
#[derive(Clone, Debug, PartialEq)]
pub struct RationalGModule {
    pub field: ImQuadField,
    pub group: GaloisGroup,
    pub sigma: FieldMatrix,
}

impl RationalGModule {
    pub fn new(field: ImQuadField, group: GaloisGroup, sigma: FieldMatrix) -> Result<Self> {
        if !sigma.is_square() {
            return Err(Error::DimensionMismatch("sigma matrix must be square".into()));
        }
        let v = RationalGModule { field, group, sigma };
        let id = identity(&field, v.dim());
        let ok = if group.order() == 1 { v.sigma == id } else { mat_mul(&field, &v.sigma, &v.conj(&v.sigma)) == id };
        if !ok {
            return Err(Error::NotInvolution);
        }
        Ok(v)
    }

    /// The module with trivial `sigma` on coordinates; for `|G| = 1` the only option.
    pub fn standard(field: ImQuadField, group: GaloisGroup, dim: usize) -> Self {
        RationalGModule { field, group, sigma: identity(&field, dim) }
    }

    /// `F` (sign `+1`) or its twist `^sigma F` (sign `-1`).
    pub fn simple(field: ImQuadField, group: GaloisGroup, sign: i64) -> Result<Self> {
        if group.order() != 2 {
            return Err(Error::UnsupportedGroup(format!("order {}", group.order())));
        }
        Self::new(field, group, Matrix::new(1, 1, vec![FieldElement::from_ints(sign, 0)]))
    }

    /// `F<G>` in the basis `1, s`.
    pub fn regular(field: ImQuadField, group: GaloisGroup) -> Result<Self> {
        if group.order() != 2 {
            return Err(Error::UnsupportedGroup(format!("order {}", group.order())));
        }
        let (z, o) = (FieldElement::zero(), FieldElement::one());
        Self::new(field, group, Matrix::new(2, 2, vec![z.clone(), o.clone(), o, z]))
    }

    pub fn dim(&self) -> usize {
        self.sigma.rows()
    }

    /// Entrywise coefficient action.
    pub fn conj(&self, m: &FieldMatrix) -> FieldMatrix {
        match self.group.action() {
            Action::Conjugation if self.group.order() == 2 => m.map(|x| self.field.conj(x)),
            _ => m.clone(),
        }
    }

    /// `sigma` applied to the columns of `m`.
    pub fn act(&self, m: &FieldMatrix) -> FieldMatrix {
        mat_mul(&self.field, &self.sigma, &self.conj(m))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(RationalGModule {
            field: self.field,
            group: self.group,
            sigma: block_diag(&[self.sigma.clone(), other.sigma.clone()]),
        })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::RingMismatch(format!("Q(sqrt {}) vs Q(sqrt {})", self.field.d(), other.field.d())));
        }
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    /// `phi S_self = S_target conj(phi)` for `phi : self -> target` in column convention.
    pub fn is_equivariant(&self, target: &Self, phi: &FieldMatrix) -> bool {
        if self.check_compatible(target).is_err() || phi.rows() != target.dim() || phi.cols() != self.dim() {
            return false;
        }
        let k = &self.field;
        mat_mul(k, phi, &self.sigma) == mat_mul(k, &target.sigma, &self.conj(phi))
    }

    /// Equivariant and invertible.
    pub fn is_isomorphism(&self, target: &Self, phi: &FieldMatrix) -> bool {
        self.is_equivariant(target, phi) && phi.is_square() && inverse(&self.field, phi).is_some()
    }
}

/// Matrix of field elements as nested `{"a", "b"}` objects.
pub fn field_matrix_json(m: &FieldMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| json!(m.row(i))).collect())
}

fn block_diag(blocks: &[FieldMatrix]) -> FieldMatrix {
    let n: usize = blocks.iter().map(Matrix::rows).sum();
    let mut out = Matrix::new(n, n, vec![FieldElement::zero(); n * n]);
    let mut at = 0;
    for b in blocks {
        out.set_block(at, at, b);
        at += b.rows();
    }
    out
}

/// `phi(a, b) = a(s + 1) + b(s - 1)` from `F + ^sigma F` to `F<G>` under the trivial action.
pub fn decomposition_map() -> FieldMatrix {
    let m = FieldElement::from_ints;
    Matrix::new(2, 2, vec![m(1, 0), m(-1, 0), m(1, 0), m(1, 0)])
}

/// Averages an `F`-linear section `s` of the surjection `phi : v -> w` over the group.
pub fn split_surjection(
    v: &RationalGModule,
    w: &RationalGModule,
    phi: &FieldMatrix,
    s: &FieldMatrix,
) -> Result<FieldMatrix> {
    v.check_compatible(w)?;
    let k = &v.field;
    if phi.rows() != w.dim() || phi.cols() != v.dim() || s.rows() != v.dim() || s.cols() != w.dim() {
        return Err(Error::DimensionMismatch("map shapes do not match the modules".into()));
    }
    if rank(k, phi) != w.dim() {
        return Err(Error::NotSurjective);
    }
    if mat_mul(k, phi, s) != identity(k, w.dim()) {
        return Err(Error::NotSection);
    }
    if !v.is_equivariant(w, phi) {
        return Err(Error::NotEquivariant);
    }
    if v.group.order() == 1 {
        return Ok(s.clone());
    }
    // sigma_v . s . sigma_w^{-1} = S_v conj(s) conj(S_w)
    let twisted = mat_mul(k, &mat_mul(k, &v.sigma, &v.conj(s)), &v.conj(&w.sigma));
    let half = FieldElement::from_rational(BigRational::new(1.into(), 2.into()));
    Ok(mat_scale(k, &half, &mat_add(k, s, &twisted)))
}

/// Multiplicities of `F` and `^sigma F` with a basis realizing them.
#[derive(Clone, Debug, PartialEq)]
pub struct C2Decomposition {
    pub r: usize,
    pub r_twist: usize,
    /// Columns: `r` vectors with `sigma = +conj`, then `r_twist` with `sigma = -conj`.
    pub basis: FieldMatrix,
    /// Totally imaginary element identifying `^sigma F` with `F` (conjugation action only).
    pub alpha: Option<FieldElement>,
}

impl C2Decomposition {
    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "r_twist": self.r_twist,
            "basis": field_matrix_json(&self.basis),
            "alpha": self.alpha,
        })
    }

    /// `P^{-1} S conj(P) = diag(+1 x r, -1 x r_twist)`.
    pub fn verify(&self, v: &RationalGModule) -> bool {
        let k = &v.field;
        let Some(pinv) = inverse(k, &self.basis) else { return false };
        let model = mat_mul(k, &pinv, &v.act(&self.basis));
        let n = self.r + self.r_twist;
        let expected = Matrix::from_fn(n, n, |i, j| match (i == j, i < self.r) {
            (false, _) => FieldElement::zero(),
            (true, true) => FieldElement::one(),
            (true, false) => FieldElement::from_ints(-1, 0),
        });
        n == v.dim() && model == expected
    }
}

/// Decomposition using `alpha = sqrt(d)` under the conjugation action.
pub fn decompose_c2(v: &RationalGModule) -> Result<C2Decomposition> {
    decompose_c2_with_alpha(v, &v.field.sqrt_d())
}

pub fn decompose_c2_with_alpha(v: &RationalGModule, alpha: &FieldElement) -> Result<C2Decomposition> {
    if v.group.order() != 2 {
        return Err(Error::UnsupportedGroup(format!("order {}", v.group.order())));
    }
    let k = &v.field;
    let n = v.dim();
    match v.group.action() {
        Action::Trivial => {
            let id = identity(k, n);
            let plus = field::right_kernel(k, &mat_add(k, &v.sigma, &mat_scale(k, &FieldElement::from_ints(-1, 0), &id)));
            let minus = field::right_kernel(k, &mat_add(k, &v.sigma, &id));
            let (r, r_twist) = (plus.rows(), minus.rows());
            let basis = plus.vstack(&minus).transpose();
            Ok(C2Decomposition { r, r_twist, basis: if n == 0 { id } else { basis }, alpha: None })
        }
        Action::Conjugation => {
            if alpha.is_zero() || k.conj(alpha) != -alpha {
                return Err(Error::Invariant("alpha must be nonzero and totally imaginary".into()));
            }
            // v + sigma v and alpha (v - sigma v) are fixed by sigma
            let mut fixed: Vec<Vec<FieldElement>> = Vec::new();
            for i in 0..n {
                if fixed.len() == n {
                    break;
                }
                let e = Matrix::from_fn(n, 1, |r, _| if r == i { FieldElement::one() } else { FieldElement::zero() });
                let se = v.act(&e);
                let sum: Vec<_> = (0..n).map(|r| e.get(r, 0) + se.get(r, 0)).collect();
                let diff: Vec<_> = (0..n).map(|r| k.mul(alpha, &(e.get(r, 0) - se.get(r, 0)))).collect();
                for cand in [sum, diff] {
                    let mut trial = fixed.clone();
                    trial.push(cand.clone());
                    if fixed.len() < n && rank(k, &Matrix::from_rows(n, trial)) > fixed.len() {
                        fixed.push(cand);
                    }
                }
            }
            if fixed.len() != n {
                return Err(Error::Invariant("fixed vectors do not span".into()));
            }
            let basis = if n == 0 { identity(k, 0) } else { Matrix::from_rows(n, fixed).transpose() };
            Ok(C2Decomposition { r: n, r_twist: 0, basis, alpha: Some(alpha.clone()) })
        }
    }
}

/// `M (x)_Z Q` as an `F<G>`-module. `field` is needed only when `R = Z`.
pub fn rationalize<R: IntegralRing>(m: &PresentedModule<R>, field: Option<ImQuadField>) -> Result<RationalGModule> {
    let k = m.ring().quad_field().or(field).ok_or_else(|| Error::BadField("a quadratic field is required over Z".into()))?;
    let q = &Rationals;
    let flat = m.flatten();
    let (red, pivots) = if flat.relations.rows() == 0 {
        (RatMatrix::zeros(0, flat.zgens), Vec::new())
    } else {
        rref(q, &flat.relations.to_rational())
    };
    let free: Vec<usize> = (0..flat.zgens).filter(|c| !pivots.contains(c)).collect();
    // coordinates of a flat vector in the quotient basis
    let reduce = |v: &[BigRational]| -> Vec<BigRational> {
        let mut v = v.to_vec();
        for (row, &p) in pivots.iter().enumerate() {
            let c = v[p].clone();
            if !c.is_zero() {
                for (j, x) in v.iter_mut().enumerate() {
                    *x -= &c * red.get(row, j);
                }
            }
        }
        free.iter().map(|&c| v[c].clone()).collect()
    };
    let induced = |a: &RatMatrix| -> RatMatrix {
        let rows: Vec<Vec<BigRational>> = free.iter().map(|&c| reduce(a.row(c))).collect();
        Matrix::from_rows(free.len(), rows)
    };
    let dq = free.len();
    let sigma_q = match &flat.sigma_action {
        Some(s) => induced(&s.to_rational()),
        None => identity(q, dq),
    };
    let group = m.group();

    if m.ring().z_rank() == 1 {
        let sigma = sigma_q.transpose().map(|x| FieldElement::from_rational(x.clone()));
        return RationalGModule::new(k, group, sigma);
    }

    // omega acts as (left multiplication by the second basis element) / f
    let b = m.ring().z_basis().pop().expect("rank 2");
    let bf = m.ring().to_field(&b);
    if !bf.a.is_zero() {
        return Err(Error::Invariant("unexpected ring basis".into()));
    }
    let lb = flat.ring_action.as_ref().expect("rank 2").to_rational();
    let omega = mat_scale(q, &bf.b.recip(), &induced(&lb));

    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    let mut chosen = Vec::new();
    for c in 0..dq {
        if basis.len() == dq {
            break;
        }
        let e: Vec<BigRational> = (0..dq).map(|j| if j == c { BigRational::one() } else { BigRational::zero() }).collect();
        let we = omega.apply_row(&e);
        let mut trial = basis.clone();
        trial.push(e.clone());
        trial.push(we.clone());
        if rank(q, &Matrix::from_rows(dq, trial.clone())) == trial.len() {
            basis = trial;
            chosen.push(e);
        }
    }
    let dim = chosen.len();
    let bmat = Matrix::from_rows(dq, basis);
    let images: Vec<Vec<BigRational>> = chosen.iter().map(|e| sigma_q.apply_row(e)).collect();
    let coords = solve_left(q, &bmat, &Matrix::from_rows(dq, images))
        .ok_or_else(|| Error::Invariant("sigma image outside the quotient".into()))?;
    let sigma = Matrix::from_fn(dim, dim, |row, col| {
        FieldElement::new(coords.get(col, 2 * row).clone(), coords.get(col, 2 * row + 1).clone())
    });
    RationalGModule::new(k, group, sigma)
}
