//! The kernel construction of `Hom_{R<G>}(M, E)` on lattices.
//!
//! A generator of `M` is sent to a point of the Weil restriction, modelled on
//! `F^|G|` with lattice `L + act(L)`. Ring elements act diagonally and the
//! nontrivial group element acts by `(x, y) -> (act y, act x)`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::isogeny::kernel_and_degree_rational;
use super::torus::{component_group, field_matrix, semilinear_rational, stabilizes, CMCurve, FiniteGroupData, LatticeTorus};
use crate::error::{Error, Result};
use crate::gmodule::{ModuleHom, PresentedModule, ShortExactSequence};
use crate::linalg::abelian::{exact_at, is_injective, is_surjective};
use crate::linalg::field::{inverse, Rationals};
use crate::linalg::normal::{integer_left_kernel, snf};
use crate::linalg::{AbGroup, IntMatrix, RatMatrix, ZLattice};
use crate::quad::{colon_ideal, FieldElement, FracIdeal};
use crate::twisted::{Action, GaloisGroup, IntegralRing, TwistedRingElement};

/// The Weil-restriction model of `E` for a fixed group.
#[derive(Clone, Debug)]
struct ResModel {
    curve: CMCurve,
    group: GaloisGroup,
    act: RatMatrix,
    basis: RatMatrix,
}

impl ResModel {
    fn new(e: &CMCurve, group: GaloisGroup) -> Result<Self> {
        if group.order() > 2 {
            return Err(Error::UnsupportedGroup(format!("order {}", group.order())));
        }
        if group.order() == 2 && group.action() != e.action() {
            return Err(Error::RingMismatch(format!("module action {} vs curve action {}", group.action(), e.action())));
        }
        let k = e.field();
        let act = match group.action() {
            Action::Conjugation if group.order() == 2 => k.conj_matrix(),
            _ => RatMatrix::identity(2),
        };
        let l = e.lattice().lattice().basis();
        let basis = if group.order() == 2 { RatMatrix::block_diag(&[l.clone(), l.matmul(&act)]) } else { l };
        Ok(ResModel { curve: e.clone(), group, act, basis })
    }

    /// Rational coordinates per generator.
    fn block(&self) -> usize {
        2 * self.group.order()
    }

    fn scalar(&self, x: &FieldElement) -> RatMatrix {
        let m = self.curve.field().mul_matrix(x);
        RatMatrix::block_diag(&vec![m; self.group.order()])
    }

    fn sigma(&self) -> RatMatrix {
        let mut s = RatMatrix::zeros(4, 4);
        s.set_block(0, 2, &self.act);
        s.set_block(2, 0, &self.act);
        s
    }

    fn check_ring<R: IntegralRing>(&self, ring: &R) -> Result<()> {
        let Some(k) = ring.quad_field() else { return Ok(()) };
        let order = self.curve.order();
        let basis = ring.z_basis();
        if k != order.field() || basis.len() != 2 || ring.to_field(&basis[1]) != order.phi() {
            return Err(Error::RingMismatch(format!("module over {} but the curve has CM by {}", ring.descriptor(), order)));
        }
        Ok(())
    }

    /// Row-convention matrix of `v -> a v`; `a -> realize(a)` reverses products.
    fn realize<R: IntegralRing>(&self, a: &TwistedRingElement<R>) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.block(), self.block());
        for g in self.group.elements() {
            let r = self.scalar(&a.ring().to_field(a.coeff(g)));
            let term = if g == 0 { r } else { self.sigma().matmul(&r) };
            out = &out + &term;
        }
        out
    }

    fn lattice_basis(&self, n: usize) -> RatMatrix {
        RatMatrix::block_diag(&vec![self.basis.clone(); n])
    }

    /// `v -> A conj(v)` on `F^{|G| n}`.
    fn descent(&self, n: usize) -> Option<crate::gmodule::rational::FieldMatrix> {
        (self.group.order() == 2).then(|| {
            field_matrix(2 * n, 2 * n, |i, j| {
                if i / 2 == j / 2 && i != j {
                    FieldElement::one()
                } else {
                    FieldElement::zero()
                }
            })
        })
    }

    /// `m` rewritten in lattice coordinates; `None` if not integral.
    fn to_lattice_coords(&self, m: &RatMatrix, src: usize, dst: usize) -> Option<IntMatrix> {
        let bs = self.lattice_basis(src);
        let bd = self.lattice_basis(dst);
        let bd_inv = inverse(&Rationals, &bd)?;
        bs.matmul(m).matmul(&bd_inv).to_integer()
    }
}

/// `Hom_{R<G>}(R<G>, E)`: the Weil restriction with its swap-conjugate descent.
pub fn res_torus(e: &CMCurve, group: GaloisGroup) -> Result<LatticeTorus> {
    let p = ResModel::new(e, group)?;
    Ok(LatticeTorus {
        field: e.field(),
        action: group.action(),
        ambient: group.order(),
        lattice: ZLattice::from_rat_rows(&p.basis),
        descent: p.descent(1),
    })
}

/// Rational matrix of `v -> a v` on the Weil-restriction model.
pub fn realization<R: IntegralRing>(a: &TwistedRingElement<R>, e: &CMCurve) -> Result<RatMatrix> {
    let p = ResModel::new(e, a.group())?;
    p.check_ring(a.ring())?;
    Ok(p.realize(a))
}

/// Everything the kernel construction produces for one module.
#[derive(Clone, Debug)]
pub struct HomTorus {
    pub torus: LatticeTorus,
    pub components: FiniteGroupData,
    /// The presentation map in lattice coordinates, `(b n) x (b m)`.
    pub presentation: IntMatrix,
    /// Basis of `(L + act L)^n`, one row per lattice coordinate.
    pub ambient_basis: RatMatrix,
}

impl HomTorus {
    /// Pontryagin dual of the kernel as a finitely generated abelian group.
    pub fn dual_group(&self) -> AbGroup {
        AbGroup::new(&self.presentation.transpose())
    }

    pub fn component_order(&self) -> BigInt {
        self.components.order.clone()
    }
}

/// The kernel of `X` acting on `Res^n`, split into identity component and component group.
pub fn hom_torus_full<R: IntegralRing>(m: &PresentedModule<R>, e: &CMCurve) -> Result<HomTorus> {
    let p = ResModel::new(e, m.group())?;
    p.check_ring(m.ring())?;
    let (n, rels) = (m.gens(), m.relations().rows());
    let b = p.block();
    let mut t = RatMatrix::zeros(b * n, b * rels);
    for i in 0..rels {
        for j in 0..n {
            t.set_block(j * b, i * b, &p.realize(m.relations().get(i, j)));
        }
    }
    let tz = p
        .to_lattice_coords(&t, n, rels)
        .ok_or_else(|| Error::Invariant("presentation does not preserve the lattice".into()))?;
    let bn = p.lattice_basis(n);
    let (kernel, components) = if rels == 0 || n == 0 {
        (IntMatrix::identity(b * n), FiniteGroupData::trivial())
    } else {
        let s = snf(&tz);
        let sz = (p.group.order() == 2)
            .then(|| p.to_lattice_coords(&semilinear_rational(&e.field(), p.group.action(), &p.descent(n).expect("order 2")), n, n))
            .flatten();
        (integer_left_kernel(&tz), component_group(&tz, &s, sz.as_ref()))
    };
    let lattice = if kernel.rows() == 0 {
        ZLattice::zero(b * n)
    } else {
        ZLattice::from_rat_rows(&kernel.to_rational().matmul(&bn))
    };
    let mut torus = LatticeTorus { field: e.field(), action: p.group.action(), ambient: p.group.order() * n, lattice, descent: None };
    if let Some(a) = p.descent(n) {
        let q = semilinear_rational(&e.field(), p.group.action(), &a);
        if stabilizes(&torus.lattice, &q) {
            torus.descent = Some(a);
        }
    }
    Ok(HomTorus { torus, components, presentation: tz, ambient_basis: bn })
}

/// `Hom_{R<G>}(M, E)` as (identity component, component group).
pub fn hom_torus<R: IntegralRing>(m: &PresentedModule<R>, e: &CMCurve) -> Result<(LatticeTorus, FiniteGroupData)> {
    let h = hom_torus_full(m, e)?;
    Ok((h.torus, h.components))
}

/// Rank-one shortcut: `Hom_O(I, E)` is the curve with lattice `(L : I)`.
pub fn hom_ideal(i: &FracIdeal, e: &CMCurve) -> Result<CMCurve> {
    let l = colon_ideal(e.lattice(), i)?;
    let order = l.multiplier_ring();
    CMCurve::new(order, l, e.action())
}

/// Rational matrix of `Hom(N, E) -> Hom(M, E)`, `phi -> phi . h`, on the Weil-restriction models.
pub fn induced_map<R: IntegralRing>(h: &ModuleHom<R>, e: &CMCurve) -> Result<RatMatrix> {
    let p = ResModel::new(e, h.source().group())?;
    p.check_ring(h.source().ring())?;
    let b = p.block();
    let (rows, cols) = (h.source().gens(), h.target().gens());
    let mut out = RatMatrix::zeros(b * cols, b * rows);
    for j in 0..rows {
        for k in 0..cols {
            out.set_block(k * b, j * b, &p.realize(h.images().get(j, k)));
        }
    }
    Ok(out)
}

/// [`induced_map`] in lattice coordinates of `(L + act L)^n`.
pub fn induced_map_lattice<R: IntegralRing>(h: &ModuleHom<R>, e: &CMCurve) -> Result<IntMatrix> {
    let p = ResModel::new(e, h.source().group())?;
    let q = induced_map(h, e)?;
    p.to_lattice_coords(&q, h.target().gens(), h.source().gens())
        .ok_or_else(|| Error::Invariant("induced map does not preserve the lattice".into()))
}

/// Exactness of `0 -> Hom(C) -> Hom(B) -> Hom(A) -> 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SesReport {
    pub left_injective: bool,
    pub middle_exact: bool,
    pub right_surjective: bool,
    pub exact: bool,
    /// Dimensions of `Hom(C)`, `Hom(B)`, `Hom(A)`.
    pub dims: [usize; 3],
    /// Component group orders of `Hom(C)`, `Hom(B)`, `Hom(A)`.
    #[serde(with = "decimal_array")]
    pub component_orders: [BigInt; 3],
    /// Degree of `Hom(B)^0 -> Hom(A)^0` when `Hom(C)` is finite.
    #[serde(with = "decimal_option")]
    pub identity_degree: Option<BigInt>,
    /// `deg * |pi0 Hom(B)| = |Hom(C)| * |pi0 Hom(A)|` when `Hom(C)` is finite.
    pub bookkeeping_consistent: bool,
}

mod decimal_array {
    use num_bigint::BigInt;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigInt; 3], s: S) -> Result<S::Ok, S::Error> {
        crate::linalg::matrix::decimal_vec::serialize(xs.as_slice(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[BigInt; 3], D::Error> {
        let v: Vec<BigInt> = crate::linalg::matrix::decimal_vec::deserialize(d)?;
        v.try_into().map_err(|_| serde::de::Error::custom("expected three entries"))
    }
}

mod decimal_option {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(ToString::to_string).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        let v: Option<String> = Option::deserialize(d)?;
        v.map(|s| s.parse().map_err(serde::de::Error::custom)).transpose()
    }
}

/// Applies the functor to an exact sequence and checks the result through Pontryagin duals.
pub fn apply_ses<R: IntegralRing>(ses: &ShortExactSequence<R>, e: &CMCurve) -> Result<SesReport> {
    ses.check_exact()?;
    let ha = hom_torus_full(ses.a(), e)?;
    let hb = hom_torus_full(ses.b(), e)?;
    let hc = hom_torus_full(ses.c(), e)?;
    let fz = induced_map_lattice(&ses.f, e)?;
    let gz = induced_map_lattice(&ses.g, e)?;
    let (da, db, dc) = (ha.dual_group(), hb.dual_group(), hc.dual_group());
    let (fd, gd) = (fz.transpose(), gz.transpose());
    if !da.is_hom_to(&fd, &db) || !db.is_hom_to(&gd, &dc) {
        return Err(Error::Invariant("induced maps do not respect the kernels".into()));
    }
    let left_injective = is_injective(&da, &fd, &db);
    let middle_exact = exact_at(&da, &fd, &db, &gd, &dc);
    let right_surjective = is_surjective(&gd, &dc);
    let dims = [hc.torus.dim(), hb.torus.dim(), ha.torus.dim()];
    let component_orders = [hc.component_order(), hb.component_order(), ha.component_order()];
    let (identity_degree, bookkeeping_consistent) = if dims[0] == 0 {
        let q = induced_map(&ses.f, e)?;
        let deg = kernel_and_degree_rational(&q, &hb.torus.lattice, &ha.torus.lattice).ok().map(|(_, d)| d);
        let ok = deg.as_ref().is_some_and(|d| d * &component_orders[1] == &component_orders[0] * &component_orders[2]);
        (deg, ok)
    } else {
        (None, dims[1] == dims[0] + dims[2])
    };
    Ok(SesReport {
        left_injective,
        middle_exact,
        right_surjective,
        exact: left_injective && middle_exact && right_surjective,
        dims,
        component_orders,
        identity_degree,
        bookkeeping_consistent,
    })
}
