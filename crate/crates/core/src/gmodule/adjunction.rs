//! Explicit adjunction bijections for restriction along `R -> R<G>`.

use super::hom::{hom_module, HomGroup, ModuleHom};
use super::presented::{ModuleVector, PresentedModule};
use crate::error::{Error, Result};
use crate::twisted::{GaloisGroup, IntegralRing, TwistedMatrix, TwistedRingElement};

fn check_plain<R: IntegralRing>(plain: &PresentedModule<R>, twisted: &PresentedModule<R>) -> Result<()> {
    if plain.group().order() != 1 {
        return Err(Error::RingMismatch("expected a plain R-module".into()));
    }
    if plain.ring() != twisted.ring() {
        return Err(Error::RingMismatch(format!(
            "{} vs {}",
            plain.ring().descriptor(),
            twisted.ring().descriptor()
        )));
    }
    Ok(())
}

fn act<R: IntegralRing>(ring: &R, group: GaloisGroup, g: usize, r: &R::Elem) -> R::Elem {
    TwistedRingElement::act(ring, &group, g, r)
}

/// `Hom_{R<G>}(R<G> (x)_R M, N) = Hom_R(M, N|_R)`.
#[derive(Clone, Debug)]
pub struct RestrictionAdjunction<R: IntegralRing> {
    pub plain: PresentedModule<R>,
    pub module: PresentedModule<R>,
    pub induced: PresentedModule<R>,
    pub restricted: PresentedModule<R>,
}

impl<R: IntegralRing> RestrictionAdjunction<R> {
    pub fn new(plain: &PresentedModule<R>, module: &PresentedModule<R>) -> Result<Self> {
        check_plain(plain, module)?;
        Ok(RestrictionAdjunction {
            plain: plain.clone(),
            module: module.clone(),
            induced: plain.induce(module.group())?,
            restricted: module.restrict(),
        })
    }

    /// `F -> (m -> F(1 (x) m))`.
    pub fn forward(&self, h: &ModuleHom<R>) -> Result<ModuleHom<R>> {
        let ring = self.plain.ring().clone();
        let triv = self.plain.group();
        let (rows, cols) = (self.plain.gens(), self.restricted.gens());
        let mut entries = Vec::with_capacity(rows * cols);
        for j in 0..rows {
            for y in h.images().row(j) {
                for c in y.coeffs() {
                    entries.push(TwistedRingElement::scalar(ring.clone(), triv, c.clone()));
                }
            }
        }
        let images = TwistedMatrix::from_entries(ring, triv, rows, cols, entries)?;
        ModuleHom::new(self.plain.clone(), self.restricted.clone(), images)
    }

    /// `f -> (r (x) m -> r f(m))`.
    pub fn backward(&self, h: &ModuleHom<R>) -> Result<ModuleHom<R>> {
        let ring = self.plain.ring().clone();
        let group = self.module.group();
        let ord = group.order();
        let (rows, cols) = (self.plain.gens(), self.module.gens());
        let mut entries = Vec::with_capacity(rows * cols);
        for j in 0..rows {
            let row = h.images().row(j);
            for k in 0..cols {
                let coeffs = (0..ord).map(|g| row[k * ord + g].coeff(0).clone()).collect();
                entries.push(TwistedRingElement::from_coeffs(ring.clone(), group, coeffs)?);
            }
        }
        let images = TwistedMatrix::from_entries(ring, group, rows, cols, entries)?;
        ModuleHom::new(self.induced.clone(), self.module.clone(), images)
    }

    /// `(Hom_{R<G>}(induced, N), Hom_R(M, restricted))`.
    pub fn hom_groups(&self) -> Result<(HomGroup<R>, HomGroup<R>)> {
        Ok((hom_module(&self.induced, &self.module)?, hom_module(&self.plain, &self.restricted)?))
    }

    /// Both composites fix every generator of both hom groups.
    pub fn round_trips(&self) -> Result<bool> {
        let (left, right) = self.hom_groups()?;
        for h in &left.generators {
            if !self.backward(&self.forward(h)?)?.same_map(h) {
                return Ok(false);
            }
        }
        for h in &right.generators {
            if !self.forward(&self.backward(h)?)?.same_map(h) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `Hom_R(M|_R, X) = Hom_{R<G>}(M, Hom_R(R<G>, X))`.
///
/// The coinduced module is presented as `R<G> (x)_R X`: the tuple
/// `(g_sigma)` corresponds to `sum_tau tau(g_{tau^-1}) tau`.
#[derive(Clone, Debug)]
pub struct CoinductionAdjunction<R: IntegralRing> {
    pub module: PresentedModule<R>,
    pub plain: PresentedModule<R>,
    pub restricted: PresentedModule<R>,
    pub coinduced: PresentedModule<R>,
}

impl<R: IntegralRing> CoinductionAdjunction<R> {
    pub fn new(module: &PresentedModule<R>, plain: &PresentedModule<R>) -> Result<Self> {
        check_plain(plain, module)?;
        Ok(CoinductionAdjunction {
            module: module.clone(),
            plain: plain.clone(),
            restricted: module.restrict(),
            coinduced: plain.induce(module.group())?,
        })
    }

    /// `f -> (m -> (sigma -> f(sigma m)))`.
    pub fn forward(&self, h: &ModuleHom<R>) -> Result<ModuleHom<R>> {
        let ring = self.plain.ring().clone();
        let group = self.module.group();
        let ord = group.order();
        let (rows, cols) = (self.module.gens(), self.plain.gens());
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let coeffs = group
                    .elements()
                    .map(|s| {
                        let d = h.images().get(i * ord + group.inv(s), j).coeff(0);
                        act(&ring, group, s, d)
                    })
                    .collect();
                entries.push(TwistedRingElement::from_coeffs(ring.clone(), group, coeffs)?);
            }
        }
        let images = TwistedMatrix::from_entries(ring, group, rows, cols, entries)?;
        ModuleHom::new(self.module.clone(), self.coinduced.clone(), images)
    }

    /// `F -> (m -> F(m)_1)`.
    pub fn backward(&self, h: &ModuleHom<R>) -> Result<ModuleHom<R>> {
        let ring = self.plain.ring().clone();
        let group = self.module.group();
        let triv = self.plain.group();
        let (rows, cols) = (self.restricted.gens(), self.plain.gens());
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..self.module.gens() {
            for r in group.elements() {
                for j in 0..cols {
                    let c = h.images().get(i, j).coeff(group.inv(r));
                    entries.push(TwistedRingElement::scalar(ring.clone(), triv, act(&ring, group, r, c)));
                }
            }
        }
        let images = TwistedMatrix::from_entries(ring, triv, rows, cols, entries)?;
        ModuleHom::new(self.restricted.clone(), self.plain.clone(), images)
    }

    /// `(Hom_R(restricted, X), Hom_{R<G>}(M, coinduced))`.
    pub fn hom_groups(&self) -> Result<(HomGroup<R>, HomGroup<R>)> {
        Ok((hom_module(&self.restricted, &self.plain)?, hom_module(&self.module, &self.coinduced)?))
    }

    pub fn round_trips(&self) -> Result<bool> {
        let (left, right) = self.hom_groups()?;
        for h in &left.generators {
            if !self.backward(&self.forward(h)?)?.same_map(h) {
                return Ok(false);
            }
        }
        for h in &right.generators {
            if !self.forward(&self.backward(h)?)?.same_map(h) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A `G`-indexed tuple of elements of an `R<G>`-module.
pub type Tuple<R> = Vec<ModuleVector<R>>;

fn act_vector<R: IntegralRing>(x: &PresentedModule<R>, g: usize, v: &[TwistedRingElement<R>]) -> Result<ModuleVector<R>> {
    x.scale_vector(&x.group_element(g), v)
}

fn check_tuple<R: IntegralRing>(x: &PresentedModule<R>, f: &[ModuleVector<R>]) -> Result<()> {
    if f.len() != x.group().order() || f.iter().any(|v| v.len() != x.gens()) {
        return Err(Error::DimensionMismatch("tuple does not match the module and group".into()));
    }
    Ok(())
}

/// `g_sigma = sigma f_{sigma^-1}`.
pub fn tuple_law<R: IntegralRing>(x: &PresentedModule<R>, f: &[ModuleVector<R>]) -> Result<Tuple<R>> {
    check_tuple(x, f)?;
    let g = x.group();
    g.elements().map(|s| act_vector(x, s, &f[g.inv(s)])).collect()
}

/// `f_sigma = sigma g_{sigma^-1}`.
pub fn tuple_law_inverse<R: IntegralRing>(x: &PresentedModule<R>, g: &[ModuleVector<R>]) -> Result<Tuple<R>> {
    tuple_law(x, g)
}

/// `(tau g)_sigma = g_{sigma tau}`.
pub fn coinduced_action<R: IntegralRing>(x: &PresentedModule<R>, tau: usize, g: &[ModuleVector<R>]) -> Result<Tuple<R>> {
    check_tuple(x, g)?;
    let grp = x.group();
    Ok(grp.elements().map(|s| g[grp.mul(s, tau)].clone()).collect())
}

/// `(tau f)_sigma = tau f_{tau^-1 sigma}`.
pub fn diagonal_action<R: IntegralRing>(x: &PresentedModule<R>, tau: usize, f: &[ModuleVector<R>]) -> Result<Tuple<R>> {
    check_tuple(x, f)?;
    let grp = x.group();
    grp.elements().map(|s| act_vector(x, tau, &f[grp.mul(grp.inv(tau), s)])).collect()
}

/// Componentwise equality in `x`.
pub fn tuples_equal<R: IntegralRing>(x: &PresentedModule<R>, a: &[ModuleVector<R>], b: &[ModuleVector<R>]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(u, v)| {
            let diff: Option<Vec<_>> = u.iter().zip(v).map(|(p, q)| p.tr_sub(q).ok()).collect();
            diff.is_some_and(|d| x.is_zero_vector(&d))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::standard;
    use crate::quad::{OrderElement, QuadOrder};
    use crate::twisted::Action;

    fn setup() -> (QuadOrder, GaloisGroup) {
        (QuadOrder::from_discriminant(-4).unwrap(), GaloisGroup::c2(Action::Conjugation))
    }

    #[test]
    fn restriction_free_case() {
        let (o, g) = setup();
        let plain = PresentedModule::free(o, GaloisGroup::trivial(), 1);
        let adj = RestrictionAdjunction::new(&plain, &PresentedModule::free(o, g, 1)).unwrap();
        let (l, r) = adj.hom_groups().unwrap();
        assert_eq!((l.flat.rank, r.flat.rank), (4, 4));
        assert!(adj.round_trips().unwrap());
    }

    #[test]
    fn restriction_maximal_order() {
        let o = QuadOrder::from_discriminant(-16).unwrap();
        let g = GaloisGroup::c2(Action::Conjugation);
        let of = standard::maximal_order_module(&o, GaloisGroup::trivial());
        let adj = RestrictionAdjunction::new(&of, &PresentedModule::free(o, g, 1)).unwrap();
        let (l, r) = adj.hom_groups().unwrap();
        assert_eq!(l.flat.rank, r.flat.rank);
        assert!(adj.round_trips().unwrap());
    }

    #[test]
    fn coinduction_free_and_zero() {
        let (o, g) = setup();
        let adj = CoinductionAdjunction::new(&PresentedModule::free(o, g, 1), &PresentedModule::free(o, GaloisGroup::trivial(), 1))
            .unwrap();
        let (l, r) = adj.hom_groups().unwrap();
        assert_eq!((l.flat.rank, r.flat.rank), (4, 4));
        assert!(adj.round_trips().unwrap());

        let zero = PresentedModule::zero(o, GaloisGroup::trivial());
        let adj = CoinductionAdjunction::new(&standard::ring_module(&o, g), &zero).unwrap();
        let (l, r) = adj.hom_groups().unwrap();
        assert_eq!((l.flat.rank, r.flat.rank), (0, 0));
    }

    #[test]
    fn tuple_law_round_trip_and_equivariance() {
        let (o, g) = setup();
        let x = PresentedModule::free(o, g, 2);
        let e = |a: i64, b: i64, h: usize| TwistedRingElement::monomial(o, g, OrderElement::new(a, b), h);
        let f = vec![vec![e(1, 2, 0), e(0, -1, 1)], vec![e(3, 0, 1), e(-2, 5, 0)]];
        let gt = tuple_law(&x, &f).unwrap();
        assert!(tuples_equal(&x, &tuple_law_inverse(&x, &gt).unwrap(), &f));
        for tau in g.elements() {
            let lhs = tuple_law(&x, &diagonal_action(&x, tau, &f).unwrap()).unwrap();
            let rhs = coinduced_action(&x, tau, &gt).unwrap();
            assert!(tuples_equal(&x, &lhs, &rhs));
        }
    }

    #[test]
    fn mismatched_rings() {
        let (o, g) = setup();
        let other = QuadOrder::from_discriminant(-16).unwrap();
        let plain = PresentedModule::free(other, GaloisGroup::trivial(), 1);
        assert!(matches!(
            RestrictionAdjunction::new(&plain, &PresentedModule::free(o, g, 1)),
            Err(Error::RingMismatch(_))
        ));
    }
}
