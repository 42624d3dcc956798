//! Frequently used modules over orders in imaginary quadratic fields.

use num_rational::BigRational;

use super::hom::{ModuleHom, ShortExactSequence};
use super::presented::PresentedModule;
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, ZLattice};
use crate::quad::{FieldElement, FracIdeal, OrderElement, QuadOrder};
use crate::twisted::{Action, GaloisGroup, TwistedMatrix, TwistedRingElement};

/// `R` with its own Galois action: one generator `e`, relation `(s - 1) e`.
pub fn ring_module(o: &QuadOrder, group: GaloisGroup) -> PresentedModule<QuadOrder> {
    if group.order() == 1 {
        return PresentedModule::free(*o, group, 1);
    }
    let s = TwistedRingElement::group_element(*o, group, 1);
    let rel = s.tr_sub(&TwistedRingElement::one(*o, group)).expect("same ring");
    let x = TwistedMatrix::from_entries(*o, group, 1, 1, vec![rel]).expect("shape");
    PresentedModule::new(*o, group, 1, x).expect("valid presentation")
}

/// `R / nR` with its Galois action.
pub fn cyclic_quotient(o: &QuadOrder, group: GaloisGroup, n: i64) -> PresentedModule<QuadOrder> {
    let mut rels = vec![TwistedRingElement::scalar(*o, group, OrderElement::new(n, 0))];
    if group.order() == 2 {
        let s = TwistedRingElement::group_element(*o, group, 1);
        rels.push(s.tr_sub(&TwistedRingElement::one(*o, group)).expect("same ring"));
    }
    let m = rels.len();
    let x = TwistedMatrix::from_entries(*o, group, m, 1, rels).expect("shape");
    PresentedModule::new(*o, group, 1, x).expect("valid presentation")
}

/// Semilinear action of the nontrivial group element on a rank-one lattice:
/// `x -> sign * g(x)` where `g` is conjugation or the identity.
fn sigma_image(o: &QuadOrder, group: GaloisGroup, sign: i64, x: &FieldElement) -> FieldElement {
    let k = o.field();
    let gx = match group.action() {
        Action::Conjugation => k.conj(x),
        Action::Trivial => x.clone(),
    };
    gx.scale(&BigRational::from_integer(sign.into()))
}

/// Module generated by `gens` inside the `O`-lattice `lattice`, with `O`
/// acting by multiplication and `s` acting by `sign * g`, taken modulo the
/// sublattice `modulo` when given.
pub fn lattice_module(
    o: &QuadOrder,
    group: GaloisGroup,
    lattice: &FracIdeal,
    sign: i64,
    gens: &[FieldElement],
    modulo: Option<&FracIdeal>,
) -> Result<PresentedModule<QuadOrder>> {
    let k = o.field();
    if lattice.field() != k {
        return Err(Error::RingMismatch("lattice in a different field".into()));
    }
    if !lattice.is_module_over(o) {
        return Err(Error::RingMismatch("lattice is not an O-module".into()));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Invariant("sign must be +1 or -1".into()));
    }
    let coords = |x: &FieldElement| -> Result<Vec<num_bigint::BigInt>> {
        let c = lattice
            .lattice()
            .coordinates(&x.coords())
            .filter(|c| c.iter().all(BigRational::is_integer))
            .ok_or(Error::NotSublattice)?;
        Ok(c.iter().map(BigRational::to_integer).collect())
    };
    if group.order() == 2 {
        for b in lattice.basis() {
            if !lattice.contains(&sigma_image(o, group, sign, &b)) {
                return Err(Error::NotEquivariant);
            }
        }
    }
    let ring_basis = [FieldElement::one(), o.phi()];
    let mut rows = Vec::new();
    for m in gens {
        for g in group.elements() {
            let gm = if g == 0 { m.clone() } else { sigma_image(o, group, sign, m) };
            for b in &ring_basis {
                rows.push(coords(&k.mul(b, &gm))?);
            }
        }
    }
    let eval = IntMatrix::from_rows(2, rows);
    let modulo = match modulo {
        None => None,
        Some(sub) => {
            let mut sub_rows = Vec::new();
            for b in sub.basis() {
                sub_rows.push(coords(&b)?);
            }
            Some(ZLattice::from_int_rows(&IntMatrix::from_rows(2, sub_rows)))
        }
    };
    PresentedModule::from_evaluation(*o, group, gens.len(), &eval, modulo.as_ref())
}

/// A rank-one lattice module generated by its canonical `Z`-basis.
pub fn ideal_module(
    o: &QuadOrder,
    group: GaloisGroup,
    lattice: &FracIdeal,
    sign: i64,
) -> Result<PresentedModule<QuadOrder>> {
    lattice_module(o, group, lattice, sign, &lattice.basis(), None)
}

/// `O_F` as an `O<G>`-module, generated by `1` and `omega`.
pub fn maximal_order_module(o: &QuadOrder, group: GaloisGroup) -> PresentedModule<QuadOrder> {
    let of = FracIdeal::from_order(&o.maximal_order());
    let k = o.field();
    lattice_module(o, group, &of, 1, &[FieldElement::one(), k.omega()], None).expect("O_F is an O-module")
}

/// `O_F / O`, generated by the class of `omega`.
pub fn maximal_mod_order(o: &QuadOrder, group: GaloisGroup) -> PresentedModule<QuadOrder> {
    let of = FracIdeal::from_order(&o.maximal_order());
    let sub = FracIdeal::from_order(o);
    lattice_module(o, group, &of, 1, &[o.field().omega()], Some(&sub)).expect("O_F / O is a module")
}

/// `0 -> O -> O_F -> O_F / O -> 0`: `1` goes to the first generator of `O_F`,
/// which maps to zero, and `omega` goes to the class generating the quotient.
pub fn maximal_order_sequence(o: &QuadOrder, group: GaloisGroup) -> Result<ShortExactSequence<QuadOrder>> {
    let (a, b, c) = (ring_module(o, group), maximal_order_module(o, group), maximal_mod_order(o, group));
    let one = TwistedRingElement::one(*o, group);
    let zero = TwistedRingElement::zero(*o, group);
    let f = TwistedMatrix::from_entries(*o, group, 1, 2, vec![one.clone(), zero.clone()])?;
    let g = TwistedMatrix::from_entries(*o, group, 2, 1, vec![zero, one])?;
    ShortExactSequence::new(ModuleHom::new(a, b.clone(), f)?, ModuleHom::new(b, c, g)?)
}
