#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use serrehom::gmodule::standard;
use serrehom::gmodule::PresentedModule;
use serrehom::quad::{FieldElement, FracIdeal, ImQuadField, OrderElement, QuadOrder};
use serrehom::tori::CMCurve;
use serrehom::twisted::{Action, GaloisGroup, IntegralRing, TwistedMatrix, TwistedRingElement};

pub const FIELDS: [i64; 7] = [-1, -2, -3, -5, -7, -11, -15];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

pub fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let x = small(rng, bound);
        if x != 0 {
            return x;
        }
    }
}

pub fn random_order(rng: &mut ChaCha8Rng) -> QuadOrder {
    let d = FIELDS[rng.gen_range(0..FIELDS.len())];
    let f = rng.gen_range(1..=4);
    QuadOrder::new(ImQuadField::new(d).unwrap(), f).unwrap()
}

pub fn order_element(rng: &mut ChaCha8Rng, bound: i64) -> OrderElement {
    OrderElement::new(small(rng, bound), small(rng, bound))
}

pub fn nonzero_order_element(rng: &mut ChaCha8Rng, bound: i64) -> OrderElement {
    loop {
        let x = order_element(rng, bound);
        if x.x != BigInt::from(0) || x.y != BigInt::from(0) {
            return x;
        }
    }
}

pub fn field_element(rng: &mut ChaCha8Rng, bound: i64) -> FieldElement {
    let q = |rng: &mut ChaCha8Rng| BigRational::new(small(rng, bound).into(), rng.gen_range(1..=3).into());
    FieldElement::new(q(rng), q(rng))
}

pub fn integral_element<R: IntegralRing>(rng: &mut ChaCha8Rng, ring: &R, bound: i64) -> R::Elem {
    let c: Vec<BigInt> = (0..ring.z_rank()).map(|_| small(rng, bound).into()).collect();
    ring.from_coords(&c)
}

pub fn twisted<R: IntegralRing>(rng: &mut ChaCha8Rng, ring: &R, group: GaloisGroup, bound: i64) -> TwistedRingElement<R> {
    let coeffs = group.elements().map(|_| integral_element(rng, ring, bound)).collect();
    TwistedRingElement::from_coeffs(ring.clone(), group, coeffs).unwrap()
}

pub fn twisted_matrix<R: IntegralRing>(
    rng: &mut ChaCha8Rng,
    ring: &R,
    group: GaloisGroup,
    rows: usize,
    cols: usize,
    bound: i64,
) -> TwistedMatrix<R> {
    let entries = (0..rows * cols).map(|_| twisted(rng, ring, group, bound)).collect();
    TwistedMatrix::from_entries(ring.clone(), group, rows, cols, entries).unwrap()
}

/// A module with random relations, possibly with torsion.
pub fn random_module<R: IntegralRing>(rng: &mut ChaCha8Rng, ring: &R, group: GaloisGroup, max_gens: usize) -> PresentedModule<R> {
    let gens = rng.gen_range(1..=max_gens);
    let rels = rng.gen_range(0..=gens);
    let x = twisted_matrix(rng, ring, group, rels, gens, 3);
    PresentedModule::new(ring.clone(), group, gens, x).unwrap()
}

/// `O`-span of a few random elements of `O`.
pub fn random_ideal(rng: &mut ChaCha8Rng, o: &QuadOrder) -> FracIdeal {
    let k = o.field();
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let x = o.to_field(&nonzero_order_element(rng, 6));
        gens.push(k.mul(&x, &o.phi()));
        gens.push(x);
    }
    FracIdeal::from_generators(k, &gens).unwrap()
}

/// An `O`-ideal with `conj(I) = I`, spanned over `O` by an integer and a multiple of `f sqrt(d)`.
pub fn conj_stable_ideal(rng: &mut ChaCha8Rng, o: &QuadOrder) -> FracIdeal {
    let k = o.field();
    let a = FieldElement::from_ints(nonzero(rng, 6), 0);
    let b = o.purely_imaginary_generator().scale(&BigRational::from_integer(nonzero(rng, 4).into()));
    let gens = [a.clone(), k.mul(&a, &o.phi()), b.clone(), k.mul(&b, &o.phi())];
    FracIdeal::from_generators(k, &gens).unwrap()
}

/// A curve with CM by exactly `o`, on a random proper ideal when one turns up.
pub fn curve_for(rng: &mut ChaCha8Rng, o: &QuadOrder) -> CMCurve {
    for _ in 0..4 {
        let l = random_ideal(rng, o);
        if let Ok(e) = CMCurve::new(*o, l, Action::Conjugation) {
            return e;
        }
    }
    CMCurve::standard(*o, Action::Conjugation)
}

pub fn random_curve(rng: &mut ChaCha8Rng) -> CMCurve {
    let o = random_order(rng);
    curve_for(rng, &o)
}

/// A torsion-free `O<G>`-module of rank at most 3, assembled from standard pieces.
pub fn torsion_free_module(rng: &mut ChaCha8Rng, o: &QuadOrder, group: GaloisGroup) -> PresentedModule<QuadOrder> {
    let mut rank = 0;
    let mut out: Option<PresentedModule<QuadOrder>> = None;
    let target = rng.gen_range(1..=3);
    while rank < target {
        let (piece, r) = match rng.gen_range(0..4) {
            0 => (standard::ring_module(o, group), 1),
            1 if rank + 2 <= target && group.order() == 2 => (PresentedModule::free(*o, group, 1), 2),
            2 => {
                let i = conj_stable_ideal(rng, o);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                (standard::ideal_module(o, group, &i, sign).unwrap(), 1)
            }
            _ => {
                let i = conj_stable_ideal(rng, o);
                let mut gens = i.basis().to_vec();
                gens.push(i.basis()[0].scale(&BigRational::from_integer(nonzero(rng, 3).into())));
                (standard::lattice_module(o, group, &i, 1, &gens, None).unwrap(), 1)
            }
        };
        rank += r;
        out = Some(match out {
            None => piece,
            Some(m) => m.direct_sum(&piece).unwrap(),
        });
    }
    out.unwrap()
}

pub fn conj_group() -> GaloisGroup {
    GaloisGroup::c2(Action::Conjugation)
}

/// A random equivariant surjection `phi : V -> W` of `F<G>`-modules with a random `F`-linear section.
pub struct Surjection {
    pub v: serrehom::gmodule::RationalGModule,
    pub w: serrehom::gmodule::RationalGModule,
    pub phi: serrehom::gmodule::rational::FieldMatrix,
    pub section: serrehom::gmodule::rational::FieldMatrix,
}

fn invertible(rng: &mut ChaCha8Rng, k: &ImQuadField, n: usize) -> serrehom::gmodule::rational::FieldMatrix {
    use serrehom::linalg::field::inverse;
    use serrehom::linalg::Matrix;
    loop {
        let m = Matrix::from_fn(n, n, |_, _| field_element(rng, 4));
        if inverse(k, &m).is_some() {
            return m;
        }
    }
}

fn signs(rng: &mut ChaCha8Rng, n: usize) -> Vec<FieldElement> {
    (0..n).map(|_| FieldElement::from_ints(if rng.gen_bool(0.5) { 1 } else { -1 }, 0)).collect()
}

/// `dim V <= 6`: `V = W + U` in a hidden basis, then both bases are scrambled.
pub fn random_surjection(rng: &mut ChaCha8Rng, k: ImQuadField, group: GaloisGroup) -> Surjection {
    use serrehom::gmodule::RationalGModule;
    use serrehom::linalg::field::{inverse, mat_mul};
    use serrehom::linalg::Matrix;
    let nw = rng.gen_range(1..=3);
    let nu = rng.gen_range(0..=3);
    let nv = nw + nu;
    let (sw, su) = if group.order() == 2 { (signs(rng, nw), signs(rng, nu)) } else { (vec![FieldElement::one(); nw], vec![FieldElement::one(); nu]) };
    let diag = |d: &[FieldElement]| Matrix::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { FieldElement::zero() });
    let all: Vec<_> = sw.iter().chain(&su).cloned().collect();
    let (p, q) = (invertible(rng, &k, nv), invertible(rng, &k, nw));
    let conj = |m: &Matrix<FieldElement>| if group.action() == Action::Conjugation && group.order() == 2 { m.map(|x| k.conj(x)) } else { m.clone() };
    let (pinv, qinv) = (inverse(&k, &p).unwrap(), inverse(&k, &q).unwrap());
    let s_v = mat_mul(&k, &mat_mul(&k, &p, &diag(&all)), &conj(&pinv));
    let s_w = mat_mul(&k, &mat_mul(&k, &q, &diag(&sw)), &conj(&qinv));
    let phi0 = Matrix::from_fn(nw, nv, |i, j| if i == j { FieldElement::one() } else { FieldElement::zero() });
    let phi = mat_mul(&k, &mat_mul(&k, &q, &phi0), &pinv);
    let lower = Matrix::from_fn(nu, nw, |_, _| field_element(rng, 4));
    let section = mat_mul(&k, &p, &qinv.vstack(&lower));
    Surjection {
        v: RationalGModule::new(k, group, s_v).unwrap(),
        w: RationalGModule::new(k, group, s_w).unwrap(),
        phi,
        section,
    }
}
