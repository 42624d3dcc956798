use num_bigint::BigInt;

use super::presented::{flatten_vector, FlatModel, ModuleVector, PresentedModule};
use crate::error::{Error, Result};
use crate::linalg::abelian::{exact_at, is_injective, is_surjective};
use crate::linalg::field::{solve_left, Rationals};
use crate::linalg::normal::snf;
use crate::linalg::{IntMatrix, ZLattice};
use crate::twisted::{IntegralRing, TwistedMatrix, TwistedRingElement};

/// A module map given by the images of the source generators: row `j` of
/// `images` is the image of `e_j` in the target's free cover.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleHom<R: IntegralRing> {
    source: PresentedModule<R>,
    target: PresentedModule<R>,
    images: TwistedMatrix<R>,
}

impl<R: IntegralRing> ModuleHom<R> {
    pub fn new(source: PresentedModule<R>, target: PresentedModule<R>, images: TwistedMatrix<R>) -> Result<Self> {
        source.same_ring(&target)?;
        if images.rows() != source.gens() || images.cols() != target.gens() {
            return Err(Error::DimensionMismatch(format!(
                "images are {}x{}, expected {}x{}",
                images.rows(),
                images.cols(),
                source.gens(),
                target.gens()
            )));
        }
        if images.group() != source.group() || images.ring() != source.ring() {
            return Err(Error::RingMismatch("images over a different ring".into()));
        }
        let h = ModuleHom { source, target, images };
        if !h.is_well_defined() {
            return Err(Error::NotWellDefined);
        }
        Ok(h)
    }

    pub fn identity(m: &PresentedModule<R>) -> Self {
        let id = TwistedMatrix::identity(m.ring().clone(), m.group(), m.gens());
        ModuleHom { source: m.clone(), target: m.clone(), images: id }
    }

    pub fn zero(source: &PresentedModule<R>, target: &PresentedModule<R>) -> Self {
        let z = TwistedMatrix::zeros(source.ring().clone(), source.group(), source.gens(), target.gens());
        ModuleHom { source: source.clone(), target: target.clone(), images: z }
    }

    pub fn source(&self) -> &PresentedModule<R> {
        &self.source
    }

    pub fn target(&self) -> &PresentedModule<R> {
        &self.target
    }

    pub fn images(&self) -> &TwistedMatrix<R> {
        &self.images
    }

    pub fn image_of_generator(&self, j: usize) -> ModuleVector<R> {
        self.images.row(j).to_vec()
    }

    fn is_well_defined(&self) -> bool {
        let rel = self.target.relation_lattice();
        let x = self.source.relations();
        match x.tr_matrix_mul(&self.images) {
            Ok(prod) => (0..prod.rows()).all(|i| rel.contains_int(&flatten_vector(prod.row(i)))),
            Err(_) => false,
        }
    }

    /// Integer matrix of the map on flattened free covers.
    pub fn flat_matrix(&self) -> IntMatrix {
        self.images.flatten_right_action()
    }

    pub fn apply(&self, v: &[TwistedRingElement<R>]) -> Result<ModuleVector<R>> {
        self.images.apply_row(v)
    }

    /// `next . self`.
    pub fn then(&self, next: &ModuleHom<R>) -> Result<ModuleHom<R>> {
        if next.source != self.target {
            return Err(Error::DimensionMismatch("maps are not composable".into()));
        }
        let images = self.images.tr_matrix_mul(&next.images)?;
        Ok(ModuleHom { source: self.source.clone(), target: next.target.clone(), images })
    }

    /// Equality as maps of modules (images agree modulo relations).
    pub fn same_map(&self, other: &ModuleHom<R>) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let rel = self.target.relation_lattice();
        (0..self.source.gens()).all(|j| {
            let diff: Vec<BigInt> = flatten_vector(self.images.row(j))
                .iter()
                .zip(flatten_vector(other.images.row(j)))
                .map(|(a, b)| a - b)
                .collect();
            rel.contains_int(&diff)
        })
    }
}

/// `Hom_{R<G>}(M, N)` as an abelian group together with homs realizing its generators.
#[derive(Clone, Debug)]
pub struct HomGroup<R: IntegralRing> {
    pub flat: FlatModel,
    pub generators: Vec<ModuleHom<R>>,
}

impl<R: IntegralRing> HomGroup<R> {
    /// The hom `sum_i c_i * generators[i]`.
    pub fn combination(&self, source: &PresentedModule<R>, target: &PresentedModule<R>, c: &[BigInt]) -> Result<ModuleHom<R>> {
        let p = target.zdim();
        let mut flat = vec![BigInt::from(0); source.gens() * p];
        for (ci, h) in c.iter().zip(&self.generators) {
            for j in 0..source.gens() {
                for (k, v) in flatten_vector(h.images.row(j)).into_iter().enumerate() {
                    flat[j * p + k] += ci * v;
                }
            }
        }
        hom_from_flat(source, target, &flat)
    }
}

fn hom_from_flat<R: IntegralRing>(
    source: &PresentedModule<R>,
    target: &PresentedModule<R>,
    flat: &[BigInt],
) -> Result<ModuleHom<R>> {
    let p = target.zdim();
    let mut entries = Vec::with_capacity(source.gens() * target.gens());
    for j in 0..source.gens() {
        entries.extend(target.unflatten(&flat[j * p..(j + 1) * p])?);
    }
    let images = TwistedMatrix::from_entries(
        source.ring().clone(),
        source.group(),
        source.gens(),
        target.gens(),
        entries,
    )?;
    ModuleHom::new(source.clone(), target.clone(), images)
}

/// Solves `sum_j X_ij * y_j = 0` in `N` for the generator images `y_j`.
pub fn hom_module<R: IntegralRing>(m: &PresentedModule<R>, n: &PresentedModule<R>) -> Result<HomGroup<R>> {
    m.same_ring(n)?;
    let p = n.zdim();
    let (gens, rels) = (m.gens(), m.relations().rows());
    let k = n.relation_lattice();
    let kb = k.integer_basis().expect("integral relations");

    let mut c = IntMatrix::zeros(gens * p, rels * p);
    for i in 0..rels {
        for j in 0..gens {
            c.set_block(j * p, i * p, &n.left_action_matrix(m.relations().get(i, j)));
        }
    }
    let blocks = |count: usize| {
        let mut b = IntMatrix::zeros(count * kb.rows(), count * p);
        for i in 0..count {
            b.set_block(i * kb.rows(), i * p, &kb);
        }
        b
    };
    let s = ZLattice::from_int_rows(&blocks(rels))
        .preimage(&c)
        .integer_basis()
        .expect("integral solutions");
    let t = s.rows();
    // homs whose generator images all vanish in N
    let trivial = blocks(gens);
    let relations = if trivial.rows() == 0 {
        IntMatrix::zeros(0, t)
    } else {
        let coords = solve_left(&Rationals, &s.to_rational(), &trivial.to_rational())
            .and_then(|x| x.to_integer())
            .ok_or_else(|| Error::Invariant("trivial homs outside the solution lattice".into()))?;
        ZLattice::from_int_rows(&coords).integer_basis().expect("integral")
    };
    let torsion = snf(&relations).torsion();
    let rank = t - relations.rows();
    let generators = (0..t)
        .map(|i| hom_from_flat(m, n, s.row(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomGroup {
        flat: FlatModel { zgens: t, relations, rank, torsion, ring_action: None, sigma_action: None },
        generators,
    })
}

/// `0 -> A --f--> B --g--> C -> 0`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence<R: IntegralRing> {
    pub f: ModuleHom<R>,
    pub g: ModuleHom<R>,
}

impl<R: IntegralRing> ShortExactSequence<R> {
    pub fn new(f: ModuleHom<R>, g: ModuleHom<R>) -> Result<Self> {
        if f.target != g.source {
            return Err(Error::NotExactInput("maps are not composable".into()));
        }
        let s = ShortExactSequence { f, g };
        s.check_exact()?;
        Ok(s)
    }

    pub fn a(&self) -> &PresentedModule<R> {
        &self.f.source
    }

    pub fn b(&self) -> &PresentedModule<R> {
        &self.f.target
    }

    pub fn c(&self) -> &PresentedModule<R> {
        &self.g.target
    }

    /// Exactness of the underlying abelian groups, which is exactness of modules.
    pub fn check_exact(&self) -> Result<()> {
        let (a, b, c) = (self.a().abelian_group(), self.b().abelian_group(), self.c().abelian_group());
        let (fm, gm) = (self.f.flat_matrix(), self.g.flat_matrix());
        if !is_injective(&a, &fm, &b) {
            return Err(Error::NotExactInput("first map is not injective".into()));
        }
        if !exact_at(&a, &fm, &b, &gm, &c) {
            return Err(Error::NotExactInput("not exact in the middle".into()));
        }
        if !is_surjective(&gm, &c) {
            return Err(Error::NotExactInput("last map is not surjective".into()));
        }
        Ok(())
    }
}
