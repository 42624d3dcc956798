use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::abelian::AbGroup;
use crate::linalg::matrix::decimal_vec;
use crate::linalg::normal::{integer_left_kernel, snf_cancellable, CancelToken};
use crate::linalg::{IntMatrix, ZLattice};
use crate::twisted::{GaloisGroup, IntegralRing, TwistedMatrix, TwistedRingElement};

/// The left `R<G>`-module `R<G>^gens / (rows of X)`.
///
/// Elements are row vectors in `R<G>^gens`; the relation submodule is the
/// left submodule generated by the rows of `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct PresentedModule<R: IntegralRing> {
    ring: R,
    group: GaloisGroup,
    gens: usize,
    relations: TwistedMatrix<R>,
}

/// Integer model of a presented module: `Z^zgens / rowspan(relations)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatModel {
    pub zgens: usize,
    /// Canonical (Hermite) basis of the relation lattice.
    pub relations: IntMatrix,
    pub rank: usize,
    #[serde(with = "decimal_vec")]
    pub torsion: Vec<BigInt>,
    /// Left action of the second ring basis element, when `R` has rank 2.
    pub ring_action: Option<IntMatrix>,
    /// Left action of the nontrivial group element.
    pub sigma_action: Option<IntMatrix>,
}

impl FlatModel {
    pub fn abelian_group(&self) -> AbGroup {
        AbGroup::new(&self.relations)
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

pub type ModuleVector<R> = Vec<TwistedRingElement<R>>;

impl<R: IntegralRing> PresentedModule<R> {
    pub fn new(ring: R, group: GaloisGroup, gens: usize, relations: TwistedMatrix<R>) -> Result<Self> {
        if relations.group() != group {
            return Err(Error::GroupMismatch);
        }
        if *relations.ring() != ring {
            return Err(Error::RingMismatch("presentation over a different ring".into()));
        }
        if relations.cols() != gens {
            return Err(Error::DimensionMismatch(format!(
                "presentation has {} columns for {gens} generators",
                relations.cols()
            )));
        }
        Ok(PresentedModule { ring, group, gens, relations })
    }

    /// The free module `R<G>^n`.
    pub fn free(ring: R, group: GaloisGroup, n: usize) -> Self {
        let relations = TwistedMatrix::zeros(ring.clone(), group, 0, n);
        PresentedModule { ring, group, gens: n, relations }
    }

    pub fn zero(ring: R, group: GaloisGroup) -> Self {
        Self::free(ring, group, 0)
    }

    /// Module whose flattened relation lattice is `{ v : v * eval in modulo }`.
    ///
    /// Row `j*|G|*rank + g*rank + k` of `eval` holds the coordinates of
    /// `b_k * g * m_j` for the intended generators `m_j`.
    pub fn from_evaluation(
        ring: R,
        group: GaloisGroup,
        gens: usize,
        eval: &IntMatrix,
        modulo: Option<&ZLattice>,
    ) -> Result<Self> {
        let block = ring.z_rank() * group.order();
        if eval.rows() != gens * block {
            return Err(Error::DimensionMismatch(format!(
                "evaluation matrix needs {} rows",
                gens * block
            )));
        }
        let ker = match modulo {
            Some(l) => l.preimage(eval).integer_basis().expect("preimage is integral"),
            None => integer_left_kernel(eval),
        };
        let mut rows = Vec::with_capacity(ker.rows());
        for i in 0..ker.rows() {
            rows.extend(unflatten_vector(&ring, group, gens, ker.row(i))?);
        }
        let relations = TwistedMatrix::from_entries(ring.clone(), group, ker.rows(), gens, rows)?;
        Self::new(ring, group, gens, relations)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn group(&self) -> GaloisGroup {
        self.group
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &TwistedMatrix<R> {
        &self.relations
    }

    /// Number of integer coordinates per generator.
    pub fn block(&self) -> usize {
        self.ring.z_rank() * self.group.order()
    }

    pub fn zdim(&self) -> usize {
        self.gens * self.block()
    }

    pub fn same_ring(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::RingMismatch("modules over different groups".into()));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring.descriptor(),
                other.ring.descriptor()
            )));
        }
        Ok(())
    }

    /// Integer matrix of `v -> a * v` on flattened vectors.
    pub fn left_action_matrix(&self, a: &TwistedRingElement<R>) -> IntMatrix {
        let l = a.left_mul_matrix();
        IntMatrix::block_diag(&vec![l; self.gens])
    }

    pub fn scalar(&self, r: R::Elem) -> TwistedRingElement<R> {
        TwistedRingElement::scalar(self.ring.clone(), self.group, r)
    }

    pub fn group_element(&self, g: usize) -> TwistedRingElement<R> {
        TwistedRingElement::group_element(self.ring.clone(), self.group, g)
    }

    /// Generators `b_k * g` of `R<G>` as an abelian group.
    pub fn z_generators(&self) -> Vec<TwistedRingElement<R>> {
        let mut out = Vec::new();
        for g in self.group.elements() {
            for b in self.ring.z_basis() {
                out.push(TwistedRingElement::monomial(self.ring.clone(), self.group, b, g));
            }
        }
        out
    }

    /// Rows spanning the relation lattice over `Z`.
    pub fn flat_relation_rows(&self) -> IntMatrix {
        let mults: Vec<IntMatrix> = self.z_generators().iter().map(|z| self.left_action_matrix(z)).collect();
        let mut out = IntMatrix::zeros(0, self.zdim());
        for i in 0..self.relations.rows() {
            let x = IntMatrix::new(1, self.zdim(), flatten_vector(self.relations.row(i)));
            for m in &mults {
                out = out.vstack(&x.matmul(m));
            }
        }
        out
    }

    pub fn relation_lattice(&self) -> ZLattice {
        ZLattice::from_int_rows(&self.flat_relation_rows())
    }

    pub fn abelian_group(&self) -> AbGroup {
        AbGroup { gens: self.zdim(), relations: self.relation_lattice() }
    }

    pub fn flatten(&self) -> FlatModel {
        self.flatten_cancellable(None).expect("no cancel token supplied")
    }

    pub fn flatten_cancellable(&self, cancel: Option<&CancelToken>) -> Result<FlatModel> {
        let lattice = self.relation_lattice();
        let relations = lattice.integer_basis().expect("relations are integral");
        let torsion = snf_cancellable(&relations, cancel)?.torsion();
        let ring_action = (self.ring.z_rank() == 2).then(|| {
            let b = self.ring.z_basis().pop().expect("rank 2");
            self.left_action_matrix(&self.scalar(b))
        });
        let sigma_action = (self.group.order() == 2).then(|| self.left_action_matrix(&self.group_element(1)));
        Ok(FlatModel {
            zgens: self.zdim(),
            rank: self.zdim() - lattice.rank(),
            relations,
            torsion,
            ring_action,
            sigma_action,
        })
    }

    /// `dim_F (M tensor Q)`.
    pub fn rank_over_r(&self) -> usize {
        let r = self.zdim() - self.relation_lattice().rank();
        r / self.ring.z_rank()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.flatten().torsion.is_empty()
    }

    pub fn is_zero_vector(&self, v: &[TwistedRingElement<R>]) -> bool {
        self.relation_lattice().contains_int(&flatten_vector(v))
    }

    /// The underlying `R`-module: generator `(j, g)` stands for `g * e_j`.
    pub fn restrict(&self) -> Self {
        let triv = GaloisGroup::trivial();
        let ord = self.group.order();
        let mut rows = Vec::new();
        for i in 0..self.relations.rows() {
            for g in self.group.elements() {
                let gx: Vec<_> = self
                    .relations
                    .row(i)
                    .iter()
                    .map(|x| self.group_element(g).tr_mul(x).expect("same ring"))
                    .collect();
                for x in &gx {
                    for h in 0..ord {
                        rows.push(TwistedRingElement::scalar(self.ring.clone(), triv, x.coeff(h).clone()));
                    }
                }
            }
        }
        let m = self.relations.rows() * ord;
        let relations =
            TwistedMatrix::from_entries(self.ring.clone(), triv, m, self.gens * ord, rows).expect("shape");
        PresentedModule { ring: self.ring.clone(), group: triv, gens: self.gens * ord, relations }
    }

    /// `R<G> tensor_R M` for an `R`-module `M`.
    pub fn induce(&self, group: GaloisGroup) -> Result<Self> {
        if self.group.order() != 1 {
            return Err(Error::RingMismatch("induction expects a plain R-module".into()));
        }
        let relations = self.relations.with_group(group)?;
        Ok(PresentedModule { ring: self.ring.clone(), group, gens: self.gens, relations })
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let n = self.gens + other.gens;
        let zero = TwistedRingElement::zero(self.ring.clone(), self.group);
        let mut rows = Vec::new();
        for i in 0..self.relations.rows() {
            rows.extend(self.relations.row(i).iter().cloned());
            rows.extend(std::iter::repeat_n(zero.clone(), other.gens));
        }
        for i in 0..other.relations.rows() {
            rows.extend(std::iter::repeat_n(zero.clone(), self.gens));
            rows.extend(other.relations.row(i).iter().cloned());
        }
        let m = self.relations.rows() + other.relations.rows();
        let relations = TwistedMatrix::from_entries(self.ring.clone(), self.group, m, n, rows)?;
        Self::new(self.ring.clone(), self.group, n, relations)
    }

    /// The basis vector `e_j`.
    pub fn basis_vector(&self, j: usize) -> ModuleVector<R> {
        (0..self.gens)
            .map(|k| {
                if k == j {
                    TwistedRingElement::one(self.ring.clone(), self.group)
                } else {
                    TwistedRingElement::zero(self.ring.clone(), self.group)
                }
            })
            .collect()
    }

    /// `a * v`.
    pub fn scale_vector(&self, a: &TwistedRingElement<R>, v: &[TwistedRingElement<R>]) -> Result<ModuleVector<R>> {
        v.iter().map(|x| a.tr_mul(x)).collect()
    }

    pub fn unflatten(&self, v: &[BigInt]) -> Result<ModuleVector<R>> {
        unflatten_vector(&self.ring, self.group, self.gens, v)
    }
}

pub fn flatten_vector<R: IntegralRing>(v: &[TwistedRingElement<R>]) -> Vec<BigInt> {
    v.iter().flat_map(TwistedRingElement::flatten).collect()
}

pub fn unflatten_vector<R: IntegralRing>(
    ring: &R,
    group: GaloisGroup,
    gens: usize,
    v: &[BigInt],
) -> Result<ModuleVector<R>> {
    let block = ring.z_rank() * group.order();
    if v.len() != gens * block {
        return Err(Error::DimensionMismatch(format!("vector of length {} for {gens} generators", v.len())));
    }
    v.chunks(block.max(1))
        .take(gens)
        .map(|c| TwistedRingElement::unflatten(ring.clone(), group, c))
        .collect()
}
