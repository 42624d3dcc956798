//! Finitely presented abelian groups `Z^n / R` and homomorphisms between them.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::lattice::ZLattice;
use super::matrix::IntMatrix;
use super::normal::snf;

/// The group `Z^gens / relations`; elements are integer row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbGroup {
    pub gens: usize,
    pub relations: ZLattice,
}

impl AbGroup {
    pub fn new(relations: &IntMatrix) -> Self {
        AbGroup {
            gens: relations.cols(),
            relations: ZLattice::from_int_rows(relations),
        }
    }

    pub fn free(n: usize) -> Self {
        AbGroup { gens: n, relations: ZLattice::zero(n) }
    }

    /// Free rank and invariant factors (> 1) of the torsion part.
    pub fn structure(&self) -> (usize, Vec<BigInt>) {
        let rank = self.gens - self.relations.rank();
        let Some(basis) = self.relations.integer_basis() else {
            panic!("relation lattice must be integral");
        };
        (rank, snf(&basis).torsion())
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        let (rank, tors) = self.structure();
        (rank == 0).then(|| tors.iter().fold(BigInt::one(), |a, b| a * b))
    }

    pub fn is_trivial(&self) -> bool {
        self.relations.rank() == self.gens
            && self.relations.integer_basis().is_some_and(|b| b.det().abs().is_one())
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.relations.contains_int(v)
    }

    /// Kernel of `v -> v * map` into `target`, as a lattice containing the relations.
    pub fn kernel_lattice(&self, map: &IntMatrix, target: &AbGroup) -> ZLattice {
        target.relations.preimage(map)
    }

    /// Image of `source` under `v -> v * map`, plus the relations of `self`.
    pub fn image_lattice(&self, map: &IntMatrix) -> ZLattice {
        ZLattice::from_int_rows(map).sum(&self.relations)
    }

    /// `true` when `map` sends relations of `self` into relations of `target`.
    pub fn is_hom_to(&self, map: &IntMatrix, target: &AbGroup) -> bool {
        map.rows() == self.gens
            && map.cols() == target.gens
            && self
                .relations
                .numerator()
                .matmul(map)
                .row_vecs()
                .iter()
                .all(|r| target.is_zero_element(r))
    }
}

/// Exactness of `a --f--> b --g--> c` at `b`.
pub fn exact_at(a: &AbGroup, f: &IntMatrix, b: &AbGroup, g: &IntMatrix, c: &AbGroup) -> bool {
    debug_assert!(a.is_hom_to(f, b) && b.is_hom_to(g, c));
    b.kernel_lattice(g, c) == b.image_lattice(f)
}

/// `true` when `v -> v * f` is injective from `a` to `b`.
pub fn is_injective(a: &AbGroup, f: &IntMatrix, b: &AbGroup) -> bool {
    a.kernel_lattice(f, b) == a.relations
}

/// `true` when `v -> v * g` is surjective from `b` onto `c`.
pub fn is_surjective(g: &IntMatrix, c: &AbGroup) -> bool {
    c.image_lattice(g) == ZLattice::standard(c.gens)
}

/// Order of the cokernel of an injective map of equal-rank groups, `None` if infinite.
pub fn cokernel_order(g: &IntMatrix, c: &AbGroup) -> Option<BigInt> {
    let img = c.image_lattice(g);
    if img.rank() < c.gens {
        return None;
    }
    let basis = img.integer_basis()?;
    Some(basis.det().abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_sequence_is_exact() {
        // 0 -> Z --2--> Z -> Z/2 -> 0
        let z = AbGroup::free(1);
        let z2 = AbGroup::new(&IntMatrix::from_i64(1, 1, &[2]));
        let two = IntMatrix::from_i64(1, 1, &[2]);
        let one = IntMatrix::from_i64(1, 1, &[1]);
        assert!(is_injective(&z, &two, &z));
        assert!(exact_at(&z, &two, &z, &one, &z2));
        assert!(is_surjective(&one, &z2));
        assert_eq!(z2.order(), Some(BigInt::from(2)));
        assert_eq!(z.order(), None);
    }

    #[test]
    fn non_exact_detected() {
        let z = AbGroup::free(1);
        let z4 = AbGroup::new(&IntMatrix::from_i64(1, 1, &[4]));
        let two = IntMatrix::from_i64(1, 1, &[2]);
        let one = IntMatrix::from_i64(1, 1, &[1]);
        assert!(!exact_at(&z, &two, &z, &one, &z4));
    }

    #[test]
    fn structure_of_product() {
        let g = AbGroup::new(&IntMatrix::from_i64(2, 3, &[2, 0, 0, 0, 3, 0]));
        assert_eq!(g.structure(), (1, vec![BigInt::from(6)]));
        assert!(AbGroup::new(&IntMatrix::identity(2)).is_trivial());
    }
}
