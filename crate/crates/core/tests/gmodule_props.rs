mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;

use serrehom::gmodule::adjunction::{coinduced_action, diagonal_action, tuple_law, tuple_law_inverse, tuples_equal};
use serrehom::gmodule::rational::decompose_c2;
use serrehom::gmodule::{hom_module, rationalize, split_surjection, CoinductionAdjunction, PresentedModule, RestrictionAdjunction};
use serrehom::linalg::field::{identity, mat_mul};
use serrehom::quad::ImQuadField;
use serrehom::twisted::{Action, GaloisGroup};

fn group_for(r: &mut rand_chacha::ChaCha8Rng) -> GaloisGroup {
    if r.gen_bool(0.5) {
        GaloisGroup::c2(Action::Conjugation)
    } else {
        GaloisGroup::c2(Action::Trivial)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn induction_multiplies_rank(seed in any::<u64>()) {
        let mut r = rng(seed);
        let o = random_order(&mut r);
        let m = random_module(&mut r, &o, GaloisGroup::trivial(), 3);
        let g = group_for(&mut r);
        prop_assert_eq!(m.induce(g).unwrap().rank_over_r(), 2 * m.rank_over_r());
    }

    #[test]
    fn hom_from_free_module_is_the_module(seed in any::<u64>()) {
        let mut r = rng(seed);
        let o = random_order(&mut r);
        let g = group_for(&mut r);
        let n = random_module(&mut r, &o, g, 2);
        let h = hom_module(&PresentedModule::free(o, g, 1), &n).unwrap();
        let flat = n.flatten();
        prop_assert_eq!(h.flat.rank, flat.rank);
        prop_assert_eq!(h.flat.torsion, flat.torsion);
    }

    #[test]
    fn restriction_adjunction_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let o = random_order(&mut r);
        let g = group_for(&mut r);
        let plain = random_module(&mut r, &o, GaloisGroup::trivial(), 2);
        let module = random_module(&mut r, &o, g, 2);
        prop_assert!(RestrictionAdjunction::new(&plain, &module).unwrap().round_trips().unwrap());
    }

    #[test]
    fn coinduction_adjunction_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let o = random_order(&mut r);
        let g = group_for(&mut r);
        let module = random_module(&mut r, &o, g, 2);
        let plain = random_module(&mut r, &o, GaloisGroup::trivial(), 2);
        prop_assert!(CoinductionAdjunction::new(&module, &plain).unwrap().round_trips().unwrap());
    }

    #[test]
    fn tuple_law_is_equivariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let o = random_order(&mut r);
        let g = group_for(&mut r);
        let x = random_module(&mut r, &o, g, 3);
        let f: Vec<Vec<_>> = g.elements().map(|_| (0..x.gens()).map(|_| twisted(&mut r, &o, g, 5)).collect()).collect();
        let gt = tuple_law(&x, &f).unwrap();
        prop_assert!(tuples_equal(&x, &tuple_law_inverse(&x, &gt).unwrap(), &f));
        for tau in g.elements() {
            let lhs = tuple_law(&x, &diagonal_action(&x, tau, &f).unwrap()).unwrap();
            prop_assert!(tuples_equal(&x, &lhs, &coinduced_action(&x, tau, &gt).unwrap()));
        }
    }

    #[test]
    fn averaged_section_is_equivariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = ImQuadField::new(FIELDS[r.gen_range(0..FIELDS.len())]).unwrap();
        let g = group_for(&mut r);
        let s = random_surjection(&mut r, k, g);
        let avg = split_surjection(&s.v, &s.w, &s.phi, &s.section).unwrap();
        prop_assert!(s.w.is_equivariant(&s.v, &avg));
        prop_assert_eq!(mat_mul(&k, &s.phi, &avg), identity(&k, s.w.dim()));
    }

    #[test]
    fn decomposition_conjugates_to_the_model(seed in any::<u64>()) {
        let mut r = rng(seed);
        let o = random_order(&mut r);
        let g = group_for(&mut r);
        let m = random_module(&mut r, &o, g, 3);
        let v = rationalize(&m, None).unwrap();
        prop_assert_eq!(v.dim(), m.rank_over_r());
        let id = identity(&v.field, v.dim());
        prop_assert_eq!(mat_mul(&v.field, &v.sigma, &v.conj(&v.sigma)), id);
        let d = decompose_c2(&v).unwrap();
        prop_assert_eq!(d.r + d.r_twist, v.dim());
        prop_assert!(d.verify(&v));
        if g.action() == Action::Conjugation {
            prop_assert_eq!(d.r_twist, 0);
        }
    }
}
