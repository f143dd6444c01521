//! Covariant Hom-complexes and homology reports at finite truncation.

use paracyc::algebra::{functions_on_two_point_set, group_algebra_adjoint, scalars};
use paracyc::forms::FormSpace;
use paracyc::group::FiniteGroup;
use paracyc::hp::{
    compose_classes, greenjulg_compare, hom_supercomplex, hp_ordinary, hpg_bivariant,
    hpg_second_variable, HomClass,
};
use paracyc::linalg::{unvec, SparseMatrix, SVec};
use paracyc::para::{hodge_level, ParaComplex};
use paracyc::perturb::og_unit;
use paracyc::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[test]
fn endomorphisms_of_the_function_algebra_count_conjugacy_classes() {
    for (g, classes) in [
        (FiniteGroup::trivial(), 1usize),
        (FiniteGroup::cyclic(3), 3),
        (FiniteGroup::klein4(), 4),
        (FiniteGroup::symmetric3(), 3),
    ] {
        let g = Arc::new(g);
        let u = og_unit(&g);
        let hom = hom_supercomplex(&u, &u).unwrap();
        assert!(hom.d_even.is_zero() && hom.d_odd.is_zero());
        let (he, ho) = hom.homology().unwrap();
        assert_eq!(
            (he, ho),
            (classes, 0),
            "covariant endomorphism count for group of order {}",
            g.order()
        );
    }
}

fn twisted_complex() -> ParaComplex {
    let g = Arc::new(FiniteGroup::cyclic(2));
    let a = functions_on_two_point_set(g, vec![false, true]).unwrap();
    let space = FormSpace::new(&a, 2);
    hodge_level(&space, 1).unwrap()
}

#[test]
fn hom_boundary_squares_to_zero_on_random_covariant_maps() {
    let c = twisted_complex();
    assert_ne!(
        c.t_even,
        SparseMatrix::identity(c.even_dim()),
        "the test complex must have a nontrivial symmetry"
    );
    let hom = hom_supercomplex(&c, &c).unwrap();
    assert!(hom.even_dim() > 0, "need covariant maps to sample");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..20 {
        // A random rational combination of the covariant even basis.
        let coords: SVec = (0..hom.even_dim())
            .map(|k| {
                let num = rng.gen_range(-6i64..=6);
                (k, Scalar::new(num.into(), 3.into()))
            })
            .filter(|(_, v)| !num::traits::Zero::is_zero(v))
            .collect();
        let (fe, fo) = hom.even_maps(&coords);
        // One application of the boundary…
        let psi_oe = fe.mul(&c.d_odd).sub(&c.d_odd.mul(&fo));
        let psi_eo = fo.mul(&c.d_even).sub(&c.d_even.mul(&fe));
        // …and a second: the symmetry defects of source and target cancel.
        let out_ee = psi_oe.mul(&c.d_even).add(&c.d_odd.mul(&psi_eo));
        let out_oo = psi_eo.mul(&c.d_odd).add(&c.d_even.mul(&psi_oe));
        assert!(out_ee.is_zero() && out_oo.is_zero(), "boundary squared != 0");
    }
}

#[test]
fn every_covariant_basis_map_commutes_with_the_symmetry() {
    let c = twisted_complex();
    let hom = hom_supercomplex(&c, &c).unwrap();
    for j in 0..hom.basis_ee.cols() {
        let m = unvec(c.even_dim(), c.even_dim(), hom.basis_ee.col(j));
        assert_eq!(c.t_even.mul(&m), m.mul(&c.t_even));
    }
}

#[test]
fn scalar_coefficients_have_rank_one_homology_over_the_trivial_group() {
    let g = Arc::new(FiniteGroup::trivial());
    let r = hpg_second_variable(&scalars(g), 4).unwrap();
    assert_eq!(r.final_dims(), (1, 0));
    assert!(r.stabilized, "levels 2 and 4 must agree");
}

#[test]
fn scalar_coefficients_over_order_two_count_conjugacy_classes() {
    let g = Arc::new(FiniteGroup::cyclic(2));
    let r = hpg_second_variable(&scalars(g), 4).unwrap();
    assert_eq!(r.final_dims(), (2, 0));
    assert!(r.stabilized);
}

#[test]
fn ordinary_homology_of_the_group_algebra_of_order_two() {
    let g = Arc::new(FiniteGroup::cyclic(2));
    let r = hp_ordinary(&group_algebra_adjoint(g), 4).unwrap();
    assert_eq!(r.final_dims(), (2, 0));
    assert!(r.stabilized);
}

#[test]
fn bivariant_from_scalars_agrees_with_the_one_variable_computation() {
    let gt = Arc::new(FiniteGroup::trivial());
    let b = hpg_bivariant(&scalars(gt.clone()), &scalars(gt.clone()), 4).unwrap();
    assert_eq!(b.final_dims(), (1, 0));
    let g2 = Arc::new(FiniteGroup::cyclic(2));
    let b2 = hpg_bivariant(&scalars(g2.clone()), &scalars(g2.clone()), 4).unwrap();
    let s2 = hpg_second_variable(&scalars(g2), 4).unwrap();
    assert_eq!(b2.final_dims(), s2.final_dims());
}

#[test]
fn equivariant_and_crossed_product_pipelines_agree() {
    for g in [FiniteGroup::trivial(), FiniteGroup::cyclic(2)] {
        let g = Arc::new(g);
        let cmp = greenjulg_compare(&scalars(g.clone()), 4).unwrap();
        assert!(
            cmp.agree,
            "pipelines disagree for group of order {}: {:?} vs {:?}",
            g.order(),
            cmp.equivariant.final_dims(),
            cmp.crossed.final_dims()
        );
        assert!(!cmp.unitarized);
    }
}

#[test]
fn class_composition_is_unital_associative_and_graded() {
    let c = twisted_complex();
    let one = HomClass::identity(&c);
    let x = HomClass {
        mats: (c.t_even.clone(), c.t_odd.clone()),
        degree: 0,
    };
    let y = HomClass {
        mats: (c.d_odd.clone(), c.d_even.clone()),
        degree: 1,
    };
    // x · 1 = x.
    let x1 = compose_classes(&x, &one).unwrap();
    assert_eq!(x1.mats.0, x.mats.0);
    assert_eq!(x1.mats.1, x.mats.1);
    // Associativity on representatives.
    let a = compose_classes(&compose_classes(&x, &y).unwrap(), &y).unwrap();
    let b = compose_classes(&x, &compose_classes(&y, &y).unwrap()).unwrap();
    assert_eq!(a.mats.0, b.mats.0);
    assert_eq!(a.mats.1, b.mats.1);
    // Odd after odd is even.
    assert_eq!(compose_classes(&y, &y).unwrap().degree, 0);
}
