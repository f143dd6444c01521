//! Tensor products of paracomplexes over the function algebra, special
//! deformation retractions, and the perturbation transfer.

use paracyc::algebra::{dual_numbers, scalars, unitarize};
use paracyc::forms::{connection_witness, FormSpace};
use paracyc::group::FiniteGroup;
use paracyc::homotopy::nabla_retraction;
use paracyc::linalg::SparseMatrix;
use paracyc::para::{x_complex, TowerShape};
use paracyc::perturb::{
    boxtimes, make_special_retraction, og_unit, pack_reversing, perturb, perturb_lemma_check,
    SpecialRetraction,
};
use std::sync::Arc;

fn sample_complex() -> paracyc::para::ParaComplex {
    let g = Arc::new(FiniteGroup::cyclic(2));
    let a = unitarize(&dual_numbers(g.clone()));
    let space = FormSpace::new(&a, 2);
    x_complex(&space).unwrap()
}

#[test]
fn tensoring_with_the_function_algebra_is_the_identity() {
    let c = sample_complex();
    let u = og_unit(&c.group);
    u.validate().unwrap();
    let prod = boxtimes(&c, &u).unwrap();
    // Each basis vector of C pairs with exactly one basis vector of the
    // unit, so the dimensions agree.
    assert_eq!(
        prod.complex.t_even.rows(),
        c.t_even.rows(),
        "even dimension changed under the unit"
    );
    assert_eq!(
        prod.complex.t_odd.rows(),
        c.t_odd.rows(),
        "odd dimension changed under the unit"
    );
}

#[test]
fn tensor_square_of_the_x_complex_is_a_paracomplex() {
    let c = sample_complex();
    // The constructor validates the twisted boundary: its square is id − T
    // and all symmetries commute with it.
    let prod = boxtimes(&c, &c).unwrap();
    assert!(prod.complex.t_even.rows() > 0);
    assert!(prod.complex.t_odd.rows() > 0);
}

#[test]
fn tensor_product_dimensions_are_associative() {
    let c = sample_complex();
    let u = og_unit(&c.group);
    let left = boxtimes(&boxtimes(&c, &u).unwrap().complex, &c).unwrap();
    let right = boxtimes(&c, &boxtimes(&u, &c).unwrap().complex).unwrap();
    assert_eq!(left.complex.t_even.rows(), right.complex.t_even.rows());
    assert_eq!(left.complex.t_odd.rows(), right.complex.t_odd.rows());
}

/// The connection-induced retraction of the level-3 form tower over the
/// scalars with a cyclic symmetry of order two, together with the matching
/// packed degree-raising boundary.
fn retraction_instance() -> (SpecialRetraction, SparseMatrix) {
    let g = Arc::new(FiniteGroup::cyclic(2));
    let a = scalars(g.clone());
    let space = FormSpace::new(&a, 4);
    let nabla = connection_witness(&a, 1).unwrap();
    let r = nabla_retraction(&space, &nabla, 1, 3).unwrap();
    let sr = make_special_retraction(&r).unwrap();
    let shape = TowerShape::new(&space, 3).unwrap();
    let evens = shape.even_degrees();
    let odds = shape.odd_degrees();
    let bb = space.op_big_b();
    let big_b = pack_reversing(
        &shape.block_matrix(&bb, &evens, &odds),
        &shape.block_matrix(&bb, &odds, &evens),
    );
    (sr, big_b)
}

#[test]
fn special_retraction_satisfies_the_side_conditions() {
    // make_special_retraction itself verifies li = 0, pl = 0, l² = 0,
    // bl + lb = ip − id, bk + kb = ip − id, bk² = k²b; we re-assert the
    // headline relations here against the returned data.
    let (sr, _) = retraction_instance();
    assert!(sr.l.mul(&sr.i).is_zero(), "li != 0");
    assert!(sr.p.mul(&sr.l).is_zero(), "pl != 0");
    assert!(sr.l.mul(&sr.l).is_zero(), "l^2 != 0");
    let id = SparseMatrix::identity(sr.ambient_dim());
    assert_eq!(
        sr.b.mul(&sr.l).add(&sr.l.mul(&sr.b)),
        sr.i.mul(&sr.p).sub(&id),
        "bl + lb != ip - id"
    );
}

#[test]
fn transfer_with_zero_perturbation_is_classical() {
    let (sr, _) = retraction_instance();
    let zero = SparseMatrix::zero(sr.ambient_dim(), sr.ambient_dim());
    let t = perturb(&sr, &zero).unwrap();
    assert_eq!(t.i, sr.i, "zero perturbation must not change the inclusion");
    assert_eq!(t.h, sr.l, "zero perturbation must not change the homotopy");
    assert!(t.big_b_sub.is_zero());
}

#[test]
fn transfer_of_the_degree_raising_boundary() {
    let (sr, big_b) = retraction_instance();
    // perturb verifies PI = id, IP = id + H(B+b) + (B+b)H and that the
    // transferred inclusion is a chain map for the total boundary.
    let t = perturb(&sr, &big_b).unwrap();
    // The retract carries both transferred boundaries; their squares vanish
    // separately on the retract in this instance.
    assert!(t.b_sub.mul(&t.b_sub).is_zero());
    assert!(t.big_b_sub.mul(&t.big_b_sub).is_zero());
}

#[test]
fn perturbation_commutator_identities_hold_up_to_order_four() {
    let (sr, big_b) = retraction_instance();
    perturb_lemma_check(&sr, &big_b, 4).unwrap();
}
