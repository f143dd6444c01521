//! Integration tests for the polynomial operator suite: every identity the
//! homotopy-equivalence construction relies on, checked exactly on several
//! instances.

use paracyc::algebra::{algebra_og, dual_numbers, group_algebra_adjoint, scalars};
use paracyc::cq::CqSuite;
use paracyc::forms::FormSpace;
use paracyc::group::FiniteGroup;
use std::sync::Arc;

#[test]
fn suite_trivial_group_dual_numbers() {
    let alg = dual_numbers(Arc::new(FiniteGroup::trivial()));
    let sp = FormSpace::new(&alg, 5);
    CqSuite::new(&sp).check_all(&sp).unwrap();
}

#[test]
fn suite_z2_group_algebra() {
    let alg = group_algebra_adjoint(Arc::new(FiniteGroup::cyclic(2)));
    let sp = FormSpace::new(&alg, 4);
    CqSuite::new(&sp).check_all(&sp).unwrap();
}

#[test]
fn suite_z3_scalars() {
    let alg = scalars(Arc::new(FiniteGroup::cyclic(3)));
    let sp = FormSpace::new(&alg, 5);
    CqSuite::new(&sp).check_all(&sp).unwrap();
}

#[test]
fn suite_z2_functions_on_itself() {
    let alg = algebra_og(Arc::new(FiniteGroup::cyclic(2)));
    let sp = FormSpace::new(&alg, 4);
    CqSuite::new(&sp).check_all(&sp).unwrap();
}
