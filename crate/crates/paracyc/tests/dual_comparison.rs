//! Dual crossed-product comparison: kernel-algebra trace compatibility,
//! mutually inverse chain maps up to homotopy on coinvariants, and the
//! first-column rank-one contraction.

use paracyc::algebra::{dual_numbers, scalars, unitarize};
use paracyc::dualgj::{
    coinvariants, coinvariants_match_averaging, dual_comparison, morita_first_column, DualTrace,
};
use paracyc::forms::FormSpace;
use paracyc::group::FiniteGroup;
use std::sync::Arc;

fn z2() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2))
}

#[test]
fn trace_commutes_with_both_boundaries() {
    let a = unitarize(&dual_numbers(z2()));
    let tr = DualTrace::new(&a, 4).unwrap();
    tr.check_chain_compat(3).unwrap();
}

#[test]
fn trace_on_the_trivial_group_is_the_identity_up_to_relabeling() {
    let g = Arc::new(FiniteGroup::trivial());
    let a = dual_numbers(g);
    let tr = DualTrace::new(&a, 3).unwrap();
    tr.check_chain_compat(2).unwrap();
    for deg in 0..=2 {
        // One-dimensional kernel algebra: the trace is a bijection on bases.
        let m = tr.matrix(deg);
        assert_eq!(m.rows(), m.cols());
        let mut hits = vec![0usize; m.rows()];
        for j in 0..m.cols() {
            let col = m.col(j);
            assert_eq!(col.len(), 1);
            hits[col[0].0] += 1;
        }
        assert!(hits.iter().all(|&h| h == 1));
    }
}

#[test]
fn cokernel_coinvariants_agree_with_averaging() {
    let a = unitarize(&dual_numbers(z2()));
    let kg = paracyc::algebra::algebra_kg(a.group().clone(), paracyc::group::MeasureConvention::Counting);
    let e = paracyc::algebra::tensor_galgebras(&a, &kg).unwrap();
    let space = FormSpace::new(&e, 2);
    let sub = coinvariants(&space);
    coinvariants_match_averaging(&space, &sub, 2).unwrap();
}

#[test]
fn downward_then_upward_is_the_identity() {
    let a = unitarize(&dual_numbers(z2()));
    let cmp = dual_comparison(&a, 3).unwrap();
    cmp.check_tau_phi(3).unwrap();
    cmp.check_phi_tau_idempotent(2).unwrap();
}

#[test]
fn homotopy_contracts_the_composite_on_coinvariants() {
    let a = unitarize(&dual_numbers(z2()));
    let cmp = dual_comparison(&a, 3).unwrap();
    cmp.check_homotopy(2).unwrap();
}

#[test]
fn trivial_group_comparison_is_strict() {
    let g = Arc::new(FiniteGroup::trivial());
    let a = dual_numbers(g);
    let cmp = dual_comparison(&a, 3).unwrap();
    cmp.check_tau_phi(3).unwrap();
    cmp.check_homotopy(2).unwrap();
}

#[test]
fn first_column_trace_retraction_and_homotopy() {
    let a = scalars(z2());
    let data = morita_first_column(&a, 3).unwrap();
    data.check_trace_section(3).unwrap();
    data.check_homotopy(2).unwrap();
    let g = Arc::new(FiniteGroup::trivial());
    let a1 = scalars(g);
    let d1 = morita_first_column(&a1, 3).unwrap();
    d1.check_trace_section(3).unwrap();
    d1.check_homotopy(2).unwrap();
}
