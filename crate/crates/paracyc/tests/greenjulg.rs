//! Chain-level crossed-product comparison: the averaging splitting, the
//! mutually inverse comparison maps, and the kernel contraction.

use paracyc::algebra::{algebra_og, group_algebra_adjoint, scalars};
use paracyc::greenjulg::{green_julg, k_contraction, lambda0_rank_split, relative_x};
use paracyc::group::FiniteGroup;
use std::sync::Arc;

#[test]
fn averaging_splits_off_the_commutator_span() {
    let g = Arc::new(FiniteGroup::cyclic(2));
    for r in [algebra_og(g.clone()), group_algebra_adjoint(g.clone())] {
        let (rank_avg, rank_comm, dim) = lambda0_rank_split(&r).unwrap();
        assert_eq!(rank_avg + rank_comm, dim);
    }
}

#[test]
fn trivial_group_relative_complex_is_the_absolute_one() {
    let g = Arc::new(FiniteGroup::trivial());
    let r = scalars(g.clone());
    let rel = relative_x(&r).unwrap();
    // For scalars and the trivial group: B = ℂ, even part ℂ, odd part 0.
    assert_eq!(rel.even_dim(), 1);
    assert_eq!(rel.odd_dim(), 0);
    let (rank_avg, rank_comm, dim) = lambda0_rank_split(&r).unwrap();
    assert_eq!((rank_avg, rank_comm, dim), (1, 0, 1));
}

#[test]
fn comparison_maps_are_mutually_inverse_for_conjugation_functions() {
    let g = Arc::new(FiniteGroup::cyclic(2));
    let r = algebra_og(g.clone());
    let data = green_julg(&r).unwrap();
    // Inverse-pair and chain-map identities are verified inside; check the
    // dimension match between the two sides in both degrees.
    assert_eq!(data.relative.even_dim(), data.coinv.i_even.cols());
    assert_eq!(data.relative.odd_dim(), data.coinv.i_odd.cols());
}

#[test]
fn comparison_maps_are_mutually_inverse_for_the_group_algebra() {
    let g = Arc::new(FiniteGroup::cyclic(2));
    let r = group_algebra_adjoint(g.clone());
    let data = green_julg(&r).unwrap();
    assert_eq!(data.relative.even_dim(), data.coinv.i_even.cols());
    assert_eq!(data.relative.odd_dim(), data.coinv.i_odd.cols());
}

#[test]
fn kernel_complex_is_contractible() {
    let g = Arc::new(FiniteGroup::cyclic(2));
    for r in [algebra_og(g.clone()), group_algebra_adjoint(g.clone())] {
        let kc = k_contraction(&r).unwrap();
        // The inverse-pair identities are verified inside; the two kernels
        // must have equal dimension.
        assert_eq!(kc.k0.cols(), kc.k1.cols());
    }
}

#[test]
fn trivial_group_kernel_vanishes() {
    let g = Arc::new(FiniteGroup::trivial());
    let r = scalars(g.clone());
    let kc = k_contraction(&r).unwrap();
    assert_eq!(kc.k0.cols(), 0);
    assert_eq!(kc.k1.cols(), 0);
}
