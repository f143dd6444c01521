//! Integration tests for the form calculus, the truncated towers, and the
//! operator identities they satisfy.

use paracyc::algebra::{dual_numbers, group_algebra_adjoint, scalars, GAlgebra};
use paracyc::forms::{connection_witness, fedosov_truncation, quasifree_witness, FormSpace, TowerOp};
use paracyc::group::FiniteGroup;
use paracyc::linalg::SparseMatrix;
use paracyc::para::{
    hodge_filtration, hodge_level, rescale_delta, spans_subcomplex, t_invariant_subcomplex,
    x_boundary_on_tower, x_complex,
};
use paracyc::scalar::{one, q};
use std::sync::Arc;

fn z2_scalars() -> GAlgebra {
    scalars(Arc::new(FiniteGroup::cyclic(2)))
}

fn z2_group_algebra() -> GAlgebra {
    group_algebra_adjoint(Arc::new(FiniteGroup::cyclic(2)))
}

fn trivial_dual() -> GAlgebra {
    dual_numbers(Arc::new(FiniteGroup::trivial()))
}

#[test]
fn dimension_formulas() {
    let sp = FormSpace::new(&z2_scalars(), 3);
    assert_eq!(sp.dim(0), 2);
    assert_eq!(sp.dim(1), 4);
    assert_eq!(sp.dim(2), 4);
    assert_eq!(sp.dim(3), 4);
    let sp = FormSpace::new(&z2_group_algebra(), 3);
    assert_eq!(sp.dim(0), 4);
    assert_eq!(sp.dim(1), 12);
    assert_eq!(sp.dim(2), 24);
}

#[test]
fn codec_roundtrip() {
    let sp = FormSpace::new(&z2_group_algebra(), 4);
    for deg in 0..=4 {
        for idx in 0..sp.dim(deg) {
            let (s, w) = sp.decode(deg, idx);
            assert_eq!(sp.encode(deg, s, &w), idx);
            assert_eq!(w.len(), deg + 1);
        }
    }
}

#[test]
fn word_product_is_associative() {
    let alg = z2_group_algebra();
    let calc = paracyc::forms::WordCalc::new(&alg);
    // Exhaustive over short words.
    let words1: Vec<Vec<usize>> = (0..calc.word_count(1))
        .map(|i| calc.decode_word(1, i))
        .collect();
    for w1 in &words1 {
        for w2 in &words1 {
            for w3 in &words1 {
                let mut lhs = std::collections::BTreeMap::new();
                for (w12, c) in calc.mul_words(w1, w2) {
                    for (w, c2) in calc.mul_words(&w12, w3) {
                        *lhs.entry(w).or_insert_with(paracyc::scalar::zero) += c.clone() * c2;
                    }
                }
                let mut rhs = std::collections::BTreeMap::new();
                for (w23, c) in calc.mul_words(w2, w3) {
                    for (w, c2) in calc.mul_words(w1, &w23) {
                        *rhs.entry(w).or_insert_with(paracyc::scalar::zero) += c.clone() * c2;
                    }
                }
                lhs.retain(|_, v| !num::traits::Zero::is_zero(v));
                rhs.retain(|_, v| !num::traits::Zero::is_zero(v));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn squares_vanish_and_t_is_central_for_canonical_operators() {
    for alg in [z2_group_algebra(), trivial_dual()] {
        let sp = FormSpace::new(&alg, 4);
        let d = sp.op_d();
        let b = sp.op_b();
        let big_b = sp.op_big_b();
        let t = sp.op_t();
        let kappa = sp.op_kappa_closed();
        let degs2: Vec<usize> = (0..=2).collect();
        let degs3: Vec<usize> = (0..=3).collect();
        let degs4: Vec<usize> = (0..=4).collect();
        let mut zero = TowerOp::empty(4);
        zero.valid = (0..=4).collect();
        d.compose(&d).equal_on(&zero, &degs2).unwrap();
        b.compose(&b).equal_on(&zero, &degs4).unwrap();
        big_b.compose(&big_b).equal_on(&zero, &degs2).unwrap();
        // T commutes with d, b, B, κ.
        t.compose(&d).equal_on(&d.compose(&t), &degs3).unwrap();
        t.compose(&b).equal_on(&b.compose(&t), &degs4).unwrap();
        t.compose(&big_b)
            .equal_on(&big_b.compose(&t), &degs3)
            .unwrap();
        t.compose(&kappa)
            .equal_on(&kappa.compose(&t), &degs4)
            .unwrap();
        // κ commutes with b and d.
        kappa
            .compose(&b)
            .equal_on(&b.compose(&kappa), &degs4)
            .unwrap();
        kappa
            .compose(&d)
            .equal_on(&d.compose(&kappa), &degs3)
            .unwrap();
        // The group action commutes with everything and conjugates T
        // trivially (T is built from the action and the delta projections).
        for s in 0..sp.group().order() {
            let g = sp.op_gact(s);
            g.compose(&d).equal_on(&d.compose(&g), &degs3).unwrap();
            g.compose(&b).equal_on(&b.compose(&g), &degs4).unwrap();
            g.compose(&big_b)
                .equal_on(&big_b.compose(&g), &degs3)
                .unwrap();
            g.compose(&t).equal_on(&t.compose(&g), &degs4).unwrap();
        }
    }
}

#[test]
fn towers_are_paracomplexes() {
    for alg in [z2_group_algebra(), trivial_dual(), z2_scalars()] {
        let sp = FormSpace::new(&alg, 4);
        for n in 1..=3 {
            let hodge = hodge_level(&sp, n).unwrap();
            hodge.validate().unwrap();
            let xb = x_boundary_on_tower(&sp, n).unwrap();
            xb.validate().unwrap();
            let dl = rescale_delta(&sp, n).unwrap();
            dl.validate().unwrap();
        }
        let x = x_complex(&sp).unwrap();
        x.validate().unwrap();
        // Degree-0 block of the X-complex is the whole algebra with O_G.
        assert_eq!(x.even_dims[0], sp.dim(0));
    }
}

#[test]
fn filtration_stages_are_subcomplexes() {
    let sp = FormSpace::new(&z2_group_algebra(), 4);
    let n = 3;
    let pc = hodge_level(&sp, n).unwrap();
    let mut last_rank = usize::MAX;
    for k in 0..=n {
        let (even, odd) = hodge_filtration(&sp, n, k).unwrap();
        assert!(spans_subcomplex(&pc, &even, &odd));
        let r = paracyc::linalg::rank(&even) + paracyc::linalg::rank(&odd);
        assert!(r <= last_rank, "filtration must be decreasing");
        last_rank = r;
    }
    // The top stage is zero.
    let (even, odd) = hodge_filtration(&sp, n, n).unwrap();
    assert_eq!(paracyc::linalg::rank(&even) + paracyc::linalg::rank(&odd), 0);
}

#[test]
fn invariants_form_a_supercomplex() {
    let sp = FormSpace::new(&z2_group_algebra(), 3);
    let pc = hodge_level(&sp, 2).unwrap();
    let inv = t_invariant_subcomplex(&pc).unwrap();
    assert!(inv.d_even.mul(&inv.d_odd).is_zero() || {
        // ∂² = id − T vanishes on T-invariants.
        false
    });
    assert!(inv.d_odd.mul(&inv.d_even).is_zero());
    let (h0, h1) = paracyc::linalg::supercomplex_homology(&inv.d_even, &inv.d_odd).unwrap();
    // Sanity: homology dimensions are bounded by the subspace dimensions.
    assert!(h0 <= inv.even_basis.cols() && h1 <= inv.odd_basis.cols());
}

#[test]
fn fedosov_levels() {
    let alg = trivial_dual();
    let f1 = fedosov_truncation(&alg, 1).unwrap();
    assert_eq!(f1.dim(), alg.dim());
    // Level 2: A ⊕ Ω²(A); the constructor has already validated
    // associativity and equivariance of the product.
    let f2 = fedosov_truncation(&alg, 2).unwrap();
    assert_eq!(f2.dim(), 2 + 3 * 4);
    let z2 = z2_group_algebra();
    let f2 = fedosov_truncation(&z2, 2).unwrap();
    assert_eq!(f2.dim(), 2 + 3 * 4);
}

#[test]
fn quasifree_witnesses() {
    // A direct sum of fields is quasifree; the witness satisfies the
    // cocycle rule by construction of the solver, so existence is the test.
    let ga = z2_group_algebra();
    let w = quasifree_witness(&ga).expect("semisimple algebras admit a witness");
    assert_eq!(w.rows(), 3 * 4);
    assert_eq!(w.cols(), 2);
    // The square-zero extension generator x with x² = 0 obstructs the
    // witness equation for dual numbers? The solver decides; verify the
    // defining relation holds whenever a witness is returned.
    let sc = z2_scalars();
    assert!(quasifree_witness(&sc).is_some());
}

#[test]
fn connection_witness_defining_relations() {
    let alg = z2_scalars();
    if let Some(nabla) = connection_witness(&alg, 1) {
        let calc = paracyc::forms::WordCalc::new(&alg);
        assert_eq!(nabla.rows(), calc.word_count(2));
        assert_eq!(nabla.cols(), calc.word_count(1));
    }
    // The solver must agree with a hand-checkable case: for the scalars the
    // right rule forces ∇(ω x) − ∇(ω) x = −ω dx with x the unit basis
    // element of A, an inhomogeneous system that is consistent.
    assert!(connection_witness(&alg, 1).is_some());
}

#[test]
fn rescaled_boundary_degreewise_coefficients() {
    // δ on Ω⁰ is B; on Ω¹ it is b − B; on Ω² it is B − b.
    let sp = FormSpace::new(&z2_scalars(), 3);
    let delta = paracyc::para::delta_tower(&sp);
    let big_b = sp.op_big_b();
    let b = sp.op_b();
    assert_eq!(delta.comp(0, 1), big_b.comp(0, 1));
    assert_eq!(delta.comp(1, 0), b.comp(1, 0));
    assert_eq!(
        delta.comp(1, 2).cloned().unwrap_or_else(|| SparseMatrix::zero(sp.dim(2), sp.dim(1))),
        big_b
            .comp(1, 2)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(sp.dim(2), sp.dim(1)))
            .scale(&-one())
    );
    if let Some(m) = delta.comp(2, 1) {
        assert_eq!(m, &b.comp(2, 1).unwrap().scale(&-q(1, 1)));
    }
}
