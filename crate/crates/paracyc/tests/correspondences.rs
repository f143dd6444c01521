//! Chain-level correspondences: polynomial homotopies and the integral
//! contraction, the connection-induced retraction, and the stability trace.

use paracyc::algebra::{
    dual_numbers, group_algebra_adjoint, scalars, GAlgebra, GModule,
};
use paracyc::forms::{connection_witness, FormSpace};
use paracyc::group::{FiniteGroup, MeasureConvention};
use paracyc::homotopy::{
    cartan_eta, form_hom, nabla_retraction, xi2_and_homotopy_check, PolynomialHomotopy,
};
use paracyc::linalg::{SparseMatrix, SVec};
use paracyc::scalar::one;
use paracyc::stability::{stability_trace, AdmissiblePairing};
use std::sync::Arc;

/// The 2×2 matrix algebra with trivial group action, basis E11, E12, E21, E22.
fn matrix_algebra(group: Arc<FiniteGroup>) -> GAlgebra {
    let labels = vec!["E11".into(), "E12".into(), "E21".into(), "E22".into()];
    let module = GModule::trivial(group, labels);
    let idx = |a: usize, b: usize| 2 * a + b;
    let mut mult: Vec<Vec<SVec>> = vec![vec![Vec::new(); 4]; 4];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    if b == c {
                        mult[idx(a, b)][idx(c, d)] = vec![(idx(a, d), one())];
                    }
                }
            }
        }
    }
    let unit = vec![(idx(0, 0), one()), (idx(1, 1), one())];
    GAlgebra::new(module, mult, Some(unit)).unwrap()
}

/// Conjugation by the unipotent family `1 + t·E12` on the matrix algebra:
/// `Φ_t(x) = (1 + t E12) x (1 − t E12)`, a degree-2 polynomial homotopy from
/// the identity to an inner automorphism.
fn unipotent_conjugation(a: &GAlgebra) -> PolynomialHomotopy {
    let n12: SVec = vec![(1, one())];
    let col = |x: usize, k: usize| -> SVec {
        let ex: SVec = vec![(x, one())];
        match k {
            0 => ex,
            1 => {
                let left = a.product(&n12, &ex);
                let right = a.product(&ex, &n12);
                SparseMatrix::from_triplets(4, 1, left.iter().map(|(i, c)| (*i, 0, c.clone())))
                    .sub(&SparseMatrix::from_triplets(
                        4,
                        1,
                        right.iter().map(|(i, c)| (*i, 0, c.clone())),
                    ))
                    .col(0)
                    .clone()
            }
            2 => a
                .product(&a.product(&n12, &ex), &n12)
                .iter()
                .map(|(i, c)| (*i, -c.clone()))
                .collect(),
            _ => unreachable!(),
        }
    };
    let coeffs = (0..=2)
        .map(|k| SparseMatrix::from_columns(4, 4, |x| col(x, k)))
        .collect();
    PolynomialHomotopy::new(a.clone(), a.clone(), coeffs).unwrap()
}

#[test]
fn constant_homotopy_has_zero_contraction() {
    let g = Arc::new(FiniteGroup::cyclic(2));
    let a = group_algebra_adjoint(g);
    let id = SparseMatrix::identity(a.dim());
    let phi = PolynomialHomotopy::constant(a.clone(), a.clone(), id).unwrap();
    let space = FormSpace::new(&a, 3);
    let eta = cartan_eta(&phi, &space, &space);
    for n in 1..=3 {
        assert!(eta.comp(n, n - 1).is_none() || eta.comp(n, n - 1).unwrap().is_zero());
    }
    xi2_and_homotopy_check(&phi).unwrap();
}

#[test]
fn inner_automorphism_interpolation_satisfies_the_homotopy_identity() {
    let g = Arc::new(FiniteGroup::trivial());
    let a = matrix_algebra(g);
    let phi = unipotent_conjugation(&a);
    // Endpoints: the identity and conjugation by 1 + E12.
    assert_eq!(phi.endpoint(false), SparseMatrix::identity(4));
    assert_ne!(phi.endpoint(true), SparseMatrix::identity(4));
    xi2_and_homotopy_check(&phi).unwrap();
}

#[test]
fn reparametrized_homotopies_agree_at_endpoints() {
    let g = Arc::new(FiniteGroup::trivial());
    let a = matrix_algebra(g);
    let phi = unipotent_conjugation(&a);
    let phi2 = phi.reparametrize(2);
    assert_eq!(phi.endpoint(false), phi2.endpoint(false));
    assert_eq!(phi.endpoint(true), phi2.endpoint(true));
    xi2_and_homotopy_check(&phi2).unwrap();
    // The constant homotopy on a group algebra, reparametrized two ways.
    let g2 = Arc::new(FiniteGroup::cyclic(2));
    let b = group_algebra_adjoint(g2);
    let id = SparseMatrix::identity(b.dim());
    let psi = PolynomialHomotopy::constant(b.clone(), b.clone(), id).unwrap();
    xi2_and_homotopy_check(&psi).unwrap();
    xi2_and_homotopy_check(&psi.reparametrize(2)).unwrap();
}

#[test]
fn contraction_anticommutes_with_the_hochschild_boundary() {
    let g = Arc::new(FiniteGroup::trivial());
    let a = matrix_algebra(g);
    let phi = unipotent_conjugation(&a);
    let space = FormSpace::new(&a, 3);
    let eta = cartan_eta(&phi, &space, &space);
    let b = space.op_b();
    for n in 2..=3 {
        let lhs = eta.comp(n - 1, n - 2).unwrap().mul(b.comp(n, n - 1).unwrap());
        let rhs = b
            .comp(n - 1, n - 2)
            .unwrap()
            .mul(eta.comp(n, n - 1).unwrap())
            .neg();
        assert_eq!(lhs, rhs, "anticommutation fails at degree {n}");
    }
}

#[test]
fn degree_zero_bracket_recovers_the_endpoint_difference() {
    let g = Arc::new(FiniteGroup::trivial());
    let a = matrix_algebra(g);
    let phi = unipotent_conjugation(&a);
    let space = FormSpace::new(&a, 3);
    let eta = cartan_eta(&phi, &space, &space);
    let d = space.op_d();
    let bracket = eta.comp(1, 0).unwrap().mul(d.comp(0, 1).unwrap());
    let f0 = form_hom(&phi.endpoint(false), &space, &space);
    let f1 = form_hom(&phi.endpoint(true), &space, &space);
    let diff = f1.comp(0, 0).unwrap().sub(f0.comp(0, 0).unwrap());
    assert_eq!(bracket, diff);
}

#[test]
fn connection_retraction_on_scalars() {
    for group in [
        Arc::new(FiniteGroup::trivial()),
        Arc::new(FiniteGroup::cyclic(2)),
    ] {
        let a = scalars(group);
        let nabla = connection_witness(&a, 1).expect("graded connection");
        let space = FormSpace::new(&a, 4);
        let r = nabla_retraction(&space, &nabla, 1, 3).unwrap();
        r.validate().unwrap();
        // The retract of the level-3 tower along a degree-1 connection is the
        // two-term complex: its side dimensions match the level-1 tower.
        let shape1 = paracyc::para::TowerShape::new(&space, 1).unwrap();
        assert_eq!(r.sub_even(), shape1.dims[0]);
        assert_eq!(r.sub_odd(), shape1.dims[1]);
    }
}

#[test]
fn twisted_trace_identity_on_group_function_pairings() {
    for group in [
        Arc::new(FiniteGroup::cyclic(2)),
        Arc::new(FiniteGroup::cyclic(3)),
    ] {
        let p =
            AdmissiblePairing::functions_on_group(group, MeasureConvention::Normalized).unwrap();
        p.check_twisted_trace().unwrap();
        // At the identity element the twisted trace is the ordinary trace:
        // tr(T₀T₁) = tr(T₁T₀) is a special case of the checked identity.
    }
}

#[test]
fn pairing_algebra_matches_the_kernel_algebra() {
    let group = Arc::new(FiniteGroup::cyclic(3));
    let p = AdmissiblePairing::functions_on_group(group.clone(), MeasureConvention::Normalized)
        .unwrap();
    let l = p.algebra();
    let kg = paracyc::algebra::algebra_kg(group.clone(), MeasureConvention::Normalized);
    assert_eq!(l.dim(), kg.dim());
    for i in 0..l.dim() {
        for j in 0..l.dim() {
            assert_eq!(l.basis_product(i, j), kg.basis_product(i, j));
        }
    }
    for s in 0..group.order() {
        assert_eq!(l.module().act(s), kg.module().act(s));
    }
}

#[test]
fn stability_trace_is_a_chain_retraction() {
    let g2 = Arc::new(FiniteGroup::cyclic(2));
    let p = AdmissiblePairing::functions_on_group(g2.clone(), MeasureConvention::Normalized)
        .unwrap();
    let data = stability_trace(&dual_numbers(g2), &p).unwrap();
    assert!(data.x_stab.validate().is_ok());
    assert!(data.x_base.validate().is_ok());
    // Trivial group: the pairing algebra is one-dimensional, the trace map a
    // bijection on the nose.
    let gt = Arc::new(FiniteGroup::trivial());
    let pt = AdmissiblePairing::functions_on_group(gt.clone(), MeasureConvention::Counting)
        .unwrap();
    let datat = stability_trace(&scalars(gt), &pt).unwrap();
    assert_eq!(
        datat.tr_even.mul(&datat.inc_even),
        SparseMatrix::identity(datat.tr_even.rows())
    );
}
