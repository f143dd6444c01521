//! Admissible bilinear pairings, their rank-one-operator algebras, the
//! twisted trace, and the trace map from the two-term complex of
//! `A ⊗ l(b)` back to that of `A`.

use crate::algebra::{GAlgebra, GModule};
use crate::error::EngineError;
use crate::forms::{FormSpace, TowerOp};
use crate::group::{FiniteGroup, MeasureConvention};
use crate::linalg::{collect_svec, SparseMatrix, SVec};
use crate::para::{cross_block_matrix, hodge_level, ParaComplex, TowerShape};
use crate::scalar::{one, Scalar};
use num::traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// An equivariant bilinear pairing `b: W × V → k` together with fixed
/// vectors `v ∈ V`, `w ∈ W` satisfying `b(w, v) = 1`, so that `p = v ⊗ w`
/// is a group-fixed idempotent in the associated algebra.
#[derive(Debug, Clone)]
pub struct AdmissiblePairing {
    group: Arc<FiniteGroup>,
    act_v: Vec<SparseMatrix>,
    act_w: Vec<SparseMatrix>,
    /// `pairing[i][j] = b(w_i, v_j)`, shape `dim W × dim V`.
    pairing: SparseMatrix,
    v: SVec,
    w: SVec,
}

impl AdmissiblePairing {
    pub fn new(
        group: Arc<FiniteGroup>,
        act_v: Vec<SparseMatrix>,
        act_w: Vec<SparseMatrix>,
        pairing: SparseMatrix,
        v: SVec,
        w: SVec,
    ) -> Result<Self, EngineError> {
        let n = group.order();
        if act_v.len() != n || act_w.len() != n {
            return Err(EngineError::ShapeMismatch("action family length".into()));
        }
        let (dv, dw) = (pairing.cols(), pairing.rows());
        for s in 0..n {
            if act_v[s].rows() != dv || act_v[s].cols() != dv {
                return Err(EngineError::ShapeMismatch("first-leg action".into()));
            }
            if act_w[s].rows() != dw || act_w[s].cols() != dw {
                return Err(EngineError::ShapeMismatch("second-leg action".into()));
            }
        }
        for s in 0..n {
            for t in 0..n {
                if act_v[s].mul(&act_v[t]) != act_v[group.mul(s, t)]
                    || act_w[s].mul(&act_w[t]) != act_w[group.mul(s, t)]
                {
                    return Err(EngineError::IdentityViolation(
                        "pairing leg action is not multiplicative".into(),
                    ));
                }
            }
        }
        let e = group.identity();
        if act_v[e] != SparseMatrix::identity(dv) || act_w[e] != SparseMatrix::identity(dw) {
            return Err(EngineError::IdentityViolation(
                "identity element does not act trivially on the pairing legs".into(),
            ));
        }
        let p = AdmissiblePairing {
            group,
            act_v,
            act_w,
            pairing,
            v,
            w,
        };
        // Equivariance b(s·w, s·v) = b(w, v): Wᵀ(s) · B · V(s) = B.
        for s in 0..n {
            let lhs = p.act_w[s].transpose().mul(&p.pairing).mul(&p.act_v[s]);
            if lhs != p.pairing {
                return Err(EngineError::IdentityViolation(format!(
                    "pairing is not equivariant at group element {s}"
                )));
            }
        }
        for s in 0..n {
            if p.act_v[s].apply(&p.v) != p.v || p.act_w[s].apply(&p.w) != p.w {
                return Err(EngineError::IdentityViolation(
                    "distinguished pairing vectors are not group-fixed".into(),
                ));
            }
        }
        if p.eval(&p.w, &p.v) != one() {
            return Err(EngineError::IdentityViolation(
                "distinguished vectors do not pair to 1".into(),
            ));
        }
        Ok(p)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim_v(&self) -> usize {
        self.pairing.cols()
    }

    pub fn dim_w(&self) -> usize {
        self.pairing.rows()
    }

    /// `b(w, v)` on coordinate vectors.
    pub fn eval(&self, w: &SVec, v: &SVec) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, wi) in w {
            for (j, vj) in v {
                acc += wi * self.pairing.get(*i, *j) * vj;
            }
        }
        acc
    }

    /// Coordinates of the distinguished idempotent `p = v ⊗ w` in the
    /// associated algebra (basis `v_i ⊗ w_j` at index `i · dim W + j`).
    pub fn idempotent(&self) -> SVec {
        let dw = self.dim_w();
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, vi) in &self.v {
            for (j, wj) in &self.w {
                *acc.entry(i * dw + j).or_insert_with(Scalar::zero) += vi * wj;
            }
        }
        collect_svec(acc)
    }

    /// The natural pairing on functions on the group (both legs the left
    /// regular representation), `b(g, f) = ∫ g f` with the weight of the
    /// given measure, distinguished by the constant functions. Admissible
    /// only for the normalized measure, where the constants pair to 1.
    pub fn functions_on_group(
        group: Arc<FiniteGroup>,
        measure: MeasureConvention,
    ) -> Result<Self, EngineError> {
        let n = group.order();
        let act: Vec<SparseMatrix> = (0..n)
            .map(|s| {
                SparseMatrix::from_triplets(
                    n,
                    n,
                    (0..n).map(|r| (group.mul(s, r), r, one())),
                )
            })
            .collect();
        let wgt = measure.weight(&group);
        let pairing = SparseMatrix::scalar_identity(n, &wgt);
        let constant: SVec = (0..n).map(|r| (r, one())).collect();
        AdmissiblePairing::new(group, act.clone(), act, pairing, constant.clone(), constant)
    }

    /// The algebra `l(b)` spanned by rank-one tensors,
    /// `(v₁ ⊗ w₁)(v₂ ⊗ w₂) = b(w₁, v₂) v₁ ⊗ w₂`, with the diagonal action.
    pub fn algebra(&self) -> GAlgebra {
        let (dv, dw) = (self.dim_v(), self.dim_w());
        let dim = dv * dw;
        let idx = |i: usize, j: usize| i * dw + j;
        let labels = (0..dv)
            .flat_map(|i| (0..dw).map(move |j| format!("v{i}w{j}")))
            .collect();
        let n = self.group.order();
        let action = (0..n)
            .map(|s| {
                let mut trip = Vec::new();
                for i in 0..dv {
                    for j in 0..dw {
                        for (i2, cv) in self.act_v[s].col(i) {
                            for (j2, cw) in self.act_w[s].col(j) {
                                trip.push((idx(*i2, *j2), idx(i, j), cv * cw));
                            }
                        }
                    }
                }
                SparseMatrix::from_triplets(dim, dim, trip)
            })
            .collect();
        let module = GModule::new(self.group.clone(), labels, action).unwrap();
        let mut mult: Vec<Vec<SVec>> = vec![vec![Vec::new(); dim]; dim];
        for i1 in 0..dv {
            for j1 in 0..dw {
                for i2 in 0..dv {
                    let c = self.pairing.get(j1, i2);
                    if c.is_zero() {
                        continue;
                    }
                    for j2 in 0..dw {
                        mult[idx(i1, j1)][idx(i2, j2)] = vec![(idx(i1, j2), c.clone())];
                    }
                }
            }
        }
        GAlgebra::new(module, mult, None).unwrap()
    }

    /// The twisted trace `tr_s` as a row vector on the algebra basis:
    /// `tr_s(v_i ⊗ w_j) = b(w_j, s·v_i)`.
    pub fn twisted_trace(&self, s: usize) -> SparseMatrix {
        let (dv, dw) = (self.dim_v(), self.dim_w());
        let mut trip = Vec::new();
        for i in 0..dv {
            let sv = self.act_v[s].col(i);
            for j in 0..dw {
                let val = self.eval(&vec![(j, one())], sv);
                if !val.is_zero() {
                    trip.push((0, i * dw + j, val));
                }
            }
        }
        SparseMatrix::from_triplets(1, dv * dw, trip)
    }

    /// Verify `tr_s(T₀ T₁) = tr_s((s⁻¹ · T₁) T₀)` for every group element
    /// and every pair of basis tensors.
    pub fn check_twisted_trace(&self) -> Result<(), EngineError> {
        let l = self.algebra();
        let dim = l.dim();
        for s in 0..self.group.order() {
            let tr = self.twisted_trace(s);
            let sinv = self.group.inverse(s);
            for t0 in 0..dim {
                let e0: SVec = vec![(t0, one())];
                for t1 in 0..dim {
                    let e1: SVec = vec![(t1, one())];
                    let lhs = trace_of(&tr, &l.product(&e0, &e1));
                    let moved = l.module().act_vec(sinv, &e1);
                    let rhs = trace_of(&tr, &l.product(&moved, &e0));
                    if lhs != rhs {
                        return Err(EngineError::IdentityViolation(format!(
                            "twisted trace identity fails at (s, T₀, T₁) = ({s}, {t0}, {t1})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn trace_of(tr: &SparseMatrix, x: &SVec) -> Scalar {
    let mut acc = Scalar::zero();
    for (i, c) in x {
        acc += tr.get(0, *i) * c;
    }
    acc
}

/// The trace correspondence: the stabilized algebra `A ⊗ l(b)`, the two-term
/// complexes on both sides, the trace chain map between them, and the
/// inclusion induced by `a ↦ a ⊗ p`.
pub struct StabilityData {
    pub stabilized: GAlgebra,
    /// Two-term complex of `A ⊗ l(b)`.
    pub x_stab: ParaComplex,
    /// Two-term complex of `A`.
    pub x_base: ParaComplex,
    /// Trace map, even part (`X⁰(A ⊗ l(b)) → X⁰(A)`).
    pub tr_even: SparseMatrix,
    pub tr_odd: SparseMatrix,
    /// Induced inclusion, even part.
    pub inc_even: SparseMatrix,
    pub inc_odd: SparseMatrix,
}

/// Build the trace map `tr(f(s) ⊗ x ⊗ T) = tr_s(T) f(s) ⊗ x` on the
/// two-term complexes and verify that it is a covariant chain map and a
/// left inverse of the inclusion `a ↦ a ⊗ p`.
pub fn stability_trace(
    a: &GAlgebra,
    pairing: &AdmissiblePairing,
) -> Result<StabilityData, EngineError> {
    if a.group().as_ref() != pairing.group().as_ref() {
        return Err(EngineError::GroupMismatch(
            "algebra and pairing over different groups".into(),
        ));
    }
    let l = pairing.algebra();
    let stabilized = crate::algebra::tensor_galgebras(a, &l)?;
    let space_e = FormSpace::new(&stabilized, 2);
    let space_a = FormSpace::new(a, 2);
    let shape_e = TowerShape::new(&space_e, 1)?;
    let shape_a = TowerShape::new(&space_a, 1)?;
    let x_stab = hodge_level(&space_e, 1)?;
    let x_base = hodge_level(&space_a, 1)?;
    let dl = l.dim();
    let da = a.dim();
    let traces: Vec<SparseMatrix> = (0..pairing.group().order())
        .map(|s| pairing.twisted_trace(s))
        .collect();
    let unit_e = space_e.calc().unit();
    let unit_a = space_a.calc().unit();
    // Split an index of (A ⊗ l)⁺ into the A⁺ letter and the l-coordinates.
    let split = |k: usize| -> (usize, Option<usize>) {
        if k == unit_e {
            (unit_a, None)
        } else {
            (k / dl, Some(k % dl))
        }
    };
    let mut tr_op = TowerOp::empty(space_e.level());
    // Degree 0: f(s) ⊗ (x ⊗ T) ↦ tr_s(T) f(s) ⊗ x.
    let m0 = SparseMatrix::from_columns(space_a.dim(0), space_e.dim(0), |col| {
        let (s, w) = space_e.decode(0, col);
        let (x, t) = (w[0] / dl, w[0] % dl);
        let c = traces[s].get(0, t);
        if c.is_zero() {
            Vec::new()
        } else {
            vec![(space_a.encode(0, s, &[x]), c)]
        }
    });
    tr_op.insert(0, 0, m0);
    // Degree 1: f(s) ⊗ (x₀ ⊗ T₀) d(x₁ ⊗ T₁) ↦ tr_s(T₀ T₁) f(s) ⊗ x₀ dx₁,
    // with the adjoined unit acting as the identity multiplier on traces.
    let m1 = SparseMatrix::from_columns(space_a.dim(1), space_e.dim(1), |col| {
        let (s, w) = space_e.decode(1, col);
        let (x0, t0) = split(w[0]);
        let (x1, t1) = (w[1] / dl, w[1] % dl);
        let tprod: SVec = match t0 {
            None => vec![(t1, one())],
            Some(t0) => l.basis_product(t0, t1).clone(),
        };
        let c = trace_of(&traces[s], &tprod);
        if c.is_zero() {
            Vec::new()
        } else {
            vec![(space_a.encode(1, s, &[x0, x1]), c)]
        }
    });
    tr_op.insert(1, 1, m1);
    // Well-definedness on the odd quotient: the trace of a boundary from
    // degree 2 must be a boundary.
    if let Some(b2) = space_e.op_b().comp(2, 1) {
        let tr1 = tr_op.comp(1, 1).unwrap();
        let pushed = shape_a.top.projection.mul(&tr1.mul(b2));
        if !pushed.is_zero() {
            return Err(EngineError::IdentityViolation(
                "trace map does not preserve boundary classes".into(),
            ));
        }
    }
    let evens_e = shape_e.even_degrees();
    let odds_e = shape_e.odd_degrees();
    let evens_a = shape_a.even_degrees();
    let odds_a = shape_a.odd_degrees();
    let tr_even = cross_block_matrix(&shape_e, &shape_a, &tr_op, &evens_e, &evens_a);
    let tr_odd = cross_block_matrix(&shape_e, &shape_a, &tr_op, &odds_e, &odds_a);
    // Chain map.
    if tr_odd.mul(&x_stab.d_even) != x_base.d_even.mul(&tr_even)
        || tr_even.mul(&x_stab.d_odd) != x_base.d_odd.mul(&tr_odd)
    {
        return Err(EngineError::IdentityViolation(
            "trace map does not commute with the boundary".into(),
        ));
    }
    // Covariance: the trace commutes with the group action and the
    // delta-function action on both two-term complexes.
    for s in 0..a.group().order() {
        if tr_even.mul(&x_stab.g_even[s]) != x_base.g_even[s].mul(&tr_even)
            || tr_odd.mul(&x_stab.g_odd[s]) != x_base.g_odd[s].mul(&tr_odd)
            || tr_even.mul(&x_stab.og_even[s]) != x_base.og_even[s].mul(&tr_even)
            || tr_odd.mul(&x_stab.og_odd[s]) != x_base.og_odd[s].mul(&tr_odd)
        {
            return Err(EngineError::IdentityViolation(format!(
                "trace map is not covariant at group element {s}"
            )));
        }
    }
    // Inclusion a ↦ a ⊗ p on the algebra level, then on forms.
    let p = pairing.idempotent();
    let inc_alg = SparseMatrix::from_columns(stabilized.dim(), da, |x| {
        p.iter().map(|(t, c)| (x * dl + t, c.clone())).collect()
    });
    let inc_op = crate::homotopy::form_hom(&inc_alg, &space_a, &space_e);
    let inc_even = cross_block_matrix(&shape_a, &shape_e, &inc_op, &evens_a, &evens_e);
    let inc_odd = cross_block_matrix(&shape_a, &shape_e, &inc_op, &odds_a, &odds_e);
    if tr_even.mul(&inc_even) != SparseMatrix::identity(tr_even.rows())
        || tr_odd.mul(&inc_odd) != SparseMatrix::identity(tr_odd.rows())
    {
        return Err(EngineError::IdentityViolation(
            "trace map is not a left inverse of the rank-one inclusion".into(),
        ));
    }
    Ok(StabilityData {
        stabilized,
        x_stab,
        x_base,
        tr_even,
        tr_odd,
        inc_even,
        inc_odd,
    })
}
