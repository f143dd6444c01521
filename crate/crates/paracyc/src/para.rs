//! Paracomplexes: two-term complexes whose boundary squares to `id − T` for
//! an invertible symmetry operator `T`, together with the truncated towers
//! of equivariant forms that produce them.
//!
//! The tower of level `n` over `Ω_G(A)` has underlying space
//! `Ω⁰ ⊕ ⋯ ⊕ Ω^{n−1} ⊕ Ωⁿ / b(Ωⁿ⁺¹)`, split into even and odd degrees.
//! Several boundaries are supported on the same underlying space: the
//! Hodge-tower boundary `B + b`, the transported X-complex boundary, and its
//! rescaled variant `δ` with `δ² = id − T`.

use crate::error::EngineError;
use crate::forms::{FormSpace, TowerOp};
use crate::group::FiniteGroup;
use crate::linalg::{quotient_by_span, SparseMatrix, Subquotient};
use crate::scalar::{one, q, qi, Scalar};
use num::traits::Zero;
use std::sync::Arc;

/// A supercomplex with symmetry: `∂² = id − T`, `T ∂ = ∂ T`, with `T`
/// invertible, optionally carrying a group action and a commuting family of
/// delta-function idempotents.
#[derive(Debug, Clone)]
pub struct ParaComplex {
    pub group: Arc<FiniteGroup>,
    /// Block dimensions of the even part, lowest degree first.
    pub even_dims: Vec<usize>,
    /// Block dimensions of the odd part.
    pub odd_dims: Vec<usize>,
    /// Boundary even → odd.
    pub d_even: SparseMatrix,
    /// Boundary odd → even.
    pub d_odd: SparseMatrix,
    pub t_even: SparseMatrix,
    pub t_odd: SparseMatrix,
    /// Group action matrices, one per element (empty = not tracked).
    pub g_even: Vec<SparseMatrix>,
    pub g_odd: Vec<SparseMatrix>,
    /// Delta-function idempotents, one per element (empty = not tracked).
    pub og_even: Vec<SparseMatrix>,
    pub og_odd: Vec<SparseMatrix>,
}

impl ParaComplex {
    pub fn even_dim(&self) -> usize {
        self.even_dims.iter().sum()
    }

    pub fn odd_dim(&self) -> usize {
        self.odd_dims.iter().sum()
    }

    /// Verify every structural identity exactly.
    pub fn validate(&self) -> Result<(), EngineError> {
        let (ne, no) = (self.even_dim(), self.odd_dim());
        let shapes = [
            (self.d_even.rows(), no),
            (self.d_even.cols(), ne),
            (self.d_odd.rows(), ne),
            (self.d_odd.cols(), no),
            (self.t_even.rows(), ne),
            (self.t_even.cols(), ne),
            (self.t_odd.rows(), no),
            (self.t_odd.cols(), no),
        ];
        if shapes.iter().any(|(a, b)| a != b) {
            return Err(EngineError::ShapeMismatch("paracomplex blocks".into()));
        }
        let ide = SparseMatrix::identity(ne);
        let ido = SparseMatrix::identity(no);
        if self.d_odd.mul(&self.d_even) != ide.sub(&self.t_even)
            || self.d_even.mul(&self.d_odd) != ido.sub(&self.t_odd)
        {
            return Err(EngineError::IdentityViolation(
                "boundary squared is not id − T".into(),
            ));
        }
        if self.d_even.mul(&self.t_even) != self.t_odd.mul(&self.d_even)
            || self.d_odd.mul(&self.t_odd) != self.t_even.mul(&self.d_odd)
        {
            return Err(EngineError::IdentityViolation(
                "T does not commute with the boundary".into(),
            ));
        }
        if crate::linalg::inverse(&self.t_even).is_none()
            || crate::linalg::inverse(&self.t_odd).is_none()
        {
            return Err(EngineError::IdentityViolation(
                "symmetry operator is not invertible".into(),
            ));
        }
        if !self.g_even.is_empty() {
            let g = &self.group;
            if self.g_even.len() != g.order() || self.g_odd.len() != g.order() {
                return Err(EngineError::ShapeMismatch("group action family".into()));
            }
            if self.g_even[g.identity()] != ide || self.g_odd[g.identity()] != ido {
                return Err(EngineError::IdentityViolation(
                    "identity element does not act trivially".into(),
                ));
            }
            for s in 0..g.order() {
                for t in 0..g.order() {
                    if self.g_even[s].mul(&self.g_even[t]) != self.g_even[g.mul(s, t)]
                        || self.g_odd[s].mul(&self.g_odd[t]) != self.g_odd[g.mul(s, t)]
                    {
                        return Err(EngineError::IdentityViolation(
                            "action is not multiplicative".into(),
                        ));
                    }
                }
                if self.d_even.mul(&self.g_even[s]) != self.g_odd[s].mul(&self.d_even)
                    || self.d_odd.mul(&self.g_odd[s]) != self.g_even[s].mul(&self.d_odd)
                {
                    return Err(EngineError::IdentityViolation(
                        "action does not commute with the boundary".into(),
                    ));
                }
            }
        }
        if !self.og_even.is_empty() {
            let g = &self.group;
            let mut sum_e = SparseMatrix::zero(ne, ne);
            let mut sum_o = SparseMatrix::zero(no, no);
            for r in 0..g.order() {
                for r2 in 0..g.order() {
                    let pe = self.og_even[r].mul(&self.og_even[r2]);
                    let po = self.og_odd[r].mul(&self.og_odd[r2]);
                    if r == r2 {
                        if pe != self.og_even[r] || po != self.og_odd[r] {
                            return Err(EngineError::IdentityViolation(
                                "delta projections are not idempotent".into(),
                            ));
                        }
                    } else if !pe.is_zero() || !po.is_zero() {
                        return Err(EngineError::IdentityViolation(
                            "delta projections are not orthogonal".into(),
                        ));
                    }
                }
                sum_e = sum_e.add(&self.og_even[r]);
                sum_o = sum_o.add(&self.og_odd[r]);
            }
            if sum_e != ide || sum_o != ido {
                return Err(EngineError::IdentityViolation(
                    "delta projections do not sum to the identity".into(),
                ));
            }
            if !self.g_even.is_empty() {
                for s in 0..g.order() {
                    for r in 0..g.order() {
                        let c = g.conjugate(s, r);
                        if self.g_even[s].mul(&self.og_even[r])
                            != self.og_even[c].mul(&self.g_even[s])
                            || self.g_odd[s].mul(&self.og_odd[r])
                                != self.og_odd[c].mul(&self.g_odd[s])
                        {
                            return Err(EngineError::IdentityViolation(
                                "delta projections are not covariant".into(),
                            ));
                        }
                    }
                }
                // T is the canonical symmetry Σ_r P_r ρ(r⁻¹).
                let mut te = SparseMatrix::zero(ne, ne);
                let mut to = SparseMatrix::zero(no, no);
                for r in 0..g.order() {
                    let ri = g.inverse(r);
                    te = te.add(&self.og_even[r].mul(&self.g_even[ri]));
                    to = to.add(&self.og_odd[r].mul(&self.g_odd[ri]));
                }
                if te != self.t_even || to != self.t_odd {
                    return Err(EngineError::IdentityViolation(
                        "symmetry operator does not match the covariant formula".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Average of the group action: the projection onto invariants. Requires
    /// the action family to be tracked.
    pub fn invariant_projector(&self) -> (SparseMatrix, SparseMatrix) {
        assert!(!self.g_even.is_empty(), "group action not tracked");
        let n = self.group.order();
        let w = qi(1) / q(n as i64, 1);
        let mut pe = SparseMatrix::zero(self.even_dim(), self.even_dim());
        let mut po = SparseMatrix::zero(self.odd_dim(), self.odd_dim());
        for s in 0..n {
            pe = pe.add(&self.g_even[s]);
            po = po.add(&self.g_odd[s]);
        }
        (pe.scale(&w), po.scale(&w))
    }
}

/// The shape of a level-`n` tower: which degrees sit on which side, the block
/// dimensions, and the top-degree quotient.
#[derive(Debug, Clone)]
pub struct TowerShape {
    pub n: usize,
    /// Dimension of each block, degree 0..=n (the top entry is the quotient).
    pub dims: Vec<usize>,
    pub top: Subquotient,
}

impl TowerShape {
    pub fn new(space: &FormSpace, n: usize) -> Result<Self, EngineError> {
        if n + 1 > space.level() {
            return Err(EngineError::LevelTooHigh {
                level: n,
                max: space.level(),
            });
        }
        let b = space.op_b();
        let bmat = b
            .comp(n + 1, n)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(space.dim(n), space.dim(n + 1)));
        let top = quotient_by_span(space.dim(n), &bmat);
        let mut dims: Vec<usize> = (0..n).map(|j| space.dim(j)).collect();
        dims.push(top.dim());
        Ok(TowerShape { n, dims, top })
    }

    /// Degrees on the even side, ascending.
    pub fn even_degrees(&self) -> Vec<usize> {
        (0..=self.n).filter(|j| j % 2 == 0).collect()
    }

    pub fn odd_degrees(&self) -> Vec<usize> {
        (0..=self.n).filter(|j| j % 2 == 1).collect()
    }

    fn side_dims(&self, degrees: &[usize]) -> Vec<usize> {
        degrees.iter().map(|&j| self.dims[j]).collect()
    }

    /// Block matrix of a tower operator restricted to the listed source
    /// degrees and target degrees, with top projection/section applied.
    pub fn block_matrix(
        &self,
        op: &TowerOp,
        src_degrees: &[usize],
        dst_degrees: &[usize],
    ) -> SparseMatrix {
        let row_dims = self.side_dims(dst_degrees);
        let col_dims = self.side_dims(src_degrees);
        let mut blocks: Vec<(usize, usize, SparseMatrix)> = Vec::new();
        for (bj, &src) in src_degrees.iter().enumerate() {
            for (bi, &dst) in dst_degrees.iter().enumerate() {
                let Some(m) = op.comp(src, dst) else { continue };
                let mut m = m.clone();
                if src == self.n {
                    m = m.mul(&self.top.section);
                }
                if dst == self.n {
                    m = self.top.projection.mul(&m);
                }
                blocks.push((bi, bj, m));
            }
        }
        let refs: Vec<(usize, usize, &SparseMatrix)> =
            blocks.iter().map(|(i, j, m)| (*i, *j, m)).collect();
        SparseMatrix::assemble(&row_dims, &col_dims, &refs)
    }
}

/// Block matrix of a tower operator viewed as a map *between* two tower
/// shapes (possibly over different algebras): the source section is applied
/// at the source top degree and the target projection at the target top.
pub fn cross_block_matrix(
    src_shape: &TowerShape,
    dst_shape: &TowerShape,
    op: &TowerOp,
    src_degrees: &[usize],
    dst_degrees: &[usize],
) -> SparseMatrix {
    let row_dims: Vec<usize> = dst_degrees.iter().map(|&j| dst_shape.dims[j]).collect();
    let col_dims: Vec<usize> = src_degrees.iter().map(|&j| src_shape.dims[j]).collect();
    let mut blocks: Vec<(usize, usize, SparseMatrix)> = Vec::new();
    for (bj, &src) in src_degrees.iter().enumerate() {
        for (bi, &dst) in dst_degrees.iter().enumerate() {
            let Some(m) = op.comp(src, dst) else { continue };
            let mut m = m.clone();
            if src == src_shape.n {
                m = m.mul(&src_shape.top.section);
            }
            if dst == dst_shape.n {
                m = dst_shape.top.projection.mul(&m);
            }
            blocks.push((bi, bj, m));
        }
    }
    let refs: Vec<(usize, usize, &SparseMatrix)> =
        blocks.iter().map(|(i, j, m)| (*i, *j, m)).collect();
    SparseMatrix::assemble(&row_dims, &col_dims, &refs)
}

/// Assemble a paracomplex on the level-`n` tower from a boundary operator of
/// shift `±1`. The boundary must be faithfully defined on degrees `0..=n−1`,
/// and its downward component at degree `n` is used from the top quotient.
/// Group and delta actions are tracked.
pub fn paracomplex_from_tower(
    space: &FormSpace,
    boundary: &TowerOp,
    n: usize,
) -> Result<ParaComplex, EngineError> {
    let shape = TowerShape::new(space, n)?;
    for j in 0..n {
        if !boundary.valid.contains(&j) {
            return Err(EngineError::DegreeOverflow {
                needed: j,
                max: space.level(),
            });
        }
    }
    let evens = shape.even_degrees();
    let odds = shape.odd_degrees();
    let d_even = shape.block_matrix(boundary, &evens, &odds);
    let d_odd = shape.block_matrix(boundary, &odds, &evens);
    let t = space.op_t();
    let t_even = shape.block_matrix(&t, &evens, &evens);
    let t_odd = shape.block_matrix(&t, &odds, &odds);
    let group = space.group().clone();
    let mut g_even = Vec::new();
    let mut g_odd = Vec::new();
    let mut og_even = Vec::new();
    let mut og_odd = Vec::new();
    for s in 0..group.order() {
        let ga = space.op_gact(s);
        g_even.push(shape.block_matrix(&ga, &evens, &evens));
        g_odd.push(shape.block_matrix(&ga, &odds, &odds));
        let oa = space.op_ogact(s);
        og_even.push(shape.block_matrix(&oa, &evens, &evens));
        og_odd.push(shape.block_matrix(&oa, &odds, &odds));
    }
    Ok(ParaComplex {
        group,
        even_dims: shape.side_dims(&evens),
        odd_dims: shape.side_dims(&odds),
        d_even,
        d_odd,
        t_even,
        t_odd,
        g_even,
        g_odd,
        og_even,
        og_odd,
    })
}

/// The Hodge-tower boundary `B + b` on all degrees where `B` is defined.
pub fn hodge_boundary(space: &FormSpace) -> TowerOp {
    space.op_big_b().add(&space.op_b())
}

/// The level-`n` Hodge tower `θⁿ Ω_G(A)` with boundary `B + b`.
pub fn hodge_level(space: &FormSpace, n: usize) -> Result<ParaComplex, EngineError> {
    paracomplex_from_tower(space, &hodge_boundary(space), n)
}

/// The equivariant X-complex of `A` itself: the level-1 Hodge tower
/// `A ⊕ Ω¹/b(Ω²)` (as spaces) with boundary `B + b`.
pub fn x_complex(space: &FormSpace) -> Result<ParaComplex, EngineError> {
    hodge_level(space, 1)
}

/// The X-complex boundary of the tensor algebra transported to forms:
/// `∂ = b − (id + κ) d` on odd degrees and
/// `∂ = − Σ_{j=0}^{m−1} κ^{2j} b + B` on degree `2m`.
pub fn x_boundary_tower(space: &FormSpace) -> TowerOp {
    let level = space.level();
    let b = space.op_b();
    let d = space.op_d();
    let kappa = space.op_kappa_closed();
    let mut op = TowerOp::empty(level);
    for src in 0..level {
        if src % 2 == 1 {
            if let Some(bm) = b.comp(src, src - 1) {
                op.insert(src, src - 1, bm.clone());
            }
            if let Some(dm) = d.comp(src, src + 1) {
                let mut up = dm.clone();
                if let Some(k1) = kappa.comp(src + 1, src + 1) {
                    up = up.add(&k1.mul(dm));
                }
                op.insert(src, src + 1, up.neg());
            }
        } else {
            let m = src / 2;
            if m > 0 {
                if let (Some(bm), Some(kmat)) = (b.comp(src, src - 1), kappa.comp(src - 1, src - 1)) {
                    let k2 = kmat.mul(kmat);
                    let mut acc = bm.clone();
                    let mut cur = bm.clone();
                    for _ in 1..m {
                        cur = k2.mul(&cur);
                        acc = acc.add(&cur);
                    }
                    op.insert(src, src - 1, acc.neg());
                }
            }
            if let Some(bb) = space.op_big_b().comp(src, src + 1) {
                op.insert(src, src + 1, bb.clone());
            }
        }
        op.valid.insert(src);
    }
    // Degree `level`: only the downward component is available; keep it for
    // top-quotient assembly but do not mark the degree valid.
    let src = level;
    if src % 2 == 1 {
        if let Some(bm) = b.comp(src, src - 1) {
            op.insert(src, src - 1, bm.clone());
        }
    } else if src / 2 > 0 {
        if let (Some(bm), Some(kmat)) = (b.comp(src, src - 1), kappa.comp(src - 1, src - 1)) {
            let k2 = kmat.mul(kmat);
            let mut acc = bm.clone();
            let mut cur = bm.clone();
            for _ in 1..src / 2 {
                cur = k2.mul(&cur);
                acc = acc.add(&cur);
            }
            op.insert(src, src - 1, acc.neg());
        }
    }
    op
}

/// The level-`n` tower with the transported X-complex boundary.
pub fn x_boundary_on_tower(space: &FormSpace, n: usize) -> Result<ParaComplex, EngineError> {
    paracomplex_from_tower(space, &x_boundary_tower(space), n)
}

/// The rescaled boundary `δ`: on `Ω^{2m}` it is `B − m b`, on `Ω^{2m+1}` it
/// is `−(1/(m+1)) B + b`; it satisfies `δ² = id − T`.
pub fn delta_tower(space: &FormSpace) -> TowerOp {
    let level = space.level();
    let b = space.op_b();
    let big_b = space.op_big_b();
    let mut op = TowerOp::empty(level);
    for src in 0..=level {
        let m = src / 2;
        let (up_c, down_c): (Scalar, Scalar) = if src % 2 == 0 {
            (one(), -q(m as i64, 1))
        } else {
            (-q(1, (m + 1) as i64), one())
        };
        if src > 0 && !down_c.is_zero() {
            if let Some(bm) = b.comp(src, src - 1) {
                op.insert(src, src - 1, bm.scale(&down_c));
            }
        }
        if src < level {
            if let Some(bb) = big_b.comp(src, src + 1) {
                op.insert(src, src + 1, bb.scale(&up_c));
            }
            op.valid.insert(src);
        }
    }
    op
}

/// The level-`n` tower with the rescaled boundary `δ`.
pub fn rescale_delta(space: &FormSpace, n: usize) -> Result<ParaComplex, EngineError> {
    paracomplex_from_tower(space, &delta_tower(space), n)
}

/// Generators of the Hodge filtration stage `F^k θⁿ = b(Ω^{k+1}) ⊕ Ω^{k+1}
/// ⊕ ⋯` inside the level-`n` tower, as one matrix per side whose column span
/// is the filtration stage in block coordinates.
pub fn hodge_filtration(
    space: &FormSpace,
    n: usize,
    k: usize,
) -> Result<(SparseMatrix, SparseMatrix), EngineError> {
    assert!(k <= n);
    let shape = TowerShape::new(space, n)?;
    let evens = shape.even_degrees();
    let odds = shape.odd_degrees();
    let b = space.op_b();
    let side = |degs: &[usize]| -> SparseMatrix {
        let side_dim: usize = degs.iter().map(|&j| shape.dims[j]).sum();
        let offsets: Vec<usize> = degs
            .iter()
            .scan(0usize, |acc, &j| {
                let o = *acc;
                *acc += shape.dims[j];
                Some(o)
            })
            .collect();
        let mut cols: Vec<crate::linalg::SVec> = Vec::new();
        for (pos, &j) in degs.iter().enumerate() {
            let off = offsets[pos];
            if j > k {
                // Full block.
                for i in 0..shape.dims[j] {
                    cols.push(vec![(off + i, one())]);
                }
            } else if j == k && k < n {
                // b(Ω^{k+1}) inside Ω^k.
                if let Some(bm) = b.comp(k + 1, k) {
                    for c in 0..bm.cols() {
                        let col = bm.col(c);
                        if !col.is_empty() {
                            cols.push(col.iter().map(|(i, v)| (off + i, v.clone())).collect());
                        }
                    }
                }
            }
            // j == k == n: b(Ωⁿ⁺¹) maps to zero in the top quotient.
        }
        let ncols = cols.len();
        SparseMatrix::from_columns(side_dim, ncols, |c| cols[c].clone())
    };
    Ok((side(&evens), side(&odds)))
}

/// True when the column spans are preserved by the boundary of `pc` (a
/// subcomplex check, performed by exact membership of each image column).
pub fn spans_subcomplex(
    pc: &ParaComplex,
    even_gens: &SparseMatrix,
    odd_gens: &SparseMatrix,
) -> bool {
    let img_e = pc.d_even.mul(even_gens);
    let img_o = pc.d_odd.mul(odd_gens);
    (0..img_e.cols()).all(|j| crate::linalg::coords_in_span(odd_gens, img_e.col(j)).is_some())
        && (0..img_o.cols())
            .all(|j| crate::linalg::coords_in_span(even_gens, img_o.col(j)).is_some())
}

/// Plumbing shared by the group-free callers: a paracomplex over the trivial
/// group degenerates to an ordinary supercomplex (`T = id`).
pub fn is_supercomplex(pc: &ParaComplex) -> bool {
    pc.t_even == SparseMatrix::identity(pc.even_dim())
        && pc.t_odd == SparseMatrix::identity(pc.odd_dim())
}

/// Symmetry-invariant subcomplex of a paracomplex: since `∂² = id − T`, the
/// boundary restricts to `ker(id − T)` on both sides and squares to zero
/// there. Returns the inclusion-restricted boundaries together with the
/// basis matrices of the invariant subspaces.
pub struct InvariantSubcomplex {
    pub even_basis: SparseMatrix,
    pub odd_basis: SparseMatrix,
    pub d_even: SparseMatrix,
    pub d_odd: SparseMatrix,
}

pub fn t_invariant_subcomplex(pc: &ParaComplex) -> Result<InvariantSubcomplex, EngineError> {
    let ide = SparseMatrix::identity(pc.even_dim());
    let ido = SparseMatrix::identity(pc.odd_dim());
    let even_basis = crate::linalg::kernel_basis(&ide.sub(&pc.t_even));
    let odd_basis = crate::linalg::kernel_basis(&ido.sub(&pc.t_odd));
    let restrict = |m: &SparseMatrix, src: &SparseMatrix, dst: &SparseMatrix| {
        let img = m.mul(src);
        let mut cols = Vec::new();
        for j in 0..img.cols() {
            match crate::linalg::coords_in_span(dst, img.col(j)) {
                Some(c) => cols.push(c),
                None => return Err(EngineError::Mismatch(
                    "boundary does not preserve the invariant subspace".into(),
                )),
            }
        }
        Ok(SparseMatrix::from_columns(dst.cols(), cols.len(), |j| {
            cols[j].clone()
        }))
    };
    let d_even = restrict(&pc.d_even, &even_basis, &odd_basis)?;
    let d_odd = restrict(&pc.d_odd, &odd_basis, &even_basis)?;
    Ok(InvariantSubcomplex {
        even_basis,
        odd_basis,
        d_even,
        d_odd,
    })
}
