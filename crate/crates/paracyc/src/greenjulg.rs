//! The chain-level crossed-product comparison for finite groups with the
//! normalized measure: the relative two-term complex of `B = R ⋊ G` with
//! respect to the image `H` of the group algebra, the conjugation averaging
//! that splits it off, mutually inverse chain maps between the coinvariant
//! equivariant two-term complex of `R` and the relative complex of `B`, and
//! the contraction of the complementary kernel complex.

use crate::algebra::{crossed_product, GAlgebra};
use crate::error::EngineError;
use crate::forms::FormSpace;
use crate::group::MeasureConvention;
use crate::linalg::{
    axpy, collect_svec, kernel_basis, quotient_by_span, rank, rref, solve, SparseMatrix,
    Subquotient, SVec,
};
use crate::para::{hodge_level, ParaComplex, TowerShape};
use crate::scalar::{one, q, Scalar};
use num::traits::Zero;
use std::collections::BTreeMap;

/// Images `1_R ⋊ δ_s` of the group-algebra basis inside the crossed product.
fn group_algebra_image(r: &GAlgebra) -> Result<Vec<SVec>, EngineError> {
    let unit = r.unit().ok_or(EngineError::NotUnital)?;
    let n = r.group().order();
    Ok((0..n)
        .map(|s| {
            unit.iter()
                .map(|(i, c)| (i * n + s, c.clone()))
                .collect()
        })
        .collect())
}

/// Commutator generators `e h − h e` for `e` a basis element of `B` and `h`
/// a basis element of the group-algebra image, as columns.
fn commutator_generators(b: &GAlgebra, h_basis: &[SVec]) -> SparseMatrix {
    let dim = b.dim();
    let mut cols: Vec<SVec> = Vec::new();
    for e in 0..dim {
        let ev: SVec = vec![(e, one())];
        for h in h_basis {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            axpy(&mut acc, &one(), &b.product(&ev, h));
            axpy(&mut acc, &-one(), &b.product(h, &ev));
            cols.push(collect_svec(acc));
        }
    }
    SparseMatrix::from_columns(dim, cols.len(), |j| cols[j].clone())
}

/// The conjugation averaging `λ₀(x ⋊ δ_u) = |G|⁻¹ Σ_s (s·x) ⋊ δ_{s u s⁻¹}`
/// on the crossed product `B = R ⋊ G` (normalized measure). Returns the
/// crossed product and the averaging matrix; the averaging is idempotent and
/// annihilates commutators with the group-algebra image.
pub fn gj_lambda0(r: &GAlgebra) -> Result<(GAlgebra, SparseMatrix), EngineError> {
    if r.unit().is_none() {
        return Err(EngineError::NotUnital);
    }
    let b = crossed_product(r, MeasureConvention::Normalized);
    let g = r.group().clone();
    let n = g.order();
    let dim = b.dim();
    let w = q(1, n as i64);
    let mut trip: Vec<(usize, usize, Scalar)> = Vec::new();
    for i in 0..r.dim() {
        for u in 0..n {
            for s in 0..n {
                let sx = r.module().act_vec(s, &vec![(i, one())]);
                let target_u = g.conjugate(s, u);
                for (k, c) in &sx {
                    trip.push((k * n + target_u, i * n + u, c * &w));
                }
            }
        }
    }
    Ok((b, SparseMatrix::from_triplets(dim, dim, trip)))
}

/// The relative two-term complex of `B = R ⋊ G` with respect to the image
/// `H` of the group algebra: even part `B/[B,H]`, odd part the commutator
/// quotient of `ker(B⁺ ⊗_H B⁺ → B⁺)`, with boundaries induced from the
/// two-term complex of `B`. A supercomplex: the boundary squares to zero.
pub struct RelativeX {
    /// The crossed product (normalized measure).
    pub b: GAlgebra,
    /// Group-algebra image basis inside `B`.
    pub h_basis: Vec<SVec>,
    /// Even part `B/[B,H]`.
    pub x0: Subquotient,
    /// `B⁺ ⊗ B⁺` modulo the middle relations of `⊗_H`.
    pub q_h: Subquotient,
    /// Kernel of the induced multiplication, in `q_h` coordinates.
    pub k_basis: SparseMatrix,
    /// Odd part: kernel coordinates modulo commutators.
    pub x1: Subquotient,
    /// Boundary even → odd (the induced differential).
    pub d_even: SparseMatrix,
    /// Boundary odd → even (the induced Hochschild boundary).
    pub d_odd: SparseMatrix,
}

/// Product of two `B⁺` basis indices (the adjoined unit is index `dim B`),
/// expanded over `B⁺`.
fn bplus_product(b: &GAlgebra, x: usize, y: usize) -> SVec {
    let dim = b.dim();
    match (x == dim, y == dim) {
        (true, true) => vec![(dim, one())],
        (true, false) => vec![(y, one())],
        (false, true) => vec![(x, one())],
        (false, false) => b.basis_product(x, y).clone(),
    }
}

impl RelativeX {
    pub fn even_dim(&self) -> usize {
        self.x0.dim()
    }

    pub fn odd_dim(&self) -> usize {
        self.x1.dim()
    }

    /// Package as a two-term complex with trivial symmetry.
    pub fn supercomplex(&self) -> ParaComplex {
        ParaComplex {
            group: self.b.group().clone(),
            even_dims: vec![self.even_dim()],
            odd_dims: vec![self.odd_dim()],
            d_even: self.d_even.clone(),
            d_odd: self.d_odd.clone(),
            t_even: SparseMatrix::identity(self.even_dim()),
            t_odd: SparseMatrix::identity(self.odd_dim()),
            g_even: Vec::new(),
            g_odd: Vec::new(),
            og_even: Vec::new(),
            og_odd: Vec::new(),
        }
    }
}

/// Build the relative two-term complex of `R ⋊ G`; requires `R` unital.
pub fn relative_x(r: &GAlgebra) -> Result<RelativeX, EngineError> {
    let b = crossed_product(r, MeasureConvention::Normalized);
    let h_basis = group_algebra_image(r)?;
    let dim = b.dim();
    let dp = dim + 1;
    let amb = dp * dp;
    let tidx = |x: usize, y: usize| x * dp + y;
    // Middle relations (a h) ⊗ c − a ⊗ (h c) of the balanced tensor product.
    let mut rel_cols: Vec<SVec> = Vec::new();
    for a in 0..dp {
        for c in 0..dp {
            for h in &h_basis {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (hk, hc) in h {
                    for (k, v) in bplus_product(&b, a, *hk) {
                        *acc.entry(tidx(k, c)).or_insert_with(Scalar::zero) += hc * v;
                    }
                    for (k, v) in bplus_product(&b, *hk, c) {
                        *acc.entry(tidx(a, k)).or_insert_with(Scalar::zero) -= hc * v;
                    }
                }
                let col = collect_svec(acc);
                if !col.is_empty() {
                    rel_cols.push(col);
                }
            }
        }
    }
    let rel = SparseMatrix::from_columns(amb, rel_cols.len(), |j| rel_cols[j].clone());
    let q_h = quotient_by_span(amb, &rel);
    // Multiplication to B⁺, well-defined on the balanced quotient.
    let mult = SparseMatrix::from_columns(dp, amb, |col| {
        let (x, y) = (col / dp, col % dp);
        bplus_product(&b, x, y)
    });
    if !mult.mul(&rel).is_zero() {
        return Err(EngineError::NotBalanced(
            "multiplication does not factor through the balanced tensor product".into(),
        ));
    }
    let mult_q = mult.mul(&q_h.section);
    let k_basis = kernel_basis(&mult_q);
    // Factorwise bimodule action on the balanced tensor square.
    let left_mul = |e: usize| -> SparseMatrix {
        let m = SparseMatrix::from_columns(amb, amb, |col| {
            let (x, y) = (col / dp, col % dp);
            bplus_product(&b, e, x)
                .into_iter()
                .map(|(k, v)| (tidx(k, y), v))
                .collect::<Vec<_>>()
                .into_iter()
                .collect()
        });
        q_h.projection.mul(&m).mul(&q_h.section)
    };
    let right_mul = |e: usize| -> SparseMatrix {
        let m = SparseMatrix::from_columns(amb, amb, |col| {
            let (x, y) = (col / dp, col % dp);
            bplus_product(&b, y, e)
                .into_iter()
                .map(|(k, v)| (tidx(x, k), v))
                .collect()
        });
        q_h.projection.mul(&m).mul(&q_h.section)
    };
    // Commutators [ω, e] for kernel elements ω, expressed in kernel
    // coordinates.
    let mut comm_cols: Vec<SVec> = Vec::new();
    for e in 0..dim {
        let delta = right_mul(e).sub(&left_mul(e));
        let moved = delta.mul(&k_basis);
        let coords = solve(&k_basis, &moved).ok_or_else(|| {
            EngineError::IdentityViolation(
                "commutators do not preserve the multiplication kernel".into(),
            )
        })?;
        for j in 0..coords.cols() {
            let col = coords.col(j).clone();
            if !col.is_empty() {
                comm_cols.push(col);
            }
        }
    }
    let comms =
        SparseMatrix::from_columns(k_basis.cols(), comm_cols.len(), |j| comm_cols[j].clone());
    let x1 = quotient_by_span(k_basis.cols(), &comms);
    // Even part.
    let x0 = quotient_by_span(dim, &commutator_generators(&b, &h_basis));
    // Boundary even → odd: x ↦ class of 1⁺ ⊗ x − x ⊗ 1⁺.
    let d_amb = SparseMatrix::from_columns(amb, dim, |x| {
        let mut col = vec![(tidx(x, dim), -one()), (tidx(dim, x), one())];
        col.sort_by_key(|e| e.0);
        col
    });
    let d_q = q_h.projection.mul(&d_amb);
    let d_k = solve(&k_basis, &d_q).ok_or_else(|| {
        EngineError::IdentityViolation(
            "differentials do not land in the multiplication kernel".into(),
        )
    })?;
    let d_full = x1.projection.mul(&d_k);
    // Well-definedness on B/[B,H].
    let comm_b = commutator_generators(&b, &h_basis);
    if !d_full.mul(&comm_b).is_zero() {
        return Err(EngineError::IdentityViolation(
            "differential does not annihilate group-algebra commutators".into(),
        ));
    }
    let d_even = d_full.mul(&x0.section);
    // Boundary odd → even: x ⊗ y ↦ class of xy − yx in B.
    let comm_amb = SparseMatrix::from_columns(dim, amb, |col| {
        let (x, y) = (col / dp, col % dp);
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (k, v) in bplus_product(&b, x, y) {
            if k < dim {
                *acc.entry(k).or_insert_with(Scalar::zero) += v;
            }
        }
        for (k, v) in bplus_product(&b, y, x) {
            if k < dim {
                *acc.entry(k).or_insert_with(Scalar::zero) -= v;
            }
        }
        collect_svec(acc)
    });
    let hoch = x0
        .projection
        .mul(&comm_amb)
        .mul(&q_h.section)
        .mul(&k_basis);
    // Well-definedness on the commutator quotient.
    if !hoch.mul(&comms).is_zero() {
        return Err(EngineError::IdentityViolation(
            "Hochschild boundary does not annihilate commutators".into(),
        ));
    }
    let d_odd = hoch.mul(&x1.section);
    let rel_x = RelativeX {
        b,
        h_basis,
        x0,
        q_h,
        k_basis,
        x1,
        d_even,
        d_odd,
    };
    if !rel_x.d_odd.mul(&rel_x.d_even).is_zero() || !rel_x.d_even.mul(&rel_x.d_odd).is_zero() {
        return Err(EngineError::NotAComplex);
    }
    Ok(rel_x)
}

/// The coinvariant (equivalently invariant) part of the equivariant
/// two-term complex of `R`, realized by averaging: inclusion, projection,
/// and the restricted boundary, which squares to zero.
pub struct CoinvariantX {
    pub tower: ParaComplex,
    pub i_even: SparseMatrix,
    pub i_odd: SparseMatrix,
    pub p_even: SparseMatrix,
    pub p_odd: SparseMatrix,
    pub d_even: SparseMatrix,
    pub d_odd: SparseMatrix,
}

fn column_space_basis(m: &SparseMatrix) -> SparseMatrix {
    let ech = rref(&m.transpose());
    SparseMatrix::from_triplets(
        m.rows(),
        ech.rows.len(),
        ech.rows
            .iter()
            .enumerate()
            .flat_map(|(j, row)| row.iter().map(move |(i, c)| (*i, j, c.clone()))),
    )
}

/// Averaged coinvariants of the equivariant two-term complex of `R`.
pub fn coinvariant_x(r: &GAlgebra) -> Result<CoinvariantX, EngineError> {
    let space = FormSpace::new(r, 2);
    let tower = hodge_level(&space, 1)?;
    let (pe, po) = tower.invariant_projector();
    let i_even = column_space_basis(&pe);
    let i_odd = column_space_basis(&po);
    let p_even = solve(&i_even, &pe).ok_or_else(|| {
        EngineError::IdentityViolation("averaging image has no coordinates (even)".into())
    })?;
    let p_odd = solve(&i_odd, &po).ok_or_else(|| {
        EngineError::IdentityViolation("averaging image has no coordinates (odd)".into())
    })?;
    let d_even = p_odd.mul(&tower.d_even).mul(&i_even);
    let d_odd = p_even.mul(&tower.d_odd).mul(&i_odd);
    if !d_odd.mul(&d_even).is_zero() || !d_even.mul(&d_odd).is_zero() {
        return Err(EngineError::NotAComplex);
    }
    Ok(CoinvariantX {
        tower,
        i_even,
        i_odd,
        p_even,
        p_odd,
        d_even,
        d_odd,
    })
}

/// The mutually inverse chain maps between the averaged coinvariants of the
/// equivariant two-term complex of `R` and the relative complex of `R ⋊ G`,
/// together with both complexes.
pub struct GreenJulgData {
    pub relative: RelativeX,
    pub coinv: CoinvariantX,
    pub alpha_even: SparseMatrix,
    pub alpha_odd: SparseMatrix,
    pub beta_even: SparseMatrix,
    pub beta_odd: SparseMatrix,
}

/// Construct and fully verify the crossed-product comparison for `R`:
/// `α` and `β` are chain maps with `αβ = id` and `βα = id`.
pub fn green_julg(r: &GAlgebra) -> Result<GreenJulgData, EngineError> {
    let relative = relative_x(r)?;
    let coinv = coinvariant_x(r)?;
    let b = &relative.b;
    let g = r.group().clone();
    let n = g.order();
    let dim = b.dim();
    let dp = dim + 1;
    let tidx = |x: usize, y: usize| x * dp + y;
    let space = FormSpace::new(r, 2);
    let shape = TowerShape::new(&space, 1)?;
    let unit_r = space.calc().unit();
    // α in degree 0: δ_w ⊗ x ↦ x ⋊ δ_w.
    let a0 = SparseMatrix::from_columns(dim, space.dim(0), |col| {
        let (w, word) = space.decode(0, col);
        vec![(word[0] * n + w, one())]
    });
    // α in degree 1 into the ambient tensor square, written with
    // `u d v = u ⊗ v − uv ⊗ 1⁺`:
    // δ_w ⊗ x dy ↦ Σ_s (x ⋊ δ_s) d((s⁻¹·y) ⋊ δ_{s⁻¹w}), and for the adjoined
    // unit δ_w ⊗ d y ↦ d(y ⋊ δ_w).
    let a1 = SparseMatrix::from_columns(dp * dp, space.dim(1), |col| {
        let (w, word) = space.decode(1, col);
        let (x0, x1) = (word[0], word[1]);
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        let mut add_d = |u: &SVec, v: &SVec| {
            // u ⊗ v − (u v) ⊗ 1⁺ for u, v ∈ B.
            for (ui, uc) in u {
                for (vi, vc) in v {
                    *acc.entry(tidx(*ui, *vi)).or_insert_with(Scalar::zero) += uc * vc;
                }
            }
            for (k, c) in b.product(u, v) {
                *acc.entry(tidx(k, dim)).or_insert_with(Scalar::zero) -= c;
            }
        };
        if x0 == unit_r {
            // 1⁺ ⊗ v − v ⊗ 1⁺.
            *acc.entry(tidx(dim, x1 * n + w)).or_insert_with(Scalar::zero) += one();
            *acc.entry(tidx(x1 * n + w, dim)).or_insert_with(Scalar::zero) -= one();
        } else {
            for s in 0..n {
                let sinv = g.inverse(s);
                let u: SVec = vec![(x0 * n + s, one())];
                let y_moved = r.module().act_vec(sinv, &vec![(x1, one())]);
                let t = g.mul(sinv, w);
                let v: SVec = y_moved.iter().map(|(k, c)| (k * n + t, c.clone())).collect();
                add_d(&u, &v);
            }
        }
        collect_svec(acc)
    });
    // Push α₁ into the odd part of the relative complex.
    let a1_q = relative.q_h.projection.mul(&a1);
    let a1_k = solve(&relative.k_basis, &a1_q).ok_or_else(|| {
        EngineError::IdentityViolation(
            "comparison map does not land in the multiplication kernel".into(),
        )
    })?;
    let a1_full = relative.x1.projection.mul(&a1_k);
    // Well-definedness on the odd quotient of the source tower.
    if let Some(b2) = space.op_b().comp(2, 1) {
        if !a1_full.mul(b2).is_zero() {
            return Err(EngineError::IdentityViolation(
                "comparison map does not annihilate boundary classes".into(),
            ));
        }
    }
    let alpha_even = relative.x0.projection.mul(&a0).mul(&coinv.i_even);
    let alpha_odd = a1_full.mul(&shape.top.section).mul(&coinv.i_odd);
    // β in degree 0: x ⋊ δ_w ↦ δ_w ⊗ x.
    let b0 = SparseMatrix::from_columns(space.dim(0), dim, |col| {
        let (x, w) = (col / n, col % n);
        vec![(space.encode(0, w, &[x]), one())]
    });
    // β in degree 1 on the ambient tensor square, reading `u ⊗ v` as
    // `u d v` (the adjoined unit in the second slot contributes nothing):
    // (x ⋊ δ_u) d(y ⋊ δ_v) ↦ [u = v] δ_u ⊗ x d(u·y), and
    // 1⁺ d(y ⋊ δ_v) ↦ δ_v ⊗ d y.
    let b1 = SparseMatrix::from_columns(space.dim(1), dp * dp, |col| {
        let (p, qq) = (col / dp, col % dp);
        if qq == dim {
            return Vec::new();
        }
        let (y, v) = (qq / n, qq % n);
        if p == dim {
            return vec![(space.encode(1, v, &[unit_r, y]), one())];
        }
        let (x, u) = (p / n, p % n);
        if u != v {
            return Vec::new();
        }
        let moved = r.module().act_vec(u, &vec![(y, one())]);
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (k, c) in moved {
            *out.entry(space.encode(1, u, &[x, k]))
                .or_insert_with(Scalar::zero) += c;
        }
        collect_svec(out)
    });
    let beta_even = coinv
        .p_even
        .mul(&b0)
        .mul(&relative.x0.section);
    let beta_odd_full = coinv
        .p_odd
        .mul(&shape.top.projection)
        .mul(&b1)
        .mul(&relative.q_h.section)
        .mul(&relative.k_basis);
    let beta_odd = beta_odd_full.mul(&relative.x1.section);
    let data = GreenJulgData {
        relative,
        coinv,
        alpha_even,
        alpha_odd,
        beta_even,
        beta_odd,
    };
    // Chain maps.
    if data.alpha_odd.mul(&data.coinv.d_even) != data.relative.d_even.mul(&data.alpha_even)
        || data.alpha_even.mul(&data.coinv.d_odd) != data.relative.d_odd.mul(&data.alpha_odd)
    {
        return Err(EngineError::IdentityViolation(
            "comparison map is not a chain map".into(),
        ));
    }
    if data.beta_odd.mul(&data.relative.d_even) != data.coinv.d_even.mul(&data.beta_even)
        || data.beta_even.mul(&data.relative.d_odd) != data.coinv.d_odd.mul(&data.beta_odd)
    {
        return Err(EngineError::IdentityViolation(
            "inverse comparison map is not a chain map".into(),
        ));
    }
    // Mutually inverse.
    let ide = SparseMatrix::identity(data.relative.even_dim());
    let ido = SparseMatrix::identity(data.relative.odd_dim());
    if data.alpha_even.mul(&data.beta_even) != ide || data.alpha_odd.mul(&data.beta_odd) != ido {
        return Err(EngineError::IdentityViolation(
            "comparison composite on the crossed-product side is not the identity".into(),
        ));
    }
    let idce = SparseMatrix::identity(data.coinv.i_even.cols());
    let idco = SparseMatrix::identity(data.coinv.i_odd.cols());
    if data.beta_even.mul(&data.alpha_even) != idce
        || data.beta_odd.mul(&data.alpha_odd) != idco
    {
        return Err(EngineError::IdentityViolation(
            "comparison composite on the equivariant side is not the identity".into(),
        ));
    }
    Ok(data)
}

/// The contraction of the kernel complex `K = ker(X(B) → X(B)_H)`: the odd
/// boundary restricts to an isomorphism `K¹ → K⁰ = [B, H]` whose inverse is
/// `x ↦ class(x ⊗ 1)`.
pub struct KContraction {
    /// Basis of `K⁰ = [B, H]` inside `B`.
    pub k0: SparseMatrix,
    /// Basis of `K¹` inside the odd part of `X(B)`.
    pub k1: SparseMatrix,
    /// The restricted boundary `K¹ → K⁰` in the kernel bases.
    pub boundary: SparseMatrix,
    /// The contraction `K⁰ → K¹` in the kernel bases.
    pub alpha: SparseMatrix,
}

/// Build and verify the kernel contraction; `b ∘ α = id` and `α ∘ b = id`.
pub fn k_contraction(r: &GAlgebra) -> Result<KContraction, EngineError> {
    let relative = relative_x(r)?;
    let b = &relative.b;
    let dim = b.dim();
    let dp = dim + 1;
    let tidx = |x: usize, y: usize| x * dp + y;
    let amb = dp * dp;
    // Absolute odd part: ker(mult: B⁺ ⊗ B⁺ → B⁺) modulo commutators.
    let mult = SparseMatrix::from_columns(dp, amb, |col| {
        let (x, y) = (col / dp, col % dp);
        bplus_product(b, x, y)
    });
    let w_basis = kernel_basis(&mult);
    let mut comm_cols: Vec<SVec> = Vec::new();
    for e in 0..dim {
        let delta = SparseMatrix::from_columns(amb, amb, |col| {
            let (x, y) = (col / dp, col % dp);
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, v) in bplus_product(b, y, e) {
                *acc.entry(tidx(x, k)).or_insert_with(Scalar::zero) += v;
            }
            for (k, v) in bplus_product(b, e, x) {
                *acc.entry(tidx(k, y)).or_insert_with(Scalar::zero) -= v;
            }
            collect_svec(acc)
        });
        let moved = delta.mul(&w_basis);
        let coords = solve(&w_basis, &moved).ok_or_else(|| {
            EngineError::IdentityViolation(
                "commutators do not preserve the multiplication kernel".into(),
            )
        })?;
        for j in 0..coords.cols() {
            let col = coords.col(j).clone();
            if !col.is_empty() {
                comm_cols.push(col);
            }
        }
    }
    let comms =
        SparseMatrix::from_columns(w_basis.cols(), comm_cols.len(), |j| comm_cols[j].clone());
    let x1_abs = quotient_by_span(w_basis.cols(), &comms);
    // Projection to the relative odd part.
    let to_rel_full = relative
        .q_h
        .projection
        .mul(&w_basis);
    let to_rel_k = solve(&relative.k_basis, &to_rel_full).ok_or_else(|| {
        EngineError::IdentityViolation(
            "absolute kernel does not map to the relative kernel".into(),
        )
    })?;
    let odd_proj = relative.x1.projection.mul(&to_rel_k).mul(&x1_abs.section);
    let even_proj = relative.x0.projection;
    // Kernels of the projections.
    let k0 = kernel_basis(&even_proj);
    let k1 = kernel_basis(&odd_proj);
    // Hochschild boundary on the absolute odd part, restricted to K.
    let comm_amb = SparseMatrix::from_columns(dim, amb, |col| {
        let (x, y) = (col / dp, col % dp);
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (k, v) in bplus_product(b, x, y) {
            if k < dim {
                *acc.entry(k).or_insert_with(Scalar::zero) += v;
            }
        }
        for (k, v) in bplus_product(b, y, x) {
            if k < dim {
                *acc.entry(k).or_insert_with(Scalar::zero) -= v;
            }
        }
        collect_svec(acc)
    });
    let hoch_abs = comm_amb.mul(&w_basis).mul(&x1_abs.section);
    let boundary_on_k1 = hoch_abs.mul(&k1);
    let boundary = solve(&k0, &boundary_on_k1).ok_or_else(|| {
        EngineError::IdentityViolation(
            "restricted boundary does not land in the even kernel".into(),
        )
    })?;
    // The contraction x ↦ class(x ⊗ 1): decompose x over commutator
    // generators [e, h] and use [e, h] ↦ e ⊗ h − (e h) ⊗ 1⁺.
    let gens = commutator_generators(b, &relative.h_basis);
    let h_count = relative.h_basis.len();
    let decomp = solve(&gens, &k0).ok_or_else(|| {
        EngineError::IdentityViolation(
            "even kernel is not spanned by group-algebra commutators".into(),
        )
    })?;
    let gen_images = SparseMatrix::from_columns(amb, gens.cols(), |col| {
        let (e, hj) = (col / h_count, col % h_count);
        let h = &relative.h_basis[hj];
        let ev: SVec = vec![(e, one())];
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (hk, hc) in h {
            *acc.entry(tidx(e, *hk)).or_insert_with(Scalar::zero) += hc.clone();
        }
        for (k, v) in b.product(&ev, h) {
            *acc.entry(tidx(k, dim)).or_insert_with(Scalar::zero) -= v;
        }
        collect_svec(acc)
    });
    let alpha_amb = gen_images.mul(&decomp);
    let alpha_w = solve(&w_basis, &alpha_amb).ok_or_else(|| {
        EngineError::IdentityViolation(
            "contraction image is not in the multiplication kernel".into(),
        )
    })?;
    let alpha_x1 = x1_abs.projection.mul(&alpha_w);
    let alpha = solve(&k1, &alpha_x1).ok_or_else(|| {
        EngineError::IdentityViolation("contraction image is not in the odd kernel".into())
    })?;
    let kc = KContraction {
        k0,
        k1,
        boundary,
        alpha,
    };
    if kc.boundary.mul(&kc.alpha) != SparseMatrix::identity(kc.k0.cols()) {
        return Err(EngineError::IdentityViolation(
            "boundary ∘ contraction is not the identity on the even kernel".into(),
        ));
    }
    if kc.alpha.mul(&kc.boundary) != SparseMatrix::identity(kc.k1.cols()) {
        return Err(EngineError::IdentityViolation(
            "contraction ∘ boundary is not the identity on the odd kernel".into(),
        ));
    }
    Ok(kc)
}

/// Rank bookkeeping for the averaging: its rank plus the dimension of the
/// commutator span recovers the dimension of the crossed product.
pub fn lambda0_rank_split(r: &GAlgebra) -> Result<(usize, usize, usize), EngineError> {
    let (b, lam) = gj_lambda0(r)?;
    let h_basis = group_algebra_image(r)?;
    let comms = commutator_generators(&b, &h_basis);
    if !lam.mul(&comms).is_zero() {
        return Err(EngineError::IdentityViolation(
            "averaging does not annihilate group-algebra commutators".into(),
        ));
    }
    if lam.mul(&lam) != lam {
        return Err(EngineError::IdentityViolation(
            "averaging is not idempotent".into(),
        ));
    }
    Ok((rank(&lam), rank(&comms), b.dim()))
}
