//! Polynomial homotopies between equivariant algebras, the integral
//! contraction `η` they induce on forms, the comparison of their endpoint
//! maps at the level of two-term complexes, and the retraction of the form
//! tower produced by a graded connection.

use crate::algebra::GAlgebra;
use crate::error::EngineError;
use crate::forms::{FormSpace, TowerOp, Word, WordVec};
use crate::linalg::{axpy, collect_svec, rref, solve, SparseMatrix, SVec};
use crate::para::{cross_block_matrix, hodge_level, TowerShape};
use crate::scalar::{one, q, Scalar};
use num::traits::Zero;
use std::collections::BTreeMap;

/// An algebra map `Φ: A → B ⊗ span{1, t, …, t^D}` whose evaluations `Φ_t`
/// are equivariant homomorphisms for every parameter value `t`; the
/// coefficient of `t^k` is a linear map `A → B`.
#[derive(Debug, Clone)]
pub struct PolynomialHomotopy {
    source: GAlgebra,
    target: GAlgebra,
    /// `coeffs[k]` is the `dim B × dim A` matrix of the `t^k` coefficient.
    coeffs: Vec<SparseMatrix>,
}

impl PolynomialHomotopy {
    /// Validate and build: the groups must agree, every coefficient must be
    /// equivariant, and the convolution identity
    /// `Σ_{i+j=k} Φ_i(x) Φ_j(y) = Φ_k(xy)` must hold for `k ≤ D` with the
    /// left side vanishing for `D < k ≤ 2D`.
    pub fn new(
        source: GAlgebra,
        target: GAlgebra,
        coeffs: Vec<SparseMatrix>,
    ) -> Result<Self, EngineError> {
        if source.group().as_ref() != target.group().as_ref() {
            return Err(EngineError::GroupMismatch(
                "homotopy endpoints over different groups".into(),
            ));
        }
        if coeffs.is_empty() {
            return Err(EngineError::ShapeMismatch("no coefficient maps".into()));
        }
        let (da, db) = (source.dim(), target.dim());
        for m in &coeffs {
            if m.rows() != db || m.cols() != da {
                return Err(EngineError::ShapeMismatch(
                    "coefficient map has wrong dimensions".into(),
                ));
            }
        }
        let h = PolynomialHomotopy {
            source,
            target,
            coeffs,
        };
        let g = h.source.group().clone();
        for s in 0..g.order() {
            for m in &h.coeffs {
                let lhs = m.mul(h.source.module().act(s));
                let rhs = h.target.module().act(s).mul(m);
                if lhs != rhs {
                    return Err(EngineError::IdentityViolation(format!(
                        "coefficient map is not equivariant at group element {s}"
                    )));
                }
            }
        }
        let deg = h.coeffs.len() - 1;
        for x in 0..da {
            for y in 0..da {
                let xy = h.source.basis_product(x, y);
                for k in 0..=2 * deg {
                    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                    for i in 0..=k.min(deg) {
                        let j = k - i;
                        if j > deg {
                            continue;
                        }
                        let prod = h
                            .target
                            .product(h.coeffs[i].col(x), h.coeffs[j].col(y));
                        axpy(&mut acc, &one(), &prod);
                    }
                    let lhs = collect_svec(acc);
                    let rhs = if k <= deg {
                        let mut acc = BTreeMap::new();
                        for (m, c) in xy {
                            axpy(&mut acc, c, h.coeffs[k].col(*m));
                        }
                        collect_svec(acc)
                    } else {
                        Vec::new()
                    };
                    if lhs != rhs {
                        return Err(EngineError::IdentityViolation(format!(
                            "homotopy is not multiplicative at basis pair ({x}, {y}), \
                             parameter power {k}"
                        )));
                    }
                }
            }
        }
        for at_one in [false, true] {
            let e = h.endpoint(at_one);
            for x in 0..da {
                for y in 0..da {
                    let lhs = h.target.product(e.col(x), e.col(y));
                    let mut acc = BTreeMap::new();
                    for (m, c) in h.source.basis_product(x, y) {
                        axpy(&mut acc, c, e.col(*m));
                    }
                    if lhs != collect_svec(acc) {
                        return Err(EngineError::IdentityViolation(
                            "endpoint evaluation is not a homomorphism".into(),
                        ));
                    }
                }
            }
        }
        Ok(h)
    }

    /// The parameter-independent homotopy with value the given homomorphism.
    pub fn constant(
        source: GAlgebra,
        target: GAlgebra,
        hom: SparseMatrix,
    ) -> Result<Self, EngineError> {
        PolynomialHomotopy::new(source, target, vec![hom])
    }

    pub fn source(&self) -> &GAlgebra {
        &self.source
    }

    pub fn target(&self) -> &GAlgebra {
        &self.target
    }

    /// Degree bound `D` of the parameter polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluation at `t = 0` (`at_one = false`) or `t = 1` (`at_one = true`).
    pub fn endpoint(&self, at_one: bool) -> SparseMatrix {
        if !at_one {
            return self.coeffs[0].clone();
        }
        let mut acc = SparseMatrix::zero(self.target.dim(), self.source.dim());
        for m in &self.coeffs {
            acc = acc.add(m);
        }
        acc
    }

    /// Precompose the parameter with `t ↦ t^k` (`k ≥ 1`); endpoints are
    /// unchanged.
    pub fn reparametrize(&self, k: usize) -> Self {
        assert!(k >= 1);
        let deg = self.degree();
        let (da, db) = (self.source.dim(), self.target.dim());
        let mut coeffs = vec![SparseMatrix::zero(db, da); deg * k + 1];
        for (j, m) in self.coeffs.iter().enumerate() {
            coeffs[j * k] = coeffs[j * k].add(m);
        }
        PolynomialHomotopy {
            source: self.source.clone(),
            target: self.target.clone(),
            coeffs,
        }
    }

    /// Coefficients of `Φ_t(e_x)` as a polynomial in `t` with values in `B`,
    /// with the source index allowed to be the adjoined unit (mapped to the
    /// adjoined unit of the target, constantly).
    fn value_poly(&self, unit_b: usize, x: usize) -> Vec<SVec> {
        if x == self.source.dim() {
            return vec![vec![(unit_b, one())]];
        }
        self.coeffs.iter().map(|m| m.col(x).clone()).collect()
    }

    /// Coefficients of the parameter derivative `Φ′_t(e_x)` (values in `B`).
    fn derivative_poly(&self, x: usize) -> Vec<SVec> {
        (1..self.coeffs.len())
            .map(|k| {
                self.coeffs[k]
                    .col(x)
                    .iter()
                    .map(|(i, c)| (*i, c * q(k as i64, 1)))
                    .collect()
            })
            .collect()
    }
}

/// The word-level map of forms induced by an algebra homomorphism:
/// `f(s) ⊗ x₀ dx₁ ⋯ dxₙ ↦ f(s) ⊗ φ(x₀) dφ(x₁) ⋯ dφ(xₙ)` with the adjoined
/// unit sent to the adjoined unit. Components `(n, n)` for every degree both
/// spaces support.
pub fn form_hom(
    hom: &SparseMatrix,
    src_space: &FormSpace,
    dst_space: &FormSpace,
) -> TowerOp {
    let level = src_space.level().min(dst_space.level());
    let calc_a = src_space.calc();
    let calc_b = dst_space.calc();
    let unit_b = calc_b.unit();
    let mut op = TowerOp::empty(src_space.level());
    for n in 0..=level {
        let m = SparseMatrix::from_columns(dst_space.dim(n), src_space.dim(n), |col| {
            let (s, w) = src_space.decode(n, col);
            // Expand the image letter by letter.
            let mut acc: Vec<(Word, Scalar)> = vec![(Vec::with_capacity(w.len()), one())];
            for (pos, &l) in w.iter().enumerate() {
                let img: SVec = if pos == 0 && n > 0 && l == calc_a.unit() {
                    vec![(unit_b, one())]
                } else {
                    hom.col(l).clone()
                };
                let mut next = Vec::with_capacity(acc.len() * img.len());
                for (prefix, c) in &acc {
                    for (k, v) in &img {
                        let mut nw = prefix.clone();
                        nw.push(*k);
                        next.push((nw, c * v));
                    }
                }
                acc = next;
            }
            let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (word, c) in acc {
                *out.entry(dst_space.encode(n, s, &word))
                    .or_insert_with(Scalar::zero) += c;
            }
            collect_svec(out)
        });
        op.insert(n, n, m);
    }
    for n in 0..=src_space.level() {
        op.valid.insert(n);
    }
    op
}

/// The integral contraction of a polynomial homotopy on equivariant forms:
///
/// `η(f(s) ⊗ x₀ dx₁ ⋯ dxₙ) = ∫₀¹ f(s) ⊗ Φ_t(x₀) Φ′_t(x₁) dΦ_t(x₂) ⋯ dΦ_t(xₙ) dt`
///
/// with `η = 0` in degree 0 and monomials integrated exactly via
/// `t^k ↦ 1/(k+1)`. Components `(n, n−1)`; satisfies `η b = − b η`.
pub fn cartan_eta(
    phi: &PolynomialHomotopy,
    src_space: &FormSpace,
    dst_space: &FormSpace,
) -> TowerOp {
    let calc_b = dst_space.calc();
    let unit_b = calc_b.unit();
    let mut op = TowerOp::empty(src_space.level());
    let top = src_space.level().min(dst_space.level() + 1);
    for n in 1..=top {
        let m = SparseMatrix::from_columns(dst_space.dim(n - 1), src_space.dim(n), |col| {
            let (s, w) = src_space.decode(n, col);
            let p0 = phi.value_poly(unit_b, w[0]);
            let p1 = phi.derivative_poly(w[1]);
            // Φ_t(x₀) · Φ′_t(x₁): a polynomial with degree-0 word values.
            let max_pow = p0.len() + p1.len();
            let mut acc: Vec<WordVec> = vec![Vec::new(); max_pow.max(1)];
            for (i, ci) in p0.iter().enumerate() {
                for (j, cj) in p1.iter().enumerate() {
                    for (bi, vi) in ci {
                        for (bj, vj) in cj {
                            for (word, v) in calc_b.leftmul(*bi, &[*bj]) {
                                acc[i + j].push((word, v * vi * vj));
                            }
                        }
                    }
                }
            }
            // Append dΦ_t(x_m) for the remaining letters.
            for &l in &w[2..] {
                let pm: Vec<&SVec> = phi.coeffs.iter().map(|m| m.col(l)).collect();
                let mut next: Vec<WordVec> = vec![Vec::new(); acc.len() + pm.len()];
                for (i, terms) in acc.iter().enumerate() {
                    for (word, c) in terms {
                        for (j, cj) in pm.iter().enumerate() {
                            for (bj, vj) in cj.iter() {
                                let mut nw = word.clone();
                                nw.push(*bj);
                                next[i + j].push((nw, c * vj));
                            }
                        }
                    }
                }
                acc = next;
            }
            // Integrate over the parameter and encode.
            let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, terms) in acc.iter().enumerate() {
                let frac = q(1, k as i64 + 1);
                for (word, c) in terms {
                    *out.entry(dst_space.encode(n - 1, s, word))
                        .or_insert_with(Scalar::zero) += c * &frac;
                }
            }
            collect_svec(out)
        });
        op.insert(n, n - 1, m);
    }
    for n in 0..=src_space.level() {
        op.valid.insert(n);
    }
    op
}

/// Verify, as exact matrices on the two-stage truncated tower of the source,
/// that the endpoint maps of a polynomial homotopy differ by the boundary
/// bracket of the integral contraction:
/// `X(Φ₁) ξ² − X(Φ₀) ξ² = ∂ η + η ∂`, where `ξ²` collapses the two-stage
/// tower onto the two-term complex.
pub fn xi2_and_homotopy_check(phi: &PolynomialHomotopy) -> Result<(), EngineError> {
    let space_a = FormSpace::new(phi.source(), 3);
    let space_b = FormSpace::new(phi.target(), 2);
    let shape_a = TowerShape::new(&space_a, 2)?;
    let shape_b = TowerShape::new(&space_b, 1)?;
    let pc_a = hodge_level(&space_a, 2)?;
    let pc_b = hodge_level(&space_b, 1)?;
    let eta = cartan_eta(phi, &space_a, &space_b);
    let evens_a = shape_a.even_degrees();
    let odds_a = shape_a.odd_degrees();
    let evens_b = shape_b.even_degrees();
    let odds_b = shape_b.odd_degrees();
    let assemble = |op: &TowerOp| {
        (
            cross_block_matrix(&shape_a, &shape_b, op, &evens_a, &evens_b),
            cross_block_matrix(&shape_a, &shape_b, op, &odds_a, &odds_b),
        )
    };
    let (f0_even, f0_odd) = assemble(&form_hom(&phi.endpoint(false), &space_a, &space_b));
    let (f1_even, f1_odd) = assemble(&form_hom(&phi.endpoint(true), &space_a, &space_b));
    let eta_eo = cross_block_matrix(&shape_a, &shape_b, &eta, &evens_a, &odds_b);
    let eta_oe = cross_block_matrix(&shape_a, &shape_b, &eta, &odds_a, &evens_b);
    let lhs_even = f1_even.sub(&f0_even);
    let lhs_odd = f1_odd.sub(&f0_odd);
    let rhs_even = pc_b.d_odd.mul(&eta_eo).add(&eta_oe.mul(&pc_a.d_even));
    let rhs_odd = pc_b.d_even.mul(&eta_oe).add(&eta_eo.mul(&pc_a.d_odd));
    if lhs_even != rhs_even {
        return Err(EngineError::IdentityViolation(
            "endpoint difference is not the boundary bracket of the contraction (even part)"
                .into(),
        ));
    }
    if lhs_odd != rhs_odd {
        return Err(EngineError::IdentityViolation(
            "endpoint difference is not the boundary bracket of the contraction (odd part)"
                .into(),
        ));
    }
    Ok(())
}

/// A two-sided retraction of ℤ/2-graded spaces relative to a parity-swapping
/// boundary `b`: `p i = id`, `i p − id = b h + h b`, and `i p` commutes with
/// `b` (so `i` and `p` are chain maps onto the retract).
#[derive(Debug, Clone)]
pub struct Retraction {
    /// Boundary even → odd on the ambient space.
    pub b_even: SparseMatrix,
    /// Boundary odd → even.
    pub b_odd: SparseMatrix,
    /// Inclusion of the retract, even part.
    pub i_even: SparseMatrix,
    pub i_odd: SparseMatrix,
    /// Projection onto the retract, even part.
    pub p_even: SparseMatrix,
    pub p_odd: SparseMatrix,
    /// Contracting homotopy, even ambient → odd ambient.
    pub h_even: SparseMatrix,
    pub h_odd: SparseMatrix,
}

impl Retraction {
    pub fn ambient_even(&self) -> usize {
        self.b_even.cols()
    }

    pub fn ambient_odd(&self) -> usize {
        self.b_odd.cols()
    }

    pub fn sub_even(&self) -> usize {
        self.i_even.cols()
    }

    pub fn sub_odd(&self) -> usize {
        self.i_odd.cols()
    }

    /// Verify the retraction contract exactly.
    pub fn validate(&self) -> Result<(), EngineError> {
        let (ne, no) = (self.ambient_even(), self.ambient_odd());
        if self.p_even.mul(&self.i_even) != SparseMatrix::identity(self.sub_even())
            || self.p_odd.mul(&self.i_odd) != SparseMatrix::identity(self.sub_odd())
        {
            return Err(EngineError::ContractViolation(
                "projection ∘ inclusion is not the identity".into(),
            ));
        }
        let e_even = self.i_even.mul(&self.p_even);
        let e_odd = self.i_odd.mul(&self.p_odd);
        let lhs_even = e_even.sub(&SparseMatrix::identity(ne));
        let lhs_odd = e_odd.sub(&SparseMatrix::identity(no));
        let rhs_even = self.b_odd.mul(&self.h_even).add(&self.h_odd.mul(&self.b_even));
        let rhs_odd = self.b_even.mul(&self.h_odd).add(&self.h_even.mul(&self.b_odd));
        if lhs_even != rhs_even || lhs_odd != rhs_odd {
            return Err(EngineError::ContractViolation(
                "inclusion ∘ projection − id is not the boundary bracket of the homotopy"
                    .into(),
            ));
        }
        if self.b_even.mul(&e_even) != e_odd.mul(&self.b_even)
            || self.b_odd.mul(&e_odd) != e_even.mul(&self.b_odd)
        {
            return Err(EngineError::ContractViolation(
                "retract idempotent does not commute with the boundary".into(),
            ));
        }
        Ok(())
    }
}

/// The extension of a degree-`n` graded connection to all higher degrees as
/// a tower operator with components `(j, j+1)`:
/// `∇(a₀ da₁ ⋯ da_m) = ∇(a₀ da₁ ⋯ da_n) da_{n+1} ⋯ da_m`, zero below
/// degree `n`.
pub fn connection_tower(space: &FormSpace, nabla: &SparseMatrix, n: usize) -> TowerOp {
    let calc = space.calc();
    let mut op = TowerOp::empty(space.level());
    for j in n..space.level() {
        let m = SparseMatrix::from_columns(space.dim(j + 1), space.dim(j), |col| {
            let (s, w) = space.decode(j, col);
            let prefix = calc.encode_word(n, &w[..=n]);
            let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (r, c) in nabla.col(prefix) {
                let mut nw = calc.decode_word(n + 1, *r);
                nw.extend_from_slice(&w[n + 1..]);
                *out.entry(space.encode(j + 1, s, &nw))
                    .or_insert_with(Scalar::zero) += c.clone();
            }
            collect_svec(out)
        });
        op.insert(j, j + 1, m);
    }
    for j in 0..=space.level() {
        op.valid.insert(j);
    }
    op
}

/// Degreewise properties of the boundary bracket `[b, ∇] = b∇ + ∇b` of an
/// extended connection: idempotent, zero below degree `n`, the identity
/// above degree `n`, and the identity on the `b`-image inside degree `n`
/// (all checked on degrees where composition stays inside the truncation).
pub fn connection_bracket_checks(
    space: &FormSpace,
    nabla_op: &TowerOp,
    n: usize,
) -> Result<(), EngineError> {
    let b = space.op_b();
    let bracket = b.compose(nabla_op).add(&nabla_op.compose(&b));
    let lmax = space.level() - 1;
    let degs: Vec<usize> = (0..=lmax).collect();
    let sq = bracket.compose(&bracket);
    let interior: Vec<usize> = (0..lmax).collect();
    sq.equal_on(&bracket, &interior)?;
    if n > 0 {
        let below: Vec<usize> = (0..n).collect();
        if !bracket.is_zero_on(&below) {
            return Err(EngineError::IdentityViolation(
                "boundary bracket of the connection is nonzero below its degree".into(),
            ));
        }
    }
    let id = TowerOp::identity(space);
    let above: Vec<usize> = (n + 1..=lmax).collect();
    bracket.equal_on(&id, &above)?;
    // On the b-image inside degree n the bracket is the identity.
    if let (Some(br), Some(bm)) = (bracket.comp(n, n), b.comp(n + 1, n)) {
        if br.mul(bm) != *bm {
            return Err(EngineError::IdentityViolation(
                "boundary bracket is not the identity on boundaries at its own degree"
                    .into(),
            ));
        }
    }
    let _ = degs;
    Ok(())
}

/// Column-space basis of a matrix.
fn image_basis(m: &SparseMatrix) -> SparseMatrix {
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

/// The retraction of the level-`level` truncated form tower induced by a
/// degree-`n` graded connection: the homotopy is `−∇` (extended, truncated
/// at the top), the retract is the image of `id − [b, ∇]`, i.e. the tower of
/// level `n` sitting inside the larger one.
pub fn nabla_retraction(
    space: &FormSpace,
    nabla: &SparseMatrix,
    n: usize,
    level: usize,
) -> Result<Retraction, EngineError> {
    assert!(n >= 1 && level >= n + 1);
    let shape = TowerShape::new(space, level)?;
    let nabla_op = connection_tower(space, nabla, n);
    connection_bracket_checks(space, &nabla_op, n)?;
    let evens = shape.even_degrees();
    let odds = shape.odd_degrees();
    let b = space.op_b();
    let b_even = shape.block_matrix(&b, &evens, &odds);
    let b_odd = shape.block_matrix(&b, &odds, &evens);
    let h_even = shape.block_matrix(&nabla_op, &evens, &odds).neg();
    let h_odd = shape.block_matrix(&nabla_op, &odds, &evens).neg();
    let e_even = SparseMatrix::identity(b_even.cols())
        .add(&b_odd.mul(&h_even))
        .add(&h_odd.mul(&b_even));
    let e_odd = SparseMatrix::identity(b_odd.cols())
        .add(&b_even.mul(&h_odd))
        .add(&h_even.mul(&b_odd));
    if e_even.mul(&e_even) != e_even || e_odd.mul(&e_odd) != e_odd {
        return Err(EngineError::ContractViolation(
            "retract operator is not idempotent on the truncated tower".into(),
        ));
    }
    let i_even = image_basis(&e_even);
    let i_odd = image_basis(&e_odd);
    let p_even = solve(&i_even, &e_even).ok_or_else(|| {
        EngineError::ContractViolation("no projection onto the even retract".into())
    })?;
    let p_odd = solve(&i_odd, &e_odd).ok_or_else(|| {
        EngineError::ContractViolation("no projection onto the odd retract".into())
    })?;
    let r = Retraction {
        b_even,
        b_odd,
        i_even,
        i_odd,
        p_even,
        p_odd,
        h_even,
        h_odd,
    };
    r.validate()?;
    Ok(r)
}
