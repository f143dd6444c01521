//! The tensor product of paracomplexes over the function algebra on the
//! group, and the homological perturbation toolkit: special deformation
//! retractions and the geometric-series transfer of a degree-raising
//! boundary across a retraction.

use crate::error::EngineError;
use crate::homotopy::Retraction;
use crate::linalg::{collect_svec, SparseMatrix, SVec};
use crate::para::ParaComplex;
use crate::scalar::{one, Scalar};
use num::traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::group::FiniteGroup;

// ---------------------------------------------------------------------------
// Tensor product of paracomplexes over the function algebra
// ---------------------------------------------------------------------------

/// Extract the block index (the group element `r` with `og_r e = e`) for
/// each basis vector; requires the function-algebra action to be diagonal
/// with 0/1 entries (a free, coordinate-aligned module structure).
fn diagonal_blocks(og: &[SparseMatrix], dim: usize) -> Result<Vec<usize>, EngineError> {
    if og.is_empty() {
        if dim == 0 {
            return Ok(Vec::new());
        }
        return Err(EngineError::NotBalanced(
            "factor carries no function-algebra action".into(),
        ));
    }
    let mut blocks = vec![usize::MAX; dim];
    for (r, m) in og.iter().enumerate() {
        for (i, j, v) in m.entries() {
            if i != j || v != &one() {
                return Err(EngineError::NotBalanced(
                    "function-algebra action is not a coordinate selection".into(),
                ));
            }
            if blocks[j] != usize::MAX {
                return Err(EngineError::NotBalanced(
                    "basis vector lies in two blocks".into(),
                ));
            }
            blocks[j] = r;
        }
    }
    if blocks.iter().any(|&b| b == usize::MAX) {
        return Err(EngineError::NotBalanced(
            "function-algebra action does not cover the space".into(),
        ));
    }
    Ok(blocks)
}

/// A balanced tensor summand: pairs of basis indices lying in the same
/// function-algebra block.
struct Aligned {
    pairs: Vec<(usize, usize)>,
    pos: BTreeMap<(usize, usize), usize>,
    blocks: Vec<usize>,
}

fn align(bc: &[usize], bd: &[usize]) -> Aligned {
    let mut pairs = Vec::new();
    let mut blocks = Vec::new();
    for (u, &ru) in bc.iter().enumerate() {
        for (v, &rv) in bd.iter().enumerate() {
            if ru == rv {
                pairs.push((u, v));
                blocks.push(ru);
            }
        }
    }
    let pos = pairs
        .iter()
        .enumerate()
        .map(|(k, &p)| (p, k))
        .collect();
    Aligned { pairs, pos, blocks }
}

/// The restriction of `mc ⊗ md` to aligned bases; errors if the image
/// leaks outside the aligned pairs.
fn tensor_restrict(
    mc: &SparseMatrix,
    md: &SparseMatrix,
    src: &Aligned,
    dst: &Aligned,
) -> Result<SparseMatrix, EngineError> {
    let cols: Result<Vec<SVec>, EngineError> = src
        .pairs
        .iter()
        .map(|&(u, v)| {
            let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            for (u2, cu) in mc.col(u) {
                for (v2, cv) in md.col(v) {
                    *acc.entry((*u2, *v2)).or_insert_with(Scalar::zero) += cu * cv;
                }
            }
            let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (key, c) in acc {
                if c.is_zero() {
                    continue;
                }
                match dst.pos.get(&key) {
                    Some(&k) => {
                        *out.entry(k).or_insert_with(Scalar::zero) += c;
                    }
                    None => {
                        return Err(EngineError::NotBalanced(
                            "tensor operator leaks outside the balanced subspace".into(),
                        ))
                    }
                }
            }
            Ok(collect_svec(out))
        })
        .collect();
    let cols = cols?;
    Ok(SparseMatrix::from_columns(dst.pairs.len(), cols.len(), |j| {
        cols[j].clone()
    }))
}

/// Stack two matrices with a common block-diagonal layout:
/// `[[a, b], [c, d]]` where any block may be absent (zero).
fn block2(
    rows0: usize,
    rows1: usize,
    cols0: usize,
    cols1: usize,
    a: Option<&SparseMatrix>,
    b: Option<&SparseMatrix>,
    c: Option<&SparseMatrix>,
    d: Option<&SparseMatrix>,
) -> SparseMatrix {
    let mut tri: Vec<(usize, usize, Scalar)> = Vec::new();
    let mut place = |m: Option<&SparseMatrix>, ro: usize, co: usize| {
        if let Some(m) = m {
            for (i, j, v) in m.entries() {
                tri.push((i + ro, j + co, v.clone()));
            }
        }
    };
    place(a, 0, 0);
    place(b, 0, cols0);
    place(c, rows0, 0);
    place(d, rows0, cols0);
    SparseMatrix::from_triplets(rows0 + rows1, cols0 + cols1, tri)
}

/// The tensor product of two paracomplexes over the function algebra, with
/// even part `C₀⊗D₀ ⊕ C₁⊗D₁`, odd part `C₁⊗D₀ ⊕ C₀⊗D₁` and the twisted
/// block boundary whose square is `id − T` with `T = T⊗T`.
pub struct BoxProduct {
    pub complex: ParaComplex,
    /// Aligned basis pairs for the four summands `(ee, oo, oe, eo)`.
    pub pairs_ee: Vec<(usize, usize)>,
    pub pairs_oo: Vec<(usize, usize)>,
    pub pairs_oe: Vec<(usize, usize)>,
    pub pairs_eo: Vec<(usize, usize)>,
}

pub fn boxtimes(c: &ParaComplex, d: &ParaComplex) -> Result<BoxProduct, EngineError> {
    if c.group.as_ref() != d.group.as_ref() {
        return Err(EngineError::GroupMismatch(
            "tensor factors over different groups".into(),
        ));
    }
    let g = c.group.clone();
    let n = g.order();
    let (ce, co) = (c.t_even.rows(), c.t_odd.rows());
    let (de, dor) = (d.t_even.rows(), d.t_odd.rows());
    let bce = diagonal_blocks(&c.og_even, ce)?;
    let bco = diagonal_blocks(&c.og_odd, co)?;
    let bde = diagonal_blocks(&d.og_even, de)?;
    let bdo = diagonal_blocks(&d.og_odd, dor)?;
    let ee = align(&bce, &bde);
    let oo = align(&bco, &bdo);
    let oe = align(&bco, &bde);
    let eo = align(&bce, &bdo);
    let id_ce = SparseMatrix::identity(ce);
    let id_co = SparseMatrix::identity(co);
    let id_de = SparseMatrix::identity(de);
    let id_do = SparseMatrix::identity(dor);
    // ∂₀: (ee ⊕ oo) → (oe ⊕ eo), blocks [[∂⊗id, −id⊗∂], [id⊗∂, ∂⊗T]].
    let b00 = tensor_restrict(&c.d_even, &id_de, &ee, &oe)?;
    let b01 = tensor_restrict(&id_co, &d.d_odd, &oo, &oe)?.neg();
    let b10 = tensor_restrict(&id_ce, &d.d_even, &ee, &eo)?;
    let b11 = tensor_restrict(&c.d_odd, &d.t_odd, &oo, &eo)?;
    let d_even = block2(
        oe.pairs.len(),
        eo.pairs.len(),
        ee.pairs.len(),
        oo.pairs.len(),
        Some(&b00),
        Some(&b01),
        Some(&b10),
        Some(&b11),
    );
    // ∂₁: (oe ⊕ eo) → (ee ⊕ oo), blocks [[∂⊗T, id⊗∂], [−id⊗∂, ∂⊗id]].
    let c00 = tensor_restrict(&c.d_odd, &d.t_even, &oe, &ee)?;
    let c01 = tensor_restrict(&id_ce, &d.d_odd, &eo, &ee)?;
    let c10 = tensor_restrict(&id_co, &d.d_even, &oe, &oo)?.neg();
    let c11 = tensor_restrict(&c.d_even, &id_do, &eo, &oo)?;
    let d_odd = block2(
        ee.pairs.len(),
        oo.pairs.len(),
        oe.pairs.len(),
        eo.pairs.len(),
        Some(&c00),
        Some(&c01),
        Some(&c10),
        Some(&c11),
    );
    let t_even = block2(
        ee.pairs.len(),
        oo.pairs.len(),
        ee.pairs.len(),
        oo.pairs.len(),
        Some(&tensor_restrict(&c.t_even, &d.t_even, &ee, &ee)?),
        None,
        None,
        Some(&tensor_restrict(&c.t_odd, &d.t_odd, &oo, &oo)?),
    );
    let t_odd = block2(
        oe.pairs.len(),
        eo.pairs.len(),
        oe.pairs.len(),
        eo.pairs.len(),
        Some(&tensor_restrict(&c.t_odd, &d.t_even, &oe, &oe)?),
        None,
        None,
        Some(&tensor_restrict(&c.t_even, &d.t_odd, &eo, &eo)?),
    );
    let diag_action =
        |mc_e: &[SparseMatrix], md_e: &[SparseMatrix], mc_o: &[SparseMatrix], md_o: &[SparseMatrix], s: usize|
         -> Result<(SparseMatrix, SparseMatrix), EngineError> {
            let a = block2(
                ee.pairs.len(),
                oo.pairs.len(),
                ee.pairs.len(),
                oo.pairs.len(),
                Some(&tensor_restrict(&mc_e[s], &md_e[s], &ee, &ee)?),
                None,
                None,
                Some(&tensor_restrict(&mc_o[s], &md_o[s], &oo, &oo)?),
            );
            let b = block2(
                oe.pairs.len(),
                eo.pairs.len(),
                oe.pairs.len(),
                eo.pairs.len(),
                Some(&tensor_restrict(&mc_o[s], &md_e[s], &oe, &oe)?),
                None,
                None,
                Some(&tensor_restrict(&mc_e[s], &md_o[s], &eo, &eo)?),
            );
            Ok((a, b))
        };
    let mut g_even = Vec::with_capacity(n);
    let mut g_odd = Vec::with_capacity(n);
    for s in 0..n {
        let (a, b) = diag_action(&c.g_even, &d.g_even, &c.g_odd, &d.g_odd, s)?;
        g_even.push(a);
        g_odd.push(b);
    }
    // The function algebra acts by selecting the common block.
    let select = |pairs: &Aligned, r: usize| -> SparseMatrix {
        SparseMatrix::from_triplets(
            pairs.pairs.len(),
            pairs.pairs.len(),
            pairs
                .blocks
                .iter()
                .enumerate()
                .filter(|&(_, &b)| b == r)
                .map(|(k, _)| (k, k, one())),
        )
    };
    let mut og_even = Vec::with_capacity(n);
    let mut og_odd = Vec::with_capacity(n);
    for r in 0..n {
        og_even.push(block2(
            ee.pairs.len(),
            oo.pairs.len(),
            ee.pairs.len(),
            oo.pairs.len(),
            Some(&select(&ee, r)),
            None,
            None,
            Some(&select(&oo, r)),
        ));
        og_odd.push(block2(
            oe.pairs.len(),
            eo.pairs.len(),
            oe.pairs.len(),
            eo.pairs.len(),
            Some(&select(&oe, r)),
            None,
            None,
            Some(&select(&eo, r)),
        ));
    }
    let complex = ParaComplex {
        group: g,
        even_dims: vec![ee.pairs.len() + oo.pairs.len()],
        odd_dims: vec![oe.pairs.len() + eo.pairs.len()],
        d_even,
        d_odd,
        t_even,
        t_odd,
        g_even,
        g_odd,
        og_even,
        og_odd,
    };
    complex.validate()?;
    Ok(BoxProduct {
        complex,
        pairs_ee: ee.pairs,
        pairs_oo: oo.pairs,
        pairs_oe: oe.pairs,
        pairs_eo: eo.pairs,
    })
}

/// The unit for the tensor product: the function algebra in even degree with
/// zero boundary and trivial symmetry.
pub fn og_unit(group: &Arc<FiniteGroup>) -> ParaComplex {
    let n = group.order();
    let g_even = (0..n)
        .map(|t| {
            SparseMatrix::from_triplets(n, n, (0..n).map(|r| (group.conjugate(t, r), r, one())))
        })
        .collect();
    let og_even = (0..n)
        .map(|r| SparseMatrix::from_triplets(n, n, vec![(r, r, one())]))
        .collect();
    ParaComplex {
        group: group.clone(),
        even_dims: vec![n],
        odd_dims: vec![0],
        d_even: SparseMatrix::zero(0, n),
        d_odd: SparseMatrix::zero(n, 0),
        t_even: SparseMatrix::identity(n),
        t_odd: SparseMatrix::identity(0),
        g_even,
        g_odd: vec![SparseMatrix::identity(0); n],
        og_even,
        og_odd: vec![SparseMatrix::identity(0); n],
    }
}

// ---------------------------------------------------------------------------
// Special deformation retractions and the perturbation transfer
// ---------------------------------------------------------------------------

/// Assemble a parity-reversing pair into one matrix on `even ⊕ odd`.
pub fn pack_reversing(eo: &SparseMatrix, oe: &SparseMatrix) -> SparseMatrix {
    // eo: even → odd, oe: odd → even.
    block2(
        oe.rows(),
        eo.rows(),
        eo.cols(),
        oe.cols(),
        None,
        Some(oe),
        Some(eo),
        None,
    )
}

/// Assemble a parity-preserving pair into one matrix.
pub fn pack_diag(even: &SparseMatrix, odd: &SparseMatrix) -> SparseMatrix {
    block2(
        even.rows(),
        odd.rows(),
        even.cols(),
        odd.cols(),
        Some(even),
        None,
        None,
        Some(odd),
    )
}

/// A special deformation retraction: `pi = id`, `ip = id + bl + lb`, and
/// the homotopy satisfies `li = 0`, `pl = 0`, `l² = 0`. All operators are
/// packed on `even ⊕ odd`.
pub struct SpecialRetraction {
    /// Hochschild boundary on the ambient space.
    pub b: SparseMatrix,
    /// Inclusion of the retract.
    pub i: SparseMatrix,
    /// Projection onto the retract.
    pub p: SparseMatrix,
    /// The special homotopy.
    pub l: SparseMatrix,
    /// The intermediate homotopy `k = (bh + hb) h (bh + hb)`.
    pub k: SparseMatrix,
}

impl SpecialRetraction {
    pub fn ambient_dim(&self) -> usize {
        self.b.rows()
    }

    pub fn sub_dim(&self) -> usize {
        self.i.cols()
    }
}

/// Turn a deformation retraction into a special one via
/// `k = (bh + hb) h (bh + hb)` and `l = −k b k`; verifies all target
/// relations exactly.
pub fn make_special_retraction(r: &Retraction) -> Result<SpecialRetraction, EngineError> {
    r.validate()
        .map_err(|e| EngineError::ContractViolation(format!("input retraction invalid: {e}")))?;
    let b = pack_reversing(&r.b_even, &r.b_odd);
    let h = pack_reversing(&r.h_even, &r.h_odd);
    let i = pack_diag(&r.i_even, &r.i_odd);
    let p = pack_diag(&r.p_even, &r.p_odd);
    let dim = b.rows();
    let id = SparseMatrix::identity(dim);
    let e = b.mul(&h).add(&h.mul(&b)); // ip − id
    let k = e.mul(&h).mul(&e);
    let ip_minus_id = i.mul(&p).sub(&id);
    if b.mul(&k).add(&k.mul(&b)) != ip_minus_id {
        return Err(EngineError::IdentityViolation(
            "bk + kb ≠ ip − id".into(),
        ));
    }
    let k2 = k.mul(&k);
    if b.mul(&k2) != k2.mul(&b) {
        return Err(EngineError::IdentityViolation("bk² ≠ k²b".into()));
    }
    let l = k.mul(&b).mul(&k).neg();
    if !l.mul(&i).is_zero() || !p.mul(&l).is_zero() || !l.mul(&l).is_zero() {
        return Err(EngineError::IdentityViolation(
            "special homotopy relations li = pl = l² = 0 fail".into(),
        ));
    }
    if b.mul(&l).add(&l.mul(&b)) != ip_minus_id {
        return Err(EngineError::IdentityViolation(
            "bl + lb ≠ ip − id".into(),
        ));
    }
    Ok(SpecialRetraction { b, i, p, l, k })
}

/// Nilpotent geometric series `Σ_j m^j`; errors if `m` is not nilpotent
/// within the dimension bound.
fn geometric_series(m: &SparseMatrix) -> Result<SparseMatrix, EngineError> {
    let dim = m.rows();
    let mut sum = SparseMatrix::identity(dim);
    let mut pw = SparseMatrix::identity(dim);
    for _ in 0..=dim {
        pw = m.mul(&pw);
        if pw.is_zero() {
            return Ok(sum);
        }
        sum = sum.add(&pw);
    }
    Err(EngineError::NotNilpotent)
}

/// The transferred data `I = Ki`, `H = Kl`, `P = p` with
/// `K = Σ_j (lB)^j`.
pub struct Perturbed {
    pub i: SparseMatrix,
    pub h: SparseMatrix,
    pub p: SparseMatrix,
    /// The geometric series operator.
    pub k: SparseMatrix,
    /// Boundaries induced on the retract: Hochschild and degree-raising.
    pub b_sub: SparseMatrix,
    pub big_b_sub: SparseMatrix,
}

/// Transfer the degree-raising boundary `big_b` across a special
/// retraction. Verifies the preconditions (the inclusion and projection are
/// chain maps for the Hochschild boundary, the projection also for the
/// degree-raising one) and the contracts `PI = id`,
/// `IP = id + H(B+b) + (B+b)H`, `[I, B+b] = 0`.
pub fn perturb(
    sr: &SpecialRetraction,
    big_b: &SparseMatrix,
) -> Result<Perturbed, EngineError> {
    let b_sub = sr.p.mul(&sr.b).mul(&sr.i);
    let big_b_sub = sr.p.mul(big_b).mul(&sr.i);
    if sr.b.mul(&sr.i) != sr.i.mul(&b_sub) || b_sub.mul(&sr.p) != sr.p.mul(&sr.b) {
        return Err(EngineError::ContractViolation(
            "retraction maps are not chain maps for the Hochschild boundary".into(),
        ));
    }
    if big_b_sub.mul(&sr.p) != sr.p.mul(big_b) {
        return Err(EngineError::ContractViolation(
            "projection is not a chain map for the degree-raising boundary".into(),
        ));
    }
    let k = geometric_series(&sr.l.mul(big_b))?;
    let i = k.mul(&sr.i);
    let h = k.mul(&sr.l);
    let p = sr.p.clone();
    if p.mul(&i) != SparseMatrix::identity(sr.sub_dim()) {
        return Err(EngineError::IdentityViolation("PI ≠ id".into()));
    }
    let total = big_b.add(&sr.b);
    let rhs = SparseMatrix::identity(sr.ambient_dim())
        .add(&h.mul(&total))
        .add(&total.mul(&h));
    if i.mul(&p) != rhs {
        return Err(EngineError::IdentityViolation(
            "IP ≠ id + H(B+b) + (B+b)H".into(),
        ));
    }
    let total_sub = big_b_sub.add(&b_sub);
    if total.mul(&i) != i.mul(&total_sub) {
        return Err(EngineError::IdentityViolation(
            "transferred inclusion is not a chain map for the total boundary".into(),
        ));
    }
    Ok(Perturbed {
        i,
        h,
        p,
        k,
        b_sub,
        big_b_sub,
    })
}

/// The two commutator identities of the perturbation lemma for
/// `j = 1..=jmax`:
/// `[(lB)^j i, b] = −[(lB)^{j−1} i, B]` and `[(lB)^j, b] l = B (lB)^{j−1} l`.
pub fn perturb_lemma_check(
    sr: &SpecialRetraction,
    big_b: &SparseMatrix,
    jmax: usize,
) -> Result<(), EngineError> {
    let b_sub = sr.p.mul(&sr.b).mul(&sr.i);
    let big_b_sub = sr.p.mul(big_b).mul(&sr.i);
    let lb = sr.l.mul(big_b);
    let mut pow_prev = SparseMatrix::identity(sr.ambient_dim()); // (lB)^{j−1}
    for j in 1..=jmax {
        let pow = lb.mul(&pow_prev); // (lB)^j
        // First identity, maps from the retract into the ambient space.
        let xj = pow.mul(&sr.i);
        let xjm = pow_prev.mul(&sr.i);
        let lhs = sr.b.mul(&xj).sub(&xj.mul(&b_sub));
        let rhs = big_b.mul(&xjm).sub(&xjm.mul(&big_b_sub));
        if lhs != rhs.neg() {
            return Err(EngineError::IdentityViolation(format!(
                "first perturbation-lemma identity fails at j = {j}"
            )));
        }
        // Second identity, on the ambient space.
        let lhs2 = pow.mul(&sr.b).sub(&sr.b.mul(&pow)).mul(&sr.l);
        let rhs2 = big_b.mul(&pow_prev).mul(&sr.l);
        if lhs2 != rhs2 {
            return Err(EngineError::IdentityViolation(format!(
                "second perturbation-lemma identity fails at j = {j}"
            )));
        }
        pow_prev = pow;
    }
    Ok(())
}
