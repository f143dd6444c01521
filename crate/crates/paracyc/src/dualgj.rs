//! The dual crossed-product comparison for finite groups with the counting
//! measure: the kernel-algebra trace on equivariant forms, coinvariants of
//! the form spaces, the mutually inverse chain maps between ordinary forms
//! of `A ⋊ G` and coinvariant equivariant forms of `A ⊗ K_G`, the explicit
//! Hochschild homotopy between their composite and the identity, and the
//! rank-one inclusion homotopy on first-column complexes.

use crate::algebra::{algebra_kg, crossed_product, tensor_galgebras, GAlgebra, GModule};
use crate::error::EngineError;
use crate::forms::{FormSpace, Word};
use crate::group::{FiniteGroup, MeasureConvention};
use crate::linalg::{
    collect_svec, quotient_by_span, rank, SparseMatrix, Subquotient, SVec,
};
use crate::scalar::{one, q, Scalar};
use num::traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Cartesian expansion of per-position letter alternatives into words.
fn expand_letters(parts: &[SVec]) -> Vec<(Word, Scalar)> {
    let mut acc: Vec<(Word, Scalar)> = vec![(Vec::with_capacity(parts.len()), one())];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for (prefix, c) in &acc {
            for (l, v) in part {
                let mut nw = prefix.clone();
                nw.push(*l);
                next.push((nw, c * v));
            }
        }
        acc = next;
    }
    acc
}

/// The same algebra viewed over the trivial group (ordinary, non-equivariant
/// forms).
fn forget_action(alg: &GAlgebra) -> GAlgebra {
    let t = Arc::new(FiniteGroup::trivial());
    let dim = alg.dim();
    let module = GModule::trivial(t, alg.module().labels().to_vec());
    let mult = (0..dim)
        .map(|i| (0..dim).map(|j| alg.basis_product(i, j).clone()).collect())
        .collect();
    GAlgebra::new(module, mult, alg.unit().cloned()).unwrap()
}

/// The kernel algebra with the counting measure but the trivial group action.
fn kernel_algebra_trivial(g: &Arc<FiniteGroup>) -> GAlgebra {
    let kg = algebra_kg(g.clone(), MeasureConvention::Counting);
    let dim = kg.dim();
    let module = GModule::trivial(g.clone(), kg.module().labels().to_vec());
    let mult = (0..dim)
        .map(|i| (0..dim).map(|j| kg.basis_product(i, j).clone()).collect())
        .collect();
    GAlgebra::new(module, mult, kg.unit().cloned()).unwrap()
}

/// A letter of `A ⊗ K_G`: algebra index and matrix-unit indices.
#[derive(Clone, Copy)]
struct ELetter {
    a: usize,
    u: usize,
    v: usize,
}

fn decode_e_letter(idx: usize, n: usize) -> ELetter {
    let dk = n * n;
    ELetter {
        a: idx / dk,
        u: (idx % dk) / n,
        v: idx % n,
    }
}

fn encode_e_letter(a: usize, u: usize, v: usize, n: usize) -> usize {
    a * n * n + u * n + v
}

/// The trace `Ω_G(A ⊗ K_G) → Ω_G(A)` with the counting measure, contracting
/// the matrix-unit legs along a cycle closed up by the symmetry twist:
/// nonzero exactly when consecutive matrix units are composable and the last
/// column index equals `s` times the first row index.
pub struct DualTrace {
    pub space_e: FormSpace,
    pub space_a: FormSpace,
    dim_e: usize,
    n: usize,
}

impl DualTrace {
    pub fn new(a: &GAlgebra, level: usize) -> Result<Self, EngineError> {
        let g = a.group().clone();
        let kg = algebra_kg(g.clone(), MeasureConvention::Counting);
        let e = tensor_galgebras(a, &kg)?;
        Ok(DualTrace {
            space_a: FormSpace::new(a, level),
            dim_e: e.dim(),
            space_e: FormSpace::new(&e, level),
            n: g.order(),
        })
    }

    /// The trace on one basis column.
    pub fn col(&self, deg: usize, idx: usize) -> SVec {
        let g = self.space_e.group().clone();
        let n = self.n;
        let (s, w) = self.space_e.decode(deg, idx);
        if deg == 0 {
            let l = decode_e_letter(w[0], n);
            if l.v == g.mul(s, l.u) {
                return vec![(self.space_a.encode(0, s, &[l.a]), one())];
            }
            return Vec::new();
        }
        let letters: Vec<ELetter> = w[1..].iter().map(|&x| decode_e_letter(x, n)).collect();
        let mut out: Word = Vec::with_capacity(deg + 1);
        let first_u;
        if w[0] == self.dim_e {
            out.push(self.space_a.calc().unit());
            first_u = letters[0].u;
        } else {
            let l = decode_e_letter(w[0], n);
            out.push(l.a);
            first_u = l.u;
            if l.v != letters[0].u {
                return Vec::new();
            }
        }
        for j in 0..letters.len() {
            if j + 1 < letters.len() && letters[j].v != letters[j + 1].u {
                return Vec::new();
            }
            out.push(letters[j].a);
        }
        if letters[letters.len() - 1].v != g.mul(s, first_u) {
            return Vec::new();
        }
        vec![(self.space_a.encode(deg, s, &out), one())]
    }

    pub fn matrix(&self, deg: usize) -> SparseMatrix {
        SparseMatrix::from_columns(self.space_a.dim(deg), self.space_e.dim(deg), |j| {
            self.col(deg, j)
        })
    }

    /// Verify, streaming over columns, that the trace commutes with the
    /// Hochschild boundary on degrees `1..=max_deg` and with the universal
    /// differential on degrees `0..=max_deg` (needs `level ≥ max_deg + 1`).
    pub fn check_chain_compat(&self, max_deg: usize) -> Result<(), EngineError> {
        if max_deg + 1 > self.space_e.level() {
            return Err(EngineError::DegreeOverflow {
                needed: max_deg + 1,
                max: self.space_e.level(),
            });
        }
        for m in 0..=max_deg {
            for idx in 0..self.space_e.dim(m) {
                let tr = self.col(m, idx);
                if m >= 1 {
                    let lhs = self
                        .space_e
                        .apply(&self.space_e.b_col(m, idx), |i| self.col(m - 1, i));
                    let rhs = self.space_a.apply(&tr, |i| self.space_a.b_col(m, i));
                    if lhs != rhs {
                        return Err(EngineError::IdentityViolation(format!(
                            "trace does not commute with b at degree {m}, column {idx}"
                        )));
                    }
                }
                let lhs = self
                    .space_e
                    .apply(&self.space_e.d_col(m, idx), |i| self.col(m + 1, i));
                let rhs = self.space_a.apply(&tr, |i| self.space_a.d_col(m, i));
                if lhs != rhs {
                    return Err(EngineError::IdentityViolation(format!(
                        "trace does not commute with d at degree {m}, column {idx}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Coinvariants of each graded piece of a form space, as the cokernel of the
/// spans of `t·ω − ω`.
pub fn coinvariants(space: &FormSpace) -> Vec<Subquotient> {
    let g = space.group().clone();
    let others: Vec<usize> = (0..g.order()).filter(|&t| t != g.identity()).collect();
    (0..=space.level())
        .map(|m| {
            let dim = space.dim(m);
            let cols: Vec<SVec> = (0..dim)
                .flat_map(|i| {
                    let others = &others;
                    let space = &space;
                    others.iter().filter_map(move |&t| {
                        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                        for (k, c) in space.gact_col(t, m, i) {
                            *acc.entry(k).or_insert_with(Scalar::zero) += c;
                        }
                        *acc.entry(i).or_insert_with(Scalar::zero) -= one();
                        let col = collect_svec(acc);
                        if col.is_empty() {
                            None
                        } else {
                            Some(col)
                        }
                    })
                })
                .collect();
            let gens = SparseMatrix::from_columns(dim, cols.len(), |j| cols[j].clone());
            quotient_by_span(dim, &gens)
        })
        .collect()
}

/// Cross-check: the cokernel coinvariants agree with the image of the
/// averaging projector (rank equality, and the averaging acts as the
/// identity on the quotient) up to the given degree.
pub fn coinvariants_match_averaging(
    space: &FormSpace,
    sub: &[Subquotient],
    max_deg: usize,
) -> Result<(), EngineError> {
    let g = space.group().clone();
    let n = g.order();
    let w = q(1, n as i64);
    for m in 0..=max_deg.min(space.level()) {
        let dim = space.dim(m);
        let mut avg = SparseMatrix::zero(dim, dim);
        for t in 0..n {
            let gt = SparseMatrix::from_columns(dim, dim, |j| space.gact_col(t, m, j));
            avg = avg.add(&gt.scale(&w));
        }
        if rank(&avg) != sub[m].dim() {
            return Err(EngineError::Mismatch(format!(
                "averaging rank differs from coinvariant dimension at degree {m}"
            )));
        }
        if sub[m].projection.mul(&avg) != sub[m].projection {
            return Err(EngineError::Mismatch(format!(
                "averaging is not the identity on coinvariants at degree {m}"
            )));
        }
    }
    Ok(())
}

/// The two chain maps between ordinary forms of `A ⋊ G` (counting measure)
/// and coinvariant equivariant forms of `A ⊗ K_G`, with the explicit
/// homotopy contracting their composite to the identity on the coinvariant
/// Hochschild complex.
pub struct DualComparison {
    pub space_e: FormSpace,
    pub space_c: FormSpace,
    pub coinv: Vec<Subquotient>,
    /// Per degree: map from forms of `A ⋊ G` into coinvariant coordinates.
    pub phi: Vec<SparseMatrix>,
    /// Per degree: map from coinvariant coordinates to forms of `A ⋊ G`.
    pub tau: Vec<SparseMatrix>,
    /// Degree-raising homotopy on coinvariants, index `m` maps degree `m`
    /// to `m + 1`; defined for `m ≤ level − 1`.
    pub h: Vec<SparseMatrix>,
    /// The Hochschild boundary on coinvariants, index `m ≥ 1` maps degree
    /// `m` to `m − 1`; index 0 is a zero matrix.
    pub b_coinv: Vec<SparseMatrix>,
}

impl DualComparison {

    /// `τφ = id` on forms of `A ⋊ G` per degree `0..=max_deg`.
    pub fn check_tau_phi(&self, max_deg: usize) -> Result<(), EngineError> {
        for m in 0..=max_deg.min(self.space_c.level()) {
            if self.tau[m].mul(&self.phi[m]) != SparseMatrix::identity(self.space_c.dim(m)) {
                return Err(EngineError::IdentityViolation(format!(
                    "τφ is not the identity at degree {m}"
                )));
            }
        }
        Ok(())
    }

    /// `(φτ)² = φτ` on coinvariants per degree `0..=max_deg`.
    pub fn check_phi_tau_idempotent(&self, max_deg: usize) -> Result<(), EngineError> {
        for m in 0..=max_deg.min(self.space_c.level()) {
            let pt = self.phi[m].mul(&self.tau[m]);
            if pt.mul(&pt) != pt {
                return Err(EngineError::IdentityViolation(format!(
                    "φτ is not idempotent at degree {m}"
                )));
            }
        }
        Ok(())
    }

    /// `bh + hb = id − φτ` on coinvariant degrees `0..=max_deg`
    /// (needs `max_deg ≤ level − 1`).
    pub fn check_homotopy(&self, max_deg: usize) -> Result<(), EngineError> {
        if max_deg + 1 > self.space_e.level() {
            return Err(EngineError::DegreeOverflow {
                needed: max_deg + 1,
                max: self.space_e.level(),
            });
        }
        for m in 0..=max_deg {
            let dim = self.coinv[m].dim();
            let mut lhs = self.b_coinv[m + 1].mul(&self.h[m]);
            if m >= 1 {
                lhs = lhs.add(&self.h[m - 1].mul(&self.b_coinv[m]));
            }
            let rhs = SparseMatrix::identity(dim).sub(&self.phi[m].mul(&self.tau[m]));
            if lhs != rhs {
                return Err(EngineError::IdentityViolation(format!(
                    "bh + hb ≠ id − φτ at coinvariant degree {m}"
                )));
            }
        }
        Ok(())
    }
}

/// Build the dual comparison for a unital algebra; verifies along the way
/// that the downward map annihilates coinvariant relations and that the
/// homotopy commutes with the group action (hence descends).
pub fn dual_comparison(a: &GAlgebra, level: usize) -> Result<DualComparison, EngineError> {
    let unit_a = a.unit().ok_or(EngineError::NotUnital)?.clone();
    let g = a.group().clone();
    let n = g.order();
    let e_id = g.identity();
    let kg = algebra_kg(g.clone(), MeasureConvention::Counting);
    let e = tensor_galgebras(a, &kg)?;
    let dim_e = e.dim();
    let space_e = FormSpace::new(&e, level);
    let c = crossed_product(a, MeasureConvention::Counting);
    let dim_c = c.dim();
    let c_triv = forget_action(&c);
    let space_c = FormSpace::new(&c_triv, level);
    let unit_c = space_c.calc().unit();
    let unit_e = space_e.calc().unit();
    debug_assert_eq!(unit_e, dim_e);
    let coinv = coinvariants(&space_e);

    // φ ambient: Ω^m(A ⋊ G) → Ω^m_G(A ⊗ K_G).
    let phi_amb = |m: usize| -> SparseMatrix {
        SparseMatrix::from_columns(space_e.dim(m), space_c.dim(m), |col| {
            let (_, w) = space_c.decode(m, col);
            if m == 0 {
                let (ai, s0) = (w[0] / n, w[0] % n);
                return vec![(
                    space_e.encode(0, s0, &[encode_e_letter(ai, e_id, s0, n)]),
                    one(),
                )];
            }
            let mut parts: Vec<SVec> = Vec::with_capacity(m + 1);
            let mut prefix = e_id; // running product of group letters
            if w[0] == unit_c {
                parts.push(vec![(unit_e, one())]);
            } else {
                let (ai, s0) = (w[0] / n, w[0] % n);
                parts.push(vec![(encode_e_letter(ai, e_id, s0, n), one())]);
                prefix = s0;
            }
            for &x in &w[1..] {
                let (ai, sj) = (x / n, x % n);
                let next = g.mul(prefix, sj);
                let moved = a.module().act_vec(prefix, &vec![(ai, one())]);
                parts.push(
                    moved
                        .iter()
                        .map(|(k, cv)| (encode_e_letter(*k, prefix, next, n), cv.clone()))
                        .collect(),
                );
                prefix = next;
            }
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (word, cv) in expand_letters(&parts) {
                *acc.entry(space_e.encode(m, prefix, &word))
                    .or_insert_with(Scalar::zero) += cv;
            }
            collect_svec(acc)
        })
    };

    // τ ambient: Ω^m_G(A ⊗ K_G) → Ω^m(A ⋊ G).
    let tau_amb = |m: usize| -> SparseMatrix {
        SparseMatrix::from_columns(space_c.dim(m), space_e.dim(m), |col| {
            let (s, w) = space_e.decode(m, col);
            if m == 0 {
                let l = decode_e_letter(w[0], n);
                if l.v != g.mul(s, l.u) {
                    return Vec::new();
                }
                let ui = g.inverse(l.u);
                let moved = a.module().act_vec(ui, &vec![(l.a, one())]);
                let tail = g.mul(ui, l.v);
                let mut out: SVec = moved
                    .iter()
                    .map(|(k, cv)| (space_c.encode(0, 0, &[k * n + tail]), cv.clone()))
                    .collect();
                out.sort_by_key(|t| t.0);
                return out;
            }
            let letters: Vec<ELetter> = w[1..].iter().map(|&x| decode_e_letter(x, n)).collect();
            for j in 0..letters.len() - 1 {
                if letters[j].v != letters[j + 1].u {
                    return Vec::new();
                }
            }
            let mut parts: Vec<SVec> = Vec::with_capacity(m + 1);
            let to_c = |l: &ELetter| -> SVec {
                let ui = g.inverse(l.u);
                let moved = a.module().act_vec(ui, &vec![(l.a, one())]);
                let tail = g.mul(ui, l.v);
                moved.iter().map(|(k, cv)| (k * n + tail, cv.clone())).collect()
            };
            if w[0] == unit_e {
                if letters[letters.len() - 1].v != g.mul(s, letters[0].u) {
                    return Vec::new();
                }
                parts.push(vec![(unit_c, one())]);
            } else {
                let l0 = decode_e_letter(w[0], n);
                if l0.v != letters[0].u
                    || letters[letters.len() - 1].v != g.mul(s, l0.u)
                {
                    return Vec::new();
                }
                parts.push(to_c(&l0));
            }
            for l in &letters {
                parts.push(to_c(l));
            }
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (word, cv) in expand_letters(&parts) {
                *acc.entry(space_c.encode(m, 0, &word))
                    .or_insert_with(Scalar::zero) += cv;
            }
            collect_svec(acc)
        })
    };

    // The homotopy on one ambient basis column of degree m.
    let h_col = |m: usize, col: usize| -> SVec {
        let (s, w) = space_e.decode(m, col);
        let unit_at = |p: usize| -> SVec {
            unit_a
                .iter()
                .map(|(k, cv)| (encode_e_letter(*k, p, p, n), cv.clone()))
                .collect()
        };
        let sinv = g.inverse(s);
        let mut terms: Vec<(Scalar, Vec<SVec>)> = Vec::new();
        if m == 0 || w[0] != unit_e {
            // Leading letter present.
            let l0 = decode_e_letter(w[0], n);
            let letters: Vec<ELetter> =
                w[1..].iter().map(|&x| decode_e_letter(x, n)).collect();
            let kets: Vec<usize> = std::iter::once(l0.v)
                .chain(letters.iter().map(|l| l.v))
                .collect();
            let bras: Vec<usize> = std::iter::once(l0.u)
                .chain(letters.iter().map(|l| l.u))
                .collect();
            // Mismatch index: first i with ket_i ≠ bra_{i+1}, then the
            // closing condition s⁻¹·ket_m = bra_0.
            let mut big_m: Option<usize> = None;
            for i in 0..m {
                if kets[i] != bras[i + 1] {
                    big_m = Some(i);
                    break;
                }
            }
            if big_m.is_none() && g.mul(sinv, kets[m]) != bras[0] {
                big_m = Some(m);
            }
            if let Some(mm) = big_m {
                let sign = if mm % 2 == 0 { one() } else { -one() };
                let mut parts: Vec<SVec> = Vec::with_capacity(m + 2);
                for &x in &w[..=mm] {
                    parts.push(vec![(x, one())]);
                }
                parts.push(unit_at(kets[mm]));
                for &x in &w[mm + 1..] {
                    parts.push(vec![(x, one())]);
                }
                terms.push((sign, parts));
            }
        } else {
            // Unit-led element of degree m ≥ 1.
            let letters: Vec<ELetter> =
                w[1..].iter().map(|&x| decode_e_letter(x, n)).collect();
            // Interior mismatch among letters 1..m (1-based as written).
            let mut interior: Option<usize> = None;
            for i in 0..m - 1 {
                if letters[i].v != letters[i + 1].u {
                    interior = Some(i + 1);
                    break;
                }
            }
            let closing = g.mul(sinv, letters[m - 1].v) == letters[0].u;
            let insert_after = |mm: usize| -> Vec<SVec> {
                // d-letters 1..mm, the inserted unit, then the rest.
                let mut parts: Vec<SVec> = Vec::with_capacity(m + 2);
                parts.push(vec![(unit_e, one())]);
                for l in &letters[..mm] {
                    parts.push(vec![(encode_e_letter(l.a, l.u, l.v, n), one())]);
                }
                parts.push(unit_at(letters[mm - 1].v));
                for l in &letters[mm..] {
                    parts.push(vec![(encode_e_letter(l.a, l.u, l.v, n), one())]);
                }
                parts
            };
            match (closing, interior) {
                (true, Some(mm)) => {
                    let sign = if mm % 2 == 0 { one() } else { -one() };
                    terms.push((sign, insert_after(mm)));
                }
                (true, None) => {} // fixed point, homotopy vanishes
                (false, None) => {
                    // Mismatch only at the closing condition.
                    let sign = if m % 2 == 0 { one() } else { -one() };
                    terms.push((sign, insert_after(m)));
                    let p = g.mul(sinv, letters[m - 1].v);
                    let mut parts: Vec<SVec> = Vec::with_capacity(m + 2);
                    parts.push(vec![(unit_e, one())]);
                    parts.push(unit_at(p));
                    for l in &letters {
                        parts.push(vec![(encode_e_letter(l.a, l.u, l.v, n), one())]);
                    }
                    terms.push((one(), parts)); // (−1)^{M+n} with M = n
                }
                (false, Some(mm)) => {
                    let sign = if mm % 2 == 0 { one() } else { -one() };
                    terms.push((sign, insert_after(mm)));
                    // Rotated second term with the last letter moved to the
                    // front and translated by s⁻¹.
                    let last = letters[m - 1];
                    let moved = a.module().act_vec(sinv, &vec![(last.a, one())]);
                    let lead: SVec = moved
                        .iter()
                        .map(|(k, cv)| {
                            (
                                encode_e_letter(
                                    *k,
                                    g.mul(sinv, last.u),
                                    g.mul(sinv, last.v),
                                    n,
                                ),
                                cv.clone(),
                            )
                        })
                        .collect();
                    let mut parts: Vec<SVec> = Vec::with_capacity(m + 2);
                    parts.push(lead);
                    parts.push(unit_at(g.mul(sinv, last.v)));
                    for l in &letters[..mm] {
                        parts.push(vec![(encode_e_letter(l.a, l.u, l.v, n), one())]);
                    }
                    parts.push(unit_at(letters[mm - 1].v));
                    for l in &letters[mm..m - 1] {
                        parts.push(vec![(encode_e_letter(l.a, l.u, l.v, n), one())]);
                    }
                    let sign2 = if (mm + m) % 2 == 0 { one() } else { -one() };
                    terms.push((sign2, parts));
                }
            }
        }
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (sign, parts) in terms {
            for (word, cv) in expand_letters(&parts) {
                *acc.entry(space_e.encode(m + 1, s, &word))
                    .or_insert_with(Scalar::zero) += cv * &sign;
            }
        }
        collect_svec(acc)
    };

    let mut phi = Vec::with_capacity(level + 1);
    let mut tau = Vec::with_capacity(level + 1);
    let mut h = Vec::with_capacity(level);
    let mut b_coinv = Vec::with_capacity(level + 1);
    for m in 0..=level {
        let pa = phi_amb(m);
        let ta = tau_amb(m);
        // τ must be constant on orbits, hence factor through coinvariants.
        for t in 0..n {
            let gt = SparseMatrix::from_columns(space_e.dim(m), space_e.dim(m), |j| {
                space_e.gact_col(t, m, j)
            });
            if ta.mul(&gt) != ta {
                return Err(EngineError::IdentityViolation(format!(
                    "downward map is not invariant at degree {m}, element {t}"
                )));
            }
        }
        phi.push(coinv[m].projection.mul(&pa));
        tau.push(ta.mul(&coinv[m].section));
        let bm = if m == 0 {
            SparseMatrix::zero(0, coinv[0].dim())
        } else {
            let ba = SparseMatrix::from_columns(space_e.dim(m - 1), space_e.dim(m), |j| {
                space_e.b_col(m, j)
            });
            coinv[m - 1].projection.mul(&ba).mul(&coinv[m].section)
        };
        b_coinv.push(bm);
        if m < level {
            let ha =
                SparseMatrix::from_columns(space_e.dim(m + 1), space_e.dim(m), |j| h_col(m, j));
            // The homotopy commutes with the group action, hence descends.
            for t in 0..n {
                let gt_src = SparseMatrix::from_columns(space_e.dim(m), space_e.dim(m), |j| {
                    space_e.gact_col(t, m, j)
                });
                let gt_dst =
                    SparseMatrix::from_columns(space_e.dim(m + 1), space_e.dim(m + 1), |j| {
                        space_e.gact_col(t, m + 1, j)
                    });
                if ha.mul(&gt_src) != gt_dst.mul(&ha) {
                    return Err(EngineError::IdentityViolation(format!(
                        "homotopy does not commute with the action at degree {m}"
                    )));
                }
            }
            h.push(coinv[m + 1].projection.mul(&ha).mul(&coinv[m].section));
        }
    }
    let _ = dim_c;
    Ok(DualComparison {
        space_e,
        space_c,
        coinv,
        phi,
        tau,
        h,
        b_coinv,
    })
}

/// First-column complexes (words whose leading letter is not the adjoined
/// unit) for `A ⊗ K` with the trivially-acted kernel algebra, together with
/// the untwisted column trace, the rank-one inclusion at the identity
/// element, and the alternating-sum homotopy contracting their composite.
pub struct MoritaData {
    pub space_e: FormSpace,
    pub space_a: FormSpace,
    /// Per degree: ambient indices of the first-column basis in `Ω_G(A⊗K)`.
    pub first_e: Vec<Vec<usize>>,
    /// Per degree: ambient indices of the first-column basis in `Ω_G(A)`.
    pub first_a: Vec<Vec<usize>>,
    /// Untwisted trace, first column to first column, degree preserved.
    pub tau: Vec<SparseMatrix>,
    /// Rank-one inclusion `x ↦ x ⊗ [e,e]` letterwise.
    pub iota: Vec<SparseMatrix>,
    /// Alternating-sum homotopy, degree `m → m + 1`, for `m ≤ level − 1`.
    pub h: Vec<SparseMatrix>,
    /// Restricted Hochschild boundary, index `m ≥ 1`, degree `m → m − 1`.
    pub b_e: Vec<SparseMatrix>,
}

fn first_column_indices(space: &FormSpace, deg: usize) -> Vec<usize> {
    let unit = space.calc().unit();
    (0..space.dim(deg))
        .filter(|&i| {
            if deg == 0 {
                return true;
            }
            let (_, w) = space.decode(deg, i);
            w[0] != unit
        })
        .collect()
}

fn restrict(
    m: &SparseMatrix,
    rows: &[usize],
    cols: &[usize],
) -> Result<SparseMatrix, EngineError> {
    let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut out_cols: Vec<SVec> = Vec::with_capacity(cols.len());
    for &j in cols {
        let mut col = Vec::new();
        for (i, v) in m.col(j) {
            match pos.get(i) {
                Some(&k) => col.push((k, v.clone())),
                None => {
                    return Err(EngineError::ContractViolation(
                        "operator does not preserve the first column".into(),
                    ))
                }
            }
        }
        out_cols.push(col);
    }
    Ok(SparseMatrix::from_columns(rows.len(), cols.len(), |j| {
        out_cols[j].clone()
    }))
}

pub fn morita_first_column(a: &GAlgebra, level: usize) -> Result<MoritaData, EngineError> {
    let unit_a = a.unit().ok_or(EngineError::NotUnital)?.clone();
    let g = a.group().clone();
    let n = g.order();
    let e_id = g.identity();
    let k = kernel_algebra_trivial(&g);
    let e = tensor_galgebras(a, &k)?;
    let dim_e = e.dim();
    let space_e = FormSpace::new(&e, level);
    let space_a = FormSpace::new(a, level);
    let first_e: Vec<Vec<usize>> = (0..=level)
        .map(|m| first_column_indices(&space_e, m))
        .collect();
    let first_a: Vec<Vec<usize>> = (0..=level)
        .map(|m| first_column_indices(&space_a, m))
        .collect();
    let _ = dim_e;

    // Untwisted trace on first columns.
    let tau_amb = |m: usize| -> SparseMatrix {
        SparseMatrix::from_columns(space_a.dim(m), space_e.dim(m), |col| {
            let (s, w) = space_e.decode(m, col);
            let letters: Vec<ELetter> = w.iter().map(|&x| decode_e_letter(x, n)).collect();
            for j in 0..m {
                if letters[j].v != letters[j + 1].u {
                    return Vec::new();
                }
            }
            if letters[m].v != letters[0].u {
                return Vec::new();
            }
            let word: Word = letters.iter().map(|l| l.a).collect();
            vec![(space_a.encode(m, s, &word), one())]
        })
    };
    // Letterwise rank-one inclusion.
    let iota_amb = |m: usize| -> SparseMatrix {
        SparseMatrix::from_columns(space_e.dim(m), space_a.dim(m), |col| {
            let (s, w) = space_a.decode(m, col);
            let word: Word = w
                .iter()
                .map(|&x| encode_e_letter(x, e_id, e_id, n))
                .collect();
            vec![(space_e.encode(m, s, &word), one())]
        })
    };
    // Alternating-sum homotopy.
    let h_amb = |m: usize| -> SparseMatrix {
        SparseMatrix::from_columns(space_e.dim(m + 1), space_e.dim(m), |col| {
            let (s, w) = space_e.decode(m, col);
            let letters: Vec<ELetter> = w.iter().map(|&x| decode_e_letter(x, n)).collect();
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for j in 0..=m {
                // Pairing factors between consecutive slots up to j.
                if (1..=j).any(|t| letters[t - 1].v != letters[t].u) {
                    continue;
                }
                let sign = if j % 2 == 0 { one() } else { -one() };
                let mut parts: Vec<SVec> = Vec::with_capacity(m + 2);
                parts.push(vec![(
                    encode_e_letter(letters[0].a, letters[0].u, e_id, n),
                    one(),
                )]);
                for l in &letters[1..=j] {
                    parts.push(vec![(encode_e_letter(l.a, e_id, e_id, n), one())]);
                }
                parts.push(
                    unit_a
                        .iter()
                        .map(|(ki, cv)| {
                            (encode_e_letter(*ki, e_id, letters[j].v, n), cv.clone())
                        })
                        .collect(),
                );
                for l in &letters[j + 1..] {
                    parts.push(vec![(encode_e_letter(l.a, l.u, l.v, n), one())]);
                }
                for (word, cv) in expand_letters(&parts) {
                    *acc.entry(space_e.encode(m + 1, s, &word))
                        .or_insert_with(Scalar::zero) += cv * &sign;
                }
            }
            collect_svec(acc)
        })
    };

    let mut tau = Vec::with_capacity(level + 1);
    let mut iota = Vec::with_capacity(level + 1);
    let mut h = Vec::with_capacity(level);
    let mut b_e = Vec::with_capacity(level + 1);
    for m in 0..=level {
        tau.push(restrict(&tau_amb(m), &first_a[m], &first_e[m])?);
        iota.push(restrict(&iota_amb(m), &first_e[m], &first_a[m])?);
        let bm = if m == 0 {
            SparseMatrix::zero(0, first_e[0].len())
        } else {
            let ba = SparseMatrix::from_columns(space_e.dim(m - 1), space_e.dim(m), |j| {
                space_e.b_col(m, j)
            });
            restrict(&ba, &first_e[m - 1], &first_e[m])?
        };
        b_e.push(bm);
        if m < level {
            h.push(restrict(&h_amb(m), &first_e[m + 1], &first_e[m])?);
        }
    }
    Ok(MoritaData {
        space_e,
        space_a,
        first_e,
        first_a,
        tau,
        iota,
        h,
        b_e,
    })
}

impl MoritaData {
    /// `τ ∘ ι = id` on first columns per degree `0..=max_deg`.
    pub fn check_trace_section(&self, max_deg: usize) -> Result<(), EngineError> {
        for m in 0..=max_deg.min(self.space_a.level()) {
            if self.tau[m].mul(&self.iota[m])
                != SparseMatrix::identity(self.first_a[m].len())
            {
                return Err(EngineError::IdentityViolation(format!(
                    "trace is not a retraction of the inclusion at degree {m}"
                )));
            }
        }
        Ok(())
    }

    /// `bh + hb = id − ιτ` on first columns per degree `0..=max_deg`
    /// (needs `max_deg ≤ level − 1`).
    pub fn check_homotopy(&self, max_deg: usize) -> Result<(), EngineError> {
        if max_deg + 1 > self.space_e.level() {
            return Err(EngineError::DegreeOverflow {
                needed: max_deg + 1,
                max: self.space_e.level(),
            });
        }
        for m in 0..=max_deg {
            let dim = self.first_e[m].len();
            let mut lhs = self.b_e[m + 1].mul(&self.h[m]);
            if m >= 1 {
                lhs = lhs.add(&self.h[m - 1].mul(&self.b_e[m]));
            }
            let rhs = SparseMatrix::identity(dim).sub(&self.iota[m].mul(&self.tau[m]));
            if lhs != rhs {
                return Err(EngineError::IdentityViolation(format!(
                    "bh + hb ≠ id − ιτ at first-column degree {m}"
                )));
            }
        }
        Ok(())
    }
}
