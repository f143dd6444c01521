//! Noncommutative differential forms and their equivariant operators.
//!
//! For an algebra `A` (not necessarily unital) with unitarization `A⁺`, the
//! space of `n`-forms is `Ω⁰(A) = A` and `Ωⁿ(A) = A⁺ ⊗ A^⊗n` for `n ≥ 1`,
//! with basis words `a₀ da₁ ⋯ daₙ`. The equivariant form space in degree `n`
//! is `O_G ⊗ Ωⁿ(A)`, with basis `f(s) ⊗ a₀ da₁ ⋯ daₙ` enumerated in
//! deterministic lexicographic order `(group element, tensor word)`.
//!
//! Operators are available in two layers: a streaming layer that applies an
//! operator to one basis column at a time (used for identity checks on spaces
//! too large to materialize), and a matrix layer ([`TowerOp`]) holding one
//! sparse matrix per degree together with the set of source degrees on which
//! the operator is faithfully represented at the chosen truncation level.

use crate::algebra::GAlgebra;
use crate::error::EngineError;
use crate::group::FiniteGroup;
use crate::linalg::{axpy, collect_svec, solve, SparseMatrix, SVec};
use crate::scalar::{one, sign, Scalar};
use num::traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A tensor word `a₀ da₁ ⋯ daₙ`: letter 0 indexes `A⁺` (the adjoined unit is
/// the last index), letters `1..=n` index `A`. Degree-0 words have letter 0
/// in `A`.
pub type Word = Vec<usize>;

/// A linear combination of words of a common degree.
pub type WordVec = Vec<(Word, Scalar)>;

/// The word calculus of `Ω(A)`: products, the universal differential, and
/// the letterwise group action, independent of the equivariant layer.
#[derive(Debug, Clone)]
pub struct WordCalc {
    dim_a: usize,
    /// Products `e_i · e_j` of `A⁺` basis elements, expanded over `A⁺`.
    aplus_mult: Vec<Vec<SVec>>,
    /// Action `s · e_i` on `A⁺` basis elements, expanded over `A⁺`.
    aplus_act: Vec<Vec<SVec>>,
    group_order: usize,
}

impl WordCalc {
    pub fn new(alg: &GAlgebra) -> Self {
        let dim_a = alg.dim();
        let unit = dim_a;
        let mut aplus_mult = vec![vec![Vec::new(); dim_a + 1]; dim_a + 1];
        for i in 0..dim_a {
            for j in 0..dim_a {
                aplus_mult[i][j] = alg.basis_product(i, j).clone();
            }
            aplus_mult[i][unit] = vec![(i, one())];
            aplus_mult[unit][i] = vec![(i, one())];
        }
        aplus_mult[unit][unit] = vec![(unit, one())];
        let n = alg.group().order();
        let mut aplus_act = vec![vec![Vec::new(); dim_a + 1]; n];
        for (s, row) in aplus_act.iter_mut().enumerate() {
            for (i, slot) in row.iter_mut().enumerate().take(dim_a) {
                *slot = alg.module().act_vec(s, &vec![(i, one())]);
            }
            row[unit] = vec![(unit, one())];
        }
        WordCalc {
            dim_a,
            aplus_mult,
            aplus_act,
            group_order: n,
        }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    /// Index of the adjoined unit in `A⁺`.
    pub fn unit(&self) -> usize {
        self.dim_a
    }

    /// Number of words of the given degree.
    pub fn word_count(&self, deg: usize) -> usize {
        if deg == 0 {
            self.dim_a
        } else {
            (self.dim_a + 1) * self.dim_a.pow(deg as u32)
        }
    }

    /// Lexicographic index of a word of the given degree.
    pub fn encode_word(&self, deg: usize, w: &[usize]) -> usize {
        debug_assert_eq!(w.len(), deg + 1);
        if deg == 0 {
            debug_assert!(w[0] < self.dim_a, "degree-0 letters lie in A");
            return w[0];
        }
        let mut idx = w[0];
        for &l in &w[1..] {
            debug_assert!(l < self.dim_a);
            idx = idx * self.dim_a + l;
        }
        idx
    }

    /// Inverse of [`encode_word`].
    pub fn decode_word(&self, deg: usize, mut idx: usize) -> Word {
        if deg == 0 {
            return vec![idx];
        }
        let mut w = vec![0usize; deg + 1];
        for k in (1..=deg).rev() {
            w[k] = idx % self.dim_a;
            idx /= self.dim_a;
        }
        w[0] = idx;
        w
    }

    /// `dω` on a word; `None` when the leading letter is the adjoined unit
    /// (`d1 = 0`).
    pub fn d_word(&self, w: &[usize]) -> Option<Word> {
        if w.len() > 1 && w[0] == self.unit() {
            return None;
        }
        let mut out = Vec::with_capacity(w.len() + 1);
        out.push(self.unit());
        out.extend_from_slice(w);
        Some(out)
    }

    /// Right multiplication `ω · b` by an `A⁺` basis element, degree
    /// preserved. Uses `η (da) b = η d(ab) − (η a) db`.
    pub fn rightmul(&self, w: &[usize], b: usize) -> WordVec {
        if b == self.unit() {
            return vec![(w.to_vec(), one())];
        }
        if w.len() == 1 {
            return self.aplus_mult[w[0]][b]
                .iter()
                .map(|(k, v)| (vec![*k], v.clone()))
                .collect();
        }
        let m = w.len() - 1;
        let head = &w[..m];
        let last = w[m];
        let mut out: WordVec = Vec::new();
        // η d(a·b)
        for (k, v) in &self.aplus_mult[last][b] {
            debug_assert!(*k < self.dim_a, "product of A elements stays in A");
            let mut nw = head.to_vec();
            nw.push(*k);
            out.push((nw, v.clone()));
        }
        // − (η · a) db
        for (mut nw, v) in self.rightmul(head, last) {
            nw.push(b);
            out.push((nw, -v));
        }
        out
    }

    /// Right multiplication by a linear combination over `A⁺`.
    pub fn rightmul_vec(&self, w: &[usize], b: &SVec) -> WordVec {
        let mut out = Vec::new();
        for (bi, c) in b {
            for (nw, v) in self.rightmul(w, *bi) {
                out.push((nw, v * c));
            }
        }
        out
    }

    /// Left multiplication `b · ω` by an `A⁺` basis element.
    pub fn leftmul(&self, b: usize, w: &[usize]) -> WordVec {
        self.aplus_mult[b][w[0]]
            .iter()
            .filter(|(k, _)| w.len() > 1 || *k < self.dim_a)
            .map(|(k, v)| {
                let mut nw = w.to_vec();
                nw[0] = *k;
                (nw, v.clone())
            })
            .collect()
    }

    /// Product of two words, `ω · η`, of degree `deg ω + deg η`.
    pub fn mul_words(&self, w1: &[usize], w2: &[usize]) -> WordVec {
        // ω · (b₀ db₁ ⋯ dbₙ) = (ω · b₀) db₁ ⋯ dbₙ.
        self.rightmul(w1, w2[0])
            .into_iter()
            .map(|(mut nw, v)| {
                nw.extend_from_slice(&w2[1..]);
                (nw, v)
            })
            .collect()
    }

    /// Letterwise action `s · (a₀ da₁ ⋯ daₙ)`.
    pub fn act_word(&self, s: usize, w: &[usize]) -> WordVec {
        let mut acc: WordVec = vec![(Vec::with_capacity(w.len()), one())];
        for (pos, &l) in w.iter().enumerate() {
            let img = &self.aplus_act[s][l];
            let mut next = Vec::with_capacity(acc.len() * img.len());
            for (prefix, c) in &acc {
                for (k, v) in img {
                    debug_assert!(pos == 0 || *k < self.dim_a);
                    let mut nw = prefix.clone();
                    nw.push(*k);
                    next.push((nw, c * v));
                }
            }
            acc = next;
        }
        acc
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }
}

/// The graded space `Ωⁿ_G(A) = O_G ⊗ Ωⁿ(A)` for `n = 0..=level`, with basis
/// element `(s, word)` at index `s · word_count(n) + encode(word)`.
#[derive(Debug, Clone)]
pub struct FormSpace {
    group: Arc<FiniteGroup>,
    calc: WordCalc,
    level: usize,
}

impl FormSpace {
    pub fn new(alg: &GAlgebra, level: usize) -> Self {
        FormSpace {
            group: alg.group().clone(),
            calc: WordCalc::new(alg),
            level,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn calc(&self) -> &WordCalc {
        &self.calc
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Dimension of `Ωⁿ_G(A)`: `|G| · dim A` in degree 0 and
    /// `|G| · (dim A + 1) · (dim A)ⁿ` in degree `n ≥ 1`.
    pub fn dim(&self, deg: usize) -> usize {
        self.group.order() * self.calc.word_count(deg)
    }

    pub fn encode(&self, deg: usize, s: usize, w: &[usize]) -> usize {
        s * self.calc.word_count(deg) + self.calc.encode_word(deg, w)
    }

    pub fn decode(&self, deg: usize, idx: usize) -> (usize, Word) {
        let per = self.calc.word_count(deg);
        (idx / per, self.calc.decode_word(deg, idx % per))
    }

    fn pack(&self, deg: usize, s: usize, terms: WordVec) -> SVec {
        let base = s * self.calc.word_count(deg);
        let mut acc = BTreeMap::new();
        for (w, c) in terms {
            debug_assert_eq!(w.len(), deg + 1);
            let e = acc
                .entry(base + self.calc.encode_word(deg, &w))
                .or_insert_with(Scalar::zero);
            *e += c;
        }
        collect_svec(acc)
    }

    // ---- streaming operators on basis columns ----------------------------

    /// `d(f(s) ⊗ ω) = f(s) ⊗ dω`, degree `n → n + 1`.
    pub fn d_col(&self, deg: usize, idx: usize) -> SVec {
        let (s, w) = self.decode(deg, idx);
        match self.calc.d_word(&w) {
            Some(nw) => vec![(self.encode(deg + 1, s, &nw), one())],
            None => Vec::new(),
        }
    }

    /// `b(f(s) ⊗ ω dx) = (−1)^{n−1} f(s) ⊗ (ω x − (s⁻¹·x) ω)` on degree
    /// `n ≥ 1`; zero on degree 0.
    pub fn b_col(&self, deg: usize, idx: usize) -> SVec {
        if deg == 0 {
            return Vec::new();
        }
        let (s, w) = self.decode(deg, idx);
        let head = &w[..deg];
        let x = w[deg];
        let sg = sign(deg - 1);
        let mut terms: WordVec = self
            .calc
            .rightmul(head, x)
            .into_iter()
            .map(|(nw, c)| (nw, c * &sg))
            .collect();
        let sx = &self.calc.aplus_act[self.group.inverse(s)][x];
        for (k, v) in sx {
            for (nw, c) in self.calc.leftmul(*k, head) {
                terms.push((nw, -(c * v) * &sg));
            }
        }
        self.pack(deg - 1, s, terms)
    }

    /// The symmetry operator `T(f(s) ⊗ ω) = f(s) ⊗ s⁻¹ · ω`.
    pub fn t_col(&self, deg: usize, idx: usize) -> SVec {
        let (s, w) = self.decode(deg, idx);
        let terms = self.calc.act_word(self.group.inverse(s), &w);
        self.pack(deg, s, terms)
    }

    /// Inverse of the symmetry operator: `f(s) ⊗ s · ω`.
    pub fn t_inv_col(&self, deg: usize, idx: usize) -> SVec {
        let (s, w) = self.decode(deg, idx);
        let terms = self.calc.act_word(s, &w);
        self.pack(deg, s, terms)
    }

    /// Karoubi operator by its closed formula:
    /// `κ(f(s) ⊗ ω dx) = (−1)^{n−1} f(s) ⊗ (s⁻¹ · dx) ω` for `n ≥ 1`,
    /// `κ(f(s) ⊗ x) = f(s) ⊗ s⁻¹ · x` in degree 0.
    pub fn kappa_closed_col(&self, deg: usize, idx: usize) -> SVec {
        let (s, w) = self.decode(deg, idx);
        if deg == 0 {
            let terms = self.calc.act_word(self.group.inverse(s), &w);
            return self.pack(0, s, terms);
        }
        let head = &w[..deg];
        let x = w[deg];
        let sg = sign(deg - 1);
        let sx = &self.calc.aplus_act[self.group.inverse(s)][x];
        let mut terms: WordVec = Vec::new();
        for (k, v) in sx {
            // (d(s⁻¹x)) · ω, a product of a 1-form with an (n−1)-form.
            let dx = vec![self.calc.unit(), *k];
            for (nw, c) in self.calc.mul_words(&dx, head) {
                terms.push((nw, c * v * &sg));
            }
        }
        self.pack(deg, s, terms)
    }

    /// Connes-type boundary by its closed formula:
    /// `B(f(s) ⊗ x₀ dx₁ ⋯ dxₙ) = Σ_{i=0}^{n} (−1)^{n i}
    ///  f(s) ⊗ s⁻¹·(dx_{n+1−i} ⋯ dxₙ) dx₀ ⋯ dx_{n−i}`, degree `n → n + 1`.
    pub fn big_b_col(&self, deg: usize, idx: usize) -> SVec {
        let (s, w) = self.decode(deg, idx);
        if deg > 0 && w[0] == self.calc.unit() {
            return Vec::new(); // every summand contains d(1) = 0
        }
        let n = deg;
        let sinv = self.group.inverse(s);
        let mut terms: WordVec = Vec::new();
        for i in 0..=n {
            let sg = sign((n * i) % 2);
            // Letters x_{n+1−i} .. x_n get translated; then x₀ .. x_{n−i}.
            let mut expanded: WordVec = vec![(vec![self.calc.unit()], one())];
            for &l in &w[n + 1 - i..] {
                let img = &self.calc.aplus_act[sinv][l];
                let mut next = Vec::new();
                for (prefix, c) in &expanded {
                    for (k, v) in img {
                        let mut nw = prefix.clone();
                        nw.push(*k);
                        next.push((nw, c * v));
                    }
                }
                expanded = next;
            }
            for (mut nw, c) in expanded {
                nw.extend_from_slice(&w[..n + 1 - i]);
                terms.push((nw, c * &sg));
            }
        }
        self.pack(deg + 1, s, terms)
    }

    /// The group action on forms: `t · (f(s) ⊗ ω) = f(t s t⁻¹) ⊗ t · ω`.
    pub fn gact_col(&self, t: usize, deg: usize, idx: usize) -> SVec {
        let (s, w) = self.decode(deg, idx);
        let terms = self.calc.act_word(t, &w);
        self.pack(deg, self.group.conjugate(t, s), terms)
    }

    /// The function-algebra action: `δ_r · (f(s) ⊗ ω)` keeps the column iff
    /// `r = s`.
    pub fn ogact_col(&self, r: usize, deg: usize, idx: usize) -> SVec {
        let (s, _) = self.decode(deg, idx);
        if s == r {
            vec![(idx, one())]
        } else {
            Vec::new()
        }
    }

    /// Apply a streaming column operator to a sparse vector.
    pub fn apply<F>(&self, v: &SVec, mut op: F) -> SVec
    where
        F: FnMut(usize) -> SVec,
    {
        let mut acc = BTreeMap::new();
        for (i, c) in v {
            axpy(&mut acc, c, &op(*i));
        }
        collect_svec(acc)
    }

    // ---- matrix layer ----------------------------------------------------

    fn materialize<F>(&self, src_deg: usize, dst_deg: usize, mut op: F) -> SparseMatrix
    where
        F: FnMut(usize, usize) -> SVec,
    {
        SparseMatrix::from_columns(self.dim(dst_deg), self.dim(src_deg), |j| op(src_deg, j))
    }

    /// The differential `d` as a tower operator, valid on `0..=level−1`.
    pub fn op_d(&self) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        for n in 0..self.level {
            op.insert(n, n + 1, self.materialize(n, n + 1, |d, j| self.d_col(d, j)));
            op.valid.insert(n);
        }
        op
    }

    /// The Hochschild-type boundary `b`, valid on all degrees.
    pub fn op_b(&self) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        for n in 0..=self.level {
            if n > 0 {
                op.insert(n, n - 1, self.materialize(n, n - 1, |d, j| self.b_col(d, j)));
            }
            op.valid.insert(n);
        }
        op
    }

    /// The symmetry operator `T`, valid on all degrees.
    pub fn op_t(&self) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        for n in 0..=self.level {
            op.insert(n, n, self.materialize(n, n, |d, j| self.t_col(d, j)));
            op.valid.insert(n);
        }
        op
    }

    /// Inverse of the symmetry operator.
    pub fn op_t_inv(&self) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        for n in 0..=self.level {
            op.insert(n, n, self.materialize(n, n, |d, j| self.t_inv_col(d, j)));
            op.valid.insert(n);
        }
        op
    }

    /// The Karoubi operator `κ = id − (b d + d b)`, computed from the
    /// defining formula, valid on `0..=level−1` (it needs `d` one degree up).
    pub fn op_kappa(&self) -> TowerOp {
        let d = self.op_d();
        let b = self.op_b();
        let id = TowerOp::identity(self);
        id.sub(&b.compose(&d).add(&d.compose(&b)))
    }

    /// The Karoubi operator from its closed formula, valid on all degrees.
    pub fn op_kappa_closed(&self) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        for n in 0..=self.level {
            op.insert(
                n,
                n,
                self.materialize(n, n, |d, j| self.kappa_closed_col(d, j)),
            );
            op.valid.insert(n);
        }
        op
    }

    /// The boundary `B` from its closed formula, valid on `0..=level−1`.
    pub fn op_big_b(&self) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        for n in 0..self.level {
            op.insert(n, n + 1, self.materialize(n, n + 1, |d, j| self.big_b_col(d, j)));
            op.valid.insert(n);
        }
        op
    }

    /// `B` from the defining sum `Σ_{j=0}^{n} κʲ d` on degree `n`; valid on
    /// `0..=level−2` (the Karoubi factors act one degree up).
    pub fn op_big_b_sum(&self) -> TowerOp {
        let d = self.op_d();
        let kappa = self.op_kappa();
        let mut op = TowerOp::empty(self.level);
        for n in 0..self.level.saturating_sub(1) {
            if let Some(dmat) = d.comp(n, n + 1) {
                let zero = SparseMatrix::zero(self.dim(n + 1), self.dim(n + 1));
                let kmat = kappa.comp(n + 1, n + 1).unwrap_or(&zero);
                let mut acc = dmat.clone();
                let mut pow = dmat.clone();
                for _ in 1..=n {
                    pow = kmat.mul(&pow);
                    acc = acc.add(&pow);
                }
                op.insert(n, n + 1, acc);
            }
            op.valid.insert(n);
        }
        op
    }

    /// The group action of `t` on all degrees.
    pub fn op_gact(&self, t: usize) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        for n in 0..=self.level {
            op.insert(n, n, self.materialize(n, n, |d, j| self.gact_col(t, d, j)));
            op.valid.insert(n);
        }
        op
    }

    /// The delta-function action of `r` on all degrees.
    pub fn op_ogact(&self, r: usize) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        for n in 0..=self.level {
            op.insert(n, n, self.materialize(n, n, |d, j| self.ogact_col(r, d, j)));
            op.valid.insert(n);
        }
        op
    }
}

/// A degree-graded operator on a truncated form tower: one sparse matrix per
/// `(source degree, target degree)` pair, plus the set of source degrees on
/// which the operator is faithfully represented (no component lost to the
/// truncation).
#[derive(Debug, Clone)]
pub struct TowerOp {
    pub level: usize,
    pub comps: BTreeMap<(usize, usize), SparseMatrix>,
    pub valid: std::collections::BTreeSet<usize>,
}

impl TowerOp {
    pub fn empty(level: usize) -> Self {
        TowerOp {
            level,
            comps: BTreeMap::new(),
            valid: Default::default(),
        }
    }

    /// The identity operator on a form tower.
    pub fn identity(space: &FormSpace) -> Self {
        let mut op = TowerOp::empty(space.level());
        for n in 0..=space.level() {
            op.insert(n, n, SparseMatrix::identity(space.dim(n)));
            op.valid.insert(n);
        }
        op
    }

    /// Insert a component, dropping zero matrices.
    pub fn insert(&mut self, src: usize, dst: usize, m: SparseMatrix) {
        if !m.is_zero() {
            self.comps.insert((src, dst), m);
        }
    }

    /// Component as an option (absent = zero).
    pub fn comp(&self, src: usize, dst: usize) -> Option<&SparseMatrix> {
        self.comps.get(&(src, dst))
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &TowerOp) -> TowerOp {
        assert_eq!(self.level, other.level);
        let mut out = TowerOp::empty(self.level);
        'src: for &src in &other.valid {
            let mut acc: BTreeMap<usize, SparseMatrix> = BTreeMap::new();
            for (&(s, mid), m1) in other.comps.range((src, 0)..=(src, usize::MAX)) {
                debug_assert_eq!(s, src);
                if !self.valid.contains(&mid) {
                    continue 'src;
                }
                for (&(s2, dst), m2) in self.comps.range((mid, 0)..=(mid, usize::MAX)) {
                    debug_assert_eq!(s2, mid);
                    let prod = m2.mul(m1);
                    match acc.get_mut(&dst) {
                        Some(a) => *a = a.add(&prod),
                        None => {
                            acc.insert(dst, prod);
                        }
                    }
                }
            }
            for (dst, m) in acc {
                // Sum with anything already there (cannot happen per src).
                out.insert(src, dst, m);
            }
            out.valid.insert(src);
        }
        out
    }

    /// `self + alpha · other` on the intersection of validity sets.
    pub fn add_scaled(&self, other: &TowerOp, alpha: &Scalar) -> TowerOp {
        assert_eq!(self.level, other.level);
        let mut out = TowerOp::empty(self.level);
        out.valid = self.valid.intersection(&other.valid).copied().collect();
        let keys: std::collections::BTreeSet<(usize, usize)> = self
            .comps
            .keys()
            .chain(other.comps.keys())
            .copied()
            .collect();
        for (src, dst) in keys {
            if !out.valid.contains(&src) {
                continue;
            }
            let a = self.comp(src, dst);
            let b = other.comp(src, dst);
            let m = match (a, b) {
                (Some(a), Some(b)) => a.add_scaled(b, alpha),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.scale(alpha),
                (None, None) => continue,
            };
            out.insert(src, dst, m);
        }
        out
    }

    pub fn add(&self, other: &TowerOp) -> TowerOp {
        self.add_scaled(other, &one())
    }

    pub fn sub(&self, other: &TowerOp) -> TowerOp {
        self.add_scaled(other, &-one())
    }

    pub fn scale(&self, alpha: &Scalar) -> TowerOp {
        let mut out = TowerOp::empty(self.level);
        out.valid = self.valid.clone();
        if alpha.is_zero() {
            return out;
        }
        for (&k, m) in &self.comps {
            out.comps.insert(k, m.scale(alpha));
        }
        out
    }

    /// Force the operator to zero outside the given source degrees while
    /// keeping validity: the operator is *known* to vanish there.
    pub fn zero_outside(&self, degrees: &[usize]) -> TowerOp {
        let keep: std::collections::BTreeSet<usize> = degrees.iter().copied().collect();
        let mut out = self.clone();
        out.comps.retain(|(s, _), _| keep.contains(s));
        out
    }

    /// Restrict validity to the given degrees.
    pub fn restrict(&self, degrees: &[usize]) -> TowerOp {
        let keep: std::collections::BTreeSet<usize> = degrees.iter().copied().collect();
        let mut out = self.clone();
        out.valid = out.valid.intersection(&keep).copied().collect();
        out.comps.retain(|(s, _), _| out.valid.contains(s));
        out
    }

    /// True if all components vanish on the given source degrees; the
    /// degrees must be valid for the operator.
    pub fn is_zero_on(&self, degrees: &[usize]) -> bool {
        degrees.iter().all(|d| {
            assert!(self.valid.contains(d), "degree {d} not valid");
            self.comps
                .range((*d, 0)..=(*d, usize::MAX))
                .all(|(_, m)| m.is_zero())
        })
    }

    /// Check `self = other` on the given source degrees (which must be valid
    /// for both). Returns a witness description on failure.
    pub fn equal_on(&self, other: &TowerOp, degrees: &[usize]) -> Result<(), EngineError> {
        for &d in degrees {
            if !self.valid.contains(&d) || !other.valid.contains(&d) {
                return Err(EngineError::DegreeOverflow {
                    needed: d,
                    max: self.level,
                });
            }
            let dsts: std::collections::BTreeSet<usize> = self
                .comps
                .range((d, 0)..=(d, usize::MAX))
                .chain(other.comps.range((d, 0)..=(d, usize::MAX)))
                .map(|(&(_, t), _)| t)
                .collect();
            for t in dsts {
                let zero;
                let a = match self.comp(d, t) {
                    Some(a) => a,
                    None => {
                        zero = SparseMatrix::zero(
                            other.comp(d, t).unwrap().rows(),
                            other.comp(d, t).unwrap().cols(),
                        );
                        &zero
                    }
                };
                let bz;
                let b = match other.comp(d, t) {
                    Some(b) => b,
                    None => {
                        bz = SparseMatrix::zero(a.rows(), a.cols());
                        &bz
                    }
                };
                if a != b {
                    let diff = a.sub(b);
                    let (i, j, v) = diff.entries().next().map(|(i, j, v)| (i, j, v.clone())).unwrap();
                    return Err(EngineError::IdentityViolation(format!(
                        "degree {d} → {t}: entry ({i}, {j}) differs by {v}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The valid source degrees, ascending.
    pub fn valid_degrees(&self) -> Vec<usize> {
        self.valid.iter().copied().collect()
    }
}

// ---- constructions that live on the word calculus ------------------------

/// The truncated even-form algebra under the Fedosov product
/// `ω ∘ η = ωη − dω dη` (signs collapse since `|ω|` is even), on
/// `Ω^{even, ≤ 2N−2}(A)`. For `N = 1` this is `A` itself.
pub fn fedosov_truncation(alg: &GAlgebra, n_level: usize) -> Result<GAlgebra, EngineError> {
    assert!(n_level >= 1);
    if n_level == 1 {
        return Ok(alg.clone());
    }
    let calc = WordCalc::new(alg);
    let group = alg.group().clone();
    let degs: Vec<usize> = (0..n_level).map(|k| 2 * k).collect();
    let offsets: Vec<usize> = degs
        .iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += calc.word_count(d);
            Some(o)
        })
        .collect();
    let dim: usize = degs.iter().map(|&d| calc.word_count(d)).sum();
    let lookup = |deg: usize| -> Option<usize> {
        if deg % 2 == 0 && deg / 2 < n_level {
            Some(offsets[deg / 2])
        } else {
            None
        }
    };
    let pack = |terms: WordVec| -> SVec {
        let mut acc = BTreeMap::new();
        for (w, c) in terms {
            let deg = w.len() - 1;
            if let Some(off) = lookup(deg) {
                // Degree-0 words with a unit letter cannot arise: products of
                // degree-0 elements of A stay in A.
                let e = acc
                    .entry(off + calc.encode_word(deg, &w))
                    .or_insert_with(Scalar::zero);
                *e += c;
            }
        }
        collect_svec(acc)
    };
    let labels = degs
        .iter()
        .flat_map(|&d| (0..calc.word_count(d)).map(move |i| format!("w{d}_{i}")))
        .collect();
    let action = (0..group.order())
        .map(|s| {
            SparseMatrix::from_columns(dim, dim, |j| {
                let (deg, wi) = decode_block(&degs, &offsets, j);
                let w = calc.decode_word(deg, wi);
                pack(calc.act_word(s, &w))
            })
        })
        .collect();
    let module = crate::algebra::GModule::new(group, labels, action)?;
    let mut mult: Vec<Vec<SVec>> = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        let (di, wi) = decode_block(&degs, &offsets, i);
        let w1 = calc.decode_word(di, wi);
        for (j, slot) in mult[i].iter_mut().enumerate() {
            let (dj, wj) = decode_block(&degs, &offsets, j);
            let w2 = calc.decode_word(dj, wj);
            let mut terms = calc.mul_words(&w1, &w2);
            if let (Some(dw1), Some(dw2)) = (calc.d_word(&w1), calc.d_word(&w2)) {
                for (nw, c) in calc.mul_words(&dw1, &dw2) {
                    terms.push((nw, -c));
                }
            }
            *slot = pack(terms);
        }
    }
    GAlgebra::new(module, mult, None)
}

fn decode_block(degs: &[usize], offsets: &[usize], idx: usize) -> (usize, usize) {
    for (k, &off) in offsets.iter().enumerate().rev() {
        if idx >= off {
            return (degs[k], idx - off);
        }
    }
    unreachable!()
}

/// Equivariant witness `φ : A → Ω²(A)` with
/// `φ(xy) = φ(x) y + x φ(y) − dx dy`, found by an exact linear solve.
/// Returns `None` when the system is infeasible (the algebra is not
/// quasifree).
pub fn quasifree_witness(alg: &GAlgebra) -> Option<SparseMatrix> {
    let calc = WordCalc::new(alg);
    let da = alg.dim();
    let d2 = calc.word_count(2);
    let group = alg.group().clone();
    // Unknown: the d2 × da matrix of φ, vectorized column-major.
    let unknowns = d2 * da;
    let mut rows: Vec<(usize, usize, Scalar)> = Vec::new();
    let mut rhs: Vec<(usize, Scalar)> = Vec::new();
    let mut row_count = 0usize;
    let pack2 = |terms: WordVec| -> SVec {
        let mut acc = BTreeMap::new();
        for (w, c) in terms {
            let e = acc.entry(calc.encode_word(2, &w)).or_insert_with(Scalar::zero);
            *e += c;
        }
        collect_svec(acc)
    };
    // Multiplicativity equations, one block of d2 rows per basis pair.
    for i in 0..da {
        for j in 0..da {
            let base = row_count;
            row_count += d2;
            // φ(x_i x_j):
            for (k, c) in alg.basis_product(i, j) {
                for r in 0..d2 {
                    rows.push((base + r, k * d2 + r, c.clone()));
                }
            }
            // − φ(x_i) · x_j: right multiplication on Ω².
            for r in 0..d2 {
                let w = calc.decode_word(2, r);
                for (idx2, c) in pack2(calc.rightmul(&w, j)) {
                    rows.push((base + idx2, i * d2 + r, -c));
                }
            }
            // − x_i · φ(x_j).
            for r in 0..d2 {
                let w = calc.decode_word(2, r);
                for (idx2, c) in pack2(calc.leftmul(i, &w)) {
                    rows.push((base + idx2, j * d2 + r, -c));
                }
            }
            // = − dx_i dx_j.
            let dxdy = vec![calc.unit(), i, j];
            rhs.push((base + calc.encode_word(2, &dxdy), -one()));
        }
    }
    // Equivariance: φ(s·x) = s·φ(x).
    for s in 0..group.order() {
        if s == group.identity() {
            continue;
        }
        let base = row_count;
        row_count += d2 * da;
        for x in 0..da {
            // φ applied to s·x:
            for (k, c) in alg.module().act_vec(s, &vec![(x, one())]) {
                for r in 0..d2 {
                    rows.push((base + x * d2 + r, k * d2 + r, c.clone()));
                }
            }
            // − s · φ(x):
            for r in 0..d2 {
                let w = calc.decode_word(2, r);
                for (idx2, c) in pack2(calc.act_word(s, &w)) {
                    rows.push((base + x * d2 + idx2, x * d2 + r, -c));
                }
            }
        }
    }
    let system = SparseMatrix::from_triplets(row_count, unknowns, rows);
    let rhs_m = SparseMatrix::from_triplets(row_count, 1, rhs.into_iter().map(|(r, v)| (r, 0, v)));
    let sol = solve(&system, &rhs_m)?;
    if system.mul(&sol) != rhs_m {
        return None;
    }
    Some(SparseMatrix::from_triplets(
        d2,
        da,
        sol.col(0).iter().map(|(k, v)| (k % d2, k / d2, v.clone())),
    ))
}

/// Equivariant graded connection `∇ : Ωⁿ(A) → Ωⁿ⁺¹(A)` with
/// `∇(x ω) = x ∇(ω)` and `∇(ω x) = ∇(ω) x + (−1)ⁿ ω dx`, by linear solve.
pub fn connection_witness(alg: &GAlgebra, n: usize) -> Option<SparseMatrix> {
    assert!(n >= 1);
    let calc = WordCalc::new(alg);
    let da = alg.dim();
    let dn = calc.word_count(n);
    let dn1 = calc.word_count(n + 1);
    let group = alg.group().clone();
    let unknowns = dn1 * dn;
    let pack = |deg: usize, terms: WordVec| -> SVec {
        let mut acc = BTreeMap::new();
        for (w, c) in terms {
            let e = acc
                .entry(calc.encode_word(deg, &w))
                .or_insert_with(Scalar::zero);
            *e += c;
        }
        collect_svec(acc)
    };
    let mut rows: Vec<(usize, usize, Scalar)> = Vec::new();
    let mut rhs: Vec<(usize, Scalar)> = Vec::new();
    let mut row_count = 0usize;
    for x in 0..da {
        for widx in 0..dn {
            let w = calc.decode_word(n, widx);
            // Left rule: ∇(xω) − x∇(ω) = 0.
            let base = row_count;
            row_count += dn1;
            for (k, c) in pack(n, calc.leftmul(x, &w)) {
                for r in 0..dn1 {
                    rows.push((base + r, k * dn1 + r, c.clone()));
                }
            }
            for r in 0..dn1 {
                let v = calc.decode_word(n + 1, r);
                for (idx2, c) in pack(n + 1, calc.leftmul(x, &v)) {
                    rows.push((base + idx2, widx * dn1 + r, -c));
                }
            }
            // Right rule: ∇(ωx) − ∇(ω)x = (−1)ⁿ ω dx.
            let base = row_count;
            row_count += dn1;
            for (k, c) in pack(n, calc.rightmul(&w, x)) {
                for r in 0..dn1 {
                    rows.push((base + r, k * dn1 + r, c.clone()));
                }
            }
            for r in 0..dn1 {
                let v = calc.decode_word(n + 1, r);
                for (idx2, c) in pack(n + 1, calc.rightmul(&v, x)) {
                    rows.push((base + idx2, widx * dn1 + r, -c));
                }
            }
            let mut wdx = w.clone();
            wdx.push(x);
            rhs.push((base + calc.encode_word(n + 1, &wdx), sign(n)));
        }
    }
    // Equivariance: ∇(s·ω) = s·∇(ω).
    for s in 0..group.order() {
        if s == group.identity() {
            continue;
        }
        let base = row_count;
        row_count += dn1 * dn;
        for widx in 0..dn {
            let w = calc.decode_word(n, widx);
            for (k, c) in pack(n, calc.act_word(s, &w)) {
                for r in 0..dn1 {
                    rows.push((base + widx * dn1 + r, k * dn1 + r, c.clone()));
                }
            }
            for r in 0..dn1 {
                let v = calc.decode_word(n + 1, r);
                for (idx2, c) in pack(n + 1, calc.act_word(s, &v)) {
                    rows.push((base + widx * dn1 + idx2, widx * dn1 + r, -c));
                }
            }
        }
    }
    let system = SparseMatrix::from_triplets(row_count, unknowns, rows);
    let rhs_m = SparseMatrix::from_triplets(row_count, 1, rhs.into_iter().map(|(r, v)| (r, 0, v)));
    let sol = solve(&system, &rhs_m)?;
    if system.mul(&sol) != rhs_m {
        return None;
    }
    Some(SparseMatrix::from_triplets(
        dn1,
        dn,
        sol.col(0).iter().map(|(k, v)| (k % dn1, k / dn1, v.clone())),
    ))
}
