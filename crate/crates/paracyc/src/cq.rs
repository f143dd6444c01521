//! The polynomial operator suite on truncated form towers.
//!
//! All of the operators here are built from the Karoubi operator `κ`, the
//! boundaries `b`, `B`, `d`, and the symmetry `T`. The scalar-level
//! ingredients are polynomials in one variable `x` (standing for `κ²`),
//! indexed by an integer: averaging polynomials `N_n`, spectral projections
//! `f_n` and their discrete primitives `g_n`. From these the suite builds the
//! chain map `P` homotopic to the identity, the defect operators `Q` and `R`,
//! and the chain homotopies `H` and `L` realizing a covariant homotopy
//! equivalence between the two boundaries `∂` and `δ` on the same tower.
//!
//! Every identity the construction relies on is re-checked exactly, both at
//! the polynomial level and at the matrix level on all degrees where the
//! truncation represents the operators faithfully.

use crate::error::EngineError;
use crate::forms::{FormSpace, TowerOp};
use crate::linalg::SparseMatrix;
use crate::para::{delta_tower, x_boundary_tower};
use crate::scalar::{one, q, Scalar};
use num::traits::Zero;

// ---------------------------------------------------------------------------
// Exact polynomials in one variable.
// ---------------------------------------------------------------------------

/// A polynomial with exact rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(pub Vec<Scalar>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Scalar) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    pub fn one() -> Self {
        Poly::constant(one())
    }

    /// The variable `x`.
    pub fn x() -> Self {
        Poly(vec![Scalar::zero(), one()])
    }

    fn trim(mut self) -> Self {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Scalar::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly(out).trim()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-one()))
    }

    pub fn scale(&self, a: &Scalar) -> Poly {
        Poly(self.0.iter().map(|c| c * a).collect()).trim()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trim()
    }

    /// Exact division by `x − 1`; `None` when the remainder is nonzero.
    pub fn div_x_minus_one(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let mut out = vec![Scalar::zero(); self.0.len() - 1];
        let mut carry = Scalar::zero();
        for i in (0..self.0.len()).rev() {
            let c = &self.0[i] + &carry;
            if i == 0 {
                if !c.is_zero() {
                    return None;
                }
            } else {
                out[i - 1] = c.clone();
                carry = c;
            }
        }
        Some(Poly(out).trim())
    }

    /// Evaluate at a square matrix (Horner scheme).
    pub fn eval_matrix(&self, m: &SparseMatrix) -> SparseMatrix {
        let n = m.rows();
        let mut acc = SparseMatrix::zero(n, n);
        for c in self.0.iter().rev() {
            acc = m.mul(&acc);
            if !c.is_zero() {
                acc = acc.add(&SparseMatrix::scalar_identity(n, c));
            }
        }
        acc
    }
}

/// Averaging polynomial: `N_n(x) = (1/n) Σ_{j<n} xʲ` for `n ≥ 1`, and the
/// constant 1 for `n ≤ 0`.
pub fn poly_n(n: i64) -> Poly {
    if n <= 0 {
        return Poly::one();
    }
    let c = q(1, n);
    Poly(vec![c; n as usize])
}

/// Spectral polynomial `f_n = N_n N_{n+1} (1 + (n − ½)(1 − x))`, with
/// `f_j = 1` for negative `j`.
pub fn poly_f(n: i64) -> Poly {
    if n < 0 {
        return Poly::one();
    }
    let corr = Poly::one().add(
        &Poly::one()
            .sub(&Poly::x())
            .scale(&(q(n, 1) - q(1, 2))),
    );
    poly_n(n).mul(&poly_n(n + 1)).mul(&corr)
}

/// Discrete primitive `g_n = −(n − ½) N_n N_{n+1}
/// + (N_n (N_{n+1} − 1) + (N_n − 1)) / (x − 1)`, with `g_j = 0` for
/// negative `j`.
pub fn poly_g(n: i64) -> Poly {
    if n < 0 {
        return Poly::zero();
    }
    let nn = poly_n(n);
    let nn1 = poly_n(n + 1);
    let numerator = nn
        .mul(&nn1.sub(&Poly::one()))
        .add(&nn.sub(&Poly::one()));
    let quot = numerator
        .div_x_minus_one()
        .expect("the numerator is divisible by x − 1");
    nn.mul(&nn1).scale(&(q(1, 2) - q(n, 1))).add(&quot)
}

/// The degree-indexed chain-map polynomial: `F_m = f_{2n−2} f_{2n−1} f_{2n}`
/// with `n = ⌈m/2⌉`.
pub fn poly_f_cap(m: i64) -> Poly {
    let n = (m + 1) / 2;
    poly_f(2 * n - 2).mul(&poly_f(2 * n - 1)).mul(&poly_f(2 * n))
}

/// The degree-indexed homotopy polynomial:
/// `S_m = g_{2n−2} + g_{2n−1} f_{2n−2} + g_{2n} f_{2n−1} f_{2n−2}` with
/// `n = ⌈m/2⌉`, so that `1 − F_m = (1 − x) S_m`.
pub fn poly_s_cap(m: i64) -> Poly {
    let n = (m + 1) / 2;
    poly_g(2 * n - 2)
        .add(&poly_g(2 * n - 1).mul(&poly_f(2 * n - 2)))
        .add(
            &poly_g(2 * n)
                .mul(&poly_f(2 * n - 1))
                .mul(&poly_f(2 * n - 2)),
        )
}

/// The middle factor of the defect operator:
/// `N_{2n} (1 + (2n − ½)(1 − x)) (g_{2n−2} f_{2n−1} + g_{2n−1}
/// − g_{2n+2} f_{2n+1} − g_{2n+1})`.
fn poly_q_mid(n: i64) -> Poly {
    let corr = Poly::one().add(
        &Poly::one()
            .sub(&Poly::x())
            .scale(&(q(2 * n, 1) - q(1, 2))),
    );
    let bracket = poly_g(2 * n - 2)
        .mul(&poly_f(2 * n - 1))
        .add(&poly_g(2 * n - 1))
        .sub(&poly_g(2 * n + 2).mul(&poly_f(2 * n + 1)))
        .sub(&poly_g(2 * n + 1));
    poly_n(2 * n).mul(&corr).mul(&bracket)
}

/// The polynomial part of `K_n`:
/// `(1/2n) f_{2n−2} f_{2n−1} N_{2n+1} (1 + (2n − ½)(1 − x))`.
fn poly_k(n: i64) -> Poly {
    assert!(n > 0);
    let corr = Poly::one().add(
        &Poly::one()
            .sub(&Poly::x())
            .scale(&(q(2 * n, 1) - q(1, 2))),
    );
    poly_f(2 * n - 2)
        .mul(&poly_f(2 * n - 1))
        .mul(&poly_n(2 * n + 1))
        .mul(&corr)
        .scale(&q(1, 2 * n))
}

// ---------------------------------------------------------------------------
// The operator suite on a truncated form tower.
// ---------------------------------------------------------------------------

/// Matrix realizations of the primitive operators per degree, plus the two
/// boundaries, on a form tower truncated at `level`.
pub struct CqSuite {
    pub level: usize,
    dims: Vec<usize>,
    /// Karoubi operator by its closed formula, one matrix per degree.
    kappa: Vec<SparseMatrix>,
    k2: Vec<SparseMatrix>,
    t: Vec<SparseMatrix>,
    /// `d[m] : Ωᵐ → Ωᵐ⁺¹` for `m < level`.
    d: Vec<SparseMatrix>,
    /// `b[m] : Ωᵐ → Ωᵐ⁻¹` (the entry at 0 is an empty placeholder).
    b: Vec<SparseMatrix>,
    /// `B[m] : Ωᵐ → Ωᵐ⁺¹` for `m < level`.
    bigb: Vec<SparseMatrix>,
    /// The X-complex boundary transported to forms.
    pub partial: TowerOp,
    /// The rescaled boundary with `δ² = id − T`.
    pub delta: TowerOp,
}

impl CqSuite {
    pub fn new(space: &FormSpace) -> Self {
        let level = space.level();
        let dims: Vec<usize> = (0..=level).map(|m| space.dim(m)).collect();
        let kop = space.op_kappa_closed();
        let top = space.op_t();
        let dop = space.op_d();
        let bop = space.op_b();
        let bigbop = space.op_big_b();
        let kappa: Vec<SparseMatrix> = (0..=level)
            .map(|m| kop.comp(m, m).cloned().unwrap_or_else(|| SparseMatrix::zero(dims[m], dims[m])))
            .collect();
        let k2 = kappa.iter().map(|k| k.mul(k)).collect();
        let t = (0..=level)
            .map(|m| top.comp(m, m).cloned().unwrap_or_else(|| SparseMatrix::zero(dims[m], dims[m])))
            .collect();
        let d = (0..level)
            .map(|m| dop.comp(m, m + 1).cloned().unwrap_or_else(|| SparseMatrix::zero(dims[m + 1], dims[m])))
            .collect();
        let b = (0..=level)
            .map(|m| {
                if m == 0 {
                    SparseMatrix::zero(0, dims[0])
                } else {
                    bop.comp(m, m - 1)
                        .cloned()
                        .unwrap_or_else(|| SparseMatrix::zero(dims[m - 1], dims[m]))
                }
            })
            .collect();
        let bigb = (0..level)
            .map(|m| {
                bigbop
                    .comp(m, m + 1)
                    .cloned()
                    .unwrap_or_else(|| SparseMatrix::zero(dims[m + 1], dims[m]))
            })
            .collect();
        CqSuite {
            level,
            dims,
            kappa,
            k2,
            t,
            d,
            b,
            bigb,
            partial: x_boundary_tower(space),
            delta: delta_tower(space),
        }
    }

    fn ident(&self, m: usize) -> SparseMatrix {
        SparseMatrix::identity(self.dims[m])
    }

    fn id_plus_t(&self, m: usize) -> SparseMatrix {
        self.ident(m).add(&self.t[m])
    }

    /// Evaluate a degree-indexed polynomial family as a diagonal tower
    /// operator, valid on every degree.
    pub fn op_diag<F>(&self, poly_of: F) -> TowerOp
    where
        F: Fn(i64) -> Poly,
    {
        let mut op = TowerOp::empty(self.level);
        for m in 0..=self.level {
            op.insert(m, m, poly_of(m as i64).eval_matrix(&self.k2[m]));
            op.valid.insert(m);
        }
        op
    }

    /// The identity operator.
    pub fn op_id(&self) -> TowerOp {
        self.op_diag(|_| Poly::one())
    }

    /// The symmetry operator `T` as a tower operator.
    pub fn op_t(&self) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        for m in 0..=self.level {
            op.insert(m, m, self.t[m].clone());
            op.valid.insert(m);
        }
        op
    }

    /// The chain map `F`, given by `F_m(κ²)` on `m`-forms.
    pub fn op_f_cap(&self) -> TowerOp {
        self.op_diag(poly_f_cap)
    }

    /// The homotopy coefficient `S`, given by `S_m(κ²)` on `m`-forms.
    pub fn op_s_cap(&self) -> TowerOp {
        self.op_diag(poly_s_cap)
    }

    /// The defect operator `Q`:
    /// `Q_{2n} = −1/(2n+1) · mid_n(κ²) (id + T) B` and
    /// `Q_{2n+1} = +1/(2n+1) · mid_n(κ²) (id + T) b`, the polynomial part
    /// acting at the target degree.
    pub fn op_q(&self) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        for m in 0..=self.level {
            if m % 2 == 0 {
                if m < self.level {
                    let n = (m / 2) as i64;
                    let mid = poly_q_mid(n).eval_matrix(&self.k2[m + 1]);
                    let mat = mid
                        .mul(&self.id_plus_t(m + 1))
                        .mul(&self.bigb[m])
                        .scale(&-q(1, 2 * n + 1));
                    op.insert(m, m + 1, mat);
                    op.valid.insert(m);
                }
            } else {
                let n = ((m - 1) / 2) as i64;
                let mid = poly_q_mid(n).eval_matrix(&self.k2[m - 1]);
                let mat = mid
                    .mul(&self.id_plus_t(m - 1))
                    .mul(&self.b[m])
                    .scale(&q(1, 2 * n + 1));
                op.insert(m, m - 1, mat);
                op.valid.insert(m);
            }
        }
        op
    }

    /// The homotopy `h` for the X-type boundary: `h_{2n} = (id + κ) d − b`,
    /// `h_{2n+1} = 0`.
    pub fn op_h(&self) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        for m in 0..=self.level {
            if m % 2 == 0 {
                if m < self.level {
                    let up = self
                        .ident(m + 1)
                        .add(&self.kappa[m + 1])
                        .mul(&self.d[m]);
                    op.insert(m, m + 1, up);
                    if m > 0 {
                        op.insert(m, m - 1, self.b[m].neg());
                    }
                    op.valid.insert(m);
                }
            } else {
                op.valid.insert(m);
            }
        }
        op
    }

    /// The homotopy `l` for the rescaled boundary: `l_{2n} = (id + κ) d`,
    /// `l_{2n+1} = −1/(n+1) (id + κ) d`.
    pub fn op_l(&self) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        for m in 0..self.level {
            let up = self.ident(m + 1).add(&self.kappa[m + 1]).mul(&self.d[m]);
            let c = if m % 2 == 0 {
                one()
            } else {
                -q(1, ((m - 1) / 2 + 1) as i64)
            };
            op.insert(m, m + 1, up.scale(&c));
            op.valid.insert(m);
        }
        op
    }

    /// The second defect operator `R`:
    /// `R_{2n} = −Σ_{j=0}^{n−2} (n−j−1) κ^{2j} K_n b` and
    /// `R_{2n−1} = (1/n)(id + κ) Σ_{j=0}^{n−2} (n−j−1) κ^{2j} K_n d`, with
    /// `K_n = (1/2n) f_{2n−2} f_{2n−1} N_{2n+1} (1 + (2n−½)(1−κ²)) (id + T)`
    /// and `R₀ = 0`.
    pub fn op_r(&self) -> TowerOp {
        let mut op = TowerOp::empty(self.level);
        let weighted_k = |n: i64, deg: usize| -> SparseMatrix {
            // Σ_{j=0}^{n−2} (n−j−1) κ^{2j} · K_n(κ²) (id + T) at `deg`.
            debug_assert!(n >= 2);
            let mut weight = Poly::zero();
            for j in 0..=n - 2 {
                let mut coeffs = vec![Scalar::zero(); j as usize + 1];
                coeffs[j as usize] = q(n - j - 1, 1);
                weight = weight.add(&Poly(coeffs));
            }
            weight
                .mul(&poly_k(n))
                .eval_matrix(&self.k2[deg])
                .mul(&self.id_plus_t(deg))
        };
        for m in 0..=self.level {
            if m % 2 == 0 {
                let n = (m / 2) as i64;
                if n >= 2 {
                    let mat = weighted_k(n, m - 1).mul(&self.b[m]).neg();
                    op.insert(m, m - 1, mat);
                }
                op.valid.insert(m);
            } else {
                let n = ((m + 1) / 2) as i64;
                if m < self.level {
                    if n >= 2 {
                        let mat = self
                            .ident(m + 1)
                            .add(&self.kappa[m + 1])
                            .mul(&weighted_k(n, m + 1))
                            .mul(&self.d[m])
                            .scale(&q(1, n));
                        op.insert(m, m + 1, mat);
                    }
                    op.valid.insert(m);
                }
            }
        }
        op
    }

    /// The chain map `P = F + ½ Q ∂`, homotopic to the identity for both
    /// boundaries.
    pub fn op_p(&self) -> TowerOp {
        self.op_f_cap()
            .add(&self.op_q().compose(&self.partial).scale(&q(1, 2)))
    }

    /// The homotopy `H` with `id − P = ∂H + H∂`: `H_{2n} = h S + ½ Q` on even
    /// degrees, zero on odd degrees.
    pub fn op_big_h(&self) -> TowerOp {
        let evens: Vec<usize> = (0..=self.level).filter(|m| m % 2 == 0).collect();
        self.op_h()
            .compose(&self.op_s_cap())
            .add(&self.op_q().scale(&q(1, 2)))
            .zero_outside(&evens)
    }

    /// The homotopy `L` with `id − P = δL + Lδ`: `L_{2n} = l S + ½ Q`,
    /// `L_{2n+1} = l S`.
    pub fn op_big_l(&self) -> TowerOp {
        let evens: Vec<usize> = (0..=self.level).filter(|m| m % 2 == 0).collect();
        self.op_l()
            .compose(&self.op_s_cap())
            .add(&self.op_q().scale(&q(1, 2)).zero_outside(&evens))
    }

    /// The chain map `φ = P + ½ R ∂ : (∂-complex) → (δ-complex)`.
    pub fn op_phi(&self) -> TowerOp {
        self.op_p()
            .add(&self.op_r().compose(&self.partial).scale(&q(1, 2)))
    }

    /// The chain map `ψ = P + ½ ∂ R : (δ-complex) → (∂-complex)`.
    pub fn op_psi(&self) -> TowerOp {
        self.op_p()
            .add(&self.partial.compose(&self.op_r()).scale(&q(1, 2)))
    }

    // -----------------------------------------------------------------------
    // Identity checks.
    // -----------------------------------------------------------------------

    /// Degrees `0..=level − r`.
    fn degs_to(&self, r: usize) -> Vec<usize> {
        (0..=self.level.saturating_sub(r)).collect()
    }

    /// Polynomial-level identities: `g_n (1 − x) = 1 − f_n`, the two
    /// expressions for `S`, `1 − F_m = (1 − x) S_m`, and the telescoping
    /// difference formula for `S`.
    pub fn check_polynomials(max_index: i64) -> Result<(), EngineError> {
        for n in -2..=max_index {
            let lhs = poly_g(n).mul(&Poly::one().sub(&Poly::x()));
            let rhs = Poly::one().sub(&poly_f(n));
            if lhs != rhs {
                return Err(EngineError::IdentityViolation(format!(
                    "primitive relation fails at index {n}"
                )));
            }
        }
        for m in 0..=max_index {
            let lhs = Poly::one().sub(&poly_f_cap(m));
            let rhs = Poly::one().sub(&Poly::x()).mul(&poly_s_cap(m));
            if lhs != rhs {
                return Err(EngineError::IdentityViolation(format!(
                    "homotopy coefficient relation fails at degree {m}"
                )));
            }
            // Alternative expression for S.
            let n = (m + 1) / 2;
            let alt = poly_g(2 * n)
                .add(&poly_g(2 * n - 1).mul(&poly_f(2 * n)))
                .add(&poly_g(2 * n - 2).mul(&poly_f(2 * n - 1)).mul(&poly_f(2 * n)));
            if alt != poly_s_cap(m) {
                return Err(EngineError::IdentityViolation(format!(
                    "alternative homotopy coefficient differs at degree {m}"
                )));
            }
        }
        for n in 0..=max_index / 2 {
            let lhs = poly_s_cap(2 * n).sub(&poly_s_cap(2 * n + 2));
            let rhs = poly_f(2 * n).mul(
                &poly_g(2 * n - 1)
                    .sub(&poly_g(2 * n + 1))
                    .add(&poly_g(2 * n - 2).mul(&poly_f(2 * n - 1)))
                    .sub(&poly_g(2 * n + 2).mul(&poly_f(2 * n + 1))),
            );
            if lhs != rhs {
                return Err(EngineError::IdentityViolation(format!(
                    "telescoping difference fails at index {n}"
                )));
            }
        }
        Ok(())
    }

    /// `κ = id − (b d + d b)` matches the closed formula on `0..=level−1`.
    pub fn check_kappa(&self, space: &FormSpace) -> Result<(), EngineError> {
        let defined = space.op_kappa();
        let closed = space.op_kappa_closed();
        closed.equal_on(&defined, &self.degs_to(1))
    }

    /// `B = Σ_{j≤n} κʲ d` matches the closed formula on `0..=level−2`.
    pub fn check_big_b(&self, space: &FormSpace) -> Result<(), EngineError> {
        space
            .op_big_b()
            .equal_on(&space.op_big_b_sum(), &self.degs_to(2))
    }

    /// Power relations of the Karoubi operator on `n`-forms:
    /// `κ^{n+1} d = T d`, `κⁿ = T + b κⁿ d`, `b κⁿ = b T`,
    /// `κ^{n+1} = (id − d b) T`, `(κ^{n+1} − T)(κⁿ − T) = 0`,
    /// `B b + b B = id − T`.
    pub fn check_kappa_powers(&self) -> Result<(), EngineError> {
        let lvl = self.level;
        let pow = |m: usize, e: usize| -> SparseMatrix {
            let mut acc = self.ident(m);
            for _ in 0..e {
                acc = self.kappa[m].mul(&acc);
            }
            acc
        };
        let fail = |what: &str, n: usize| {
            Err(EngineError::IdentityViolation(format!(
                "{what} fails on degree {n}"
            )))
        };
        for n in 0..=lvl {
            if n < lvl {
                let lhs = pow(n + 1, n + 1).mul(&self.d[n]);
                let rhs = self.t[n + 1].mul(&self.d[n]);
                if lhs != rhs {
                    return fail("power-of-κ versus T on d", n);
                }
                let lhs = self.t[n].add(&self.b[n + 1].mul(&pow(n + 1, n)).mul(&self.d[n]));
                if lhs != pow(n, n) {
                    return fail("κⁿ decomposition", n);
                }
            }
            if n > 0 {
                let lhs = self.b[n].mul(&pow(n, n));
                let rhs = self.b[n].mul(&self.t[n]);
                if lhs != rhs {
                    return fail("b κⁿ = b T", n);
                }
                let db = self.d[n - 1].mul(&self.b[n]);
                let lhs = pow(n, n + 1);
                let rhs = self.ident(n).sub(&db).mul(&self.t[n]);
                if lhs != rhs {
                    return fail("κ^{n+1} = (id − d b) T", n);
                }
            } else if pow(0, 1) != self.t[0] {
                return fail("κ = T in degree 0", 0);
            }
            let prod = pow(n, n + 1)
                .sub(&self.t[n])
                .mul(&pow(n, n).sub(&self.t[n]));
            if !prod.is_zero() {
                return fail("minimal polynomial of κ", n);
            }
        }
        for n in 0..lvl {
            let mut lhs = self.b[n + 1].mul(&self.bigb[n]);
            if n > 0 {
                lhs = lhs.add(&self.bigb[n - 1].mul(&self.b[n]));
            }
            if lhs != self.ident(n).sub(&self.t[n]) {
                return fail("B b + b B = id − T", n);
            }
        }
        Ok(())
    }

    /// Norm relations: `N_{2n+1} (id + κ) d = 1/(2n+1) (id + T) B` on even
    /// degrees, and the two rescaling relations
    /// `(id − κ²) N_{2n+1} B = 1/(2n+1) (id − T²) B` on `Ω^{2n}` and
    /// `(id − κ²) N_{2n+1} b = 1/(2n+1) (id − T²) b` on `Ω^{2n+1}`.
    pub fn check_norm_relations(&self) -> Result<(), EngineError> {
        for m in (0..self.level).step_by(2) {
            let n = (m / 2) as i64;
            let nm = poly_n(2 * n + 1).eval_matrix(&self.k2[m + 1]);
            let lhs = nm
                .mul(&self.ident(m + 1).add(&self.kappa[m + 1]))
                .mul(&self.d[m]);
            let rhs = self.id_plus_t(m + 1).mul(&self.bigb[m]).scale(&q(1, 2 * n + 1));
            if lhs != rhs {
                return Err(EngineError::IdentityViolation(format!(
                    "norm versus Connes boundary fails on degree {m}"
                )));
            }
            let front = Poly::one()
                .sub(&Poly::x())
                .mul(&poly_n(2 * n + 1))
                .eval_matrix(&self.k2[m + 1]);
            let lhs = front.mul(&self.bigb[m]);
            let t2 = self.t[m + 1].mul(&self.t[m + 1]);
            let rhs = self
                .ident(m + 1)
                .sub(&t2)
                .mul(&self.bigb[m])
                .scale(&q(1, 2 * n + 1));
            if lhs != rhs {
                return Err(EngineError::IdentityViolation(format!(
                    "norm rescaling on the raising boundary fails on degree {m}"
                )));
            }
            if m + 1 <= self.level {
                let mm = m + 1;
                let front = Poly::one()
                    .sub(&Poly::x())
                    .mul(&poly_n(2 * n + 1))
                    .eval_matrix(&self.k2[mm - 1]);
                let lhs = front.mul(&self.b[mm]);
                let t2 = self.t[mm - 1].mul(&self.t[mm - 1]);
                let rhs = self
                    .ident(mm - 1)
                    .sub(&t2)
                    .mul(&self.b[mm])
                    .scale(&q(1, 2 * n + 1));
                if lhs != rhs {
                    return Err(EngineError::IdentityViolation(format!(
                        "norm rescaling on the lowering boundary fails on degree {mm}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Both boundaries square to `id − T` on interior degrees.
    pub fn check_boundaries(&self) -> Result<(), EngineError> {
        let id_minus_t = self.op_id().sub(&self.op_t());
        self.partial
            .compose(&self.partial)
            .equal_on(&id_minus_t, &self.degs_to(2))?;
        self.delta
            .compose(&self.delta)
            .equal_on(&id_minus_t, &self.degs_to(2))
    }

    /// `∂ h + h ∂ = id − κ²` and `δ l + l δ = id − κ²`.
    pub fn check_homotopies(&self) -> Result<(), EngineError> {
        let target = self.op_diag(|_| Poly::one().sub(&Poly::x()));
        let h = self.op_h();
        self.partial
            .compose(&h)
            .add(&h.compose(&self.partial))
            .equal_on(&target, &self.degs_to(2))?;
        let l = self.op_l();
        self.delta
            .compose(&l)
            .add(&l.compose(&self.delta))
            .equal_on(&target, &self.degs_to(2))
    }

    /// The four expressions for `P` agree, and `Q` anticommutes with both
    /// boundaries (with `∂Q = δQ`, `Q∂ = Qδ`).
    pub fn check_p_q(&self) -> Result<(), EngineError> {
        let f = self.op_f_cap();
        let qop = self.op_q();
        let half = q(1, 2);
        let p1 = f.add(&qop.compose(&self.partial).scale(&half));
        let p2 = f.sub(&self.partial.compose(&qop).scale(&half));
        let p3 = f.add(&qop.compose(&self.delta).scale(&half));
        let p4 = f.sub(&self.delta.compose(&qop).scale(&half));
        let degs = self.degs_to(2);
        p1.equal_on(&p2, &degs)?;
        p1.equal_on(&p3, &degs)?;
        p1.equal_on(&p4, &degs)?;
        let mut zero = TowerOp::empty(self.level);
        zero.valid = (0..=self.level).collect();
        self.partial
            .compose(&qop)
            .add(&qop.compose(&self.partial))
            .equal_on(&zero, &degs)?;
        self.delta
            .compose(&qop)
            .add(&qop.compose(&self.delta))
            .equal_on(&zero, &degs)?;
        self.partial
            .compose(&qop)
            .equal_on(&self.delta.compose(&qop), &degs)?;
        qop.compose(&self.partial)
            .equal_on(&qop.compose(&self.delta), &degs)
    }

    /// `P` is a chain map for both boundaries and `id − P = ∂H + H∂ = δL + Lδ`.
    pub fn check_p_homotopic_to_identity(&self) -> Result<(), EngineError> {
        let p = self.op_p();
        let degs = self.degs_to(3);
        p.compose(&self.partial)
            .equal_on(&self.partial.compose(&p), &degs)?;
        p.compose(&self.delta)
            .equal_on(&self.delta.compose(&p), &degs)?;
        let id_minus_p = self.op_id().sub(&p);
        let h = self.op_big_h();
        self.partial
            .compose(&h)
            .add(&h.compose(&self.partial))
            .equal_on(&id_minus_p, &degs)?;
        let l = self.op_big_l();
        self.delta
            .compose(&l)
            .add(&l.compose(&self.delta))
            .equal_on(&id_minus_p, &degs)
    }

    /// Mixed-boundary relations: `δF − F∂ = (id − T)(Q + R)`,
    /// `∂F − Fδ = (id − T)(Q − R)`, `δR + R∂ = 0`, `∂R + Rδ = 0`,
    /// `[F, R] = 0`, `RQ = QR = 0`.
    pub fn check_mixed_relations(&self) -> Result<(), EngineError> {
        let f = self.op_f_cap();
        let qop = self.op_q();
        let r = self.op_r();
        let id_minus_t = self.op_id().sub(&self.op_t());
        let degs = self.degs_to(2);
        self.delta
            .compose(&f)
            .sub(&f.compose(&self.partial))
            .equal_on(&id_minus_t.compose(&qop.add(&r)), &degs)?;
        self.partial
            .compose(&f)
            .sub(&f.compose(&self.delta))
            .equal_on(&id_minus_t.compose(&qop.sub(&r)), &degs)?;
        let mut zero = TowerOp::empty(self.level);
        zero.valid = (0..=self.level).collect();
        self.delta
            .compose(&r)
            .add(&r.compose(&self.partial))
            .equal_on(&zero, &degs)?;
        self.partial
            .compose(&r)
            .add(&r.compose(&self.delta))
            .equal_on(&zero, &degs)?;
        f.compose(&r).sub(&r.compose(&f)).equal_on(&zero, &degs)?;
        r.compose(&qop).equal_on(&zero, &degs)?;
        qop.compose(&r).equal_on(&zero, &degs)
    }

    /// `φ` and `ψ` are chain maps between the two boundaries and
    /// `φψ = P² − ½(δRF + RFδ) + ¼ R²(id − T)`.
    pub fn check_equivalence(&self) -> Result<(), EngineError> {
        let phi = self.op_phi();
        let psi = self.op_psi();
        let degs = self.degs_to(3);
        self.delta
            .compose(&phi)
            .equal_on(&phi.compose(&self.partial), &degs)?;
        self.partial
            .compose(&psi)
            .equal_on(&psi.compose(&self.delta), &degs)?;
        let p = self.op_p();
        let f = self.op_f_cap();
        let r = self.op_r();
        let id_minus_t = self.op_id().sub(&self.op_t());
        let rhs = p
            .compose(&p)
            .sub(
                &self
                    .delta
                    .compose(&r)
                    .compose(&f)
                    .add(&r.compose(&f).compose(&self.delta))
                    .scale(&q(1, 2)),
            )
            .add(&r.compose(&r).compose(&id_minus_t).scale(&q(1, 4)));
        phi.compose(&psi).equal_on(&rhs, &degs)
    }

    /// Run the whole battery of identity checks.
    pub fn check_all(&self, space: &FormSpace) -> Result<(), EngineError> {
        Self::check_polynomials(2 * self.level as i64 + 4)?;
        self.check_kappa(space)?;
        self.check_big_b(space)?;
        self.check_kappa_powers()?;
        self.check_norm_relations()?;
        self.check_boundaries()?;
        self.check_homotopies()?;
        self.check_p_q()?;
        self.check_p_homotopic_to_identity()?;
        self.check_mixed_relations()?;
        self.check_equivalence()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_basics() {
        assert_eq!(poly_n(1), Poly::one());
        assert_eq!(poly_n(0), Poly::one());
        assert_eq!(poly_n(-3), Poly::one());
        // N₂ = (1 + x)/2.
        assert_eq!(poly_n(2), Poly(vec![q(1, 2), q(1, 2)]));
        // g₀ = ½.
        assert_eq!(poly_g(0), Poly::constant(q(1, 2)));
        // f₀ = 1 − ½(1 − x).
        assert_eq!(poly_f(0), Poly(vec![q(1, 2), q(1, 2)]));
        CqSuite::check_polynomials(16).unwrap();
    }

    #[test]
    fn division_is_exact() {
        // (x − 1)(x² + 2) = x³ − x² + 2x − 2.
        let p = Poly(vec![q(-2, 1), q(2, 1), q(-1, 1), q(1, 1)]);
        assert_eq!(p.div_x_minus_one().unwrap(), Poly(vec![q(2, 1), Scalar::zero(), q(1, 1)]));
        assert_eq!(Poly::one().div_x_minus_one(), None);
    }
}
