//! Homology assembly: covariant Hom-complexes between paracomplexes,
//! periodic cyclic homology dimensions at finite Hodge truncation with
//! stabilization detection, the ordinary (group-free) specialisation, and
//! the Green-Julg cross-check against the crossed product.

use crate::algebra::{crossed_product, unitarize, GAlgebra, GModule};
use crate::group::MeasureConvention;
use crate::error::EngineError;
use crate::forms::FormSpace;
use crate::group::FiniteGroup;
use crate::linalg::{
    coords_in_span, intertwiner_space, kernel_basis, supercomplex_homology, SparseMatrix, SVec,
};
use crate::para::{hodge_level, ParaComplex};
use std::sync::Arc;
use std::time::Instant;

// ---------------------------------------------------------------------------
// Covariant Hom-complexes
// ---------------------------------------------------------------------------

/// The supercomplex of covariant maps between two paracomplexes. A map
/// commuting with the group action and the function-algebra action also
/// commutes with the symmetry operator, so the boundary
/// `∂(φ) = φ∂ − (−1)^{|φ|}∂φ` squares to zero exactly even when both
/// symmetries differ from the identity; the constructor verifies this.
pub struct HomSupercomplex {
    /// Bases of the four covariant blocks, vectorized column-major:
    /// even maps `(C₀→D₀, C₁→D₁)` and odd maps `(C₁→D₀, C₀→D₁)`.
    pub basis_ee: SparseMatrix,
    pub basis_oo: SparseMatrix,
    pub basis_oe: SparseMatrix,
    pub basis_eo: SparseMatrix,
    /// Boundary matrices in the covariant bases.
    pub d_even: SparseMatrix,
    pub d_odd: SparseMatrix,
    shapes: [(usize, usize); 4],
}

/// Stack the vectorizations of a pair of blocks into one column.
fn stack_pair(a: &SparseMatrix, b: &SparseMatrix) -> SVec {
    let na = a.rows() * a.cols();
    let mut v: SVec = Vec::new();
    for (i, j, c) in a.entries() {
        v.push((j * a.rows() + i, c.clone()));
    }
    for (i, j, c) in b.entries() {
        v.push((na + j * b.rows() + i, c.clone()));
    }
    v.sort_by_key(|(k, _)| *k);
    v
}

/// Block-diagonal stacking of two basis matrices.
fn stack_bases(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    let mut tri: Vec<(usize, usize, crate::scalar::Scalar)> = Vec::new();
    for (i, j, v) in a.entries() {
        tri.push((i, j, v.clone()));
    }
    for (i, j, v) in b.entries() {
        tri.push((i + a.rows(), j + a.cols(), v.clone()));
    }
    SparseMatrix::from_triplets(a.rows() + b.rows(), a.cols() + b.cols(), tri)
}

fn unvec_block(rows: usize, cols: usize, v: &SVec) -> SparseMatrix {
    crate::linalg::unvec(rows, cols, v)
}

impl HomSupercomplex {
    pub fn even_dim(&self) -> usize {
        self.basis_ee.cols() + self.basis_oo.cols()
    }

    pub fn odd_dim(&self) -> usize {
        self.basis_oe.cols() + self.basis_eo.cols()
    }

    pub fn homology(&self) -> Result<(usize, usize), EngineError> {
        supercomplex_homology(&self.d_even, &self.d_odd)
    }

    /// Unpack an even-coordinate vector into its two matrix components.
    pub fn even_maps(&self, coords: &SVec) -> (SparseMatrix, SparseMatrix) {
        let (re, ce) = self.shapes[0];
        let (ro, co) = self.shapes[1];
        let split = self.basis_ee.cols();
        let mut a: SVec = Vec::new();
        let mut b: SVec = Vec::new();
        for (k, v) in coords {
            if *k < split {
                for (i, c) in self.basis_ee.col(*k) {
                    a.push((*i, c * v));
                }
            } else {
                for (i, c) in self.basis_oo.col(*k - split) {
                    b.push((*i, c * v));
                }
            }
        }
        let acc = |mut u: SVec| -> SVec {
            u.sort_by_key(|(k, _)| *k);
            let mut out: SVec = Vec::new();
            for (k, v) in u {
                match out.last_mut() {
                    Some((k2, v2)) if *k2 == k => *v2 += v,
                    _ => out.push((k, v)),
                }
            }
            out.retain(|(_, v)| !num::traits::Zero::is_zero(v));
            out
        };
        (
            unvec_block(re, ce, &acc(a)),
            unvec_block(ro, co, &acc(b)),
        )
    }
}

/// Build the covariant Hom-supercomplex between two paracomplexes over the
/// same group. The covariance constraints (group action and function-algebra
/// action) are imposed block by block via linear intertwiner systems.
pub fn hom_supercomplex(c: &ParaComplex, d: &ParaComplex) -> Result<HomSupercomplex, EngineError> {
    if c.group.as_ref() != d.group.as_ref() {
        return Err(EngineError::GroupMismatch(
            "Hom-complex factors over different groups".into(),
        ));
    }
    let n = c.group.order();
    let (ce, co) = (c.even_dim(), c.odd_dim());
    let (de, dor) = (d.even_dim(), d.odd_dim());
    let covariant = |d_ops: (&[SparseMatrix], &[SparseMatrix]),
                     c_ops: (&[SparseMatrix], &[SparseMatrix]),
                     rows: usize,
                     cols: usize|
     -> Result<SparseMatrix, EngineError> {
        let mut cons: Vec<(SparseMatrix, SparseMatrix)> = Vec::new();
        for s in 0..n {
            cons.push((d_ops.0[s].clone(), c_ops.0[s].clone()));
            cons.push((d_ops.1[s].clone(), c_ops.1[s].clone()));
        }
        intertwiner_space(rows, cols, &cons)
    };
    let basis_ee = covariant((&d.g_even, &d.og_even), (&c.g_even, &c.og_even), de, ce)?;
    let basis_oo = covariant((&d.g_odd, &d.og_odd), (&c.g_odd, &c.og_odd), dor, co)?;
    let basis_oe = covariant((&d.g_even, &d.og_even), (&c.g_odd, &c.og_odd), de, co)?;
    let basis_eo = covariant((&d.g_odd, &d.og_odd), (&c.g_even, &c.og_even), dor, ce)?;
    // Every covariant map must commute with the symmetry; this is what makes
    // the boundary square to zero.
    let t_check = |basis: &SparseMatrix, rows: usize, cols: usize, td: &SparseMatrix, tc: &SparseMatrix| {
        for j in 0..basis.cols() {
            let m = unvec_block(rows, cols, basis.col(j));
            if td.mul(&m) != m.mul(tc) {
                return Err(EngineError::IdentityViolation(
                    "covariant map does not commute with the symmetry operator".into(),
                ));
            }
        }
        Ok(())
    };
    t_check(&basis_ee, de, ce, &d.t_even, &c.t_even)?;
    t_check(&basis_oo, dor, co, &d.t_odd, &c.t_odd)?;
    t_check(&basis_oe, de, co, &d.t_even, &c.t_odd)?;
    t_check(&basis_eo, dor, ce, &d.t_odd, &c.t_even)?;
    // Boundary on even maps φ = (φ_e, φ_o):
    //   components (C₀→D₁, C₁→D₀) of φ∂ − ∂φ.
    let odd_basis = stack_bases(&basis_oe, &basis_eo);
    let even_basis = stack_bases(&basis_ee, &basis_oo);
    let mut d_even_cols: Vec<SVec> = Vec::new();
    for j in 0..basis_ee.cols() + basis_oo.cols() {
        let (fe, fo) = if j < basis_ee.cols() {
            (
                unvec_block(de, ce, basis_ee.col(j)),
                SparseMatrix::zero(dor, co),
            )
        } else {
            (
                SparseMatrix::zero(de, ce),
                unvec_block(dor, co, basis_oo.col(j - basis_ee.cols())),
            )
        };
        let out_oe = fe.mul(&c.d_odd).sub(&d.d_odd.mul(&fo));
        let out_eo = fo.mul(&c.d_even).sub(&d.d_even.mul(&fe));
        let v = stack_pair(&out_oe, &out_eo);
        let coords = coords_in_span(&odd_basis, &v).ok_or_else(|| {
            EngineError::Mismatch("Hom-boundary image is not covariant".into())
        })?;
        d_even_cols.push(coords);
    }
    let d_even = SparseMatrix::from_columns(
        basis_oe.cols() + basis_eo.cols(),
        d_even_cols.len(),
        |j| d_even_cols[j].clone(),
    );
    // Boundary on odd maps ψ = (ψ_oe: C₁→D₀, ψ_eo: C₀→D₁):
    //   components (C₀→D₀, C₁→D₁) of ψ∂ + ∂ψ.
    let mut d_odd_cols: Vec<SVec> = Vec::new();
    for j in 0..basis_oe.cols() + basis_eo.cols() {
        let (poe, peo) = if j < basis_oe.cols() {
            (
                unvec_block(de, co, basis_oe.col(j)),
                SparseMatrix::zero(dor, ce),
            )
        } else {
            (
                SparseMatrix::zero(de, co),
                unvec_block(dor, ce, basis_eo.col(j - basis_oe.cols())),
            )
        };
        let out_ee = poe.mul(&c.d_even).add(&d.d_odd.mul(&peo));
        let out_oo = peo.mul(&c.d_odd).add(&d.d_even.mul(&poe));
        let v = stack_pair(&out_ee, &out_oo);
        let coords = coords_in_span(&even_basis, &v).ok_or_else(|| {
            EngineError::Mismatch("Hom-boundary image is not covariant".into())
        })?;
        d_odd_cols.push(coords);
    }
    let d_odd = SparseMatrix::from_columns(
        basis_ee.cols() + basis_oo.cols(),
        d_odd_cols.len(),
        |j| d_odd_cols[j].clone(),
    );
    // ∂² = 0 exactly: the symmetry defects of the two factors cancel.
    if !d_odd.mul(&d_even).is_zero() || !d_even.mul(&d_odd).is_zero() {
        return Err(EngineError::IdentityViolation(
            "Hom-boundary does not square to zero".into(),
        ));
    }
    let shapes = [(de, ce), (dor, co), (de, co), (dor, ce)];
    Ok(HomSupercomplex {
        basis_ee,
        basis_oo,
        basis_oe,
        basis_eo,
        d_even,
        d_odd,
        shapes,
    })
}

/// A homology class of a covariant Hom-complex: a closed pair of matrices
/// with a parity.
#[derive(Clone)]
pub struct HomClass {
    /// For even degree `(φ: C₀→D₀, φ: C₁→D₁)`; for odd degree
    /// `(ψ: C₁→D₀, ψ: C₀→D₁)`.
    pub mats: (SparseMatrix, SparseMatrix),
    pub degree: usize,
}

impl HomClass {
    pub fn identity(c: &ParaComplex) -> Self {
        HomClass {
            mats: (
                SparseMatrix::identity(c.even_dim()),
                SparseMatrix::identity(c.odd_dim()),
            ),
            degree: 0,
        }
    }
}

/// Composition product of classes: a class of maps `A → B` composed with a
/// class of maps `B → C`; the parity adds modulo 2.
pub fn compose_classes(x: &HomClass, y: &HomClass) -> Result<HomClass, EngineError> {
    let check = |m: &SparseMatrix, inner: &SparseMatrix| -> Result<(), EngineError> {
        if m.rows() != inner.cols() {
            return Err(EngineError::Mismatch(format!(
                "composition shapes {}x{} after {}x{}",
                inner.rows(),
                inner.cols(),
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    };
    let (mats, degree) = match (x.degree % 2, y.degree % 2) {
        (0, 0) => {
            check(&x.mats.0, &y.mats.0)?;
            check(&x.mats.1, &y.mats.1)?;
            ((y.mats.0.mul(&x.mats.0), y.mats.1.mul(&x.mats.1)), 0)
        }
        (0, 1) => {
            // y odd: (C₁→D₀ ...) against even x = (A₀→B₀, A₁→B₁).
            check(&x.mats.1, &y.mats.0)?;
            check(&x.mats.0, &y.mats.1)?;
            ((y.mats.0.mul(&x.mats.1), y.mats.1.mul(&x.mats.0)), 1)
        }
        (1, 0) => {
            check(&x.mats.0, &y.mats.0)?;
            check(&x.mats.1, &y.mats.1)?;
            ((y.mats.0.mul(&x.mats.0), y.mats.1.mul(&x.mats.1)), 1)
        }
        (1, 1) => {
            check(&x.mats.0, &y.mats.1)?;
            check(&x.mats.1, &y.mats.0)?;
            ((y.mats.0.mul(&x.mats.1), y.mats.1.mul(&x.mats.0)), 0)
        }
        _ => unreachable!(),
    };
    Ok(HomClass { mats, degree })
}

// ---------------------------------------------------------------------------
// Homology reports
// ---------------------------------------------------------------------------

/// Truncated periodic-cyclic homology dimensions, per level, with a
/// stabilization certificate (agreement of two consecutive computed levels).
#[derive(Clone, Debug)]
pub struct HomologyReport {
    pub inputs: Vec<String>,
    pub levels: Vec<usize>,
    /// `(dim H_even, dim H_odd)` at each level, same order as `levels`.
    pub dims: Vec<(usize, usize)>,
    pub stabilized: bool,
    pub millis: u128,
    pub notes: Vec<String>,
}

impl HomologyReport {
    pub fn final_dims(&self) -> (usize, usize) {
        *self.dims.last().expect("report holds at least one level")
    }
}

/// Basis of the group-invariant subspace together with the restricted
/// boundaries; errors if the boundary leaks out of the invariants or if the
/// symmetry is not the identity there.
pub struct InvariantTower {
    pub even_basis: SparseMatrix,
    pub odd_basis: SparseMatrix,
    pub d_even: SparseMatrix,
    pub d_odd: SparseMatrix,
}

pub fn invariant_tower(pc: &ParaComplex) -> Result<InvariantTower, EngineError> {
    let (pe, po) = pc.invariant_projector();
    if pe.mul(&pe) != pe || po.mul(&po) != po {
        return Err(EngineError::ContractViolation(
            "averaging projector is not idempotent".into(),
        ));
    }
    let ide = SparseMatrix::identity(pc.even_dim());
    let ido = SparseMatrix::identity(pc.odd_dim());
    let even_basis = kernel_basis(&ide.sub(&pe));
    let odd_basis = kernel_basis(&ido.sub(&po));
    // The symmetry is the identity on invariants, so the restricted
    // boundary is an honest supercomplex differential.
    if pc.t_even.mul(&even_basis) != even_basis || pc.t_odd.mul(&odd_basis) != odd_basis {
        return Err(EngineError::IdentityViolation(
            "symmetry is not the identity on the invariant subspace".into(),
        ));
    }
    let restrict = |m: &SparseMatrix,
                    src: &SparseMatrix,
                    dst: &SparseMatrix|
     -> Result<SparseMatrix, EngineError> {
        let img = m.mul(src);
        let mut cols = Vec::new();
        for j in 0..img.cols() {
            cols.push(coords_in_span(dst, img.col(j)).ok_or_else(|| {
                EngineError::Mismatch("boundary leaves the invariant subspace".into())
            })?);
        }
        Ok(SparseMatrix::from_columns(dst.cols(), cols.len(), |j| {
            cols[j].clone()
        }))
    };
    let d_even = restrict(&pc.d_even, &even_basis, &odd_basis)?;
    let d_odd = restrict(&pc.d_odd, &odd_basis, &even_basis)?;
    if !d_odd.mul(&d_even).is_zero() || !d_even.mul(&d_odd).is_zero() {
        return Err(EngineError::NotAComplex);
    }
    Ok(InvariantTower {
        even_basis,
        odd_basis,
        d_even,
        d_odd,
    })
}

fn standard_notes() -> Vec<String> {
    vec![
        "computed on the plain invariant Hodge tower; for a finite group no auxiliary \
         representation stabilization is required"
            .to_string(),
        "finite-level truncation stands in for the full tower; the stabilization flag \
         certifies agreement of the two computed levels, not a convergence theorem"
            .to_string(),
    ]
}

/// Equivariant periodic cyclic homology of the coefficient algebra: homology
/// of the group-invariant part of the truncated Hodge towers at levels
/// `N − 2` and `N`.
pub fn hpg_second_variable(a: &GAlgebra, n: usize) -> Result<HomologyReport, EngineError> {
    if n < 2 {
        return Err(EngineError::LevelTooHigh { level: n, max: 2 });
    }
    let start = Instant::now();
    let mut levels = Vec::new();
    let mut dims = Vec::new();
    for level in [n - 2, n] {
        let lv = level.max(1);
        let space = FormSpace::new(a, lv + 1);
        let pc = hodge_level(&space, lv)?;
        let inv = invariant_tower(&pc)?;
        let h = supercomplex_homology(&inv.d_even, &inv.d_odd)?;
        levels.push(lv);
        dims.push(h);
    }
    let stabilized = dims.len() >= 2 && dims[dims.len() - 2] == dims[dims.len() - 1];
    Ok(HomologyReport {
        inputs: vec![
            format!("group-order:{}", a.module().group().order()),
            format!("algebra-dim:{}", a.dim()),
        ],
        levels,
        dims,
        stabilized,
        millis: start.elapsed().as_millis(),
        notes: standard_notes(),
    })
}

/// Forget the group action: the same algebra viewed over the trivial group.
pub fn forget_group(a: &GAlgebra) -> GAlgebra {
    let g = Arc::new(FiniteGroup::trivial());
    let module = GModule::trivial(g, a.module().labels().to_vec());
    let mult: Vec<Vec<SVec>> = (0..a.dim())
        .map(|i| (0..a.dim()).map(|j| a.basis_product(i, j).clone()).collect())
        .collect();
    GAlgebra::new(module, mult, a.unit().cloned()).expect("structure constants unchanged")
}

/// Ordinary (group-free) periodic cyclic homology at truncation `N`.
pub fn hp_ordinary(b: &GAlgebra, n: usize) -> Result<HomologyReport, EngineError> {
    let mut report = hpg_second_variable(&forget_group(b), n)?;
    report
        .notes
        .push("group action forgotten: ordinary periodic cyclic homology".to_string());
    Ok(report)
}

/// Bivariant dimensions: homology of the covariant Hom-complex between the
/// truncated Hodge towers of the two arguments, at levels `N − 2` and `N`.
pub fn hpg_bivariant(a: &GAlgebra, b: &GAlgebra, n: usize) -> Result<HomologyReport, EngineError> {
    if n < 2 {
        return Err(EngineError::LevelTooHigh { level: n, max: 2 });
    }
    let start = Instant::now();
    let mut levels = Vec::new();
    let mut dims = Vec::new();
    for level in [n - 2, n] {
        let lv = level.max(1);
        let sa = FormSpace::new(a, lv + 1);
        let sb = FormSpace::new(b, lv + 1);
        let ca = hodge_level(&sa, lv)?;
        let cb = hodge_level(&sb, lv)?;
        let hom = hom_supercomplex(&ca, &cb)?;
        levels.push(lv);
        dims.push(hom.homology()?);
    }
    let stabilized = dims.len() >= 2 && dims[dims.len() - 2] == dims[dims.len() - 1];
    Ok(HomologyReport {
        inputs: vec![
            format!("group-order:{}", a.module().group().order()),
            format!("source-dim:{}", a.dim()),
            format!("target-dim:{}", b.dim()),
        ],
        levels,
        dims,
        stabilized,
        millis: start.elapsed().as_millis(),
        notes: standard_notes(),
    })
}

/// The two sides of the Green-Julg comparison, computed independently:
/// equivariant homology of the coefficient algebra versus ordinary homology
/// of its crossed product. Disagreement is reported, never hidden.
#[derive(Clone, Debug)]
pub struct GreenJulgComparison {
    pub equivariant: HomologyReport,
    pub crossed: HomologyReport,
    pub agree: bool,
    pub unitarized: bool,
}

pub fn greenjulg_compare(a: &GAlgebra, n: usize) -> Result<GreenJulgComparison, EngineError> {
    let (alg, unitarized) = if a.unit().is_some() {
        (a.clone(), false)
    } else {
        (unitarize(a), true)
    };
    let equivariant = hpg_second_variable(&alg, n)?;
    let cp = crossed_product(&alg, MeasureConvention::Normalized);
    let crossed = hp_ordinary(&cp, n)?;
    let agree = equivariant.final_dims() == crossed.final_dims();
    Ok(GreenJulgComparison {
        equivariant,
        crossed,
        agree,
        unitarized,
    })
}
