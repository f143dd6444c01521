//! Command-line driver: parse a job description (JSON document or flags),
//! resolve group and algebra builtins or inline structure constants, run the
//! requested verification suite or homology computation, and emit a
//! machine-readable report with a stable layout.

use paracyc::algebra::{
    algebra_kg, algebra_og, canonical_swap, crossed_product, dual_numbers,
    functions_on_two_point_set, group_algebra_adjoint, scalars, tensor_galgebras, unitarize,
    GAlgebra, GModule,
};
use paracyc::cq::CqSuite;
use paracyc::dualgj::{dual_comparison, DualTrace};
use paracyc::error::EngineError;
use paracyc::forms::FormSpace;
use paracyc::greenjulg::{green_julg, k_contraction, lambda0_rank_split};
use paracyc::group::{FiniteGroup, MeasureConvention};
use paracyc::hp::{greenjulg_compare, hp_ordinary, hpg_second_variable, HomologyReport};
use paracyc::linalg::{SparseMatrix, SVec};
use paracyc::scalar::Scalar;
use serde::Deserialize;
use serde_json::{json, Value};
use std::sync::Arc;
use std::time::Instant;

pub const SCHEMA: u64 = 1;

// ---------------------------------------------------------------------------
// Job description
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GroupDesc {
    Name(String),
    Inline {
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AlgebraDesc {
    Name(String),
    Inline {
        labels: Vec<String>,
        /// Structure constants as quintuples `[i, j, k, numerator, denominator]`:
        /// the coefficient of basis vector `k` in the product `e_i · e_j`.
        structure: Vec<(usize, usize, usize, i64, i64)>,
        /// Optional unit vector as triples `[k, numerator, denominator]`.
        #[serde(default)]
        unit: Option<Vec<(usize, i64, i64)>>,
        /// Optional action matrices, one per group element, as quadruples
        /// `[row, col, numerator, denominator]`.
        #[serde(default)]
        action: Option<Vec<Vec<(usize, usize, i64, i64)>>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
pub struct JobSpec {
    pub command: String,
    #[serde(default)]
    pub group: Option<GroupDesc>,
    #[serde(default)]
    pub algebra: Option<AlgebraDesc>,
    #[serde(default)]
    pub level: Option<usize>,
    #[serde(default)]
    pub measure: Option<String>,
}

/// Errors before any computation starts: malformed input, unknown builtin.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn rational(num: i64, den: i64) -> Result<Scalar, InputError> {
    if den == 0 {
        return Err(InputError("zero denominator in structure constant".into()));
    }
    Ok(Scalar::new(num.into(), den.into()))
}

pub fn resolve_group(desc: &GroupDesc) -> Result<Arc<FiniteGroup>, InputError> {
    match desc {
        GroupDesc::Name(name) => {
            let n = name.trim().to_ascii_lowercase();
            let g = if n == "trivial" {
                FiniteGroup::trivial()
            } else if let Some(arg) = n.strip_prefix("cyclic(").and_then(|r| r.strip_suffix(')')) {
                let k: usize = arg
                    .trim()
                    .parse()
                    .map_err(|_| InputError(format!("bad cyclic order: {arg}")))?;
                if k == 0 {
                    return Err(InputError("cyclic(0) is not a group".into()));
                }
                FiniteGroup::cyclic(k)
            } else if n == "klein4" {
                FiniteGroup::klein4()
            } else if n == "symmetric(3)" || n == "symmetric3" {
                FiniteGroup::symmetric3()
            } else {
                return Err(InputError(format!("unknown group builtin: {name}")));
            };
            Ok(Arc::new(g))
        }
        GroupDesc::Inline { labels, table } => FiniteGroup::validate(labels.clone(), table.clone())
            .map(Arc::new)
            .map_err(|e| InputError(format!("invalid group table: {e}"))),
    }
}

fn measure_of(spec: &JobSpec) -> Result<MeasureConvention, InputError> {
    match spec.measure.as_deref() {
        None | Some("counting") => Ok(MeasureConvention::Counting),
        Some("normalized") => Ok(MeasureConvention::Normalized),
        Some(m) => Err(InputError(format!("unknown measure convention: {m}"))),
    }
}

/// Resolve an algebra descriptor. Builtin names may nest:
/// `crossed(X)`, `tensor(X, Y)`, `unitarize(X)`.
pub fn resolve_algebra(
    desc: &AlgebraDesc,
    group: &Arc<FiniteGroup>,
    measure: MeasureConvention,
) -> Result<GAlgebra, InputError> {
    match desc {
        AlgebraDesc::Name(name) => resolve_algebra_name(name.trim(), group, measure),
        AlgebraDesc::Inline {
            labels,
            structure,
            unit,
            action,
        } => {
            let dim = labels.len();
            let module = match action {
                None => GModule::trivial(group.clone(), labels.clone()),
                Some(mats) => {
                    if mats.len() != group.order() {
                        return Err(InputError(format!(
                            "action has {} matrices for a group of order {}",
                            mats.len(),
                            group.order()
                        )));
                    }
                    let mut ms = Vec::with_capacity(mats.len());
                    for entries in mats {
                        let mut tri = Vec::new();
                        for &(i, j, num, den) in entries {
                            if i >= dim || j >= dim {
                                return Err(InputError("action index out of range".into()));
                            }
                            tri.push((i, j, rational(num, den)?));
                        }
                        ms.push(SparseMatrix::from_triplets(dim, dim, tri));
                    }
                    GModule::new(group.clone(), labels.clone(), ms)
                        .map_err(|e| InputError(format!("invalid action: {e}")))?
                }
            };
            let mut mult: Vec<Vec<std::collections::BTreeMap<usize, Scalar>>> =
                vec![vec![Default::default(); dim]; dim];
            for &(i, j, k, num, den) in structure {
                if i >= dim || j >= dim || k >= dim {
                    return Err(InputError(format!(
                        "structure-constant index out of range in [{i}, {j}, {k}]"
                    )));
                }
                *mult[i][j].entry(k).or_insert_with(num::traits::Zero::zero) +=
                    rational(num, den)?;
            }
            let mult: Vec<Vec<SVec>> = mult
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(paracyc::linalg::collect_svec)
                        .collect()
                })
                .collect();
            let unit_vec: Option<SVec> = match unit {
                None => None,
                Some(entries) => {
                    let mut acc: std::collections::BTreeMap<usize, Scalar> = Default::default();
                    for &(k, num, den) in entries {
                        if k >= dim {
                            return Err(InputError("unit index out of range".into()));
                        }
                        *acc.entry(k).or_insert_with(num::traits::Zero::zero) +=
                            rational(num, den)?;
                    }
                    Some(paracyc::linalg::collect_svec(acc))
                }
            };
            GAlgebra::new(module, mult, unit_vec)
                .map_err(|e| InputError(format!("invalid algebra: {e}")))
        }
    }
}

fn resolve_algebra_name(
    name: &str,
    group: &Arc<FiniteGroup>,
    measure: MeasureConvention,
) -> Result<GAlgebra, InputError> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "scalars" => return Ok(scalars(group.clone())),
        "dual-numbers" => return Ok(dual_numbers(group.clone())),
        "group-algebra-adjoint" => return Ok(group_algebra_adjoint(group.clone())),
        "functions-on-g-set" => {
            let swap = canonical_swap(group);
            return functions_on_two_point_set(group.clone(), swap)
                .map_err(|e| InputError(format!("two-point set: {e}")));
        }
        "o_g" | "og" => return Ok(algebra_og(group.clone())),
        "k_g" | "kg" => return Ok(algebra_kg(group.clone(), measure)),
        _ => {}
    }
    if let Some(arg) = lower.strip_prefix("crossed(").and_then(|r| r.strip_suffix(')')) {
        let inner = resolve_algebra_name(arg.trim(), group, measure)?;
        return Ok(crossed_product(&inner, measure));
    }
    if let Some(arg) = lower.strip_prefix("unitarize(").and_then(|r| r.strip_suffix(')')) {
        let inner = resolve_algebra_name(arg.trim(), group, measure)?;
        return Ok(unitarize(&inner));
    }
    if let Some(arg) = lower.strip_prefix("tensor(").and_then(|r| r.strip_suffix(')')) {
        // Split at the top-level comma.
        let mut depth = 0usize;
        let mut split = None;
        for (k, ch) in arg.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    split = Some(k);
                    break;
                }
                _ => {}
            }
        }
        let k = split.ok_or_else(|| InputError("tensor(…) needs two arguments".into()))?;
        let a = resolve_algebra_name(arg[..k].trim(), group, measure)?;
        let b = resolve_algebra_name(arg[k + 1..].trim(), group, measure)?;
        return tensor_galgebras(&a, &b).map_err(|e| InputError(format!("tensor: {e}")));
    }
    Err(InputError(format!("unknown algebra builtin: {name}")))
}

pub fn list_builtins() -> Value {
    json!({
        "schema": SCHEMA,
        "groups": ["trivial", "cyclic(n)", "klein4", "symmetric(3)"],
        "algebras": [
            "scalars", "dual-numbers", "group-algebra-adjoint",
            "functions-on-G-set", "O_G", "K_G",
            "crossed(…)", "tensor(…, …)", "unitarize(…)"
        ],
        "commands": ["verify-forms", "verify-cq", "greenjulg", "dual-greenjulg", "hpg", "hp"],
        "measures": ["counting", "normalized"],
    })
}

// ---------------------------------------------------------------------------
// Checks and reports
// ---------------------------------------------------------------------------

struct Check {
    name: &'static str,
    anchor: &'static str,
    witness: Option<String>,
}

struct Suite {
    checks: Vec<Check>,
    notes: Vec<String>,
    payload: Vec<(String, Value)>,
}

impl Suite {
    fn new() -> Self {
        Suite {
            checks: Vec::new(),
            notes: Vec::new(),
            payload: Vec::new(),
        }
    }

    fn run(&mut self, name: &'static str, anchor: &'static str, r: Result<(), EngineError>) {
        self.checks.push(Check {
            name,
            anchor,
            witness: r.err().map(|e| e.to_string()),
        });
    }

    fn assert_eq_dims(
        &mut self,
        name: &'static str,
        anchor: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    ) {
        let witness = if left == right {
            None
        } else {
            Some(format!("{left:?} != {right:?}"))
        };
        self.checks.push(Check {
            name,
            anchor,
            witness,
        });
    }

    fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.witness.is_some())
    }
}

fn report_value(spec: &JobSpec, suite: &Suite, started: Instant) -> (Value, i32) {
    let checks: Vec<Value> = suite
        .checks
        .iter()
        .map(|c| {
            let mut v = json!({
                "name": c.name,
                "anchor": c.anchor,
                "status": if c.witness.is_some() { "fail" } else { "pass" },
            });
            if let Some(w) = &c.witness {
                v["witness"] = json!(w);
            }
            v
        })
        .collect();
    let exit = if suite.failed() { 1 } else { 0 };
    let mut report = json!({
        "schema": SCHEMA,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "job": job_echo(spec),
        "checks": checks,
        "notes": suite.notes,
        "exit": exit,
        "timing_ms": started.elapsed().as_millis() as u64,
    });
    for (k, v) in &suite.payload {
        report[k] = v.clone();
    }
    (report, exit)
}

fn job_echo(spec: &JobSpec) -> Value {
    json!({
        "command": spec.command,
        "group": match &spec.group {
            None => Value::Null,
            Some(GroupDesc::Name(n)) => json!(n),
            Some(GroupDesc::Inline { labels, .. }) => json!({"inline": labels}),
        },
        "algebra": match &spec.algebra {
            None => Value::Null,
            Some(AlgebraDesc::Name(n)) => json!(n),
            Some(AlgebraDesc::Inline { labels, .. }) => json!({"inline": labels}),
        },
        "level": spec.level,
        "measure": spec.measure,
    })
}

fn homology_value(r: &HomologyReport) -> Value {
    json!({
        "inputs": r.inputs,
        "levels": r.levels,
        "dims": r.dims.iter().map(|&(e, o)| json!([e, o])).collect::<Vec<_>>(),
        "stabilized": r.stabilized,
        "notes": r.notes,
    })
}

fn need_algebra(spec: &JobSpec) -> Result<(Arc<FiniteGroup>, GAlgebra), InputError> {
    let gd = spec
        .group
        .clone()
        .unwrap_or(GroupDesc::Name("trivial".into()));
    let group = resolve_group(&gd)?;
    let ad = spec
        .algebra
        .clone()
        .ok_or_else(|| InputError("no algebra given".into()))?;
    let measure = measure_of(spec)?;
    let alg = resolve_algebra(&ad, &group, measure)?;
    Ok((group, alg))
}

fn unital_or_unitarized(alg: &GAlgebra, suite: &mut Suite) -> GAlgebra {
    if alg.unit().is_some() {
        alg.clone()
    } else {
        suite
            .notes
            .push("input algebra has no unit; a unit was adjoined".to_string());
        unitarize(alg)
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn comp_or_zero(
    op: &paracyc::forms::TowerOp,
    src: usize,
    dst: usize,
    space: &FormSpace,
) -> SparseMatrix {
    op.comp(src, dst)
        .cloned()
        .unwrap_or_else(|| SparseMatrix::zero(space.dim(dst), space.dim(src)))
}

pub fn cmd_verify_forms(spec: &JobSpec) -> Result<(Value, i32), InputError> {
    let started = Instant::now();
    let (_group, alg) = need_algebra(spec)?;
    let level = spec.level.unwrap_or(5).max(2);
    let space = FormSpace::new(&alg, level);
    let mut suite = Suite::new();
    let d = space.op_d();
    let b = space.op_b();
    let bb = space.op_big_b();
    let t = space.op_t();
    let n = space.group().order();
    let zero_if = |ok: bool, msg: &str| -> Result<(), EngineError> {
        if ok {
            Ok(())
        } else {
            Err(EngineError::IdentityViolation(msg.to_string()))
        }
    };
    let mut ok_d2 = true;
    for m in 0..=level.saturating_sub(2) {
        let d1 = comp_or_zero(&d, m, m + 1, &space);
        let d2 = comp_or_zero(&d, m + 1, m + 2, &space);
        ok_d2 &= d2.mul(&d1).is_zero();
    }
    suite.run("exterior differential squares to zero", "d^2 = 0", zero_if(ok_d2, "d^2 != 0"));
    let mut ok_b2 = true;
    for m in 2..=level {
        let b1 = comp_or_zero(&b, m, m - 1, &space);
        let b2 = comp_or_zero(&b, m - 1, m - 2, &space);
        ok_b2 &= b2.mul(&b1).is_zero();
    }
    suite.run("Hochschild boundary squares to zero", "b^2 = 0", zero_if(ok_b2, "b^2 != 0"));
    let mut ok_bb2 = true;
    for m in 0..=level.saturating_sub(2) {
        let m1 = comp_or_zero(&bb, m, m + 1, &space);
        let m2 = comp_or_zero(&bb, m + 1, m + 2, &space);
        ok_bb2 &= m2.mul(&m1).is_zero();
    }
    suite.run("degree-raising boundary squares to zero", "B^2 = 0", zero_if(ok_bb2, "B^2 != 0"));
    let mut ok_mixed = true;
    for m in 1..level {
        let lhs = comp_or_zero(&bb, m - 1, m, &space)
            .mul(&comp_or_zero(&b, m, m - 1, &space))
            .add(&comp_or_zero(&b, m + 1, m, &space).mul(&comp_or_zero(&bb, m, m + 1, &space)));
        let rhs = SparseMatrix::identity(space.dim(m)).sub(&comp_or_zero(&t, m, m, &space));
        ok_mixed &= lhs == rhs;
    }
    suite.run(
        "mixed anticommutator equals the symmetry defect",
        "Bb + bB = id - T",
        zero_if(ok_mixed, "Bb + bB != id - T"),
    );
    let mut ok_cov = true;
    for s in 0..n {
        let g = space.op_gact(s);
        for m in 0..level {
            let gd = comp_or_zero(&g, m + 1, m + 1, &space).mul(&comp_or_zero(&d, m, m + 1, &space));
            let dg = comp_or_zero(&d, m, m + 1, &space).mul(&comp_or_zero(&g, m, m, &space));
            ok_cov &= gd == dg;
        }
        for m in 1..=level {
            let gb = comp_or_zero(&g, m - 1, m - 1, &space).mul(&comp_or_zero(&b, m, m - 1, &space));
            let bg = comp_or_zero(&b, m, m - 1, &space).mul(&comp_or_zero(&g, m, m, &space));
            ok_cov &= gb == bg;
        }
    }
    suite.run(
        "group action commutes with both boundaries",
        "s·(dω) = d(s·ω), s·(bω) = b(s·ω)",
        zero_if(ok_cov, "boundaries are not equivariant"),
    );
    let cq = CqSuite::new(&space);
    suite.run(
        "Karoubi operator assembly",
        "κ = id − (db + bd)",
        cq.check_kappa(&space),
    );
    suite.run(
        "degree-raising boundary assembly",
        "B = Σ κ^j d",
        cq.check_big_b(&space),
    );
    Ok(report_value(spec, &suite, started))
}

pub fn cmd_verify_cq(spec: &JobSpec) -> Result<(Value, i32), InputError> {
    let started = Instant::now();
    let (_group, alg) = need_algebra(spec)?;
    let level = spec.level.unwrap_or(6).max(2);
    let space = FormSpace::new(&alg, level);
    let mut suite = Suite::new();
    if level < 4 {
        suite.notes.push(format!(
            "level {level}: interior-degree range for the high-arity identities is empty or \
             nearly empty"
        ));
    }
    suite.run(
        "norm polynomial identities",
        "g_n(id − κ²) = id − f_n",
        CqSuite::check_polynomials(level as i64),
    );
    let cq = CqSuite::new(&space);
    suite.run("Karoubi operator", "κ = id − (db + bd)", cq.check_kappa(&space));
    suite.run("degree-raising boundary", "B = Σ κ^j d", cq.check_big_b(&space));
    suite.run(
        "Karoubi power relations",
        "κ^n = … on Ω^n",
        cq.check_kappa_powers(),
    );
    suite.run(
        "norm operator relations",
        "g_n(κ²) interior identities",
        cq.check_norm_relations(),
    );
    suite.run(
        "boundary anticommutators",
        "∂Q + Q∂ = 0, δQ + Qδ = 0",
        cq.check_boundaries(),
    );
    suite.run(
        "projector homotopies",
        "id − P = ∂H + H∂, id − P = δL + Lδ",
        cq.check_homotopies(),
    );
    suite.run(
        "comparison operators",
        "∂F − F∂ = (id − T)Q, δF − Fδ = (id − T)Q",
        cq.check_p_q(),
    );
    suite.run(
        "projector homotopic to the identity",
        "P ≃ id",
        cq.check_p_homotopic_to_identity(),
    );
    suite.run(
        "mixed comparison relations",
        "δF − F∂ = (id − T)(Q + R), ∂F − Fδ = (id − T)(Q − R), [F, R] = 0, RQ = QR = 0",
        cq.check_mixed_relations(),
    );
    suite.run(
        "two-boundary equivalence",
        "φψ and ψφ homotopic to the identity",
        cq.check_equivalence(),
    );
    Ok(report_value(spec, &suite, started))
}

pub fn cmd_greenjulg(spec: &JobSpec) -> Result<(Value, i32), InputError> {
    let started = Instant::now();
    let (_group, alg) = need_algebra(spec)?;
    let mut suite = Suite::new();
    let r = unital_or_unitarized(&alg, &mut suite);
    suite.run(
        "averaging splits off the commutator span",
        "B = λ₀(B) ⊕ [B, H]",
        lambda0_rank_split(&r).map(|_| ()),
    );
    match green_julg(&r) {
        Err(e) => suite.run(
            "comparison maps are mutually inverse chain maps",
            "αβ = id, βα = id",
            Err(e),
        ),
        Ok(data) => {
            suite.run(
                "comparison maps are mutually inverse chain maps",
                "αβ = id, βα = id",
                Ok(()),
            );
            suite.assert_eq_dims(
                "invariant and relative dimensions agree in both degrees",
                "X_G(R)^G ≅ X(R ⋊ G)_H",
                (data.coinv.tower.even_dim(), data.coinv.tower.odd_dim()),
                (data.relative.even_dim(), data.relative.odd_dim()),
            );
            suite.payload.push((
                "dimensions".to_string(),
                json!({
                    "invariant": [data.coinv.tower.even_dim(), data.coinv.tower.odd_dim()],
                    "relative": [data.relative.even_dim(), data.relative.odd_dim()],
                }),
            ));
        }
    }
    suite.run(
        "kernel complex is contractible",
        "K¹ ≅ K⁰ via the boundary",
        k_contraction(&r).map(|_| ()),
    );
    Ok(report_value(spec, &suite, started))
}

pub fn cmd_dual_greenjulg(spec: &JobSpec) -> Result<(Value, i32), InputError> {
    let started = Instant::now();
    let (_group, alg) = need_algebra(spec)?;
    let level = spec.level.unwrap_or(3).clamp(2, 4);
    let mut suite = Suite::new();
    let a = unital_or_unitarized(&alg, &mut suite);
    match DualTrace::new(&a, level) {
        Err(e) => suite.run("twisted trace is a chain map", "[Tr, b] = 0, [Tr, d] = 0", Err(e)),
        Ok(tr) => suite.run(
            "twisted trace is a chain map",
            "[Tr, b] = 0, [Tr, d] = 0",
            tr.check_chain_compat(level - 1),
        ),
    }
    match dual_comparison(&a, level) {
        Err(e) => suite.run(
            "comparison retraction exists on coinvariants",
            "bh + hb = id - φτ",
            Err(e),
        ),
        Ok(cmp) => {
            suite.run("downward-then-upward is the identity", "τφ = id", cmp.check_tau_phi(level));
            suite.run(
                "composite is an idempotent chain projector",
                "(φτ)² = φτ",
                cmp.check_phi_tau_idempotent(level.saturating_sub(1)),
            );
            suite.run(
                "homotopy contracts the complement",
                "bh + hb = id - φτ",
                cmp.check_homotopy(level.saturating_sub(1)),
            );
        }
    }
    Ok(report_value(spec, &suite, started))
}

pub fn cmd_hpg(spec: &JobSpec) -> Result<(Value, i32), InputError> {
    let started = Instant::now();
    let (_group, alg) = need_algebra(spec)?;
    let level = spec.level.unwrap_or(6).max(2);
    let mut suite = Suite::new();
    match hpg_second_variable(&alg, level) {
        Err(e) => suite.run(
            "equivariant homology at truncation",
            "H of the invariant Hodge tower",
            Err(e),
        ),
        Ok(r) => {
            suite.run(
                "equivariant homology at truncation",
                "H of the invariant Hodge tower",
                Ok(()),
            );
            suite
                .payload
                .push(("homology".to_string(), homology_value(&r)));
        }
    }
    match greenjulg_compare(&alg, level) {
        Err(e) => suite.run(
            "crossed-product comparison",
            "equivariant dims = crossed-product dims",
            Err(e),
        ),
        Ok(cmp) => {
            suite.assert_eq_dims(
                "crossed-product comparison",
                "equivariant dims = crossed-product dims",
                cmp.equivariant.final_dims(),
                cmp.crossed.final_dims(),
            );
            suite.payload.push((
                "comparison".to_string(),
                json!({
                    "equivariant": homology_value(&cmp.equivariant),
                    "crossed_product": homology_value(&cmp.crossed),
                    "agree": cmp.agree,
                    "unitarized": cmp.unitarized,
                }),
            ));
        }
    }
    Ok(report_value(spec, &suite, started))
}

pub fn cmd_hp(spec: &JobSpec) -> Result<(Value, i32), InputError> {
    let started = Instant::now();
    let (_group, alg) = need_algebra(spec)?;
    let level = spec.level.unwrap_or(6).max(2);
    let mut suite = Suite::new();
    match hp_ordinary(&alg, level) {
        Err(e) => suite.run(
            "ordinary homology at truncation",
            "H of the Hodge tower, group forgotten",
            Err(e),
        ),
        Ok(r) => {
            suite.run(
                "ordinary homology at truncation",
                "H of the Hodge tower, group forgotten",
                Ok(()),
            );
            suite
                .payload
                .push(("homology".to_string(), homology_value(&r)));
        }
    }
    Ok(report_value(spec, &suite, started))
}

/// Dispatch. `Err` means invalid input (exit 2); otherwise the report and
/// the exit code (0 all-pass, 1 identity violation).
pub fn run_job(spec: &JobSpec) -> Result<(Value, i32), InputError> {
    if let Some(n) = spec.level {
        if n < 2 {
            return Err(InputError("level must be at least 2".into()));
        }
    }
    match spec.command.as_str() {
        "verify-forms" => cmd_verify_forms(spec),
        "verify-cq" => cmd_verify_cq(spec),
        "greenjulg" => cmd_greenjulg(spec),
        "dual-greenjulg" => cmd_dual_greenjulg(spec),
        "hpg" => cmd_hpg(spec),
        "hp" => cmd_hp(spec),
        other => Err(InputError(format!("unknown command: {other}"))),
    }
}

/// CSV rendering: one row per check, then one row per homology level.
pub fn to_csv(report: &Value) -> String {
    let mut out = String::from("kind,name,detail,status\n");
    if let Some(checks) = report["checks"].as_array() {
        for c in checks {
            out.push_str(&format!(
                "check,{},{},{}\n",
                csv_field(c["name"].as_str().unwrap_or("")),
                csv_field(c["anchor"].as_str().unwrap_or("")),
                c["status"].as_str().unwrap_or("")
            ));
        }
    }
    for key in ["homology"] {
        if let (Some(levels), Some(dims)) = (
            report[key]["levels"].as_array(),
            report[key]["dims"].as_array(),
        ) {
            for (lv, d) in levels.iter().zip(dims) {
                out.push_str(&format!(
                    "homology,level {lv},\"({}, {})\",\n",
                    d[0], d[1]
                ));
            }
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
