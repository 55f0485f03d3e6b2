//! Finite-dimensional algebras, coalgebras, and Hopf algebras given by
//! exact structure constants, with exhaustive axiom verification.
//!
//! A structure is a finite basis `e_0, ..., e_(d-1)` together with tables:
//! multiplication `e_i e_j`, unit, comultiplication `Delta(e_i)` written in
//! the tensor basis `e_j (x) e_k` (flat index `j * d + k`), counit, and an
//! antipode column table. Nothing is assumed about the tables: every axiom
//! — associativity, unit laws, coassociativity, counit laws, the bialgebra
//! compatibilities, and the antipode convolution identities — is checked on
//! every basis tuple with exact cyclotomic arithmetic. Since the axioms are
//! multilinear, checking them on basis tuples proves them on the whole
//! space, so a passing [`AxiomReport`] is a proof, not a spot check.
//!
//! The module also provides the constructions that stay meaningful at this
//! level of generality: tensor products, linear duals (transposing all
//! tables), quotients by Hopf ideals, convolution of linear endomorphisms,
//! antipode order, grouplike testing, and one-sided integrals.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycScalar, FieldContext};
use crate::error::{HopfError, Result};
use crate::linalg::{sparse_tensor, tensor_index, untensor_index, SparseVec};

/// Cap on recorded witnesses per axiom; the total count is still exact.
const MAX_RECORDED_FAILURES: usize = 32;

/// One failed instance of an axiom, with the basis indices that witness it.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomFailure {
    /// Basis indices of the offending tuple, in the order the axiom
    /// quantifies over them.
    pub indices: Vec<usize>,
    /// Human-readable description of the discrepancy.
    pub detail: String,
}

/// Verification outcome for one named axiom.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    /// Stable axiom name, e.g. `associativity`.
    pub name: String,
    /// Recorded witnesses (at most a fixed cap).
    pub failures: Vec<AxiomFailure>,
    /// Exact number of failing tuples, even beyond the recording cap.
    pub total_failures: usize,
}

impl AxiomCheck {
    pub(crate) fn new(name: &str) -> Self {
        AxiomCheck {
            name: name.to_string(),
            failures: Vec::new(),
            total_failures: 0,
        }
    }

    pub(crate) fn record(&mut self, indices: Vec<usize>, detail: String) {
        self.total_failures += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(AxiomFailure { indices, detail });
        }
    }

    /// True when no failing tuple exists.
    pub fn passed(&self) -> bool {
        self.total_failures == 0
    }
}

/// The result of verifying a family of axioms exhaustively.
#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomReport {
    /// One entry per checked axiom, in check order.
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    /// True when every axiom passed on every tuple.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    /// Appends the checks of `other`.
    pub fn merge(&mut self, other: AxiomReport) {
        self.checks.extend(other.checks);
    }

    /// The check with the given name, if present.
    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub(crate) fn push(&mut self, check: AxiomCheck) {
        self.checks.push(check);
    }
}

impl std::fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            if c.passed() {
                writeln!(f, "{}: pass", c.name)?;
            } else {
                writeln!(f, "{}: FAIL ({} tuples)", c.name, c.total_failures)?;
                for w in &c.failures {
                    writeln!(f, "  at {:?}: {}", w.indices, w.detail)?;
                }
            }
        }
        Ok(())
    }
}

/// A finite-dimensional algebra by structure constants.
#[derive(Clone, Debug)]
pub struct AlgebraData {
    ctx: Arc<FieldContext>,
    dim: usize,
    /// `mult[i * dim + j]` is the expansion of `e_i * e_j`.
    mult: Vec<SparseVec>,
    /// Expansion of the multiplicative unit.
    unit: SparseVec,
}

impl AlgebraData {
    /// Builds an algebra after validating table shapes, index ranges, and
    /// scalar conductors.
    pub fn new(
        ctx: &Arc<FieldContext>,
        dim: usize,
        mult: Vec<SparseVec>,
        unit: SparseVec,
    ) -> Result<Self> {
        if mult.len() != dim * dim {
            return Err(HopfError::Malformed(format!(
                "multiplication table has {} rows, expected {}",
                mult.len(),
                dim * dim
            )));
        }
        for v in mult.iter().chain(std::iter::once(&unit)) {
            validate_vec(ctx, dim, v)?;
        }
        Ok(AlgebraData {
            ctx: Arc::clone(ctx),
            dim,
            mult,
            unit,
        })
    }

    /// Field context.
    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    /// Dimension over the base field.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Expansion of `e_i * e_j`.
    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i * self.dim + j]
    }

    /// The unit element.
    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    /// Product of arbitrary elements by bilinear extension.
    pub fn mul(&self, v: &SparseVec, w: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in v.iter() {
            for (j, b) in w.iter() {
                out.add_scaled(self.mul_basis(i, j), &(a * b));
            }
        }
        out
    }

    /// `v^k` for `k >= 0` (with `v^0` the unit).
    pub fn pow(&self, v: &SparseVec, k: u64) -> SparseVec {
        let mut acc = self.unit.clone();
        for _ in 0..k {
            acc = self.mul(&acc, v);
        }
        acc
    }

    /// True when `e_i e_j = e_j e_i` for all pairs.
    pub fn is_commutative(&self) -> bool {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.mul_basis(i, j) != self.mul_basis(j, i) {
                    return false;
                }
            }
        }
        true
    }
}

/// A finite-dimensional coalgebra by structure constants.
#[derive(Clone, Debug)]
pub struct CoalgebraData {
    ctx: Arc<FieldContext>,
    dim: usize,
    /// `comult[i]` is `Delta(e_i)` in the flat tensor basis.
    comult: Vec<SparseVec>,
    /// `counit[i]` is `eps(e_i)`.
    counit: Vec<CycScalar>,
}

impl CoalgebraData {
    /// Builds a coalgebra after validating table shapes and conductors.
    pub fn new(
        ctx: &Arc<FieldContext>,
        dim: usize,
        comult: Vec<SparseVec>,
        counit: Vec<CycScalar>,
    ) -> Result<Self> {
        if comult.len() != dim || counit.len() != dim {
            return Err(HopfError::Malformed(format!(
                "coalgebra tables have {} / {} rows, expected {dim}",
                comult.len(),
                counit.len()
            )));
        }
        for v in &comult {
            validate_vec(ctx, dim * dim, v)?;
        }
        for c in &counit {
            if c.conductor() != ctx.conductor() {
                return Err(HopfError::ConductorMismatch {
                    left: ctx.conductor(),
                    right: c.conductor(),
                });
            }
        }
        Ok(CoalgebraData {
            ctx: Arc::clone(ctx),
            dim,
            comult,
            counit,
        })
    }

    /// Field context.
    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    /// Dimension over the base field.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Delta(e_i)` in the flat tensor basis.
    pub fn comult_basis(&self, i: usize) -> &SparseVec {
        &self.comult[i]
    }

    /// `eps(e_i)`.
    pub fn counit_basis(&self, i: usize) -> &CycScalar {
        &self.counit[i]
    }

    /// `Delta` of an arbitrary element by linear extension.
    pub fn comult(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in v.iter() {
            out.add_scaled(&self.comult[i], c);
        }
        out
    }

    /// `eps` of an arbitrary element.
    pub fn counit(&self, v: &SparseVec) -> CycScalar {
        let mut s = self.ctx.zero();
        for (i, c) in v.iter() {
            s = &s + &(&self.counit[i] * c);
        }
        s
    }

    /// True when `Delta` equals the factor swap composed with `Delta`.
    pub fn is_cocommutative(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            let twisted = self.comult[i].map_support(|k| {
                let (a, b) = untensor_index(k, d);
                tensor_index(b, a, d)
            });
            twisted == self.comult[i]
        })
    }
}

/// A Hopf algebra by structure constants: compatible algebra and coalgebra
/// tables plus an antipode column table.
#[derive(Clone, Debug)]
pub struct HopfData {
    algebra: AlgebraData,
    coalgebra: CoalgebraData,
    /// `antipode[i]` is the expansion of `S(e_i)`.
    antipode: Vec<SparseVec>,
}

impl HopfData {
    /// Assembles Hopf data after validating that the pieces share a context
    /// and dimension. Axioms are *not* checked here; call
    /// [`HopfData::verify_hopf`].
    pub fn new(
        algebra: AlgebraData,
        coalgebra: CoalgebraData,
        antipode: Vec<SparseVec>,
    ) -> Result<Self> {
        if algebra.dim != coalgebra.dim {
            return Err(HopfError::Malformed(format!(
                "algebra dim {} != coalgebra dim {}",
                algebra.dim, coalgebra.dim
            )));
        }
        if algebra.ctx.conductor() != coalgebra.ctx.conductor() {
            return Err(HopfError::ConductorMismatch {
                left: algebra.ctx.conductor(),
                right: coalgebra.ctx.conductor(),
            });
        }
        if antipode.len() != algebra.dim {
            return Err(HopfError::Malformed(format!(
                "antipode table has {} rows, expected {}",
                antipode.len(),
                algebra.dim
            )));
        }
        for v in &antipode {
            validate_vec(&algebra.ctx, algebra.dim, v)?;
        }
        Ok(HopfData {
            algebra,
            coalgebra,
            antipode,
        })
    }

    /// Field context.
    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.algebra.ctx
    }

    /// Dimension over the base field.
    pub fn dim(&self) -> usize {
        self.algebra.dim
    }

    /// The underlying algebra.
    pub fn algebra(&self) -> &AlgebraData {
        &self.algebra
    }

    /// The underlying coalgebra.
    pub fn coalgebra(&self) -> &CoalgebraData {
        &self.coalgebra
    }

    /// Antipode columns `S(e_i)`.
    pub fn antipode_table(&self) -> &[SparseVec] {
        &self.antipode
    }

    /// `S` of an arbitrary element.
    pub fn antipode(&self, v: &SparseVec) -> SparseVec {
        crate::linalg::apply_linear(&self.antipode, v)
    }

    /// Verifies every Hopf axiom exhaustively. The returned report has one
    /// entry per axiom; all entries passing proves the tables define a Hopf
    /// algebra.
    pub fn verify_hopf(&self) -> AxiomReport {
        let mut report = verify_algebra(&self.algebra);
        report.merge(verify_coalgebra(&self.coalgebra));
        report.merge(verify_bialgebra_compat(&self.algebra, &self.coalgebra));
        report.merge(self.verify_antipode());
        report
    }

    /// Verifies only the two antipode convolution identities
    /// `m (S (x) id) Delta = unit . eps = m (id (x) S) Delta`.
    pub fn verify_antipode(&self) -> AxiomReport {
        let d = self.dim();
        let mut left = AxiomCheck::new("antipode-left");
        let mut right = AxiomCheck::new("antipode-right");
        for i in 0..d {
            let target = self.algebra.unit.scaled(self.coalgebra.counit_basis(i));
            let mut l = SparseVec::new();
            let mut r = SparseVec::new();
            for (k, c) in self.coalgebra.comult_basis(i).iter() {
                let (a, b) = untensor_index(k, d);
                l.add_scaled(&self.algebra.mul(&self.antipode[a], &unit_vec(self.ctx(), b)), c);
                r.add_scaled(&self.algebra.mul(&unit_vec(self.ctx(), a), &self.antipode[b]), c);
            }
            if l != target {
                left.record(vec![i], "m(S (x) id)Delta != eps * 1".into());
            }
            if r != target {
                right.record(vec![i], "m(id (x) S)Delta != eps * 1".into());
            }
        }
        let mut report = AxiomReport::default();
        report.push(left);
        report.push(right);
        report
    }

    /// Multiplicative order of the antipode as a linear map.
    ///
    /// Errors with [`HopfError::OrderCap`] if the order exceeds `cap`.
    pub fn antipode_order(&self, cap: u64) -> Result<u64> {
        let d = self.dim();
        let identity: Vec<SparseVec> = (0..d).map(|i| unit_vec(self.ctx(), i)).collect();
        let mut power = self.antipode.clone();
        for k in 1..=cap {
            if power == identity {
                return Ok(k);
            }
            power = power.iter().map(|col| self.antipode(col)).collect();
        }
        Err(HopfError::OrderCap {
            what: "antipode order".into(),
            reached: cap as usize,
            cap: cap as usize,
        })
    }

    /// True when `v` is grouplike: `Delta(v) = v (x) v` and `eps(v) = 1`.
    pub fn is_grouplike(&self, v: &SparseVec) -> bool {
        let d = self.dim();
        self.coalgebra.comult(v) == sparse_tensor(v, v, d) && self.coalgebra.counit(v).is_one()
    }
}

/// Standard basis vector `e_i` with unit coefficient.
pub fn unit_vec(ctx: &Arc<FieldContext>, i: usize) -> SparseVec {
    SparseVec::unit(i, ctx.one())
}

fn validate_vec(ctx: &Arc<FieldContext>, bound: usize, v: &SparseVec) -> Result<()> {
    for (i, c) in v.iter() {
        if i >= bound {
            return Err(HopfError::Malformed(format!(
                "coordinate {i} out of range (dimension {bound})"
            )));
        }
        if c.conductor() != ctx.conductor() {
            return Err(HopfError::ConductorMismatch {
                left: ctx.conductor(),
                right: c.conductor(),
            });
        }
    }
    Ok(())
}

/// Exhaustive associativity and unit-law verification.
pub fn verify_algebra(a: &AlgebraData) -> AxiomReport {
    let d = a.dim;
    let mut assoc = AxiomCheck::new("associativity");
    for i in 0..d {
        for j in 0..d {
            let ij = a.mul_basis(i, j).clone();
            for k in 0..d {
                let lhs = a.mul(&ij, &unit_vec(&a.ctx, k));
                let rhs = a.mul(&unit_vec(&a.ctx, i), a.mul_basis(j, k));
                if lhs != rhs {
                    assoc.record(vec![i, j, k], "(e_i e_j) e_k != e_i (e_j e_k)".into());
                }
            }
        }
    }
    let mut unit = AxiomCheck::new("unit");
    for i in 0..d {
        let e = unit_vec(&a.ctx, i);
        if a.mul(&a.unit, &e) != e {
            unit.record(vec![i], "1 * e_i != e_i".into());
        }
        if a.mul(&e, &a.unit) != e {
            unit.record(vec![i], "e_i * 1 != e_i".into());
        }
    }
    let mut report = AxiomReport::default();
    report.push(assoc);
    report.push(unit);
    report
}

/// Exhaustive coassociativity and counit-law verification.
pub fn verify_coalgebra(c: &CoalgebraData) -> AxiomReport {
    let d = c.dim;
    let mut coassoc = AxiomCheck::new("coassociativity");
    for i in 0..d {
        // Both sides land in the triple tensor with flat index
        // a * d^2 + b * d + e.
        let mut lhs = SparseVec::new();
        let mut rhs = SparseVec::new();
        for (k, s) in c.comult_basis(i).iter() {
            let (x, y) = untensor_index(k, d);
            for (m, t) in c.comult_basis(x).iter() {
                let (a, b) = untensor_index(m, d);
                lhs.add_to(a * d * d + b * d + y, &(s * t));
            }
            for (m, t) in c.comult_basis(y).iter() {
                let (b, e) = untensor_index(m, d);
                rhs.add_to(x * d * d + b * d + e, &(s * t));
            }
        }
        if lhs != rhs {
            coassoc.record(vec![i], "(Delta (x) id)Delta != (id (x) Delta)Delta".into());
        }
    }
    let mut counit = AxiomCheck::new("counit");
    for i in 0..d {
        let mut left = SparseVec::new();
        let mut right = SparseVec::new();
        for (k, s) in c.comult_basis(i).iter() {
            let (a, b) = untensor_index(k, d);
            left.add_to(b, &(s * c.counit_basis(a)));
            right.add_to(a, &(s * c.counit_basis(b)));
        }
        let e = SparseVec::unit(i, c.ctx.one());
        if left != e {
            counit.record(vec![i], "(eps (x) id)Delta(e_i) != e_i".into());
        }
        if right != e {
            counit.record(vec![i], "(id (x) eps)Delta(e_i) != e_i".into());
        }
    }
    let mut report = AxiomReport::default();
    report.push(coassoc);
    report.push(counit);
    report
}

/// Exhaustive bialgebra compatibility: `Delta` and `eps` are algebra maps,
/// including their values on the unit.
pub fn verify_bialgebra_compat(a: &AlgebraData, c: &CoalgebraData) -> AxiomReport {
    let d = a.dim;
    let mut report = AxiomReport::default();

    let mut delta_unit = AxiomCheck::new("comultiplication-of-unit");
    if c.comult(&a.unit) != sparse_tensor(&a.unit, &a.unit, d) {
        delta_unit.record(vec![], "Delta(1) != 1 (x) 1".into());
    }
    report.push(delta_unit);

    let mut eps_unit = AxiomCheck::new("counit-of-unit");
    if !c.counit(&a.unit).is_one() {
        eps_unit.record(vec![], "eps(1) != 1".into());
    }
    report.push(eps_unit);

    let mut delta_mult = AxiomCheck::new("comultiplication-multiplicative");
    for i in 0..d {
        let di = c.comult_basis(i);
        for j in 0..d {
            let dj = c.comult_basis(j);
            // Componentwise product in A (x) A.
            let mut lhs = SparseVec::new();
            for (ki, si) in di.iter() {
                let (a1, a2) = untensor_index(ki, d);
                for (kj, sj) in dj.iter() {
                    let (b1, b2) = untensor_index(kj, d);
                    let prod = sparse_tensor(a.mul_basis(a1, b1), a.mul_basis(a2, b2), d);
                    lhs.add_scaled(&prod, &(si * sj));
                }
            }
            if lhs != c.comult(a.mul_basis(i, j)) {
                delta_mult.record(vec![i, j], "Delta(e_i e_j) != Delta(e_i) Delta(e_j)".into());
            }
        }
    }
    report.push(delta_mult);

    let mut eps_mult = AxiomCheck::new("counit-multiplicative");
    for i in 0..d {
        for j in 0..d {
            let lhs = c.counit(a.mul_basis(i, j));
            let rhs = c.counit_basis(i) * c.counit_basis(j);
            if lhs != rhs {
                eps_mult.record(vec![i, j], "eps(e_i e_j) != eps(e_i) eps(e_j)".into());
            }
        }
    }
    report.push(eps_mult);
    report
}

/// Convolution product of two endomorphisms given by column tables:
/// `(f * g)(v) = m (f (x) g) Delta(v)`.
pub fn convolve_endos(h: &HopfData, f: &[SparseVec], g: &[SparseVec]) -> Vec<SparseVec> {
    let d = h.dim();
    (0..d)
        .map(|i| {
            let mut out = SparseVec::new();
            for (k, c) in h.coalgebra().comult_basis(i).iter() {
                let (a, b) = untensor_index(k, d);
                out.add_scaled(&h.algebra().mul(&f[a], &g[b]), c);
            }
            out
        })
        .collect()
}

/// The identity endomorphism as a column table.
pub fn identity_endo(ctx: &Arc<FieldContext>, dim: usize) -> Vec<SparseVec> {
    (0..dim).map(|i| unit_vec(ctx, i)).collect()
}

/// The convolution unit `v -> eps(v) 1` as a column table.
pub fn unit_counit_endo(h: &HopfData) -> Vec<SparseVec> {
    (0..h.dim())
        .map(|i| h.algebra().unit().scaled(h.coalgebra().counit_basis(i)))
        .collect()
}

/// A basis of the space of left integrals: `{v : x v = eps(x) v for all x}`.
///
/// Only the algebra structure and the counit enter, so this applies equally
/// to ordinary Hopf algebras and to Hopf algebras in braided categories.
pub fn left_integrals(a: &AlgebraData, counit: &[CycScalar]) -> Vec<SparseVec> {
    let d = a.dim();
    let mut solver = crate::linalg::KernelSolver::new();
    for v in 0..d {
        // Stack the constraints (e_x v - eps(e_x) v) over all x into one
        // image vector indexed by x * d + coordinate.
        let mut image = SparseVec::new();
        for x in 0..d {
            let mut row = a.mul_basis(x, v).clone();
            row.add_to(v, &(-&counit[x]));
            for (k, c) in row.iter() {
                image.add_to(x * d + k, c);
            }
        }
        solver.feed(image, SparseVec::unit(v, a.ctx().one()));
    }
    solver.into_kernel()
}

/// Tensor product Hopf algebra `X (x) Y` with componentwise structure.
///
/// Basis index is `a * dim(Y) + b`.
pub fn tensor_hopf(x: &HopfData, y: &HopfData) -> Result<HopfData> {
    if x.ctx().conductor() != y.ctx().conductor() {
        return Err(HopfError::ConductorMismatch {
            left: x.ctx().conductor(),
            right: y.ctx().conductor(),
        });
    }
    let ctx = x.ctx();
    let (dx, dy) = (x.dim(), y.dim());
    let d = dx * dy;
    let idx = |a: usize, b: usize| a * dy + b;

    let mut mult = vec![SparseVec::new(); d * d];
    for a in 0..dx {
        for b in 0..dy {
            for c in 0..dx {
                for e in 0..dy {
                    let px = x.algebra().mul_basis(a, c);
                    let py = y.algebra().mul_basis(b, e);
                    let mut out = SparseVec::new();
                    for (p, s) in px.iter() {
                        for (q, t) in py.iter() {
                            out.add_to(idx(p, q), &(s * t));
                        }
                    }
                    mult[idx(a, b) * d + idx(c, e)] = out;
                }
            }
        }
    }
    let mut unit = SparseVec::new();
    for (p, s) in x.algebra().unit().iter() {
        for (q, t) in y.algebra().unit().iter() {
            unit.add_to(idx(p, q), &(s * t));
        }
    }

    let mut comult = vec![SparseVec::new(); d];
    let mut counit = vec![ctx.zero(); d];
    let mut antipode = vec![SparseVec::new(); d];
    for a in 0..dx {
        for b in 0..dy {
            // Middle-swap: ((p,q),(r,s)) from Delta_X(a) = p (x) q and
            // Delta_Y(b) = r (x) s.
            let mut out = SparseVec::new();
            for (kx, s) in x.coalgebra().comult_basis(a).iter() {
                let (p, q) = untensor_index(kx, dx);
                for (ky, t) in y.coalgebra().comult_basis(b).iter() {
                    let (r, v) = untensor_index(ky, dy);
                    out.add_to(tensor_index(idx(p, r), idx(q, v), d), &(s * t));
                }
            }
            comult[idx(a, b)] = out;
            counit[idx(a, b)] = x.coalgebra().counit_basis(a) * y.coalgebra().counit_basis(b);
            let mut sv = SparseVec::new();
            for (p, s) in x.antipode_table()[a].iter() {
                for (q, t) in y.antipode_table()[b].iter() {
                    sv.add_to(idx(p, q), &(s * t));
                }
            }
            antipode[idx(a, b)] = sv;
        }
    }

    HopfData::new(
        AlgebraData::new(ctx, d, mult, unit)?,
        CoalgebraData::new(ctx, d, comult, counit)?,
        antipode,
    )
}

/// Linear dual Hopf algebra on the dual basis: multiplication transposes
/// comultiplication, comultiplication transposes multiplication, and the
/// antipode transposes.
pub fn dual_hopf(h: &HopfData) -> Result<HopfData> {
    let ctx = h.ctx();
    let d = h.dim();

    // (f^i f^j)[k] = Delta(e_k)[i (x) j].
    let mut mult = vec![SparseVec::new(); d * d];
    for k in 0..d {
        for (t, c) in h.coalgebra().comult_basis(k).iter() {
            let (i, j) = untensor_index(t, d);
            mult[i * d + j].add_to(k, c);
        }
    }
    // Unit of the dual is eps.
    let mut unit = SparseVec::new();
    for i in 0..d {
        unit.add_to(i, h.coalgebra().counit_basis(i));
    }
    // Delta*(f^k)[i (x) j] = (e_i e_j)[k].
    let mut comult = vec![SparseVec::new(); d];
    for i in 0..d {
        for j in 0..d {
            for (k, c) in h.algebra().mul_basis(i, j).iter() {
                comult[k].add_to(tensor_index(i, j, d), c);
            }
        }
    }
    // eps*(f^i) = f^i(1) = unit coefficient at i.
    let counit: Vec<CycScalar> = (0..d)
        .map(|i| {
            h.algebra()
                .unit()
                .get(i)
                .cloned()
                .unwrap_or_else(|| ctx.zero())
        })
        .collect();
    // S*(f^i)[j] = S(e_j)[i].
    let mut antipode = vec![SparseVec::new(); d];
    for j in 0..d {
        for (i, c) in h.antipode_table()[j].iter() {
            antipode[i].add_to(j, c);
        }
    }

    HopfData::new(
        AlgebraData::new(ctx, d, mult, unit)?,
        CoalgebraData::new(ctx, d, comult, counit)?,
        antipode,
    )
}

/// A Hopf algebra quotient `A / J` by a verified Hopf ideal, together with
/// the projection data needed to transport elements.
#[derive(Clone, Debug)]
pub struct HopfQuotient {
    /// The quotient Hopf algebra on the complement coordinates.
    pub hopf: HopfData,
    /// `proj[i]` is the class of `e_i` in quotient coordinates.
    pub proj: Vec<SparseVec>,
    /// Ambient coordinates whose classes form the quotient basis, in order.
    pub reps: Vec<usize>,
}

/// Quotients `h` by the span of `ideal`, first proving the span is a Hopf
/// ideal: a two-sided ideal killed by `eps`, with
/// `Delta(J) <= J (x) A + A (x) J` and `S(J) <= J`.
///
/// When `verify` is set, the quotient tables are re-verified from scratch.
pub fn hopf_quotient(h: &HopfData, ideal: &[SparseVec], verify: bool) -> Result<HopfQuotient> {
    let ctx = h.ctx();
    let d = h.dim();
    let span = crate::linalg::span_of(ctx, d, ideal.iter());

    // Two-sided ideal.
    for row in span.rows() {
        for i in 0..d {
            let e = unit_vec(ctx, i);
            if !span.contains(&h.algebra().mul(&e, row)) {
                return Err(HopfError::Precondition(format!(
                    "span is not a left ideal: e_{i} * row escapes"
                )));
            }
            if !span.contains(&h.algebra().mul(row, &e)) {
                return Err(HopfError::Precondition(format!(
                    "span is not a right ideal: row * e_{i} escapes"
                )));
            }
        }
    }
    // Counit kills J.
    for row in span.rows() {
        if !h.coalgebra().counit(row).is_zero() {
            return Err(HopfError::Precondition(
                "counit does not vanish on the ideal".into(),
            ));
        }
    }
    // Coideal: (pi (x) pi) Delta(J) = 0, where pi is reduction mod J.
    let proj_ambient: Vec<SparseVec> = (0..d).map(|i| span.reduce(&unit_vec(ctx, i))).collect();
    let project_tensor = |v: &SparseVec| -> SparseVec {
        let mut out = SparseVec::new();
        for (k, c) in v.iter() {
            let (a, b) = untensor_index(k, d);
            out.add_scaled(
                &sparse_tensor(&proj_ambient[a], &proj_ambient[b], d),
                c,
            );
        }
        out
    };
    for row in span.rows() {
        if !project_tensor(&h.coalgebra().comult(row)).is_zero() {
            return Err(HopfError::Precondition(
                "span is not a coideal: Delta(J) escapes J (x) A + A (x) J".into(),
            ));
        }
    }
    // Antipode stability.
    for row in span.rows() {
        if !span.contains(&h.antipode(row)) {
            return Err(HopfError::Precondition(
                "antipode does not preserve the ideal".into(),
            ));
        }
    }

    // Build the quotient on complement coordinates.
    let reps = span.complement_columns();
    let q = reps.len();
    let slot: std::collections::BTreeMap<usize, usize> =
        reps.iter().enumerate().map(|(s, &c)| (c, s)).collect();
    let to_q = |v: &SparseVec| -> SparseVec {
        // v must be reduced (supported on complement columns).
        v.map_support(|i| *slot.get(&i).expect("reduced vector on complement support"))
    };
    let proj: Vec<SparseVec> = proj_ambient.iter().map(|v| to_q(v)).collect();

    let mut mult = vec![SparseVec::new(); q * q];
    for (a, &ra) in reps.iter().enumerate() {
        for (b, &rb) in reps.iter().enumerate() {
            let prod = h.algebra().mul_basis(ra, rb);
            let mut out = SparseVec::new();
            for (k, c) in prod.iter() {
                out.add_scaled(&proj[k], c);
            }
            mult[a * q + b] = out;
        }
    }
    let mut unit = SparseVec::new();
    for (k, c) in h.algebra().unit().iter() {
        unit.add_scaled(&proj[k], c);
    }
    let mut comult = vec![SparseVec::new(); q];
    let mut counit = vec![ctx.zero(); q];
    let mut antipode = vec![SparseVec::new(); q];
    for (a, &ra) in reps.iter().enumerate() {
        let mut out = SparseVec::new();
        for (k, c) in h.coalgebra().comult_basis(ra).iter() {
            let (x, y) = untensor_index(k, d);
            let mut t = SparseVec::new();
            for (p, s) in proj[x].iter() {
                for (r, u) in proj[y].iter() {
                    t.add_to(tensor_index(p, r, q), &(s * u));
                }
            }
            out.add_scaled(&t, c);
        }
        comult[a] = out;
        counit[a] = h.coalgebra().counit_basis(ra).clone();
        let mut s = SparseVec::new();
        for (k, c) in h.antipode_table()[ra].iter() {
            s.add_scaled(&proj[k], c);
        }
        antipode[a] = s;
    }

    let hopf = HopfData::new(
        AlgebraData::new(ctx, q, mult, unit)?,
        CoalgebraData::new(ctx, q, comult, counit)?,
        antipode,
    )?;
    if verify {
        let report = hopf.verify_hopf();
        if !report.passed() {
            return Err(HopfError::InternalConsistency(format!(
                "quotient failed verification:\n{report}"
            )));
        }
    }
    Ok(HopfQuotient { hopf, proj, reps })
}

/// Restriction of Hopf data to a subspace that is closed under all
/// operations; `basis` rows become the new basis in the given order.
///
/// Errors if the subspace is not closed under multiplication, unit,
/// comultiplication, or antipode.
pub fn hopf_restrict(h: &HopfData, basis: &[SparseVec]) -> Result<HopfData> {
    let ctx = h.ctx();
    let d = h.dim();
    let n = basis.len();
    let span = crate::linalg::span_of(ctx, d, basis.iter());
    if span.rank() != n {
        return Err(HopfError::Precondition(
            "subspace basis is linearly dependent".into(),
        ));
    }
    let solver = ExpressSolver::new(basis)?;
    // Tensor-square basis for rewriting Delta values in subspace terms.
    let tensor_basis: Vec<SparseVec> = (0..n * n)
        .map(|t| {
            let (a, b) = untensor_index(t, n);
            sparse_tensor(&basis[a], &basis[b], d)
        })
        .collect();
    let tensor_solver = ExpressSolver::new(&tensor_basis)?;

    let mut mult = vec![SparseVec::new(); n * n];
    for a in 0..n {
        for b in 0..n {
            mult[a * n + b] = solver.express(&h.algebra().mul(&basis[a], &basis[b]))?;
        }
    }
    let unit = solver.express(h.algebra().unit())?;
    let mut comult = vec![SparseVec::new(); n];
    let mut counit = vec![ctx.zero(); n];
    let mut antipode = vec![SparseVec::new(); n];
    for a in 0..n {
        comult[a] = tensor_solver.express(&h.coalgebra().comult(&basis[a]))?;
        counit[a] = h.coalgebra().counit(&basis[a]);
        antipode[a] = solver.express(&h.antipode(&basis[a]))?;
    }

    HopfData::new(
        AlgebraData::new(ctx, n, mult, unit)?,
        CoalgebraData::new(ctx, n, comult, counit)?,
        antipode,
    )
}

/// Precomputed elimination data for expressing vectors in a fixed basis.
///
/// Built once per basis; each `express` call then runs one back-substitution
/// and errors if the vector falls outside the span.
pub struct ExpressSolver {
    /// `(pivot, reduced basis combination, coordinate combination)` rows.
    rows: Vec<(usize, SparseVec, SparseVec)>,
}

impl ExpressSolver {
    /// Eliminates `basis` into echelon form with coordinate tracking.
    pub fn new(basis: &[SparseVec]) -> Result<Self> {
        let mut rows: Vec<(usize, SparseVec, SparseVec)> = Vec::new();
        for (i, b) in basis.iter().enumerate() {
            let Some((_, lead)) = b.leading() else {
                continue;
            };
            let mut vec = b.clone();
            let mut coord = SparseVec::unit(i, lead.ctx().one());
            loop {
                let Some((lead, c)) = vec.leading().map(|(k, c)| (k, c.clone())) else {
                    break;
                };
                if let Some((_, eb, et)) = rows.iter().find(|(p, _, _)| *p == lead) {
                    let f = -&c;
                    vec.add_scaled(eb, &f);
                    coord.add_scaled(et, &f);
                } else {
                    let inv = c.inv()?;
                    rows.push((lead, vec.scaled(&inv), coord.scaled(&inv)));
                    break;
                }
            }
        }
        Ok(ExpressSolver { rows })
    }

    /// Coordinates of `v` in the original basis, or an error if `v` is not
    /// in the span.
    pub fn express(&self, v: &SparseVec) -> Result<SparseVec> {
        let mut rem = v.clone();
        let mut coords = SparseVec::new();
        loop {
            let Some((lead, c)) = rem.leading().map(|(k, c)| (k, c.clone())) else {
                return Ok(coords);
            };
            let Some((_, eb, et)) = self.rows.iter().find(|(p, _, _)| *p == lead) else {
                return Err(HopfError::Precondition(
                    "element escapes the subspace span".into(),
                ));
            };
            let f = -&c;
            rem.add_scaled(eb, &f);
            coords.add_scaled(et, &c);
        }
    }
}

/// Expresses `v` as a combination of `basis`, erroring outside the span.
pub fn express_in(basis: &[SparseVec], v: &SparseVec) -> Result<SparseVec> {
    ExpressSolver::new(basis)?.express(v)
}

/// On-disk description of Hopf structure constants.
///
/// All tables are sparse tuples sorted lexicographically, and every scalar
/// repeats the conductor so each file is self-describing; loading validates
/// index ranges and conductor agreement.
#[derive(Serialize, Deserialize)]
pub struct HopfJson {
    /// Conductor of the coefficient field Q(zeta_N).
    pub conductor: u64,
    /// Basis dimension.
    pub dim: usize,
    /// `(i, j, k, c)`: the product `e_i e_j` has coefficient `c` at `e_k`.
    pub mult: Vec<(usize, usize, usize, CycScalar)>,
    /// `(k, c)`: the unit has coefficient `c` at `e_k`.
    pub unit: Vec<(usize, CycScalar)>,
    /// `(i, j, k, c)`: `Delta(e_i)` has coefficient `c` at `e_j (x) e_k`.
    pub comult: Vec<(usize, usize, usize, CycScalar)>,
    /// `(i, c)`: `eps(e_i) = c` (zero values omitted).
    pub counit: Vec<(usize, CycScalar)>,
    /// `(i, j, c)`: `S(e_i)` has coefficient `c` at `e_j`.
    pub antipode: Vec<(usize, usize, CycScalar)>,
}

impl HopfJson {
    /// Extracts the canonical sparse representation of `h`.
    pub fn from_hopf(h: &HopfData) -> Self {
        let d = h.dim();
        let mut mult = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, c) in h.algebra().mul_basis(i, j).iter() {
                    mult.push((i, j, k, c.clone()));
                }
            }
        }
        let unit = h.algebra().unit().iter().map(|(k, c)| (k, c.clone())).collect();
        let mut comult = Vec::new();
        for i in 0..d {
            for (t, c) in h.coalgebra().comult_basis(i).iter() {
                let (j, k) = untensor_index(t, d);
                comult.push((i, j, k, c.clone()));
            }
        }
        let counit = (0..d)
            .filter(|&i| !h.coalgebra().counit_basis(i).is_zero())
            .map(|i| (i, h.coalgebra().counit_basis(i).clone()))
            .collect();
        let mut antipode = Vec::new();
        for i in 0..d {
            for (j, c) in h.antipode_table()[i].iter() {
                antipode.push((i, j, c.clone()));
            }
        }
        HopfJson {
            conductor: h.ctx().conductor(),
            dim: d,
            mult,
            unit,
            comult,
            counit,
            antipode,
        }
    }

    /// Rebuilds validated Hopf data.
    pub fn into_hopf(self) -> Result<HopfData> {
        let ctx = FieldContext::new(self.conductor)?;
        let d = self.dim;
        let check_scalar = |c: &CycScalar| -> Result<()> {
            if c.conductor() != self.conductor {
                return Err(HopfError::ConductorMismatch {
                    left: self.conductor,
                    right: c.conductor(),
                });
            }
            Ok(())
        };
        let mut mult = vec![SparseVec::new(); d * d];
        for (i, j, k, c) in &self.mult {
            check_scalar(c)?;
            if *i >= d || *j >= d || *k >= d {
                return Err(HopfError::Malformed(format!(
                    "multiplication index ({i},{j},{k}) out of range for dim {d}"
                )));
            }
            if mult[i * d + j].get(*k).is_some() {
                return Err(HopfError::Malformed(format!(
                    "duplicate multiplication entry ({i},{j},{k})"
                )));
            }
            mult[i * d + j].add_to(*k, c);
        }
        let mut unit = SparseVec::new();
        for (k, c) in &self.unit {
            check_scalar(c)?;
            if *k >= d {
                return Err(HopfError::Malformed(format!("unit index {k} out of range")));
            }
            unit.add_to(*k, c);
        }
        let mut comult = vec![SparseVec::new(); d];
        for (i, j, k, c) in &self.comult {
            check_scalar(c)?;
            if *i >= d || *j >= d || *k >= d {
                return Err(HopfError::Malformed(format!(
                    "comultiplication index ({i},{j},{k}) out of range for dim {d}"
                )));
            }
            if comult[*i].get(tensor_index(*j, *k, d)).is_some() {
                return Err(HopfError::Malformed(format!(
                    "duplicate comultiplication entry ({i},{j},{k})"
                )));
            }
            comult[*i].add_to(tensor_index(*j, *k, d), c);
        }
        let mut counit = vec![ctx.zero(); d];
        for (i, c) in &self.counit {
            check_scalar(c)?;
            if *i >= d {
                return Err(HopfError::Malformed(format!("counit index {i} out of range")));
            }
            counit[*i] = c.clone();
        }
        let mut antipode = vec![SparseVec::new(); d];
        for (i, j, c) in &self.antipode {
            check_scalar(c)?;
            if *i >= d || *j >= d {
                return Err(HopfError::Malformed(format!(
                    "antipode index ({i},{j}) out of range"
                )));
            }
            antipode[*i].add_to(*j, c);
        }
        HopfData::new(
            AlgebraData::new(&ctx, d, mult, unit)?,
            CoalgebraData::new(&ctx, d, comult, counit)?,
            antipode,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::root_of_unity;

    /// The group algebra of Z_n built by hand: basis g^0..g^(n-1),
    /// g^i g^j = g^(i+j), grouplike comultiplication, S(g^i) = g^(-i).
    fn cyclic_group_hopf(ctx: &Arc<FieldContext>, n: usize) -> HopfData {
        let mut mult = vec![SparseVec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                mult[i * n + j] = unit_vec(ctx, (i + j) % n);
            }
        }
        let unit = unit_vec(ctx, 0);
        let comult = (0..n)
            .map(|i| SparseVec::unit(tensor_index(i, i, n), ctx.one()))
            .collect();
        let counit = vec![ctx.one(); n];
        let antipode = (0..n).map(|i| unit_vec(ctx, (n - i) % n)).collect();
        HopfData::new(
            AlgebraData::new(ctx, n, mult, unit).unwrap(),
            CoalgebraData::new(ctx, n, comult, counit).unwrap(),
            antipode,
        )
        .unwrap()
    }

    #[test]
    fn cyclic_group_algebra_is_a_hopf_algebra() {
        let ctx = FieldContext::new(3).unwrap();
        let h = cyclic_group_hopf(&ctx, 3);
        let report = h.verify_hopf();
        assert!(report.passed(), "{report}");
        assert!(h.algebra().is_commutative());
        assert!(h.coalgebra().is_cocommutative());
        assert_eq!(h.antipode_order(16).unwrap(), 2);
    }

    #[test]
    fn corrupted_multiplication_is_caught_with_witness() {
        let ctx = FieldContext::new(3).unwrap();
        let h = cyclic_group_hopf(&ctx, 3);
        // Corrupt g^1 * g^2 to g^1 instead of g^0.
        let mut mult: Vec<SparseVec> = (0..9)
            .map(|t| h.algebra().mul_basis(t / 3, t % 3).clone())
            .collect();
        mult[1 * 3 + 2] = unit_vec(&ctx, 1);
        let bad = AlgebraData::new(&ctx, 3, mult, unit_vec(&ctx, 0)).unwrap();
        let report = verify_algebra(&bad);
        assert!(!report.passed());
        let assoc = report.check("associativity").unwrap();
        assert!(assoc.total_failures > 0);
        assert!(!assoc.failures.is_empty());
        assert_eq!(assoc.failures[0].indices.len(), 3);
    }

    #[test]
    fn corrupted_counit_is_caught() {
        let ctx = FieldContext::new(3).unwrap();
        let h = cyclic_group_hopf(&ctx, 3);
        let mut counit: Vec<CycScalar> = (0..3)
            .map(|i| h.coalgebra().counit_basis(i).clone())
            .collect();
        counit[2] = ctx.zero();
        let bad = CoalgebraData::new(
            &ctx,
            3,
            (0..3).map(|i| h.coalgebra().comult_basis(i).clone()).collect(),
            counit,
        )
        .unwrap();
        let report = verify_coalgebra(&bad);
        assert!(!report.passed());
        assert!(report.check("counit").unwrap().total_failures > 0);
    }

    #[test]
    fn grouplike_detection() {
        let ctx = FieldContext::new(3).unwrap();
        let h = cyclic_group_hopf(&ctx, 3);
        assert!(h.is_grouplike(&unit_vec(&ctx, 1)));
        let not = unit_vec(&ctx, 0).plus(&unit_vec(&ctx, 1));
        assert!(!h.is_grouplike(&not));
    }

    #[test]
    fn dual_of_cyclic_group_algebra_has_three_grouplike_characters() {
        // Characters of Z_3 are chi_t(g^j) = zeta_3^(t j); as elements of
        // the dual they must be exactly the grouplikes.
        let ctx = FieldContext::new(3).unwrap();
        let h = cyclic_group_hopf(&ctx, 3);
        let dual = dual_hopf(&h).unwrap();
        assert!(dual.verify_hopf().passed());
        assert!(dual.algebra().is_commutative());
        for t in 0..3i64 {
            let mut chi = SparseVec::new();
            for j in 0..3i64 {
                chi.add_to(j as usize, &root_of_unity(&ctx, 3, t * j).unwrap());
            }
            assert!(dual.is_grouplike(&chi), "character {t}");
        }
        // A non-character function is not grouplike.
        let mut f = SparseVec::new();
        f.add_to(0, &ctx.integer(1));
        f.add_to(1, &ctx.integer(2));
        f.add_to(2, &ctx.one());
        assert!(!dual.is_grouplike(&f));
    }

    #[test]
    fn double_dual_returns_the_original_tables() {
        let ctx = FieldContext::new(4).unwrap();
        let h = cyclic_group_hopf(&ctx, 4);
        let dd = dual_hopf(&dual_hopf(&h).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(dd.algebra().mul_basis(i, j), h.algebra().mul_basis(i, j));
            }
            assert_eq!(dd.coalgebra().comult_basis(i), h.coalgebra().comult_basis(i));
            assert_eq!(dd.antipode_table()[i], h.antipode_table()[i]);
        }
    }

    #[test]
    fn tensor_of_group_algebras_verifies_and_multiplies_componentwise() {
        let ctx = FieldContext::new(6).unwrap();
        let a = cyclic_group_hopf(&ctx, 2);
        let b = cyclic_group_hopf(&ctx, 3);
        let t = tensor_hopf(&a, &b).unwrap();
        assert_eq!(t.dim(), 6);
        assert!(t.verify_hopf().passed());
        // (g (x) h) * (g (x) h^2) = 1 (x) 1 at flat index 0.
        let x = unit_vec(&ctx, 1 * 3 + 1);
        let y = unit_vec(&ctx, 1 * 3 + 2);
        assert_eq!(t.algebra().mul(&x, &y), unit_vec(&ctx, 0));
    }

    #[test]
    fn convolution_of_antipode_and_identity_is_unit_counit() {
        let ctx = FieldContext::new(5).unwrap();
        let h = cyclic_group_hopf(&ctx, 5);
        let conv = convolve_endos(
            &h,
            h.antipode_table(),
            &identity_endo(&ctx, 5),
        );
        assert_eq!(conv, unit_counit_endo(&h));
    }

    #[test]
    fn integrals_of_group_algebra_are_the_element_sum() {
        let ctx = FieldContext::new(4).unwrap();
        let h = cyclic_group_hopf(&ctx, 4);
        let counit: Vec<CycScalar> = (0..4).map(|i| h.coalgebra().counit_basis(i).clone()).collect();
        let ints = left_integrals(h.algebra(), &counit);
        assert_eq!(ints.len(), 1);
        // The kernel vector must be proportional to g^0 + g^1 + g^2 + g^3.
        let v = &ints[0];
        let c0 = v.get(0).expect("nonzero on identity").clone();
        for i in 1..4 {
            assert_eq!(v.get(i), Some(&c0));
        }
    }

    #[test]
    fn quotient_by_augmentation_ideal_of_subgroup() {
        // k[Z_4] / (g^2 - 1) should be k[Z_2].
        let ctx = FieldContext::new(4).unwrap();
        let h = cyclic_group_hopf(&ctx, 4);
        // Hopf ideal generated by (g^2 - 1): as a subspace it is spanned by
        // (g^2 - 1) and g (g^2 - 1) = g^3 - g.
        let j1 = unit_vec(&ctx, 2).minus(&unit_vec(&ctx, 0));
        let j2 = unit_vec(&ctx, 3).minus(&unit_vec(&ctx, 1));
        let q = hopf_quotient(&h, &[j1, j2], true).unwrap();
        assert_eq!(q.hopf.dim(), 2);
        assert!(q.hopf.verify_hopf().passed());
        // g and g^3 map to the same class, distinct from the class of 1.
        assert_eq!(q.proj[1], q.proj[3]);
        assert_ne!(q.proj[0], q.proj[1]);
    }

    #[test]
    fn quotient_rejects_non_ideals() {
        let ctx = FieldContext::new(4).unwrap();
        let h = cyclic_group_hopf(&ctx, 4);
        // The line through g alone is not an ideal of k[Z_4].
        let err = hopf_quotient(&h, &[unit_vec(&ctx, 1)], false);
        assert!(err.is_err());
    }

    #[test]
    fn restriction_to_subgroup_span_gives_subgroup_algebra() {
        let ctx = FieldContext::new(4).unwrap();
        let h = cyclic_group_hopf(&ctx, 4);
        let sub = hopf_restrict(&h, &[unit_vec(&ctx, 0), unit_vec(&ctx, 2)]).unwrap();
        assert_eq!(sub.dim(), 2);
        assert!(sub.verify_hopf().passed());
        // Basis slot 1 squares to slot 0.
        assert_eq!(sub.algebra().mul_basis(1, 1), &unit_vec(&ctx, 0));
    }

    #[test]
    fn restriction_rejects_unclosed_subspaces() {
        let ctx = FieldContext::new(4).unwrap();
        let h = cyclic_group_hopf(&ctx, 4);
        let err = hopf_restrict(&h, &[unit_vec(&ctx, 0), unit_vec(&ctx, 1)]);
        // {1, g} is not closed under multiplication in Z_4 (g^2 escapes).
        assert!(err.is_err());
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let ctx = FieldContext::new(3).unwrap();
        let h = cyclic_group_hopf(&ctx, 3);
        let json1 = serde_json::to_string_pretty(&HopfJson::from_hopf(&h)).unwrap();
        let parsed: HopfJson = serde_json::from_str(&json1).unwrap();
        let h2 = parsed.into_hopf().unwrap();
        let json2 = serde_json::to_string_pretty(&HopfJson::from_hopf(&h2)).unwrap();
        assert_eq!(json1, json2);
        assert!(h2.verify_hopf().passed());
    }

    #[test]
    fn json_with_bad_indices_is_rejected() {
        let ctx = FieldContext::new(3).unwrap();
        let h = cyclic_group_hopf(&ctx, 3);
        let mut j = HopfJson::from_hopf(&h);
        j.mult.push((0, 0, 7, ctx.one()));
        assert!(j.into_hopf().is_err());
    }
}
