//! Yetter–Drinfel'd structures over a finite-dimensional Hopf algebra.
//!
//! A left Yetter–Drinfel'd module over `H` is a vector space `B` carrying a
//! left `H`-action `h ⊗ b ↦ h·b` and a left `H`-coaction
//! `ρ(b) = b₍₋₁₎ ⊗ b₍₀₎` that satisfy the compatibility
//!
//! ```text
//! h₍₁₎ b₍₋₁₎ ⊗ h₍₂₎·b₍₀₎  =  (h₍₁₎·b)₍₋₁₎ h₍₂₎ ⊗ (h₍₁₎·b)₍₀₎ .
//! ```
//!
//! When `B` additionally carries algebra and coalgebra structures, all four
//! mixed axioms (module algebra, module coalgebra, comodule algebra,
//! comodule coalgebra) can be demanded; together these make `B` an
//! algebra-and-coalgebra object of the braided category of Yetter–Drinfel'd
//! modules.  The braiding is `σ(b ⊗ b') = b₍₋₁₎·b' ⊗ b₍₀₎`, and a *braided
//! bialgebra* is one whose comultiplication is multiplicative with respect
//! to the braided tensor-product algebra
//!
//! ```text
//! Δ(bb') = b₍₁₎ (b₍₂₎₍₋₁₎·b'₍₁₎) ⊗ b₍₂₎₍₀₎ b'₍₂₎ .
//! ```
//!
//! [`YDStructure`] holds the full data as structure-constant tables;
//! [`YDStructure::verify_yd`] checks every axiom exhaustively on basis
//! tuples, and [`YDStructure::verify_braided_bialgebra`] checks the braided
//! bialgebra laws plus the antipode convolution identities.
//!
//! The module also contains the complete classification machinery in
//! dimension two.  For a character `α` of a finite group `G` and a central
//! element `y ∈ G` with `α(y) = −1`, the algebra `B = k{1, n}` with
//! `n² = 0` becomes a braided Hopf algebra over `k[G]` via
//!
//! ```text
//! h·n = α(h) n ,   ρ(n) = y ⊗ n ,   Δ(n) = n⊗1 + 1⊗n ,   S(n) = −n .
//! ```
//!
//! [`rank2_classify`] enumerates all such pairs `(α, y)` exactly;
//! [`build_b_alpha_y`] realises a witness as a verified [`YDStructure`].
//! The companion [`verify_module_algebra_2dim`] treats the more general
//! measuring `h·n = β(h)1 + α(h)n` on `k{1, n}` with `n² = ϖ1` and checks
//! the two convolution identities it forces, `βα = −αβ` and
//! `β² = ϖ(ε − α²)`.  Evaluating the first identity at a grouplike `g`
//! gives `2 α(g) β(g) = 0`, so over any group algebra in characteristic
//! zero a module-algebra action necessarily has `β = 0`; the tests exercise
//! this obstruction as an error path.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    unit_vec, AlgebraData, AxiomCheck, AxiomReport, CoalgebraData, HopfData,
};
use crate::cyclotomic::{CycScalar, FieldContext};
use crate::error::{HopfError, Result};
use crate::groups::{characters_abelian, FiniteGroup};
use crate::linalg::{sparse_tensor, tensor_index, SparseVec};

/// A candidate object of the Yetter–Drinfel'd category over `H`:
/// an algebra-and-coalgebra `B` with designated `H`-action and
/// `H`-coaction tables, and optionally a designated antipode on `B`.
///
/// No axiom is assumed by the constructor beyond shape and field
/// consistency; [`YDStructure::verify_yd`] and
/// [`YDStructure::verify_braided_bialgebra`] report exactly which laws
/// hold.
#[derive(Clone, Debug)]
pub struct YDStructure {
    hopf: HopfData,
    b_algebra: AlgebraData,
    b_coalgebra: CoalgebraData,
    /// `action[h * dim_b + b]` is `e_h · e_b ∈ B`.
    action: Vec<SparseVec>,
    /// `coaction[b]` is `ρ(e_b) ∈ H ⊗ B` with flattened index
    /// `h · dim_b + b'`.
    coaction: Vec<SparseVec>,
    /// Designated antipode `S_B` on `B`, column per basis vector.
    antipode: Option<Vec<SparseVec>>,
}

impl YDStructure {
    /// Assembles a Yetter–Drinfel'd candidate after validating shapes,
    /// index ranges, and field contexts.
    pub fn new(
        hopf: HopfData,
        b_algebra: AlgebraData,
        b_coalgebra: CoalgebraData,
        action: Vec<SparseVec>,
        coaction: Vec<SparseVec>,
    ) -> Result<Self> {
        let dim_h = hopf.dim();
        let dim_b = b_algebra.dim();
        if b_coalgebra.dim() != dim_b {
            return Err(HopfError::Malformed(format!(
                "algebra dimension {} and coalgebra dimension {} disagree",
                dim_b,
                b_coalgebra.dim()
            )));
        }
        for ctx in [b_algebra.ctx(), b_coalgebra.ctx()] {
            if ctx.conductor() != hopf.ctx().conductor() {
                return Err(HopfError::ConductorMismatch {
                    left: hopf.ctx().conductor(),
                    right: ctx.conductor(),
                });
            }
        }
        if action.len() != dim_h * dim_b {
            return Err(HopfError::Malformed(format!(
                "action table has {} entries, expected {}",
                action.len(),
                dim_h * dim_b
            )));
        }
        if coaction.len() != dim_b {
            return Err(HopfError::Malformed(format!(
                "coaction table has {} entries, expected {}",
                coaction.len(),
                dim_b
            )));
        }
        for v in &action {
            for (i, c) in v.iter() {
                if i >= dim_b {
                    return Err(HopfError::Malformed(format!(
                        "action value index {} out of range {}",
                        i, dim_b
                    )));
                }
                check_ctx(c, hopf.ctx())?;
            }
        }
        for v in &coaction {
            for (i, c) in v.iter() {
                if i >= dim_h * dim_b {
                    return Err(HopfError::Malformed(format!(
                        "coaction value index {} out of range {}",
                        i,
                        dim_h * dim_b
                    )));
                }
                check_ctx(c, hopf.ctx())?;
            }
        }
        Ok(YDStructure {
            hopf,
            b_algebra,
            b_coalgebra,
            action,
            coaction,
            antipode: None,
        })
    }

    /// Attaches a designated antipode table on `B` (one column per basis
    /// vector).
    pub fn with_antipode(mut self, antipode: Vec<SparseVec>) -> Result<Self> {
        if antipode.len() != self.dim_b() {
            return Err(HopfError::Malformed(format!(
                "antipode table has {} columns, expected {}",
                antipode.len(),
                self.dim_b()
            )));
        }
        for v in &antipode {
            for (i, c) in v.iter() {
                if i >= self.dim_b() {
                    return Err(HopfError::Malformed(format!(
                        "antipode value index {} out of range {}",
                        i,
                        self.dim_b()
                    )));
                }
                check_ctx(c, self.hopf.ctx())?;
            }
        }
        self.antipode = Some(antipode);
        Ok(self)
    }

    /// The trivial structure on a (co)algebra `B`: `h·b = ε(h) b` and
    /// `ρ(b) = 1 ⊗ b`.  For these the braided category laws collapse to
    /// the ordinary ones.
    pub fn trivial(
        hopf: HopfData,
        b_algebra: AlgebraData,
        b_coalgebra: CoalgebraData,
    ) -> Result<Self> {
        let dim_h = hopf.dim();
        let dim_b = b_algebra.dim();
        let mut action = Vec::with_capacity(dim_h * dim_b);
        for h in 0..dim_h {
            let eps = hopf.coalgebra().counit_basis(h).clone();
            for b in 0..dim_b {
                action.push(SparseVec::unit(b, eps.clone()));
            }
        }
        let one_h = hopf.algebra().unit().clone();
        let coaction = (0..dim_b)
            .map(|b| {
                sparse_tensor(&one_h, &unit_vec(hopf.ctx(), b), dim_b)
            })
            .collect();
        YDStructure::new(hopf, b_algebra, b_coalgebra, action, coaction)
    }

    /// The ambient Hopf algebra `H`.
    pub fn hopf(&self) -> &HopfData {
        &self.hopf
    }

    /// The algebra structure on `B`.
    pub fn b_algebra(&self) -> &AlgebraData {
        &self.b_algebra
    }

    /// The coalgebra structure on `B`.
    pub fn b_coalgebra(&self) -> &CoalgebraData {
        &self.b_coalgebra
    }

    /// The designated antipode on `B`, if one was attached.
    pub fn b_antipode(&self) -> Option<&[SparseVec]> {
        self.antipode.as_deref()
    }

    /// Dimension of `B`.
    pub fn dim_b(&self) -> usize {
        self.b_algebra.dim()
    }

    /// Dimension of `H`.
    pub fn dim_h(&self) -> usize {
        self.hopf.dim()
    }

    /// The action `e_h · e_b` on basis elements.
    pub fn action_basis(&self, h: usize, b: usize) -> &SparseVec {
        &self.action[h * self.dim_b() + b]
    }

    /// The coaction `ρ(e_b)` on a basis element, flattened into
    /// `H ⊗ B`.
    pub fn coaction_basis(&self, b: usize) -> &SparseVec {
        &self.coaction[b]
    }

    /// Bilinear extension of the action to vectors `hv ∈ H`, `bv ∈ B`.
    pub fn act(&self, hv: &SparseVec, bv: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (h, ch) in hv.iter() {
            for (b, cb) in bv.iter() {
                out.add_scaled(self.action_basis(h, b), &(ch * cb));
            }
        }
        out
    }

    /// Linear extension of the coaction to a vector of `B`.
    pub fn coact(&self, bv: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (b, cb) in bv.iter() {
            out.add_scaled(&self.coaction[b], cb);
        }
        out
    }

    /// Multiplication of the braided tensor-product algebra `B ⊗̲ B`:
    /// `(a ⊗ b)(c ⊗ d) = a (b₍₋₁₎·c) ⊗ b₍₀₎ d`, extended bilinearly to
    /// flattened vectors of `B ⊗ B`.
    pub fn braided_tensor_mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let db = self.dim_b();
        let mut out = SparseVec::new();
        for (xi, cx) in x.iter() {
            let (a, b) = (xi / db, xi % db);
            // ρ(e_b) drives the braiding of the middle pair.
            for (ri, cr) in self.coaction[b].iter() {
                let (h, b0) = (ri / db, ri % db);
                for (yi, cy) in y.iter() {
                    let (c_idx, d) = (yi / db, yi % db);
                    let left = self
                        .b_algebra
                        .mul(&unit_vec(self.hopf.ctx(), a), self.action_basis(h, c_idx));
                    let right = self
                        .b_algebra
                        .mul(&unit_vec(self.hopf.ctx(), b0), &unit_vec(self.hopf.ctx(), d));
                    let scale = &(cx * cr) * cy;
                    out.add_scaled(&sparse_tensor(&left, &right, db), &scale);
                }
            }
        }
        out
    }

    /// Exhaustive verification of the Yetter–Drinfel'd axioms.  Seven
    /// named checks: `module`, `comodule`, `module-algebra`,
    /// `module-coalgebra`, `comodule-algebra`, `comodule-coalgebra`, and
    /// `yd-compatibility`.
    pub fn verify_yd(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        report.push(self.check_module());
        report.push(self.check_comodule());
        report.push(self.check_module_algebra());
        report.push(self.check_module_coalgebra());
        report.push(self.check_comodule_algebra());
        report.push(self.check_comodule_coalgebra());
        report.push(self.check_yd_compatibility());
        report
    }

    /// Braided bialgebra laws for `B` inside the category, plus the
    /// antipode convolution identities for the designated antipode.
    /// Named checks: `braided-comultiplication-multiplicative`,
    /// `braided-unit-counit`, and `braided-antipode`.
    pub fn verify_braided_bialgebra(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        report.push(self.check_braided_mult());
        report.push(self.check_braided_unit_counit());
        report.push(self.check_braided_antipode());
        report
    }

    pub(crate) fn check_module(&self) -> AxiomCheck {
        let mut check = AxiomCheck::new("module");
        let dh = self.dim_h();
        let db = self.dim_b();
        let ctx = self.hopf.ctx();
        for i in 0..dh {
            for j in 0..dh {
                let prod = self.hopf.algebra().mul_basis(i, j).clone();
                for b in 0..db {
                    let lhs = self.act(&prod, &unit_vec(ctx, b));
                    let rhs = self.act(&unit_vec(ctx, i), self.action_basis(j, b));
                    if !lhs.minus(&rhs).is_zero() {
                        check.record(
                            vec![i, j, b],
                            "(hh')·b and h·(h'·b) disagree".into(),
                        );
                    }
                }
            }
        }
        let one = self.hopf.algebra().unit().clone();
        for b in 0..db {
            let lhs = self.act(&one, &unit_vec(ctx, b));
            if !lhs.minus(&unit_vec(ctx, b)).is_zero() {
                check.record(vec![b], "1·b differs from b".into());
            }
        }
        check
    }

    pub(crate) fn check_comodule(&self) -> AxiomCheck {
        let mut check = AxiomCheck::new("comodule");
        let db = self.dim_b();
        let ctx = self.hopf.ctx();
        for b in 0..db {
            // Coassociativity in H ⊗ H ⊗ B, flattened as ((h,h'),b).
            let mut lhs = SparseVec::new();
            let mut rhs = SparseVec::new();
            for (ri, cr) in self.coaction[b].iter() {
                let (h, b0) = (ri / db, ri % db);
                let dh = self.dim_h();
                for (pi, cp) in self.hopf.coalgebra().comult_basis(h).iter() {
                    let (h1, h2) = (pi / dh, pi % dh);
                    lhs.add_to(
                        tensor_index(tensor_index(h1, h2, dh), b0, db),
                        &(cr * cp),
                    );
                }
                for (ri2, cr2) in self.coaction[b0].iter() {
                    let (h2, b00) = (ri2 / db, ri2 % db);
                    rhs.add_to(
                        tensor_index(tensor_index(h, h2, self.dim_h()), b00, db),
                        &(cr * cr2),
                    );
                }
            }
            if !lhs.minus(&rhs).is_zero() {
                check.record(vec![b], "(Δ⊗id)ρ and (id⊗ρ)ρ disagree".into());
            }
            // Counit law: (ε ⊗ id) ρ = id.
            let mut folded = SparseVec::new();
            for (ri, cr) in self.coaction[b].iter() {
                let (h, b0) = (ri / db, ri % db);
                let eps = self.hopf.coalgebra().counit_basis(h);
                folded.add_to(b0, &(cr * eps));
            }
            if !folded.minus(&unit_vec(ctx, b)).is_zero() {
                check.record(vec![b], "(ε⊗id)ρ differs from the identity".into());
            }
        }
        check
    }

    pub(crate) fn check_module_algebra(&self) -> AxiomCheck {
        let mut check = AxiomCheck::new("module-algebra");
        let dh = self.dim_h();
        let db = self.dim_b();
        let ctx = self.hopf.ctx();
        for h in 0..dh {
            for b in 0..db {
                for b2 in 0..db {
                    let lhs = self.act(
                        &unit_vec(ctx, h),
                        &self.b_algebra.mul_basis(b, b2).clone(),
                    );
                    let mut rhs = SparseVec::new();
                    for (pi, cp) in self.hopf.coalgebra().comult_basis(h).iter() {
                        let (h1, h2) = (pi / dh, pi % dh);
                        let prod = self
                            .b_algebra
                            .mul(self.action_basis(h1, b), self.action_basis(h2, b2));
                        rhs.add_scaled(&prod, cp);
                    }
                    if !lhs.minus(&rhs).is_zero() {
                        check.record(
                            vec![h, b, b2],
                            "h·(bb') and (h₍₁₎·b)(h₍₂₎·b') disagree".into(),
                        );
                    }
                }
            }
            let one_b = self.b_algebra.unit().clone();
            let lhs = self.act(&unit_vec(ctx, h), &one_b);
            let rhs = one_b.scaled(self.hopf.coalgebra().counit_basis(h));
            if !lhs.minus(&rhs).is_zero() {
                check.record(vec![h], "h·1 differs from ε(h)1".into());
            }
        }
        check
    }

    fn check_module_coalgebra(&self) -> AxiomCheck {
        let mut check = AxiomCheck::new("module-coalgebra");
        let dh = self.dim_h();
        let db = self.dim_b();
        for h in 0..dh {
            for b in 0..db {
                let lhs = self.b_coalgebra.comult(self.action_basis(h, b));
                let mut rhs = SparseVec::new();
                for (pi, cp) in self.hopf.coalgebra().comult_basis(h).iter() {
                    let (h1, h2) = (pi / dh, pi % dh);
                    for (bi, cb) in self.b_coalgebra.comult_basis(b).iter() {
                        let (b1, b2) = (bi / db, bi % db);
                        let left = self.action_basis(h1, b1);
                        let right = self.action_basis(h2, b2);
                        rhs.add_scaled(
                            &sparse_tensor(left, right, db),
                            &(cp * cb),
                        );
                    }
                }
                if !lhs.minus(&rhs).is_zero() {
                    check.record(
                        vec![h, b],
                        "Δ(h·b) and h₍₁₎·b₍₁₎ ⊗ h₍₂₎·b₍₂₎ disagree".into(),
                    );
                }
                let lhs_eps = self.b_coalgebra.counit(self.action_basis(h, b));
                let rhs_eps = self.hopf.coalgebra().counit_basis(h)
                    * self.b_coalgebra.counit_basis(b);
                if !(&lhs_eps - &rhs_eps).is_zero() {
                    check.record(vec![h, b], "ε(h·b) differs from ε(h)ε(b)".into());
                }
            }
        }
        check
    }

    fn check_comodule_algebra(&self) -> AxiomCheck {
        let mut check = AxiomCheck::new("comodule-algebra");
        let db = self.dim_b();
        for b in 0..db {
            for b2 in 0..db {
                let lhs = self.coact(&self.b_algebra.mul_basis(b, b2).clone());
                let mut rhs = SparseVec::new();
                for (ri, cr) in self.coaction[b].iter() {
                    let (h1, b0) = (ri / db, ri % db);
                    for (ri2, cr2) in self.coaction[b2].iter() {
                        let (h2, b02) = (ri2 / db, ri2 % db);
                        let hprod = self.hopf.algebra().mul_basis(h1, h2).clone();
                        let bprod = self.b_algebra.mul_basis(b0, b02).clone();
                        rhs.add_scaled(
                            &sparse_tensor(&hprod, &bprod, db),
                            &(cr * cr2),
                        );
                    }
                }
                if !lhs.minus(&rhs).is_zero() {
                    check.record(
                        vec![b, b2],
                        "ρ(bb') and b₍₋₁₎b'₍₋₁₎ ⊗ b₍₀₎b'₍₀₎ disagree".into(),
                    );
                }
            }
        }
        let lhs = self.coact(&self.b_algebra.unit().clone());
        let rhs = sparse_tensor(
            &self.hopf.algebra().unit().clone(),
            &self.b_algebra.unit().clone(),
            db,
        );
        if !lhs.minus(&rhs).is_zero() {
            check.record(vec![], "ρ(1) differs from 1 ⊗ 1".into());
        }
        check
    }

    pub(crate) fn check_comodule_coalgebra(&self) -> AxiomCheck {
        let mut check = AxiomCheck::new("comodule-coalgebra");
        let db = self.dim_b();
        for b in 0..db {
            // Codiagonal coaction of Δ(b) versus (id ⊗ Δ)ρ(b), flattened
            // in H ⊗ (B ⊗ B).
            let mut lhs = SparseVec::new();
            for (bi, cb) in self.b_coalgebra.comult_basis(b).iter() {
                let (b1, b2) = (bi / db, bi % db);
                for (ri, cr) in self.coaction[b1].iter() {
                    let (h1, b10) = (ri / db, ri % db);
                    for (ri2, cr2) in self.coaction[b2].iter() {
                        let (h2, b20) = (ri2 / db, ri2 % db);
                        let hprod = self.hopf.algebra().mul_basis(h1, h2);
                        let scale = &(cb * cr) * cr2;
                        for (hk, ch) in hprod.iter() {
                            lhs.add_to(
                                tensor_index(
                                    hk,
                                    tensor_index(b10, b20, db),
                                    db * db,
                                ),
                                &(&scale * ch),
                            );
                        }
                    }
                }
            }
            let mut rhs = SparseVec::new();
            for (ri, cr) in self.coaction[b].iter() {
                let (h, b0) = (ri / db, ri % db);
                for (bi, cb) in self.b_coalgebra.comult_basis(b0).iter() {
                    rhs.add_to(tensor_index(h, bi, db * db), &(cr * cb));
                }
            }
            if !lhs.minus(&rhs).is_zero() {
                check.record(
                    vec![b],
                    "codiagonal coaction of Δ(b) and (id⊗Δ)ρ(b) disagree".into(),
                );
            }
            // Counit colinearity: b₍₋₁₎ ε(b₍₀₎) = ε(b) 1.
            let mut folded = SparseVec::new();
            for (ri, cr) in self.coaction[b].iter() {
                let (h, b0) = (ri / db, ri % db);
                let eps = self.b_coalgebra.counit_basis(b0);
                folded.add_to(h, &(cr * eps));
            }
            let target = self
                .hopf
                .algebra()
                .unit()
                .scaled(self.b_coalgebra.counit_basis(b));
            if !folded.minus(&target).is_zero() {
                check.record(vec![b], "b₍₋₁₎ε(b₍₀₎) differs from ε(b)1".into());
            }
        }
        check
    }

    fn check_yd_compatibility(&self) -> AxiomCheck {
        let mut check = AxiomCheck::new("yd-compatibility");
        let dh = self.dim_h();
        let db = self.dim_b();
        for h in 0..dh {
            for b in 0..db {
                let mut lhs = SparseVec::new();
                let mut rhs = SparseVec::new();
                for (pi, cp) in self.hopf.coalgebra().comult_basis(h).iter() {
                    let (h1, h2) = (pi / dh, pi % dh);
                    // Left side: ρ(h₍₁₎·b), then multiply the H-leg by h₍₂₎.
                    for (av, ca) in self.action_basis(h1, b).iter() {
                        for (ri, cr) in self.coaction[av].iter() {
                            let (hm, b0) = (ri / db, ri % db);
                            let hprod = self.hopf.algebra().mul_basis(hm, h2);
                            let scale = &(cp * ca) * cr;
                            for (hk, ch) in hprod.iter() {
                                lhs.add_to(
                                    tensor_index(hk, b0, db),
                                    &(&scale * ch),
                                );
                            }
                        }
                    }
                    // Right side: h₍₁₎ b₍₋₁₎ ⊗ h₍₂₎·b₍₀₎.
                    for (ri, cr) in self.coaction[b].iter() {
                        let (hm, b0) = (ri / db, ri % db);
                        let hprod = self.hopf.algebra().mul_basis(h1, hm);
                        for (av, ca) in self.action_basis(h2, b0).iter() {
                            let scale = &(cp * cr) * ca;
                            for (hk, ch) in hprod.iter() {
                                rhs.add_to(
                                    tensor_index(hk, av, db),
                                    &(&scale * ch),
                                );
                            }
                        }
                    }
                }
                if !lhs.minus(&rhs).is_zero() {
                    check.record(
                        vec![h, b],
                        "(h₍₁₎·b)₍₋₁₎h₍₂₎ ⊗ (h₍₁₎·b)₍₀₎ and h₍₁₎b₍₋₁₎ ⊗ h₍₂₎·b₍₀₎ disagree".into(),
                    );
                }
            }
        }
        check
    }

    fn check_braided_mult(&self) -> AxiomCheck {
        let mut check = AxiomCheck::new("braided-comultiplication-multiplicative");
        let db = self.dim_b();
        for b in 0..db {
            for b2 in 0..db {
                let lhs = self
                    .b_coalgebra
                    .comult(&self.b_algebra.mul_basis(b, b2).clone());
                let rhs = self.braided_tensor_mul(
                    self.b_coalgebra.comult_basis(b),
                    self.b_coalgebra.comult_basis(b2),
                );
                if !lhs.minus(&rhs).is_zero() {
                    check.record(
                        vec![b, b2],
                        "Δ(bb') differs from Δ(b)Δ(b') in B ⊗̲ B".into(),
                    );
                }
            }
        }
        check
    }

    fn check_braided_unit_counit(&self) -> AxiomCheck {
        let mut check = AxiomCheck::new("braided-unit-counit");
        let db = self.dim_b();
        let one = self.b_algebra.unit().clone();
        let lhs = self.b_coalgebra.comult(&one);
        if !lhs.minus(&sparse_tensor(&one, &one, db)).is_zero() {
            check.record(vec![], "Δ(1) differs from 1 ⊗ 1".into());
        }
        let eps_one = self.b_coalgebra.counit(&one);
        if !eps_one.is_one() {
            check.record(vec![], "ε(1) differs from 1".into());
        }
        for b in 0..db {
            for b2 in 0..db {
                let lhs = self
                    .b_coalgebra
                    .counit(&self.b_algebra.mul_basis(b, b2).clone());
                let rhs = self.b_coalgebra.counit_basis(b)
                    * self.b_coalgebra.counit_basis(b2);
                if !(&lhs - &rhs).is_zero() {
                    check.record(vec![b, b2], "ε(bb') differs from ε(b)ε(b')".into());
                }
            }
        }
        check
    }

    fn check_braided_antipode(&self) -> AxiomCheck {
        let mut check = AxiomCheck::new("braided-antipode");
        let Some(antipode) = self.antipode.as_ref() else {
            check.record(vec![], "no designated antipode on B".into());
            return check;
        };
        let db = self.dim_b();
        for b in 0..db {
            let mut left = SparseVec::new();
            let mut right = SparseVec::new();
            for (bi, cb) in self.b_coalgebra.comult_basis(b).iter() {
                let (b1, b2) = (bi / db, bi % db);
                let sleft = self
                    .b_algebra
                    .mul(&antipode[b1], &unit_vec(self.hopf.ctx(), b2));
                left.add_scaled(&sleft, cb);
                let sright = self
                    .b_algebra
                    .mul(&unit_vec(self.hopf.ctx(), b1), &antipode[b2]);
                right.add_scaled(&sright, cb);
            }
            let target = self
                .b_algebra
                .unit()
                .scaled(self.b_coalgebra.counit_basis(b));
            if !left.minus(&target).is_zero() {
                check.record(vec![b], "S(b₍₁₎)b₍₂₎ differs from ε(b)1".into());
            }
            if !right.minus(&target).is_zero() {
                check.record(vec![b], "b₍₁₎S(b₍₂₎) differs from ε(b)1".into());
            }
        }
        check
    }
}

fn check_ctx(c: &CycScalar, ctx: &Arc<FieldContext>) -> Result<()> {
    if c.conductor() != ctx.conductor() {
        return Err(HopfError::ConductorMismatch {
            left: ctx.conductor(),
            right: c.conductor(),
        });
    }
    Ok(())
}

/// A classified two-dimensional braided Hopf algebra datum over a group
/// algebra: a character `alpha` (values per basis element of `H`), a
/// grouplike index `y`, an auxiliary functional `beta` and scalar `varpi`
/// from the general measuring `h·n = β(h)1 + α(h)n` with `n² = ϖ1`, and
/// the designated nilpotent basis vector.  Classified Hopf witnesses have
/// `beta = 0` and `varpi = 0`.
#[derive(Clone, Debug)]
pub struct Rank2Witness {
    /// Values of the character on the basis of `H`.
    pub alpha: Vec<CycScalar>,
    /// Basis index of the grouplike `y` supporting the coaction.
    pub y: usize,
    /// Values of the auxiliary functional `β` on the basis of `H`.
    pub beta: Vec<CycScalar>,
    /// The scalar `ϖ` with `n² = ϖ1`.
    pub varpi: CycScalar,
    /// The nilpotent basis vector `n` of `B` (index 1 of the 2-dim basis).
    pub n_vector: SparseVec,
    /// Whether the pair passed the full classification conditions.
    pub valid: bool,
}

/// Serialization form of a [`Rank2Witness`].
#[derive(Serialize, Deserialize)]
pub struct Rank2WitnessJson {
    /// Character values per group element.
    pub alpha: Vec<CycScalar>,
    /// Grouplike basis index.
    pub y: usize,
    /// Classification verdict.
    pub valid: bool,
}

impl Rank2Witness {
    fn classified(alpha: Vec<CycScalar>, y: usize, ctx: &Arc<FieldContext>) -> Self {
        let dim = alpha.len();
        Rank2Witness {
            alpha,
            y,
            beta: vec![ctx.zero(); dim],
            varpi: ctx.zero(),
            n_vector: SparseVec::unit(1, ctx.one()),
            valid: true,
        }
    }

    /// The serialization form `{alpha, y, valid}`.
    pub fn to_json(&self) -> Rank2WitnessJson {
        Rank2WitnessJson {
            alpha: self.alpha.clone(),
            y: self.y,
            valid: self.valid,
        }
    }
}

/// Evaluates a functional given by basis values on a vector.
fn eval_functional(values: &[CycScalar], v: &SparseVec) -> CycScalar {
    let mut out: Option<CycScalar> = None;
    for (i, c) in v.iter() {
        let term = &values[i] * c;
        out = Some(match out {
            Some(acc) => &acc + &term,
            None => term,
        });
    }
    out.unwrap_or_else(|| values[0].ctx().zero())
}

/// Convolution product of two functionals on a coalgebra:
/// `(fg)(c) = f(c₍₁₎) g(c₍₂₎)`, returned as basis values.
pub fn convolve_functionals(
    coalg: &CoalgebraData,
    f: &[CycScalar],
    g: &[CycScalar],
) -> Vec<CycScalar> {
    let d = coalg.dim();
    (0..d)
        .map(|i| {
            let mut out = coalg.ctx().zero();
            for (pi, cp) in coalg.comult_basis(i).iter() {
                let (a, b) = (pi / d, pi % d);
                out = out
                    .checked_add(&(&(&f[a] * &g[b]) * cp))
                    .unwrap();
            }
            out
        })
        .collect()
}

/// Checks that basis values define a character (algebra map to `k`):
/// multiplicative on all basis pairs and `1 ↦ 1`.
pub fn is_character(h: &HopfData, alpha: &[CycScalar]) -> bool {
    if alpha.len() != h.dim() {
        return false;
    }
    let on_one = eval_functional(alpha, h.algebra().unit());
    if !on_one.is_one() {
        return false;
    }
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            let lhs = eval_functional(alpha, h.algebra().mul_basis(i, j));
            let rhs = &alpha[i] * &alpha[j];
            if !(&lhs - &rhs).is_zero() {
                return false;
            }
        }
    }
    true
}

/// The two-sided hit `α ⇀ h ↼ α⁻¹ = α⁻¹(h₍₁₎) h₍₂₎ α(h₍₃₎)` as a linear
/// map on `H`, with `α ⇀ h = h₍₁₎ α(h₍₂₎)` and `h ↼ α = α(h₍₁₎) h₍₂₎`;
/// `α⁻¹` is the convolution inverse `α ∘ S`.
fn hit_conjugation_map(h: &HopfData, alpha: &[CycScalar]) -> Vec<SparseVec> {
    let d = h.dim();
    // Convolution inverse of a character is alpha composed with the
    // antipode.
    let alpha_inv: Vec<CycScalar> = (0..d)
        .map(|i| eval_functional(alpha, &h.antipode_table()[i]))
        .collect();
    (0..d)
        .map(|i| {
            let mut out = SparseVec::new();
            for (pi, cp) in h.coalgebra().comult_basis(i).iter() {
                let (a, bc) = (pi / d, pi % d);
                for (qi, cq) in h.coalgebra().comult_basis(bc).iter() {
                    let (b, c) = (qi / d, qi % d);
                    let scale = &(&alpha_inv[a] * &alpha[c]) * &(cp * cq);
                    out.add_to(b, &scale);
                }
            }
            out
        })
        .collect()
}

/// Conjugation `h ↦ y h y⁻¹` by a grouplike basis element, as a linear
/// map on `H` (uses `S(y)` for the inverse).
fn grouplike_conjugation_map(h: &HopfData, y: usize) -> Vec<SparseVec> {
    let d = h.dim();
    let yv = unit_vec(h.ctx(), y);
    let y_inv = h.antipode(&yv);
    (0..d)
        .map(|i| {
            let prod = h.algebra().mul(&yv, &unit_vec(h.ctx(), i));
            h.algebra().mul(&prod, &y_inv)
        })
        .collect()
}

/// Whether the matrix identity `α ⇀ h ↼ α⁻¹ = y h y⁻¹` holds on every
/// basis element of `H`.
pub fn conjugation_condition_holds(h: &HopfData, alpha: &[CycScalar], y: usize) -> bool {
    let lhs = hit_conjugation_map(h, alpha);
    let rhs = grouplike_conjugation_map(h, y);
    lhs.iter()
        .zip(rhs.iter())
        .all(|(a, b)| a.minus(b).is_zero())
}

/// Validates a candidate pair `(α, y)` on a Hopf algebra: `α` must be a
/// character, `e_y` grouplike, `α(y) = −1`, and the conjugation identity
/// must hold matrix-exactly.
pub fn rank2_pair_valid(h: &HopfData, alpha: &[CycScalar], y: usize) -> bool {
    if y >= h.dim() || !is_character(h, alpha) {
        return false;
    }
    if !h.is_grouplike(&unit_vec(h.ctx(), y)) {
        return false;
    }
    let minus_one = h.ctx().integer(-1);
    if !(&alpha[y] - &minus_one).is_zero() {
        return false;
    }
    conjugation_condition_holds(h, alpha, y)
}

/// Enumerates all two-dimensional braided Hopf algebra witnesses over the
/// group algebra `k[G]`: pairs `(α, y)` with `α` a character of `G`,
/// `α(y) = −1`, and the conjugation identity (equivalently, `y` central)
/// holding matrix-exactly.  Characters of a nonabelian `G` are pulled
/// back from the abelianization.  Requires the exponent of the
/// abelianization to divide the conductor.
pub fn rank2_classify(
    group: &FiniteGroup,
    ctx: &Arc<FieldContext>,
) -> Result<Vec<Rank2Witness>> {
    let hopf = crate::groups::group_algebra_hopf(group, ctx)?;
    let characters: Vec<Vec<CycScalar>> = if group.is_abelian() {
        characters_abelian(group, ctx)?
    } else {
        let derived = group.commutator_subgroup();
        let (quot, coset_of) = group.quotient(&derived)?;
        let quot_chars = characters_abelian(&quot, ctx)?;
        quot_chars
            .into_iter()
            .map(|chi| {
                (0..group.order()).map(|g| chi[coset_of[g]].clone()).collect()
            })
            .collect()
    };
    let mut witnesses = Vec::new();
    for chi in &characters {
        for y in 0..group.order() {
            if rank2_pair_valid(&hopf, chi, y) {
                witnesses.push(Rank2Witness::classified(chi.clone(), y, ctx));
            }
        }
    }
    Ok(witnesses)
}

/// Screens an explicit list of `(α, y)` candidates against a general
/// Hopf algebra, returning a witness per candidate with the classification
/// verdict recorded in `valid`.
pub fn rank2_screen_candidates(
    h: &HopfData,
    candidates: &[(Vec<CycScalar>, usize)],
) -> Vec<Rank2Witness> {
    candidates
        .iter()
        .map(|(alpha, y)| {
            let mut w = Rank2Witness::classified(alpha.clone(), *y, h.ctx());
            w.valid = rank2_pair_valid(h, alpha, *y);
            w
        })
        .collect()
}

/// The two-dimensional algebra `k{1, n}` with `n² = ϖ1`, its coalgebra
/// with `n` primitive, and the antipode `S(1) = 1`, `S(n) = −n`.
fn rank2_b_structures(
    ctx: &Arc<FieldContext>,
    varpi: &CycScalar,
) -> Result<(AlgebraData, CoalgebraData, Vec<SparseVec>)> {
    let one = SparseVec::unit(0, ctx.one());
    let n = SparseVec::unit(1, ctx.one());
    let mult = vec![
        one.clone(),                       // 1·1
        n.clone(),                         // 1·n
        n.clone(),                         // n·1
        one.scaled(varpi),                 // n·n = ϖ1
    ];
    let algebra = AlgebraData::new(ctx, 2, mult, one.clone())?;
    let comult = vec![
        sparse_tensor(&one, &one, 2),
        sparse_tensor(&n, &one, 2).plus(&sparse_tensor(&one, &n, 2)),
    ];
    let counit = vec![ctx.one(), ctx.zero()];
    let coalgebra = CoalgebraData::new(ctx, 2, comult, counit)?;
    let antipode = vec![one, n.scaled(&ctx.integer(-1))];
    Ok((algebra, coalgebra, antipode))
}

/// Builds the Yetter–Drinfel'd structure for a pair `(α, y)` without
/// enforcing the classification conditions: `B = k{1, n}` with `n² = 0`,
/// action `h·n = α(h)n`, coaction `ρ(n) = y ⊗ n`, `n` primitive, and
/// `S(n) = −n`.  Still requires `α` to be a character and `e_y` grouplike
/// so that the tables define a module and comodule at all.  Used for
/// deliberately corrupted witnesses; [`build_b_alpha_y`] is the validated
/// entry point.
pub fn build_rank2_unchecked(
    h: &HopfData,
    alpha: &[CycScalar],
    y: usize,
) -> Result<YDStructure> {
    if !is_character(h, alpha) {
        return Err(HopfError::Precondition(
            "rank-2 action data requires a character of H".into(),
        ));
    }
    if y >= h.dim() || !h.is_grouplike(&unit_vec(h.ctx(), y)) {
        return Err(HopfError::Precondition(
            "rank-2 coaction data requires a grouplike basis element".into(),
        ));
    }
    let ctx = h.ctx();
    let (algebra, coalgebra, antipode) = rank2_b_structures(ctx, &ctx.zero())?;
    let dh = h.dim();
    let mut action = Vec::with_capacity(dh * 2);
    for hh in 0..dh {
        let eps = h.coalgebra().counit_basis(hh);
        action.push(SparseVec::unit(0, eps.clone()));
        action.push(SparseVec::unit(1, alpha[hh].clone()));
    }
    let one_h = h.algebra().unit().clone();
    let coaction = vec![
        sparse_tensor(&one_h, &unit_vec(ctx, 0), 2),
        SparseVec::unit(tensor_index(y, 1, 2), ctx.one()),
    ];
    YDStructure::new(h.clone(), algebra, coalgebra, action, coaction)?
        .with_antipode(antipode)
}

/// Builds the braided Hopf algebra `B_{α,y}` for a classified witness
/// over `H`.  Rejects pairs that fail the classification conditions with
/// a precondition error; the result passes both
/// [`YDStructure::verify_yd`] and
/// [`YDStructure::verify_braided_bialgebra`].
pub fn build_b_alpha_y(h: &HopfData, w: &Rank2Witness) -> Result<YDStructure> {
    if !rank2_pair_valid(h, &w.alpha, w.y) {
        return Err(HopfError::Precondition(
            "classification violation: the pair (α, y) is not a rank-2 witness"
                .into(),
        ));
    }
    build_rank2_unchecked(h, &w.alpha, w.y)
}

/// Report of [`verify_module_algebra_2dim`]: the extracted functionals
/// and the scalar, together with the axiom verdicts.
#[derive(Clone, Debug)]
pub struct ModuleAlgebra2Report {
    /// Coefficient of `n` in `h·n`, per basis element of `H`.
    pub alpha: Vec<CycScalar>,
    /// Coefficient of `1` in `h·n`, per basis element of `H`.
    pub beta: Vec<CycScalar>,
    /// The scalar with `n² = ϖ1`.
    pub varpi: CycScalar,
    /// Axiom verdicts: `module`, `module-algebra`,
    /// `convolution-anticommutation`, `convolution-square`.
    pub report: AxiomReport,
}

/// Examines an `H`-action on the two-dimensional algebra `k{1, n}` with
/// `n² = ϖ1`.  The action table lists `h·1` and `h·n` per basis element
/// of `H` (flattened `h·dim_b + b` with `dim_b = 2`).  Extracts `α` and
/// `β` from `h·n = β(h)1 + α(h)n`, checks the module and module-algebra
/// axioms exhaustively, and checks the convolution identities
/// `βα = −αβ` and `β² = ϖ(ε − α²)` as exact functional identities.
/// When the action is a module-algebra action the identities necessarily
/// hold; the report exposes both verdicts separately so deliberate
/// violations show which law breaks first.
pub fn verify_module_algebra_2dim(
    h: &HopfData,
    action: &[SparseVec],
    varpi: &CycScalar,
) -> Result<ModuleAlgebra2Report> {
    let ctx = h.ctx();
    let (algebra, coalgebra, _) = rank2_b_structures(ctx, varpi)?;
    let s = YDStructure::new(
        h.clone(),
        algebra,
        coalgebra,
        action.to_vec(),
        // Trivial coaction; only the action-side checks are consulted.
        {
            let one_h = h.algebra().unit().clone();
            vec![
                sparse_tensor(&one_h, &unit_vec(ctx, 0), 2),
                sparse_tensor(&one_h, &unit_vec(ctx, 1), 2),
            ]
        },
    )?;
    let mut alpha = Vec::with_capacity(h.dim());
    let mut beta = Vec::with_capacity(h.dim());
    for i in 0..h.dim() {
        let hn = s.action_basis(i, 1);
        alpha.push(hn.get(1).cloned().unwrap_or_else(|| ctx.zero()));
        beta.push(hn.get(0).cloned().unwrap_or_else(|| ctx.zero()));
    }

    let mut report = AxiomReport::default();
    let yd_report = s.verify_yd();
    for name in ["module", "module-algebra"] {
        report.push(yd_report.check(name).cloned().unwrap());
    }

    let coalg = h.coalgebra();
    let d = h.dim();
    let eps: Vec<CycScalar> = (0..d).map(|i| coalg.counit_basis(i).clone()).collect();
    let ba = convolve_functionals(coalg, &beta, &alpha);
    let ab = convolve_functionals(coalg, &alpha, &beta);
    let mut anti = AxiomCheck::new("convolution-anticommutation");
    for i in 0..d {
        if !(&ba[i] + &ab[i]).is_zero() {
            anti.record(vec![i], "(βα + αβ)(h) is nonzero".into());
        }
    }
    report.push(anti);
    let bb = convolve_functionals(coalg, &beta, &beta);
    let aa = convolve_functionals(coalg, &alpha, &alpha);
    let mut square = AxiomCheck::new("convolution-square");
    for i in 0..d {
        let rhs = varpi * &(&eps[i] - &aa[i]);
        if !(&bb[i] - &rhs).is_zero() {
            square.record(vec![i], "β²(h) differs from ϖ(ε − α²)(h)".into());
        }
    }
    report.push(square);

    Ok(ModuleAlgebra2Report {
        alpha,
        beta,
        varpi: varpi.clone(),
        report,
    })
}
