//! Construction specifications and the on-disk instance format.
//!
//! An *instance file* is what `build` writes and the other subcommands
//! read: a fully resolved construction (multiplication tables, the
//! automorphism, the action data, and the conductor actually used)
//! together with the dimension and the verification summary. Re-reading
//! the file rebuilds the instance from scratch through the same verified
//! builders, so a tampered file fails exactly like a bad custom spec.
//!
//! A *custom spec* (`build --custom file.json`) uses the same schema but
//! may name groups symbolically (`cyclic`, `product`, `dihedral`, `perm`)
//! and automorphisms structurally (`identity`, `inversion`, `map`,
//! `conjugation`), and may omit the conductor to get the automatic one.

use std::sync::Arc;

use hopfforge::biproduct::{build_a_general, build_a_gtheta, BiproductInstance};
use hopfforge::cyclotomic::FieldContext;
use hopfforge::groups::{FiniteGroup, GroupAutomorphism};
use hopfforge::registry;
use hopfforge::{HopfError, Result};
use serde::{Deserialize, Serialize};

use crate::report::VerificationSummary;

/// A finite group, either symbolic or as a raw multiplication table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    /// Cyclic group of order `n`.
    Cyclic { n: u64 },
    /// Direct product of cyclic groups with the given orders.
    Product { orders: Vec<u64> },
    /// Dihedral group of order `2n`.
    Dihedral { n: u64 },
    /// Permutation group generated by the given permutations (each a
    /// vector mapping point `i` to `gens[i]`).
    Perm { gens: Vec<Vec<usize>> },
    /// Raw row-major multiplication table with element names.
    Table { table: Vec<usize>, names: Vec<String> },
}

impl GroupSpec {
    /// Builds the group. For [`GroupSpec::Perm`] the per-element
    /// permutations are also returned so conjugation automorphisms can be
    /// specified by a permutation.
    pub fn build(&self) -> Result<(FiniteGroup, Option<Vec<Vec<usize>>>)> {
        match self {
            GroupSpec::Cyclic { n } => Ok((FiniteGroup::cyclic(*n), None)),
            GroupSpec::Product { orders } => {
                Ok((FiniteGroup::product_of_cyclics(orders), None))
            }
            GroupSpec::Dihedral { n } => Ok((FiniteGroup::dihedral(*n), None)),
            GroupSpec::Perm { gens } => {
                let (g, perms) = FiniteGroup::from_perm_gens(gens)?;
                Ok((g, Some(perms)))
            }
            GroupSpec::Table { table, names } => {
                Ok((FiniteGroup::from_table(table.clone(), names.clone())?, None))
            }
        }
    }
}

/// A group automorphism, specified structurally.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AutoSpec {
    /// The identity automorphism.
    Identity,
    /// `x ↦ x⁻¹` (requires an abelian group).
    Inversion,
    /// Explicit image table: element `i` maps to `images[i]`.
    Map { images: Vec<usize> },
    /// Conjugation by the element with the given index.
    Conjugation { element: usize },
    /// Conjugation by the element realizing the given permutation
    /// (only for [`GroupSpec::Perm`] groups).
    ConjugationPerm { perm: Vec<usize> },
}

impl AutoSpec {
    /// Builds the automorphism over `group`; `perms` is the per-element
    /// permutation table of a permutation group, when available.
    pub fn build(
        &self,
        group: &FiniteGroup,
        perms: Option<&[Vec<usize>]>,
    ) -> Result<GroupAutomorphism> {
        match self {
            AutoSpec::Identity => Ok(GroupAutomorphism::identity(group)),
            AutoSpec::Inversion => GroupAutomorphism::inversion(group),
            AutoSpec::Map { images } => GroupAutomorphism::new(group, images.clone()),
            AutoSpec::Conjugation { element } => {
                if *element >= group.order() {
                    return Err(HopfError::Malformed(format!(
                        "conjugating element index {element} out of range {}",
                        group.order()
                    )));
                }
                Ok(GroupAutomorphism::conjugation(group, *element))
            }
            AutoSpec::ConjugationPerm { perm } => {
                let perms = perms.ok_or_else(|| {
                    HopfError::Malformed(
                        "conjugation_perm requires a permutation group spec".into(),
                    )
                })?;
                let idx = perms.iter().position(|p| p == perm).ok_or_else(|| {
                    HopfError::Malformed(format!(
                        "permutation {perm:?} is not an element of the group"
                    ))
                })?;
                Ok(GroupAutomorphism::conjugation(group, idx))
            }
        }
    }
}

/// Which builder assembles the instance.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `A(𝒢, θ)`: the acting group and its action are derived from `θ`.
    Gtheta,
    /// Explicit acting group `G` with action exponents and eigenvalue
    /// embedding.
    General,
}

/// A fully determined construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub mode: Mode,
    pub cal_g: GroupSpec,
    pub theta: AutoSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embed: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<u64>,
}

impl ConstructionSpec {
    /// Builds and precondition-checks the instance, resolving the
    /// conductor automatically unless this construction pins one or the
    /// caller overrides it.
    pub fn build(&self, conductor_override: Option<u64>) -> Result<BiproductInstance> {
        let (cal_g, perms) = self.cal_g.build()?;
        let theta = self.theta.build(&cal_g, perms.as_deref())?;
        let conductor = conductor_override.or(self.conductor);
        match self.mode {
            Mode::Gtheta => {
                if self.g.is_some() || self.pi.is_some() || self.embed.is_some() {
                    return Err(HopfError::Malformed(
                        "gtheta mode derives g, pi, and embed; do not specify them".into(),
                    ));
                }
                let u = theta.order();
                let derived_g = FiniteGroup::product_of_cyclics(&[u, u]);
                let ctx = self.resolve_field(&cal_g, &theta, &derived_g, conductor)?;
                build_a_gtheta(&cal_g, &theta, &ctx)
            }
            Mode::General => {
                let g_spec = self.g.as_ref().ok_or_else(|| {
                    HopfError::Malformed("general mode requires a g group spec".into())
                })?;
                let pi = self.pi.as_ref().ok_or_else(|| {
                    HopfError::Malformed("general mode requires a pi exponent table".into())
                })?;
                let embed = self.embed.ok_or_else(|| {
                    HopfError::Malformed(
                        "general mode requires the eigenvalue embedding index".into(),
                    )
                })?;
                let (g_group, _) = g_spec.build()?;
                let ctx = self.resolve_field(&cal_g, &theta, &g_group, conductor)?;
                build_a_general(&cal_g, &theta, &g_group, pi, embed, &ctx)
            }
        }
    }

    fn resolve_field(
        &self,
        cal_g: &FiniteGroup,
        theta: &GroupAutomorphism,
        g_group: &FiniteGroup,
        conductor: Option<u64>,
    ) -> Result<Arc<FieldContext>> {
        registry::context_for(cal_g, theta, g_group, conductor)
    }

    /// Recovers a fully resolved spec from a built instance: groups as
    /// cyclic-factor products when they carry a coordinate presentation
    /// (raw tables otherwise), the automorphism as an image table, and the
    /// conductor pinned. Rebuilding this spec reproduces the instance
    /// exactly.
    pub fn from_instance(inst: &BiproductInstance) -> ConstructionSpec {
        // A group built from cyclic factors keeps its coordinate
        // presentation, which downstream consumers (the idempotent basis,
        // linear automorphisms) require; rebuilding from the factor orders
        // reproduces the identical element indexing. Only presentation-free
        // groups fall back to a raw multiplication table.
        let spec_of = |g: &FiniteGroup| -> GroupSpec {
            if let Some(pres) = g.presentation() {
                return GroupSpec::Product {
                    orders: pres.orders.clone(),
                };
            }
            let n = g.order();
            let mut table = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    table.push(g.mul(i, j));
                }
            }
            GroupSpec::Table {
                table,
                names: g.names().to_vec(),
            }
        };
        let embed = inst
            .u_embed()
            .get(1)
            .copied()
            .unwrap_or_else(|| inst.g_group().identity());
        ConstructionSpec {
            mode: Mode::General,
            cal_g: spec_of(inst.cal_g()),
            theta: AutoSpec::Map {
                images: inst.theta().map().to_vec(),
            },
            g: Some(spec_of(inst.g_group())),
            pi: Some(inst.pi_exps().to_vec()),
            embed: Some(embed),
            conductor: Some(inst.ctx().conductor()),
        }
    }
}

/// The on-disk artifact written by `build`.
#[derive(Serialize, Deserialize)]
pub struct InstanceFile {
    /// Fully resolved construction; rebuilding it reproduces the instance.
    pub construction: ConstructionSpec,
    /// Dimension of the biproduct.
    pub dim: usize,
    /// Verification summary at build time.
    pub verification: VerificationSummary,
}

/// Parses a compact group syntax: `z<n>` for cyclic, factors joined with
/// `x` for products (`z2xz2`), and `d<n>` for the dihedral group of order
/// `2n`.
pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    let lower = text.trim().to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix('d') {
        if !rest.contains('x') {
            let n: u64 = rest.parse().map_err(|_| bad_group(text))?;
            if n < 1 {
                return Err(bad_group(text));
            }
            return Ok(FiniteGroup::dihedral(n));
        }
    }
    let mut orders = Vec::new();
    for part in lower.split('x') {
        let digits = part.strip_prefix('z').ok_or_else(|| bad_group(text))?;
        let n: u64 = digits.parse().map_err(|_| bad_group(text))?;
        if n < 1 {
            return Err(bad_group(text));
        }
        orders.push(n);
    }
    if orders.is_empty() {
        return Err(bad_group(text));
    }
    Ok(FiniteGroup::product_of_cyclics(&orders))
}

fn bad_group(text: &str) -> HopfError {
    HopfError::Malformed(format!(
        "unrecognized group {text:?}; use z<n>, z<a>xz<b>…, or d<n>"
    ))
}
