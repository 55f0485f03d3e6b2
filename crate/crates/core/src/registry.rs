//! Named example instances: the standard battery of biproducts exercised
//! by the decomposition, lattice, and CLI layers.
//!
//! Each named builder fixes a group pair `(𝒢, θ)` — and, for the general
//! constructions, an acting group `G` with its projection `π` and
//! eigenvalue embedding — then selects the smallest cyclotomic field that
//! supports every computation on the instance and hands everything to the
//! verified biproduct builders:
//!
//! | name        | 𝒢            | θ              | G           | dim      |
//! |-------------|--------------|----------------|-------------|----------|
//! | `ex3_1(n)`  | `Z_n`        | identity       | trivial     | `n`      |
//! | `ex3_2(n)`  | `Z_n`, n odd | inversion      | `Z_2×Z_2`   | `4n`     |
//! | `ex3_3(n)`  | `Z_n`, n even| inversion      | `Z_2×Z_2`   | `4n`     |
//! | `ex3_4(n)`  | `Z_n×Z_n`    | swap           | `Z_2×Z_2`   | `4n²`    |
//! | `ex3_5`     | `Z_2×Z_2`    | 3-cycle        | `Z_3×Z_3`   | `36`     |
//! | `ex3_5_z9`  | `Z_2×Z_2`    | 3-cycle        | `Z_9`       | `36`     |
//! | `ex3_6`     | `Z_2×Z_2`    | swap           | `D_4`       | `32`     |
//! | `ex3_7(m)`  | `Z_m`, m odd | inversion      | `Z_4`       | `4m`     |
//! | `a5_conj`   | `A_5`        | conj. by a 2,2-cycle | `Z_2` | `120`    |
//!
//! `ex3_1` is the degenerate corner: a trivial automorphism collapses the
//! acting group, and the biproduct is an ordinary commutative cocommutative
//! Hopf algebra. `ex3_2` and `ex3_7` are the two non-trivial
//! twelve-dimensional instances (at `n = m = 3`); they share every
//! numerical decomposition invariant and are told apart only by their
//! grouplike groups (`Z_2 × Z_2` versus `Z_4`). `a5_conj` is the simple
//! non-abelian flagship with a trivial action, the input to the
//! unique-normal-subalgebra verification.
//!
//! The conductor rule: `N` is the least common multiple of all `θ`-orbit
//! lengths (comatrix eigenvector scalars), `|𝐔|` (eigenvalue embedding),
//! `exp(G)` and `|G|` when `G` is abelian (character and idempotent bases
//! on the acting side), and `exp(𝒢)` when `𝒢` is abelian (the idempotent
//! basis of `k[𝒢]`). Nonabelian factors contribute nothing beyond their
//! orbit data because no character basis is formed for them.

use std::sync::Arc;

use crate::biproduct::{build_a_general, build_a_gtheta, BiproductInstance};
use crate::cyclotomic::FieldContext;
use crate::groups::{FiniteGroup, GroupAutomorphism};
use crate::{HopfError, Result};

/// One named instance of the example battery.
pub struct RegistryEntry {
    /// Display name, including fixed parameters, e.g. `ex3_2(n=3)`.
    pub name: String,
    /// The constructed and precondition-checked instance.
    pub instance: BiproductInstance,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// The exponent of a finite group: the least common multiple of all
/// element orders.
pub fn exponent(g: &FiniteGroup) -> u64 {
    (0..g.order()).fold(1, |e, x| lcm(e, g.order_of(x)))
}

/// The smallest conductor supporting all computations on an instance
/// assembled from `(𝒢, θ, G)`: lcm of the orbit lengths, the order of
/// `θ`, `exp(G)` and `|G|` for abelian `G`, and `exp(𝒢)` for abelian `𝒢`.
pub fn auto_conductor(
    cal_g: &FiniteGroup,
    theta: &GroupAutomorphism,
    g_group: &FiniteGroup,
) -> u64 {
    let mut n = theta
        .orbits()
        .iter()
        .fold(1u64, |e, orbit| lcm(e, orbit.len() as u64));
    n = lcm(n, theta.order());
    if g_group.is_abelian() {
        n = lcm(n, exponent(g_group));
        n = lcm(n, g_group.order() as u64);
    }
    if cal_g.is_abelian() {
        n = lcm(n, exponent(cal_g));
    }
    n
}

/// Resolves the field for an instance: the automatic conductor, or an
/// override that must be a multiple of it.
pub fn context_for(
    cal_g: &FiniteGroup,
    theta: &GroupAutomorphism,
    g_group: &FiniteGroup,
    conductor: Option<u64>,
) -> Result<Arc<FieldContext>> {
    let auto = auto_conductor(cal_g, theta, g_group);
    let n = match conductor {
        Some(n) if n % auto == 0 => n,
        Some(n) => {
            return Err(HopfError::Precondition(format!(
                "conductor override {n} is not a multiple of the required {auto}"
            )))
        }
        None => auto,
    };
    FieldContext::new(n)
}

/// Three-cycle automorphism of `Z_2 × Z_2` permuting the three
/// involutions.
fn klein_three_cycle(klein: &FiniteGroup) -> Result<GroupAutomorphism> {
    GroupAutomorphism::new(klein, vec![0, 2, 3, 1])
}

/// Degenerate instance: `𝒢 = Z_n` with the identity automorphism. The
/// acting group collapses, and the result is an `n`-dimensional
/// commutative cocommutative Hopf algebra.
pub fn ex3_1(n: u64, conductor: Option<u64>) -> Result<BiproductInstance> {
    if n == 0 {
        return Err(HopfError::Precondition(
            "ex3_1 requires a cyclic group order n >= 1".into(),
        ));
    }
    let cal = FiniteGroup::cyclic(n);
    let theta = GroupAutomorphism::identity(&cal);
    let g_group = FiniteGroup::cyclic(1);
    let ctx = context_for(&cal, &theta, &g_group, conductor)?;
    build_a_gtheta(&cal, &theta, &ctx)
}

/// `𝒢 = Z_n` (`n` odd, `n ≥ 3`) with the inversion automorphism: a
/// non-trivial instance of dimension `4n` with grouplike group `Z_2×Z_2`.
pub fn ex3_2(n: u64, conductor: Option<u64>) -> Result<BiproductInstance> {
    if n < 3 || n % 2 == 0 {
        return Err(HopfError::Precondition(format!(
            "ex3_2 requires an odd n >= 3, got {n}"
        )));
    }
    inversion_gtheta(n, conductor)
}

/// `𝒢 = Z_n` (`n` even, `n ≥ 4`) with the inversion automorphism: a
/// non-trivial instance of dimension `4n` with grouplike group `Z_2³`.
pub fn ex3_3(n: u64, conductor: Option<u64>) -> Result<BiproductInstance> {
    if n < 4 || n % 2 != 0 {
        return Err(HopfError::Precondition(format!(
            "ex3_3 requires an even n >= 4, got {n}"
        )));
    }
    inversion_gtheta(n, conductor)
}

fn inversion_gtheta(n: u64, conductor: Option<u64>) -> Result<BiproductInstance> {
    let cal = FiniteGroup::cyclic(n);
    let theta = GroupAutomorphism::inversion(&cal)?;
    let g_group = FiniteGroup::product_of_cyclics(&[2, 2]);
    let ctx = context_for(&cal, &theta, &g_group, conductor)?;
    build_a_gtheta(&cal, &theta, &ctx)
}

/// `𝒢 = Z_n × Z_n` (`n ≥ 2`) with the coordinate swap: dimension `4n²`,
/// grouplike group `Z_n × Z_2 × Z_2`.
pub fn ex3_4(n: u64, conductor: Option<u64>) -> Result<BiproductInstance> {
    if n < 2 {
        return Err(HopfError::Precondition(format!(
            "ex3_4 requires n >= 2, got {n}"
        )));
    }
    let cal = FiniteGroup::product_of_cyclics(&[n, n]);
    let m = n as usize;
    // Swap (x, y) -> (y, x) on the row-major index x·n + y.
    let map: Vec<usize> = (0..m * m).map(|i| (i % m) * m + i / m).collect();
    let theta = GroupAutomorphism::new(&cal, map)?;
    let g_group = FiniteGroup::product_of_cyclics(&[2, 2]);
    let ctx = context_for(&cal, &theta, &g_group, conductor)?;
    build_a_gtheta(&cal, &theta, &ctx)
}

/// `𝒢 = Z_2 × Z_2` with a 3-cycle automorphism: the 36-dimensional
/// instance with grouplike group `Z_3 × Z_3`.
pub fn ex3_5(conductor: Option<u64>) -> Result<BiproductInstance> {
    let cal = FiniteGroup::product_of_cyclics(&[2, 2]);
    let theta = klein_three_cycle(&cal)?;
    let g_group = FiniteGroup::product_of_cyclics(&[3, 3]);
    let ctx = context_for(&cal, &theta, &g_group, conductor)?;
    build_a_gtheta(&cal, &theta, &ctx)
}

/// The companion 36-dimensional instance: same `(𝒢, θ)` as [`ex3_5`] but
/// with `G` cyclic of order 9 acting through `π(a) = θ`; grouplike group
/// `Z_9`.
pub fn ex3_5_z9(conductor: Option<u64>) -> Result<BiproductInstance> {
    let cal = FiniteGroup::product_of_cyclics(&[2, 2]);
    let theta = klein_three_cycle(&cal)?;
    let g_group = FiniteGroup::cyclic(9);
    let pi_exps: Vec<u32> = (0..9).map(|k| (k % 3) as u32).collect();
    let ctx = context_for(&cal, &theta, &g_group, conductor)?;
    build_a_general(&cal, &theta, &g_group, &pi_exps, 3, &ctx)
}

/// Two-group instance with a non-abelian acting group: `𝒢 = Z_2 × Z_2`
/// with the swap, `G = D_4` acting through the rotation/reflection sign,
/// `𝐔 = ⟨r²⟩ ⊆ Z(D_4)`. Dimension 32.
pub fn ex3_6(conductor: Option<u64>) -> Result<BiproductInstance> {
    let cal = FiniteGroup::product_of_cyclics(&[2, 2]);
    let theta = GroupAutomorphism::new(&cal, vec![0, 2, 1, 3])?;
    let g_group = FiniteGroup::dihedral(4);
    // π is trivial on rotations (indices 0..4) and θ on reflections.
    let pi_exps: Vec<u32> = (0..8).map(|i| u32::from(i >= 4)).collect();
    let ctx = context_for(&cal, &theta, &g_group, conductor)?;
    build_a_general(&cal, &theta, &g_group, &pi_exps, 2, &ctx)
}

/// `𝒢 = Z_m` (`m` odd, `m ≥ 3`) with inversion, acted on by the cyclic
/// group `G = Z_4` through `π(a) = inversion`, `𝐔 = ⟨a²⟩`. Dimension
/// `4m`; at `m = 3` this is the second non-trivial twelve-dimensional
/// instance, with grouplike group `Z_4`.
pub fn ex3_7(m: u64, conductor: Option<u64>) -> Result<BiproductInstance> {
    if m < 3 || m % 2 == 0 {
        return Err(HopfError::Precondition(format!(
            "ex3_7 requires an odd m >= 3, got {m}"
        )));
    }
    let cal = FiniteGroup::cyclic(m);
    let theta = GroupAutomorphism::inversion(&cal)?;
    let g_group = FiniteGroup::cyclic(4);
    let pi_exps: Vec<u32> = vec![0, 1, 0, 1];
    let ctx = context_for(&cal, &theta, &g_group, conductor)?;
    build_a_general(&cal, &theta, &g_group, &pi_exps, 2, &ctx)
}

/// `𝒢 = A_5` with `θ` = conjugation by a double transposition, acted on
/// trivially by `G = Z_2` with `𝐔 = G`. The 120-dimensional simple
/// non-abelian flagship with a trivial action.
pub fn a5_conj(conductor: Option<u64>) -> Result<BiproductInstance> {
    let (a5, perms) = FiniteGroup::from_perm_gens(&[vec![1, 2, 0, 3, 4], vec![1, 2, 3, 4, 0]])?;
    if a5.order() != 60 {
        return Err(HopfError::InternalConsistency(format!(
            "alternating group construction returned order {}",
            a5.order()
        )));
    }
    let t = perms
        .iter()
        .position(|p| p == &[1, 0, 3, 2, 4])
        .ok_or_else(|| {
            HopfError::InternalConsistency("double transposition not found in A_5".into())
        })?;
    let theta = GroupAutomorphism::conjugation(&a5, t);
    let g_group = FiniteGroup::cyclic(2);
    let ctx = context_for(&a5, &theta, &g_group, conductor)?;
    build_a_general(&a5, &theta, &g_group, &[0, 0], 1, &ctx)
}

/// Builds a named example with optional `n`/`m` parameters and conductor
/// override. `ex3_5` accepts `m = 9` to select the cyclic-`Z_9` companion.
pub fn instance_by_name(
    name: &str,
    n: Option<u64>,
    m: Option<u64>,
    conductor: Option<u64>,
) -> Result<BiproductInstance> {
    let reject_m = |m: Option<u64>| -> Result<()> {
        if m.is_some() {
            return Err(HopfError::Precondition(format!(
                "example {name} does not take an m parameter"
            )));
        }
        Ok(())
    };
    let reject_n = |n: Option<u64>| -> Result<()> {
        if n.is_some() {
            return Err(HopfError::Precondition(format!(
                "example {name} does not take an n parameter"
            )));
        }
        Ok(())
    };
    match name {
        "ex3_1" => {
            reject_m(m)?;
            ex3_1(n.unwrap_or(4), conductor)
        }
        "ex3_2" => {
            reject_m(m)?;
            ex3_2(n.unwrap_or(3), conductor)
        }
        "ex3_3" => {
            reject_m(m)?;
            ex3_3(n.unwrap_or(4), conductor)
        }
        "ex3_4" => {
            reject_m(m)?;
            ex3_4(n.unwrap_or(2), conductor)
        }
        "ex3_5" => {
            reject_n(n)?;
            match m {
                None | Some(3) => ex3_5(conductor),
                Some(9) => ex3_5_z9(conductor),
                Some(other) => Err(HopfError::Precondition(format!(
                    "ex3_5 accepts m = 3 (default) or m = 9, got {other}"
                ))),
            }
        }
        "ex3_6" => {
            reject_n(n)?;
            reject_m(m)?;
            ex3_6(conductor)
        }
        "ex3_7" => {
            reject_n(n)?;
            ex3_7(m.unwrap_or(3), conductor)
        }
        "a5_conj" => {
            reject_n(n)?;
            reject_m(m)?;
            a5_conj(conductor)
        }
        other => Err(HopfError::Precondition(format!(
            "unknown example name {other:?}; expected ex3_1 … ex3_7 or a5_conj"
        ))),
    }
}

/// The full battery, including the `Z_9` companion and the `A_5`
/// flagship, each with its fixed standard parameters.
pub fn registry_instances() -> Result<Vec<RegistryEntry>> {
    let mut out = Vec::new();
    let mut push = |name: &str, instance: Result<BiproductInstance>| -> Result<()> {
        out.push(RegistryEntry {
            name: name.to_string(),
            instance: instance?,
        });
        Ok(())
    };
    push("ex3_1(n=4)", ex3_1(4, None))?;
    push("ex3_2(n=3)", ex3_2(3, None))?;
    push("ex3_2(n=5)", ex3_2(5, None))?;
    push("ex3_3(n=4)", ex3_3(4, None))?;
    push("ex3_4(n=2)", ex3_4(2, None))?;
    push("ex3_5", ex3_5(None))?;
    push("ex3_5_z9", ex3_5_z9(None))?;
    push("ex3_6", ex3_6(None))?;
    push("ex3_7(m=3)", ex3_7(3, None))?;
    push("a5_conj", a5_conj(None))?;
    Ok(out)
}
