//! Batch front end for the exact Hopf-algebra engine.
//!
//! Four subcommands cover the pipeline:
//!
//! * `build` — construct a named example or a custom biproduct, verify
//!   every axiom exhaustively, and write the instance file.
//! * `decompose` — rebuild an instance file, then emit its simple
//!   subcoalgebra classes, matrix block classes, and grouplike data.
//! * `subalgebras` — enumerate the Hopf subalgebras with normality flags;
//!   when the unique-normal hypotheses hold, run that verification too.
//! * `rank2` — classify the two-dimensional braided Hopf algebra
//!   witnesses over a group algebra and optionally verify each biproduct.
//!
//! Reports are deterministic: identical invocations produce byte-identical
//! output. JSON is the machine contract; text is a summary. Exit codes:
//! `0` success, `1` precondition violation, `2` internal-consistency
//! failure (a proved theorem failed to verify — a bug), `3` I/O. The
//! `HOPFFORGE_ORDER_CAP` environment variable bounds group enumeration
//! sizes.

mod report;
mod spec;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hopfforge::algebra::left_integrals;
use hopfforge::biproduct::biproduct_hopf;
use hopfforge::cyclotomic::FieldContext;
use hopfforge::decompose::{agtheta_algebra_route, coalgebra_decomposition, grouplikes};
use hopfforge::groups::group_algebra_hopf;
use hopfforge::lattice::{enumerate_hopf_subalgebras, is_normal, verify_unique_normal};
use hopfforge::registry;
use hopfforge::wedderburn::semisimple_decomposition;
use hopfforge::yd::{build_b_alpha_y, rank2_classify};
use hopfforge::{HopfError, Result};
use serde::Serialize;

use report::{
    AlgebraClass, BuildReport, CoalgebraClass, DecomposeReport, GrouplikeSummary, Rank2Report,
    SubalgebraEntry, SubalgebrasReport, UniqueNormalSummary, VerificationSummary, WitnessBiproduct,
    WitnessEntry,
};
use spec::{ConstructionSpec, InstanceFile};

#[derive(Parser)]
#[command(
    name = "hopfforge",
    version,
    about = "Exact construction, verification, and decomposition of biproduct Hopf algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Toggle {
    On,
    Off,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct and exhaustively verify an instance; write its file.
    Build {
        /// Named example: ex3_1 … ex3_7, or a5_conj.
        #[arg(long)]
        example: Option<String>,
        /// Parameter n of the named example, where applicable.
        #[arg(long)]
        n: Option<u64>,
        /// Parameter m of the named example, where applicable.
        #[arg(long)]
        m: Option<u64>,
        /// Custom construction spec (JSON file) instead of a named example.
        #[arg(long)]
        custom: Option<PathBuf>,
        /// Conductor override (must be a multiple of the automatic one).
        #[arg(long)]
        conductor: Option<u64>,
        /// Where to write the instance file; without it, the instance JSON
        /// goes to stdout (json format) or only the summary is printed
        /// (text format).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Decompose an instance file into coalgebra and algebra blocks.
    Decompose {
        /// Instance file written by `build`.
        instance: PathBuf,
        /// Re-derive the algebra blocks with the independent trace-form
        /// oracle and require agreement.
        #[arg(long, value_enum, default_value_t = Toggle::On)]
        oracle_check: Toggle,
        /// Conductor override for the rebuild (e.g. to reach a splitting
        /// field for the fallback decomposition).
        #[arg(long)]
        conductor: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Enumerate Hopf subalgebras of an instance file with normality.
    Subalgebras {
        /// Instance file written by `build`.
        instance: PathBuf,
        /// List only the normal subalgebras.
        #[arg(long)]
        normal_only: bool,
        /// Conductor override for the rebuild.
        #[arg(long)]
        conductor: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Classify rank-2 braided witnesses over a group algebra.
    Rank2 {
        /// Group: z<n>, z<a>xz<b>…, or d<n> (dihedral of order 2n).
        group: String,
        /// Build and verify the biproduct of every witness.
        #[arg(long, value_enum, default_value_t = Toggle::On)]
        oracle_check: Toggle,
        /// Conductor override (must be a multiple of the automatic one).
        #[arg(long)]
        conductor: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.cmd) {
        let code = exit_code(&e);
        let kind = match code {
            2 => "internal-consistency",
            3 => "io",
            _ => "precondition",
        };
        let payload = serde_json::json!({
            "error": { "code": code, "kind": kind, "message": e.to_string() }
        });
        eprintln!(
            "{}",
            serde_json::to_string_pretty(&payload).expect("error payload serializes")
        );
        std::process::exit(code);
    }
}

fn exit_code(e: &HopfError) -> i32 {
    match e {
        HopfError::InternalConsistency(_) => 2,
        HopfError::Io(_) => 3,
        _ => 1,
    }
}

fn io_like(msg: String) -> HopfError {
    HopfError::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, msg))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| io_like(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(HopfError::Io),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read_instance_file(path: &PathBuf) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path).map_err(HopfError::Io)?;
    serde_json::from_str(&text).map_err(|e| io_like(format!("corrupt instance file: {e}")))
}

/// Rebuilds the instance from its file and re-runs full verification; no
/// report is produced from an instance that fails.
fn rebuild_verified(
    file: &InstanceFile,
    conductor: Option<u64>,
) -> Result<(hopfforge::biproduct::BiproductInstance, VerificationSummary)> {
    let inst = file.construction.build(conductor)?;
    let report = inst.verify_full();
    let summary = VerificationSummary::from(&report);
    if !summary.passed {
        return Err(HopfError::InternalConsistency(format!(
            "rebuilt instance failed verification:\n{report}"
        )));
    }
    Ok((inst, summary))
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Build {
            example,
            n,
            m,
            custom,
            conductor,
            out,
            format,
        } => cmd_build(example, n, m, custom, conductor, out, format),
        Cmd::Decompose {
            instance,
            oracle_check,
            conductor,
            out,
            format,
        } => cmd_decompose(&instance, oracle_check == Toggle::On, conductor, out, format),
        Cmd::Subalgebras {
            instance,
            normal_only,
            conductor,
            out,
            format,
        } => cmd_subalgebras(&instance, normal_only, conductor, out, format),
        Cmd::Rank2 {
            group,
            oracle_check,
            conductor,
            out,
            format,
        } => cmd_rank2(&group, oracle_check == Toggle::On, conductor, out, format),
    }
}

fn cmd_build(
    example: Option<String>,
    n: Option<u64>,
    m: Option<u64>,
    custom: Option<PathBuf>,
    conductor: Option<u64>,
    out: Option<PathBuf>,
    format: Format,
) -> Result<()> {
    let (source, inst) = match (example, custom) {
        (Some(_), Some(_)) => {
            return Err(HopfError::Malformed(
                "--example and --custom are mutually exclusive".into(),
            ))
        }
        (Some(name), None) => {
            let inst = registry::instance_by_name(&name, n, m, conductor)?;
            (name, inst)
        }
        (None, Some(path)) => {
            if n.is_some() || m.is_some() {
                return Err(HopfError::Malformed(
                    "--n/--m apply only to named examples".into(),
                ));
            }
            let text = std::fs::read_to_string(&path).map_err(HopfError::Io)?;
            let spec: ConstructionSpec = serde_json::from_str(&text)
                .map_err(|e| io_like(format!("corrupt custom spec: {e}")))?;
            ("custom".to_string(), spec.build(conductor)?)
        }
        (None, None) => {
            return Err(HopfError::Malformed(
                "provide --example <name> or --custom <file>".into(),
            ))
        }
    };

    let axiom_report = inst.verify_full();
    let verification = VerificationSummary::from(&axiom_report);
    if !verification.passed {
        return Err(HopfError::InternalConsistency(format!(
            "constructed instance failed verification:\n{axiom_report}"
        )));
    }
    let antipode_order = inst.a().antipode_order(64)?;
    let file = InstanceFile {
        construction: ConstructionSpec::from_instance(&inst),
        dim: inst.dim(),
        verification: verification.clone(),
    };
    let build_report = BuildReport {
        source,
        dim: inst.dim(),
        conductor: inst.ctx().conductor(),
        antipode_order,
        verification,
    };

    let file_json = to_json(&file)?;
    match (&out, format) {
        (Some(path), Format::Json) => {
            emit(Some(path), &file_json)?;
            print!("{}", to_json(&build_report)?);
        }
        (Some(path), Format::Text) => {
            emit(Some(path), &file_json)?;
            print!("{}", build_report.text());
        }
        (None, Format::Json) => print!("{file_json}"),
        (None, Format::Text) => print!("{}", build_report.text()),
    }
    Ok(())
}

fn cmd_decompose(
    instance: &PathBuf,
    oracle_check: bool,
    conductor: Option<u64>,
    out: Option<PathBuf>,
    format: Format,
) -> Result<()> {
    let file = read_instance_file(instance)?;
    let (inst, verification) = rebuild_verified(&file, conductor)?;

    let coalgebra = coalgebra_decomposition(&inst)?;
    let co_classes: Vec<CoalgebraClass> = coalgebra
        .multiset
        .iter()
        .map(|&(r, mult)| CoalgebraClass { r, mult })
        .collect();

    let (al_multiset, algebra_route, oracle_checked) =
        match agtheta_algebra_route(&inst, oracle_check) {
            Ok(route) => (
                route.decomposition.multiset.clone(),
                "smash".to_string(),
                route.oracle_blocks.is_some(),
            ),
            Err(HopfError::Unsupported(_)) => {
                let w = semisimple_decomposition(inst.a().algebra())?;
                let mut counts = std::collections::BTreeMap::new();
                for &b in &w.blocks {
                    *counts.entry(b).or_insert(0u64) += 1;
                }
                (
                    counts.into_iter().collect(),
                    "wedderburn".to_string(),
                    false,
                )
            }
            Err(e) => return Err(e),
        };
    let al_classes: Vec<AlgebraClass> = al_multiset
        .iter()
        .map(|&(n, mult)| AlgebraClass { n, mult })
        .collect();

    let gl = grouplikes(&inst)?;
    let report = DecomposeReport {
        dim: inst.dim(),
        conductor: inst.ctx().conductor(),
        verification,
        coalgebra: co_classes,
        algebra: al_classes,
        algebra_route,
        oracle_checked,
        grouplikes: GrouplikeSummary {
            order: gl.group.order(),
            invariants: gl.abelian_invariants.clone(),
        },
    };
    let rendered = match format {
        Format::Json => to_json(&report)?,
        Format::Text => report.text(),
    };
    emit(out.as_ref(), &rendered)
}

fn cmd_subalgebras(
    instance: &PathBuf,
    normal_only: bool,
    conductor: Option<u64>,
    out: Option<PathBuf>,
    format: Format,
) -> Result<()> {
    let file = read_instance_file(instance)?;
    let (inst, verification) = rebuild_verified(&file, conductor)?;

    let all = enumerate_hopf_subalgebras(&inst)?;
    let mut entries = Vec::new();
    for desc in &all {
        let normal = is_normal(&inst, desc)?;
        if normal_only && !normal {
            continue;
        }
        entries.push(SubalgebraEntry {
            dim: desc.dim,
            pairs: desc.pairs.clone(),
            normal,
            is_lower_bound_equal: desc.is_lower_bound_equal,
        });
    }

    let unique_normal = match verify_unique_normal(&inst) {
        Ok(rep) => Some(UniqueNormalSummary {
            normal_dims: rep.normal.iter().map(|d| d.dim).collect(),
        }),
        Err(HopfError::Precondition(_))
        | Err(HopfError::Unsupported(_))
        | Err(HopfError::OrderCap { .. }) => None,
        Err(e) => return Err(e),
    };

    let report = SubalgebrasReport {
        dim: inst.dim(),
        conductor: inst.ctx().conductor(),
        verification,
        count: entries.len(),
        subalgebras: entries,
        unique_normal,
    };
    let rendered = match format {
        Format::Json => to_json(&report)?,
        Format::Text => report.text(),
    };
    emit(out.as_ref(), &rendered)
}

fn cmd_rank2(
    group_text: &str,
    oracle_check: bool,
    conductor: Option<u64>,
    out: Option<PathBuf>,
    format: Format,
) -> Result<()> {
    let group = spec::parse_group(group_text)?;
    let auto = lcm(2, registry::exponent(&group));
    let n = match conductor {
        Some(n) if n % auto == 0 => n,
        Some(n) => {
            return Err(HopfError::Precondition(format!(
                "conductor override {n} is not a multiple of the required {auto}"
            )))
        }
        None => auto,
    };
    let ctx = FieldContext::new(n)?;
    let witnesses = rank2_classify(&group, &ctx)?;

    let hopf = group_algebra_hopf(&group, &ctx)?;
    let mut entries = Vec::new();
    for w in &witnesses {
        let biproduct = if oracle_check {
            let yd = build_b_alpha_y(&hopf, w)?;
            let bi = biproduct_hopf(&yd)?;
            let verification = VerificationSummary::from(&bi.verify_hopf());
            // The rank-2 tensorand with a non-zero nilpotent part has no
            // normalized integral, so the biproduct is never semisimple;
            // record the obstruction by requiring every left integral of
            // the tensorand to be killed by its counit.
            let counit: Vec<_> = (0..2)
                .map(|i| {
                    let v = hopfforge::algebra::unit_vec(&ctx, i);
                    yd.b_coalgebra().counit(&v)
                })
                .collect();
            let integrals = left_integrals(yd.b_algebra(), &counit);
            for integral in &integrals {
                let eps = {
                    let mut acc = ctx.zero();
                    for (i, c) in integral.iter() {
                        acc = &acc + &(&counit[i] * c);
                    }
                    acc
                };
                if !eps.is_zero() {
                    return Err(HopfError::InternalConsistency(
                        "rank-2 witness tensorand has a normalized integral".into(),
                    ));
                }
            }
            Some(WitnessBiproduct {
                dim: bi.dim(),
                verification,
                antipode_order: bi.antipode_order(64)?,
            })
        } else {
            None
        };
        entries.push(WitnessEntry {
            witness: w.to_json(),
            biproduct,
        });
    }

    let report = Rank2Report {
        group: group_text.trim().to_ascii_lowercase(),
        conductor: n,
        trivial: format!(
            "B = k[Z_2] with trivial braiding; biproduct is the tensor product of dimension {}",
            2 * group.order()
        ),
        witness_count: entries.len(),
        witnesses: entries,
    };
    let rendered = match format {
        Format::Json => to_json(&report)?,
        Format::Text => report.text(),
    };
    emit(out.as_ref(), &rendered)
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
