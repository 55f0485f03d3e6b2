//! Report types and their deterministic renderings.
//!
//! JSON is the machine contract: field order is fixed by the struct
//! definitions, all collections are emitted in a canonical order, and no
//! volatile data (timestamps, paths, durations) ever enters a report, so
//! identical invocations produce byte-identical output. The text format is
//! a human summary of the same data.

use hopfforge::algebra::AxiomReport;
use hopfforge::yd::Rank2WitnessJson;
use serde::{Deserialize, Serialize};

/// Condensed verification outcome: one line per axiom family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationSummary {
    /// True when every check passed on every tuple.
    pub passed: bool,
    /// Per-check outcomes, in check order.
    pub checks: Vec<CheckLine>,
}

/// One verified axiom family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckLine {
    /// Name of the axiom family.
    pub name: String,
    /// Whether it held on every tuple.
    pub passed: bool,
    /// Number of failing tuples (0 when passed).
    pub failures: usize,
}

impl From<&AxiomReport> for VerificationSummary {
    fn from(report: &AxiomReport) -> Self {
        VerificationSummary {
            passed: report.passed(),
            checks: report
                .checks
                .iter()
                .map(|c| CheckLine {
                    name: c.name.clone(),
                    passed: c.passed(),
                    failures: c.total_failures,
                })
                .collect(),
        }
    }
}

impl VerificationSummary {
    fn text_line(&self) -> String {
        if self.passed {
            format!("verification: pass ({} checks)", self.checks.len())
        } else {
            let failing: Vec<&str> = self
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.as_str())
                .collect();
            format!("verification: FAIL ({})", failing.join(", "))
        }
    }
}

/// Summary printed by `build`.
#[derive(Serialize, Deserialize)]
pub struct BuildReport {
    /// Example name or `custom`.
    pub source: String,
    pub dim: usize,
    pub conductor: u64,
    /// Order of the antipode as a linear map.
    pub antipode_order: u64,
    pub verification: VerificationSummary,
}

impl BuildReport {
    pub fn text(&self) -> String {
        format!(
            "instance: {}\ndim: {}\nconductor: {}\nantipode order: {}\n{}\n",
            self.source,
            self.dim,
            self.conductor,
            self.antipode_order,
            self.verification.text_line()
        )
    }
}

/// One coalgebra block class: comatrix size and multiplicity.
#[derive(Serialize, Deserialize)]
pub struct CoalgebraClass {
    pub r: u64,
    pub mult: u64,
}

/// One algebra block class: matrix size and multiplicity.
#[derive(Serialize, Deserialize)]
pub struct AlgebraClass {
    pub n: u64,
    pub mult: u64,
}

/// Grouplike group summary.
#[derive(Serialize, Deserialize)]
pub struct GrouplikeSummary {
    /// Order of the group of grouplike elements.
    pub order: usize,
    /// Cyclic-factor invariants when that group is abelian.
    pub invariants: Option<Vec<u64>>,
}

/// Report emitted by `decompose`.
#[derive(Serialize, Deserialize)]
pub struct DecomposeReport {
    pub dim: usize,
    pub conductor: u64,
    pub verification: VerificationSummary,
    /// Simple subcoalgebra classes, ascending by size.
    pub coalgebra: Vec<CoalgebraClass>,
    /// Matrix block classes, ascending by size.
    pub algebra: Vec<AlgebraClass>,
    /// Which route produced the algebra decomposition: `smash` for the
    /// idempotent matrix-unit construction, `wedderburn` for the
    /// trace-form fallback.
    pub algebra_route: String,
    /// Whether an independent oracle re-derived the algebra blocks.
    pub oracle_checked: bool,
    pub grouplikes: GrouplikeSummary,
}

impl DecomposeReport {
    pub fn text(&self) -> String {
        let co: Vec<String> = self
            .coalgebra
            .iter()
            .map(|c| format!("(r={})x{}", c.r, c.mult))
            .collect();
        let al: Vec<String> = self
            .algebra
            .iter()
            .map(|c| format!("(n={})x{}", c.n, c.mult))
            .collect();
        let inv = match &self.grouplikes.invariants {
            Some(v) => format!(
                "Z{}",
                v.iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(" x Z")
            ),
            None => "nonabelian".to_string(),
        };
        format!(
            "dim: {}\nconductor: {}\n{}\ncoalgebra: {}\nalgebra [{}{}]: {}\ngrouplikes: order {} ({})\n",
            self.dim,
            self.conductor,
            self.verification.text_line(),
            co.join(" "),
            self.algebra_route,
            if self.oracle_checked { ", oracle-checked" } else { "" },
            al.join(" "),
            self.grouplikes.order,
            inv
        )
    }
}

/// One enumerated Hopf subalgebra.
#[derive(Serialize, Deserialize)]
pub struct SubalgebraEntry {
    pub dim: usize,
    /// The pair basis as `[b, g]` index pairs.
    pub pairs: Vec<(usize, usize)>,
    pub normal: bool,
    pub is_lower_bound_equal: bool,
}

/// Outcome of the unique-normal verification, when the instance is in its
/// scope.
#[derive(Serialize, Deserialize)]
pub struct UniqueNormalSummary {
    /// Dimensions of the normal Hopf subalgebras (exactly three).
    pub normal_dims: Vec<usize>,
}

/// Report emitted by `subalgebras`.
#[derive(Serialize, Deserialize)]
pub struct SubalgebrasReport {
    pub dim: usize,
    pub conductor: u64,
    pub verification: VerificationSummary,
    /// Number of entries listed (after any `--normal-only` filter).
    pub count: usize,
    pub subalgebras: Vec<SubalgebraEntry>,
    /// Present when the unique-normal hypotheses hold for the instance.
    pub unique_normal: Option<UniqueNormalSummary>,
}

impl SubalgebrasReport {
    pub fn text(&self) -> String {
        let mut out = format!(
            "dim: {}\nconductor: {}\n{}\nsubalgebras: {}\n",
            self.dim,
            self.conductor,
            self.verification.text_line(),
            self.count
        );
        for s in &self.subalgebras {
            out.push_str(&format!(
                "  dim {:>3}  normal {}  lower-bound-equal {}\n",
                s.dim, s.normal, s.is_lower_bound_equal
            ));
        }
        if let Some(u) = &self.unique_normal {
            out.push_str(&format!(
                "unique-normal verified: dims {:?}\n",
                u.normal_dims
            ));
        }
        out
    }
}

/// Verification data for one rank-2 biproduct built from a witness.
#[derive(Serialize, Deserialize)]
pub struct WitnessBiproduct {
    pub dim: usize,
    pub verification: VerificationSummary,
    pub antipode_order: u64,
}

/// One rank-2 witness with its optional biproduct check.
#[derive(Serialize, Deserialize)]
pub struct WitnessEntry {
    #[serde(flatten)]
    pub witness: Rank2WitnessJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub biproduct: Option<WitnessBiproduct>,
}

/// Report emitted by `rank2`.
#[derive(Serialize, Deserialize)]
pub struct Rank2Report {
    pub group: String,
    pub conductor: u64,
    /// The always-available solution: the group algebra of the order-2
    /// group as the rank-2 tensorand, giving the tensor-product biproduct.
    pub trivial: String,
    /// Number of non-trivial witnesses.
    pub witness_count: usize,
    pub witnesses: Vec<WitnessEntry>,
}

impl Rank2Report {
    pub fn text(&self) -> String {
        let mut out = format!(
            "group: {}\nconductor: {}\ntrivial solution: {}\nnontrivial witnesses: {}\n",
            self.group, self.conductor, self.trivial, self.witness_count
        );
        for w in &self.witnesses {
            let bi = match &w.biproduct {
                Some(b) => format!(
                    "  biproduct dim {} verified {} antipode order {}",
                    b.dim, b.verification.passed, b.antipode_order
                ),
                None => String::new(),
            };
            out.push_str(&format!(
                "  y = {} valid = {}{}\n",
                w.witness.y, w.witness.valid, bi
            ));
        }
        out
    }
}
