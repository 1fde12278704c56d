//! The JSON report printed by every subcommand. One schema with optional
//! sections; absent sections are omitted.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "picardkit.report/1";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema: String,
    pub command: String,
    /// SHA-256 over the command, its parameters and the normalized inputs.
    pub inputs_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variety: Option<VarietyInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<CountsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<ZetaSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<BettiSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tate: Option<Vec<TateSection>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<RankSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<TorsionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub galois_rank: Option<GaloisRankSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dovetail: Option<DovetailSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn new(command: &str, inputs_digest: String) -> Self {
        Report { schema: SCHEMA.to_string(), command: command.to_string(), inputs_digest, ..Default::default() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VarietyInfo {
    pub variety_hash: String,
    pub ambient_dim: usize,
    /// Projective dimension of the scheme; `-1` when empty.
    pub dimension: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u64>,
    /// Result of the Jacobian check, when it was run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smooth: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CountsSection {
    pub q: u64,
    /// `N_1, N_2, ...`
    pub values: Vec<u64>,
    pub from_cache: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub factor: Vec<Value>,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Factored {
    pub numerator: Vec<FactorEntry>,
    pub denominator: Vec<FactorEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FunctionalEquationDto {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    pub chi: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ZetaSection {
    pub q: u64,
    pub dim: u32,
    pub numerator: Vec<Value>,
    pub denominator: Vec<Value>,
    pub display: String,
    pub factored: Factored,
    /// `"pade"` or `"surface"`.
    pub method: String,
    pub degree_budget: u32,
    /// `"user"` or `"hypersurface"`.
    pub budget_source: String,
    pub functional_equation: FunctionalEquationDto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightEntry {
    pub weight: u32,
    pub poly: Vec<Value>,
    pub factors: Vec<FactorEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BettiSection {
    pub betti: Vec<u64>,
    pub euler_characteristic: i64,
    pub weights: Vec<WeightEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CyclotomicEntry {
    pub m: u64,
    pub phi: u64,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TateSection {
    pub p: u32,
    pub v_mu: u64,
    pub b_2p: u64,
    pub per_factor: Vec<CyclotomicEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MinorDto {
    pub labels: Vec<String>,
    pub partners: Vec<String>,
    pub matrix: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankSection {
    pub p: u32,
    /// `"halted"` or `"running"`.
    pub status: String,
    pub lower: u64,
    pub upper: u64,
    pub history: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<MinorDto>,
    /// Rank of `N`, the saturated lattice of supplied cycles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_rank: Option<usize>,
    /// Rank of the invariants `N^G`; the rank over the base field once halted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_basis: Option<Vec<Vec<Value>>>,
    /// `N`-coordinates of every named cycle.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub name: String,
    pub coordinates: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TorsionDegree {
    pub i: u32,
    /// Exponents `e` of the cyclic factors `Z/ℓ^e`.
    pub exponents: Vec<u32>,
    pub log_order: u64,
    pub complete: bool,
    /// When incomplete: `[count, minExponent]` of further unresolved factors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unresolved: Option<(u64, u32)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TorsionSection {
    pub ell: u64,
    pub levels: u32,
    pub degrees: Vec<TorsionDegree>,
    /// Whether the recovered groups reproduce every size in the table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_check: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelBound {
    pub n: u32,
    pub log_invariants: u64,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GaloisRankSection {
    pub ell: u64,
    pub t: u32,
    pub levels: Vec<LevelBound>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HaltEntry {
    pub task_id: usize,
    pub value: u64,
    pub round: u32,
    /// Global quantum index at which the task halted (1-based).
    pub at_quantum: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FailureEntry {
    pub task_id: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DovetailSection {
    pub tasks: usize,
    pub total_quanta: u64,
    pub rounds: u32,
    pub halts: Vec<HaltEntry>,
    pub failures: Vec<FailureEntry>,
    /// Running maximum of the halted values, one entry per halt.
    pub running_max: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Timing {
    pub elapsed_ms: u128,
}
