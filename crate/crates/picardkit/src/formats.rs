//! JSON file formats read and written by the command-line tool.
//!
//! Integer coefficients that do not fit in an `i64` are written as decimal
//! strings; both forms are accepted on input.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use picardkit_core::ffield::{make_field, FieldDesc};
use picardkit_core::galmod::{FiniteLModule, SizeTable};
use picardkit_core::lattice::{self, GLattice, IntMatrix};
use picardkit_core::polysys::{HomIdeal, PolyRing, TermOrder};
use picardkit_core::zeta::ZetaFunction;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub fn big_to_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(c.to_string()),
    }
}

pub fn json_to_big(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| CliError::Invalid(format!("{n} is not an integer"))),
        Value::String(s) => s.parse().map_err(|_| CliError::Invalid(format!("{s:?} is not an integer"))),
        other => Err(CliError::Invalid(format!("{other} is not an integer"))),
    }
}

pub fn poly_to_json(p: &[BigInt]) -> Vec<Value> {
    p.iter().map(big_to_json).collect()
}

pub fn poly_from_json(p: &[Value]) -> Result<Vec<BigInt>, CliError> {
    p.iter().map(json_to_big).collect()
}

pub fn matrix_from_json(m: &[Vec<Value>]) -> Result<IntMatrix, CliError> {
    m.iter().map(|r| poly_from_json(r)).collect()
}

pub fn matrix_to_json(m: &[Vec<BigInt>]) -> Vec<Vec<Value>> {
    m.iter().map(|r| poly_to_json(r)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u64,
    pub e: u32,
    /// Monic modulus, low degree first. Defaults to the first irreducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldDesc, CliError> {
        let f = match &self.modulus {
            Some(m) => FieldDesc::with_modulus(self.p, m.clone()),
            None => make_field(self.p, self.e),
        }
        .map_err(|e| CliError::Invalid(format!("field: {e}")))?;
        if f.e() != self.e {
            return Err(CliError::Invalid(format!("modulus has degree {}, expected {}", f.e(), self.e)));
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct VarietyFlags {
    #[serde(default)]
    pub assume_smooth: bool,
    /// Declares a surface with `b_1 = b_3 = 0`.
    #[serde(default)]
    pub b1b3_zero: bool,
    /// Upper bound on the sum of the Betti numbers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypersurface_degree: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct VarietySpec {
    pub field: FieldSpec,
    pub ambient_dim: usize,
    pub generators: Vec<String>,
    #[serde(default)]
    pub flags: VarietyFlags,
}

impl VarietySpec {
    /// The ideal in `F[x0..x_n]`; generators must be homogeneous.
    pub fn ideal(&self) -> Result<HomIdeal<FieldDesc>, CliError> {
        let f = self.field.build()?;
        let ring = PolyRing::new(f, self.ambient_dim + 1, TermOrder::DegRevLex);
        let gens: Vec<&str> = self.generators.iter().map(|s| s.as_str()).collect();
        HomIdeal::parse(ring, &gens).map_err(|e| CliError::Invalid(format!("generators: {e}")))
    }

    /// Same spec with the generators in canonical printed form.
    pub fn normalized(&self) -> Result<VarietySpec, CliError> {
        let ideal = self.ideal()?;
        let ring = ideal.ring();
        let generators = ideal.generators().iter().map(|g| ring.format(g)).collect();
        Ok(VarietySpec { generators, ..self.clone() })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ZetaDto {
    pub q: u64,
    pub dim: u32,
    pub numerator: Vec<Value>,
    pub denominator: Vec<Value>,
}

impl ZetaDto {
    pub fn from_zeta(z: &ZetaFunction) -> Self {
        ZetaDto { q: z.q, dim: z.dim, numerator: poly_to_json(&z.numerator), denominator: poly_to_json(&z.denominator) }
    }

    pub fn to_zeta(&self) -> Result<ZetaFunction, CliError> {
        let numerator = poly_from_json(&self.numerator)?;
        let denominator = poly_from_json(&self.denominator)?;
        let one = BigInt::from(1);
        if numerator.first() != Some(&one) || denominator.first() != Some(&one) {
            return Err(CliError::Invalid(String::from("zeta numerator and denominator must have constant term 1")));
        }
        Ok(ZetaFunction { q: self.q, dim: self.dim, numerator, denominator })
    }
}

/// A generator of the group acting on the basis cycles: a permutation
/// (image of each index) or an integer matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionGenerator {
    Permutation(Vec<usize>),
    Matrix(Vec<Vec<Value>>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    #[serde(default)]
    pub generators: Vec<ActionGenerator>,
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Candidate {
    pub name: String,
    pub pairing_vector: Vec<Value>,
}

/// Cycles `z_j` given by their intersection numbers against basis cycles `Y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CycleFile {
    /// Names of the cycles in `Y`; one column of `pairings` each.
    pub basis_cycles: Vec<String>,
    /// Row `j` holds `z_j . y` for every `y` in `Y`.
    pub pairings: Vec<Vec<Value>>,
    /// Optional names for the rows of `pairings`; default `z1, z2, ...`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_names: Option<Vec<String>>,
    #[serde(default)]
    pub action: ActionSpec,
    #[serde(default)]
    pub candidates: Vec<Candidate>,
}

impl CycleFile {
    /// All cycles with names and pairing rows: `pairings` first, then candidates.
    pub fn rows(&self) -> Result<(Vec<String>, IntMatrix), CliError> {
        let k = self.basis_cycles.len();
        let mut names = match &self.cycle_names {
            Some(n) if n.len() == self.pairings.len() => n.clone(),
            Some(_) => return Err(CliError::Invalid(String::from("cycleNames and pairings differ in length"))),
            None => (1..=self.pairings.len()).map(|j| format!("z{j}")).collect(),
        };
        let mut rows = matrix_from_json(&self.pairings)?;
        for c in &self.candidates {
            names.push(c.name.clone());
            rows.push(poly_from_json(&c.pairing_vector)?);
        }
        if let Some(r) = rows.iter().position(|r| r.len() != k) {
            return Err(CliError::Invalid(format!("pairing row {} ({}) has {} entries, expected {k}", r + 1, names[r], rows[r].len())));
        }
        Ok((names, rows))
    }

    pub fn y_action(&self) -> Result<GLattice, CliError> {
        let k = self.basis_cycles.len();
        let mut gens = Vec::new();
        for (i, g) in self.action.generators.iter().enumerate() {
            let m = match g {
                ActionGenerator::Permutation(p) => {
                    let mut seen = vec![false; k];
                    if p.len() != k || p.iter().any(|&x| x >= k || std::mem::replace(&mut seen[x], true)) {
                        return Err(CliError::Invalid(format!("generator {i} is not a permutation of {k} cycles")));
                    }
                    lattice::permutation_matrix(p)
                }
                ActionGenerator::Matrix(m) => matrix_from_json(m)?,
            };
            gens.push(m);
        }
        GLattice::new(k, gens, self.action.relations.clone())
            .map(|l| l.with_markers(self.basis_cycles.clone()))
            .map_err(|e| CliError::Invalid(format!("action: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeEntry {
    pub i: u32,
    pub n: u32,
    pub log_ell_size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeTableFile {
    pub ell: u64,
    pub betti: Vec<u64>,
    pub sizes: Vec<SizeEntry>,
}

impl SizeTableFile {
    pub fn table(&self) -> Result<SizeTable, CliError> {
        let mut sizes = BTreeMap::new();
        for e in &self.sizes {
            if e.n == 0 || e.i as usize >= self.betti.len() {
                return Err(CliError::Invalid(format!("size entry (i={}, n={}) out of range", e.i, e.n)));
            }
            if sizes.insert((e.i, e.n), e.log_ell_size).is_some() {
                return Err(CliError::Invalid(format!("duplicate size entry (i={}, n={})", e.i, e.n)));
            }
        }
        Ok(SizeTable { ell: self.ell, betti: self.betti.clone(), sizes })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ModuleSpec {
    pub n: u32,
    /// Exponents `e_j` of `Z/ℓ^{e_j}`, each at most `n`.
    pub invariant_factors: Vec<u32>,
    pub actions: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ModuleFamilyFile {
    pub ell: u64,
    pub t: u32,
    pub modules: Vec<ModuleSpec>,
    /// The level-`ℓ'` module when it is not part of `modules`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_module: Option<ModuleSpec>,
}

impl ModuleFamilyFile {
    fn build(&self, m: &ModuleSpec) -> Result<FiniteLModule, CliError> {
        FiniteLModule::new(self.ell, m.n, m.invariant_factors.clone(), m.actions.clone())
            .map_err(|e| CliError::Invalid(format!("module at level {}: {e}", m.n)))
    }

    pub fn modules(&self) -> Result<(Vec<FiniteLModule>, Option<FiniteLModule>), CliError> {
        let fam = self.modules.iter().map(|m| self.build(m)).collect::<Result<Vec<_>, _>>()?;
        let level = self.level_module.as_ref().map(|m| self.build(m)).transpose()?;
        Ok((fam, level))
    }
}

/// Parse JSON with a message naming the file kind.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("{what}: {e}")))
}
