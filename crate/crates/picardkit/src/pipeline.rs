//! One function per subcommand. Each returns report sections built only
//! from values computed by `picardkit-core`.

use std::path::{Path, PathBuf};
use std::time::Duration;

use num_bigint::BigInt;
use num_traits::Signed;
use picardkit_core::counting::{
    canonical_description, count_tower, CountCache, CountOptions, CountSeries, MemoryCache, DEFAULT_BUDGET,
};
use picardkit_core::ffield::FieldDesc;
use picardkit_core::galmod::{kummer_size_check, rank_upper_bounds, torsion_from_sizes};
use picardkit_core::lattice::{build_n, invariants_rank, AlgorithmB, PipelineStatus, RankCertificate, Witness};
use picardkit_core::polysys::{dimension_degree, smoothness_check, HomIdeal};
use picardkit_core::weil::{
    betti_numbers, classify_weights, dim_v_mu, euler_characteristic, factor_z_poly, DEFAULT_PRECISION_BITS,
};
use picardkit_core::zeta::{
    betti_budget, functional_equation_check, reconstruct, reconstruct_surface, BudgetDescriptor, BudgetSource,
    DegreeBudget, ZetaFunction,
};
use picardkit_core::zpoly::ZPoly;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::cache::{variety_hash, DiskCache};
use crate::checkpoint::{minor_dto, Checkpoint};
use crate::error::CliError;
use crate::exec::RayonExecutor;
use crate::formats::{
    big_to_json, from_json, matrix_to_json, poly_to_json, CycleFile, ModuleFamilyFile, SizeTableFile, VarietySpec,
    ZetaDto,
};
use crate::report::{
    BettiSection, ClassEntry, CountsSection, CyclotomicEntry, FactorEntry, Factored, FunctionalEquationDto,
    GaloisRankSection, LevelBound, RankSection, TateSection, TorsionDegree, TorsionSection, VarietyInfo, WeightEntry,
    ZetaSection,
};

/// SHA-256 over the parts, separated by NUL bytes.
pub fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

#[derive(Clone, Debug)]
pub struct Settings {
    /// Already resolved against the environment.
    pub cache_dir: Option<PathBuf>,
    /// Enumerated assignments allowed per point count.
    pub budget: u64,
    /// `0` for the rayon default.
    pub threads: usize,
    pub precision_bits: u64,
    pub heartbeat: Option<Duration>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            cache_dir: None,
            budget: DEFAULT_BUDGET,
            threads: 0,
            precision_bits: DEFAULT_PRECISION_BITS,
            heartbeat: None,
        }
    }
}

/// A parsed variety with the data every command needs.
pub struct Variety {
    pub spec: VarietySpec,
    pub ideal: HomIdeal<FieldDesc>,
    pub hash: String,
    pub dim: i64,
    pub degree: Option<u64>,
}

impl Variety {
    pub fn load(spec: &VarietySpec) -> Result<Self, CliError> {
        let spec = spec.normalized()?;
        let ideal = spec.ideal()?;
        let hash = variety_hash(&canonical_description(&ideal));
        let dd = dimension_degree(&ideal);
        Ok(Variety { spec, ideal, hash, dim: dd.dim, degree: dd.degree })
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Self::load(&from_json::<VarietySpec>(text, "variety spec")?)
    }

    /// Canonical JSON of the normalized spec, for digests.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&self.spec).expect("spec serializes")
    }

    pub fn info(&self, smooth: Option<bool>) -> VarietyInfo {
        VarietyInfo {
            variety_hash: self.hash.clone(),
            ambient_dim: self.spec.ambient_dim,
            dimension: self.dim,
            degree: self.degree,
            smooth,
        }
    }
}

pub struct ZetaOutcome {
    pub series: CountSeries,
    pub from_cache: usize,
    pub zeta: ZetaFunction,
    pub method: &'static str,
    pub budget: DegreeBudget,
    pub smooth: Option<bool>,
}

pub struct Session {
    pub settings: Settings,
    disk: Option<DiskCache>,
    memory: MemoryCache,
    exec: RayonExecutor,
}

impl Session {
    pub fn new(settings: Settings) -> Result<Self, CliError> {
        let disk = match &settings.cache_dir {
            Some(d) => Some(DiskCache::open(d)?),
            None => None,
        };
        let exec = RayonExecutor::new(settings.threads, settings.heartbeat)
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
        Ok(Session { settings, disk, memory: MemoryCache::default(), exec })
    }

    fn cache(&mut self) -> &mut dyn CountCache {
        match self.disk.as_mut() {
            Some(d) => d,
            None => &mut self.memory,
        }
    }

    /// `N_1..N_n`, and how many of them came from the cache.
    pub fn counts(&mut self, v: &Variety, n: u32) -> Result<(CountSeries, usize), CliError> {
        let opts = CountOptions { budget: self.settings.budget, ..CountOptions::default() };
        let from_cache = (1..=n).filter(|&k| self.cache().get(&v.hash, k).is_some()).count();
        let exec = &self.exec;
        let cache: &mut dyn CountCache = match self.disk.as_mut() {
            Some(d) => d,
            None => &mut self.memory,
        };
        let series = count_tower(&v.ideal, n, &v.hash, Some(cache), &opts, exec).map_err(|e| {
            let done = e.completed.len();
            match CliError::from(e.source) {
                CliError::Budget(m) => CliError::Budget(format!("{m} (completed N_1..N_{done})")),
                other => other,
            }
        })?;
        series.validate(v.spec.ambient_dim as u32)?;
        Ok((series, from_cache))
    }

    /// The Betti budget, running the smoothness check when the hypersurface
    /// formula is requested without `assumeSmooth`.
    pub fn degree_budget(&self, v: &Variety) -> Result<(DegreeBudget, Option<bool>), CliError> {
        let flags = &v.spec.flags;
        let mut smooth = None;
        let mut hypersurface = None;
        if let Some(d) = flags.hypersurface_degree {
            let gens = v.ideal.generators();
            if gens.len() != 1 || gens[0].total_degree() != Some(d) {
                return Err(CliError::Invalid(format!("hypersurfaceDegree {d} needs exactly one generator of that degree")));
            }
            if v.spec.ambient_dim < 2 {
                return Err(CliError::Invalid(String::from("hypersurfaceDegree needs ambientDim >= 2")));
            }
            if !flags.assume_smooth {
                let s = smoothness_check(&v.ideal);
                smooth = Some(s);
                if !s {
                    return Err(CliError::Invalid(String::from(
                        "the hypersurface is singular; the Betti formula for smooth hypersurfaces does not apply",
                    )));
                }
            }
            hypersurface = Some((d, v.spec.ambient_dim as u32 - 1));
        }
        let desc = BudgetDescriptor { user_budget: flags.budget, hypersurface };
        Ok((betti_budget(&desc)?, smooth))
    }

    pub fn zeta(&mut self, v: &Variety) -> Result<ZetaOutcome, CliError> {
        if v.dim < 0 {
            return Err(CliError::Invalid(String::from("the variety is empty")));
        }
        let dim = v.dim as u32;
        let (budget, smooth) = self.degree_budget(v)?;
        if v.spec.flags.b1b3_zero {
            if dim != 2 {
                return Err(CliError::Invalid(format!("b1b3Zero declares a surface, but the dimension is {dim}")));
            }
            if budget.b < 2 {
                return Err(CliError::Invalid(String::from("a surface has Betti sum at least 2")));
            }
            let b2 = budget.b - 2;
            let start = b2.div_ceil(2).max(1);
            for m in start..=b2.max(1) {
                let (series, from_cache) = self.counts(v, m)?;
                let sz = reconstruct_surface(&series, b2, self.settings.precision_bits)?;
                if let Some(z) = sz.unique() {
                    let zeta = z.clone();
                    return Ok(ZetaOutcome { series, from_cache, zeta, method: "surface", budget, smooth });
                }
            }
            return Err(CliError::Undecided(format!(
                "both signs of the functional equation fit N_1..N_{}",
                b2.max(1)
            )));
        }
        let (series, from_cache) = self.counts(v, 2 * budget.b)?;
        let zeta = reconstruct(&series, &budget, dim)?;
        Ok(ZetaOutcome { series, from_cache, zeta, method: "pade", budget, smooth })
    }
}

pub fn counts_section(series: &CountSeries, from_cache: usize) -> CountsSection {
    CountsSection { q: series.q, values: series.counts.clone(), from_cache }
}

/// Irreducible factors with constant term `+1` (every factor of a
/// polynomial with constant term 1 has constant term ±1).
pub fn factor_entries(p: &[BigInt]) -> Vec<FactorEntry> {
    let fac = factor_z_poly(p);
    let mut out: Vec<FactorEntry> = fac
        .factors
        .iter()
        .map(|(f, e)| {
            let f: ZPoly = if f[0].is_negative() { f.iter().map(|c| -c).collect() } else { f.clone() };
            FactorEntry { factor: poly_to_json(&f), multiplicity: *e }
        })
        .collect();
    out.sort_by_key(|f| (f.factor.len(), serde_json::to_string(&f.factor).unwrap_or_default()));
    out
}

pub fn zeta_section(o: &ZetaOutcome) -> ZetaSection {
    let z = &o.zeta;
    let fe = functional_equation_check(z);
    ZetaSection {
        q: z.q,
        dim: z.dim,
        numerator: poly_to_json(&z.numerator),
        denominator: poly_to_json(&z.denominator),
        display: z.display(),
        factored: Factored { numerator: factor_entries(&z.numerator), denominator: factor_entries(&z.denominator) },
        method: o.method.to_string(),
        degree_budget: o.budget.b,
        budget_source: match o.budget.source {
            BudgetSource::UserConfig => "user",
            BudgetSource::HypersurfaceFormula => "hypersurface",
        }
        .to_string(),
        functional_equation: FunctionalEquationDto { holds: fe.holds, sign: fe.sign, chi: fe.chi },
    }
}

pub fn betti_section(z: &ZetaFunction, bits: u64) -> Result<BettiSection, CliError> {
    let pieces = classify_weights(z, bits)?;
    let betti = betti_numbers(z, bits)?;
    let weights = pieces
        .iter()
        .map(|w| WeightEntry {
            weight: w.weight,
            poly: poly_to_json(&w.poly),
            factors: w.factors.iter().map(|(f, e)| FactorEntry { factor: poly_to_json(f), multiplicity: *e }).collect(),
        })
        .collect();
    Ok(BettiSection { betti, euler_characteristic: euler_characteristic(&pieces), weights })
}

pub fn tate_section(z: &ZetaFunction, p: u32, bits: u64) -> Result<TateSection, CliError> {
    let t = dim_v_mu(z, p, bits)?;
    Ok(TateSection {
        p: t.p,
        v_mu: t.v_mu,
        b_2p: t.b_2p,
        per_factor: t
            .per_factor
            .iter()
            .map(|c| CyclotomicEntry { m: c.m, phi: c.phi, multiplicity: c.multiplicity })
            .collect(),
    })
}

/// A zeta function from a file holding a bare zeta object or a report
/// with a `zeta` section.
pub fn zeta_from_json(text: &str) -> Result<ZetaFunction, CliError> {
    let v: Value = from_json(text, "zeta file")?;
    let inner = match v.get("zeta") {
        Some(z) => z.clone(),
        None => v,
    };
    let dto: ZetaDto = serde_json::from_value(inner).map_err(|e| CliError::Invalid(format!("zeta file: {e}")))?;
    dto.to_zeta()
}

pub fn zeta_digest_text(z: &ZetaFunction) -> String {
    serde_json::to_string(&ZetaDto::from_zeta(z)).expect("zeta serializes")
}

/// Feed lower-bound certificates from the cycle data into the pipeline
/// (one per prefix of the cycle list) until it halts at the Tate bound.
pub fn rank(
    z: &ZetaFunction,
    cycles: &CycleFile,
    p: u32,
    bits: u64,
    inputs_digest: &str,
    checkpoint: Option<&Path>,
) -> Result<RankSection, CliError> {
    let bound = dim_v_mu(z, p, bits)?;
    let (names, rows) = cycles.rows()?;
    let y_action = cycles.y_action()?;
    let mut state = match checkpoint.map(Checkpoint::load).transpose()?.flatten() {
        Some(c) if c.inputs_digest != inputs_digest => {
            return Err(CliError::Invalid(String::from("checkpoint belongs to different inputs")))
        }
        Some(c) => c.to_state()?,
        None => AlgorithmB::new(p, bound.v_mu, inputs_digest.to_string()),
    };
    if state.v_mu != bound.v_mu || state.p != p {
        return Err(CliError::Invalid(String::from("checkpoint disagrees with the Tate bound")));
    }
    if let Some(RankCertificate { witness: Witness::Minor { labels, partners, matrix }, .. }) = &state.best {
        minor_matches(&names, &rows, &cycles.basis_cycles, labels, partners, matrix)?;
    }
    let mut status = state.status();
    for k in 1..=rows.len() {
        if matches!(status, PipelineStatus::Halted { .. }) {
            break;
        }
        let cert = RankCertificate::lower_from(&rows[..k], &names[..k], &cycles.basis_cycles);
        status = state.offer(cert)?;
    }
    if let Some(path) = checkpoint {
        Checkpoint::from_state(&state).save(path)?;
    }
    let halted = matches!(status, PipelineStatus::Halted { .. });
    let mut section = RankSection {
        p,
        status: if halted { "halted" } else { "running" }.to_string(),
        lower: state.lower(),
        upper: state.v_mu,
        history: state.history.clone(),
        certificate: state.best.as_ref().and_then(minor_dto),
        lattice_rank: None,
        invariants_rank: None,
        lattice_basis: None,
        classes: Vec::new(),
    };
    if halted && !rows.is_empty() {
        let n = build_n(&rows, &y_action, Some(state.v_mu as usize))?;
        section.lattice_rank = Some(n.lattice.rank);
        section.invariants_rank = Some(invariants_rank(&n.lattice));
        section.lattice_basis = Some(matrix_to_json(&n.basis));
        for (name, row) in names.iter().zip(&rows) {
            let c = n.class_map(row)?;
            section.classes.push(ClassEntry { name: name.clone(), coordinates: c.iter().map(big_to_json).collect() });
        }
    }
    Ok(section)
}

/// A stored minor must be a submatrix of the supplied pairings.
fn minor_matches(
    names: &[String],
    rows: &[Vec<BigInt>],
    cols: &[String],
    labels: &[String],
    partners: &[String],
    matrix: &[Vec<BigInt>],
) -> Result<(), CliError> {
    let bad = |what: &str| CliError::Invalid(format!("checkpoint certificate {what}"));
    for (a, label) in labels.iter().enumerate() {
        let i = names.iter().position(|n| n == label).ok_or_else(|| bad(&format!("names unknown cycle {label}")))?;
        for (b, partner) in partners.iter().enumerate() {
            let j = cols.iter().position(|n| n == partner).ok_or_else(|| bad(&format!("names unknown cycle {partner}")))?;
            if rows[i][j] != matrix[a][b] {
                return Err(bad(&format!("disagrees with the pairing {label} . {partner}")));
            }
        }
    }
    Ok(())
}

pub fn torsion(file: &SizeTableFile, degree: Option<u32>) -> Result<TorsionSection, CliError> {
    let table = file.table()?;
    let degrees: Vec<u32> = match degree {
        Some(i) => vec![i],
        None => (0..table.betti.len() as u32).collect(),
    };
    let mut out = Vec::new();
    for &i in &degrees {
        let r = torsion_from_sizes(&table, i)?;
        out.push(TorsionDegree {
            i,
            exponents: r.group.exponents.clone(),
            log_order: r.group.log_order,
            complete: r.complete,
            unresolved: r.unresolved,
        });
    }
    let size_check = if degree.is_none() && out.iter().all(|d| d.complete) {
        let tors: Vec<Vec<u32>> = out.iter().map(|d| d.exponents.clone()).collect();
        Some(kummer_size_check(&table, &table.betti, &tors))
    } else {
        None
    };
    Ok(TorsionSection { ell: table.ell, levels: table.levels(), degrees: out, size_check })
}

pub fn galois_rank(file: &ModuleFamilyFile) -> Result<GaloisRankSection, CliError> {
    let (family, level) = file.modules()?;
    let rb = rank_upper_bounds(&family, file.t, level.as_ref())?;
    Ok(GaloisRankSection {
        ell: file.ell,
        t: file.t,
        levels: rb.levels.iter().map(|&(n, log, u)| LevelBound { n, log_invariants: log, bound: u }).collect(),
        min: rb.min,
    })
}
