//! Finite Galois modules over `Z/ℓ^n`: fixed points, the rank bounds
//! `floor(log #T^G / (n - t))`, torsion from cohomology sizes, and the
//! congruence test behind Minkowski's lemma.
//!
//! A module is `⊕ Z/ℓ^{e_j}` with one integer matrix per group generator.
//! Fixed-point sizes are computed by diagonal reduction over `Z/ℓ^n`, where
//! every entry is a unit times a power of ℓ, so an entry of least valuation
//! divides its whole row and column.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use thiserror::Error;

use crate::arith::is_prime;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GalmodError {
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("ℓ^n does not fit in 62 bits")]
    ModulusTooLarge,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("no module at level {0} to check the trivial-action hypothesis")]
    MissingLevel(u32),
    #[error("inconsistent size table: {0}")]
    InconsistentTable(String),
}

/// `ℓ` for odd `ℓ`, `4` for `ℓ = 2`.
pub fn lprime(ell: u64) -> u64 {
    if ell == 2 {
        4
    } else {
        ell
    }
}

/// Exponent `k` with `ℓ^k = lprime(ℓ)`.
pub fn lprime_level(ell: u64) -> u32 {
    if ell == 2 {
        2
    } else {
        1
    }
}

fn modulus(ell: u64, n: u32) -> Result<i128, GalmodError> {
    let mut m: i128 = 1;
    for _ in 0..n {
        m *= ell as i128;
        if m > (1i128 << 62) {
            return Err(GalmodError::ModulusTooLarge);
        }
    }
    Ok(m)
}

fn val(mut x: i128, ell: i128, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % ell == 0 && v < cap {
        x /= ell;
        v += 1;
    }
    v
}

fn inv_mod(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m)
}

/// `log_ℓ #{x in (Z/ℓ^n)^k : A x = 0}`.
pub fn kernel_log_size(a: &[Vec<i128>], k: usize, ell: u64, n: u32) -> Result<u64, GalmodError> {
    let m = modulus(ell, n)?;
    let l = ell as i128;
    let mut a: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|x| x.rem_euclid(m)).collect()).collect();
    let rows = a.len();
    let mut cols_left: Vec<usize> = (0..k).collect();
    let mut rows_left: Vec<usize> = (0..rows).collect();
    let mut log = 0u64;
    loop {
        // entry of least valuation
        let mut best: Option<(u32, usize, usize)> = None;
        for &i in &rows_left {
            for &j in &cols_left {
                let v = val(a[i][j], l, n);
                if v < n && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        let unit = a[pi][pj] / l.pow(v);
        let uinv = inv_mod(unit, m);
        // clear the other rows in column pj
        for &i in &rows_left {
            if i == pi || a[i][pj] == 0 {
                continue;
            }
            let f = (a[i][pj] / l.pow(v)) % m * uinv % m;
            for &j in &cols_left {
                a[i][j] = (a[i][j] - f * a[pi][j]).rem_euclid(m);
            }
        }
        // column operations do not change the kernel size
        log += v as u64;
        rows_left.retain(|&i| i != pi);
        cols_left.retain(|&j| j != pj);
    }
    log += n as u64 * cols_left.len() as u64;
    Ok(log)
}

/// `⊕ Z/ℓ^{e_j}` with a finite group acting through integer matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLModule {
    pub ell: u64,
    pub n: u32,
    /// Exponents `e_1 >= e_2 >= ...`, each at most `n`.
    pub invariant_factors: Vec<u32>,
    pub actions: Vec<Vec<Vec<i64>>>,
}

/// Order and invariant factors of a finite abelian ℓ-group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LGroup {
    pub ell: u64,
    pub log_order: u64,
    /// Exponents, largest first.
    pub exponents: Vec<u32>,
}

impl FiniteLModule {
    pub fn new(ell: u64, n: u32, invariant_factors: Vec<u32>, actions: Vec<Vec<Vec<i64>>>) -> Result<Self, GalmodError> {
        let md = FiniteLModule { ell, n, invariant_factors, actions };
        md.validate()?;
        Ok(md)
    }

    /// `(Z/ℓ^n)^rank` with the given action.
    pub fn free(ell: u64, n: u32, rank: usize, actions: Vec<Vec<Vec<i64>>>) -> Result<Self, GalmodError> {
        Self::new(ell, n, vec![n; rank], actions)
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn log_order(&self) -> u64 {
        self.invariant_factors.iter().map(|&e| e as u64).sum()
    }

    pub fn validate(&self) -> Result<(), GalmodError> {
        if !is_prime(self.ell) {
            return Err(GalmodError::InvalidModule(format!("{} is not prime", self.ell)));
        }
        let m = modulus(self.ell, self.n)?;
        let k = self.rank();
        let e = &self.invariant_factors;
        if e.windows(2).any(|w| w[0] < w[1]) || e.iter().any(|&x| x > self.n) {
            return Err(GalmodError::InvalidModule(String::from("exponents must be nonincreasing and at most n")));
        }
        let l = self.ell as i128;
        for (g, mat) in self.actions.iter().enumerate() {
            if mat.len() != k || mat.iter().any(|r| r.len() != k) {
                return Err(GalmodError::InvalidModule(format!("action {g} is not {k}x{k}")));
            }
            for i in 0..k {
                for j in 0..k {
                    let need = e[i].saturating_sub(e[j]);
                    if (mat[i][j] as i128).rem_euclid(m) % l.pow(need) != 0 {
                        return Err(GalmodError::InvalidModule(format!(
                            "action {g} entry ({i},{j}) does not respect the relations"
                        )));
                    }
                }
            }
            // the reduction mod ℓ is block triangular; invertible iff det mod ℓ is a unit
            if det_mod_prime(mat, self.ell) == 0 {
                return Err(GalmodError::InvalidModule(format!("action {g} is not invertible mod ℓ")));
            }
        }
        Ok(())
    }

    /// Rows over `Z/ℓ^n` cutting out the fixed points, plus optional
    /// `ℓ^m`-torsion constraints, in coordinates where `x_j` is read mod `ℓ^{e_j}`.
    fn fixed_point_rows(&self, torsion_level: Option<u32>) -> Vec<Vec<i128>> {
        let k = self.rank();
        let l = self.ell as i128;
        let n = self.n;
        let e = &self.invariant_factors;
        let mut rows = Vec::new();
        for mat in &self.actions {
            for i in 0..k {
                // ℓ^{n - e_i} * ((M - I) x)_i ≡ 0 mod ℓ^n
                let scale = l.pow(n - e[i]);
                rows.push(
                    (0..k)
                        .map(|j| {
                            let d = mat[i][j] as i128 - if i == j { 1 } else { 0 };
                            d * scale
                        })
                        .collect(),
                );
            }
        }
        if let Some(m) = torsion_level {
            for j in 0..k {
                let mut row = vec![0i128; k];
                // ℓ^m x_j ≡ 0 mod ℓ^{e_j}
                let shift = (n - e[j]) + m;
                row[j] = if shift >= n { 0 } else { l.pow(shift) };
                rows.push(row);
            }
        }
        rows
    }

    fn log_fixed(&self, torsion_level: Option<u32>) -> Result<u64, GalmodError> {
        let rows = self.fixed_point_rows(torsion_level);
        let s = kernel_log_size(&rows, self.rank(), self.ell, self.n)?;
        // lifts differing by ⊕ ℓ^{e_j} Z/ℓ^n represent the same element
        let k_log: u64 = self.invariant_factors.iter().map(|&e| (self.n - e) as u64).sum();
        Ok(s - k_log)
    }

    /// `T^G`: its order and invariant factors.
    pub fn invariants(&self) -> Result<LGroup, GalmodError> {
        let total = self.log_fixed(None)?;
        // c_m = #{exponents >= m} = log #H[ℓ^m] - log #H[ℓ^{m-1}]
        let mut prev = 0u64;
        let mut at_least = Vec::new();
        for m in 1..=self.n {
            let cur = self.log_fixed(Some(m))?;
            at_least.push(cur - prev);
            prev = cur;
        }
        let mut exponents = Vec::new();
        for m in (1..=self.n as usize).rev() {
            let here = at_least[m - 1] - at_least.get(m).copied().unwrap_or(0);
            for _ in 0..here {
                exponents.push(m as u32);
            }
        }
        debug_assert_eq!(exponents.iter().map(|&e| e as u64).sum::<u64>(), total);
        Ok(LGroup { ell: self.ell, log_order: total, exponents })
    }

    /// True if every generator acts as the identity.
    pub fn acts_trivially(&self) -> bool {
        let l = self.ell as i128;
        let e = &self.invariant_factors;
        self.actions.iter().all(|mat| {
            (0..self.rank()).all(|i| {
                (0..self.rank()).all(|j| {
                    let d = mat[i][j] as i128 - if i == j { 1 } else { 0 };
                    d.rem_euclid(l.pow(e[i])) == 0
                })
            })
        })
    }
}

fn det_mod_prime(mat: &[Vec<i64>], p: u64) -> u64 {
    let p = p as i128;
    let mut a: Vec<Vec<i128>> = mat.iter().map(|r| r.iter().map(|&x| (x as i128).rem_euclid(p)).collect()).collect();
    let k = a.len();
    let mut det: i128 = 1;
    for c in 0..k {
        let Some(piv) = (c..k).find(|&r| a[r][c] != 0) else { return 0 };
        if piv != c {
            a.swap(piv, c);
            det = (p - det) % p;
        }
        det = det * a[c][c] % p;
        let inv = inv_mod(a[c][c], p);
        for r in c + 1..k {
            let f = a[r][c] * inv % p;
            for j in c..k {
                a[r][j] = (a[r][j] - f * a[c][j]).rem_euclid(p);
            }
        }
    }
    det as u64
}

/// `u_n = floor(log_ℓ #T^G / (n - t))` for each level and their minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankBounds {
    /// `(n, log_ℓ #T^G, u_n)`.
    pub levels: Vec<(u32, u64, u64)>,
    pub min: Option<u64>,
}

/// Upper bounds on the rank of the invariant lattice from the finite levels
/// `T_{ℓ^n}`, `n > t`. The module at the level of `lprime(ℓ)` must act
/// trivially; it is looked up in `family` or passed as `level_module`.
pub fn rank_upper_bounds(
    family: &[FiniteLModule],
    t: u32,
    level_module: Option<&FiniteLModule>,
) -> Result<RankBounds, GalmodError> {
    let Some(first) = family.first() else {
        return Ok(RankBounds { levels: Vec::new(), min: None });
    };
    let ell = first.ell;
    let lev = lprime_level(ell);
    let check = family.iter().find(|m| m.n == lev).or(level_module);
    match check {
        None => return Err(GalmodError::MissingLevel(lev)),
        Some(m) if !m.acts_trivially() => {
            return Err(GalmodError::HypothesisViolated(format!(
                "G acts nontrivially on T_{}",
                lprime(ell)
            )))
        }
        Some(_) => {}
    }
    let mut levels = Vec::new();
    for md in family {
        if md.ell != ell {
            return Err(GalmodError::InvalidModule(String::from("family mixes primes")));
        }
        md.validate()?;
        if md.n <= t {
            continue;
        }
        let lg = md.invariants()?.log_order;
        levels.push((md.n, lg, lg / (md.n - t) as u64));
    }
    let min = levels.iter().map(|x| x.2).min();
    Ok(RankBounds { levels, min })
}

/// `log_ℓ #H^j(X, Z/ℓ^n)` for `j = 0..=2d`, `n >= 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SizeTable {
    pub ell: u64,
    pub betti: Vec<u64>,
    pub sizes: BTreeMap<(u32, u32), u64>,
}

impl SizeTable {
    /// Largest `N` such that every degree has entries for `n = 1..=N`.
    pub fn levels(&self) -> u32 {
        let mut n = 0;
        loop {
            let next = n + 1;
            if (0..self.betti.len() as u32).all(|j| self.sizes.contains_key(&(j, next))) {
                n = next;
            } else {
                return n;
            }
        }
    }

    fn get(&self, j: i64, n: u32) -> u64 {
        if j < 0 || j >= self.betti.len() as i64 {
            0
        } else {
            self.sizes[&(j as u32, n)]
        }
    }
}

/// Torsion group recovered from a size table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionResult {
    pub group: LGroup,
    /// False when the table ended before the sizes stabilized.
    pub complete: bool,
    /// When incomplete: this many further cyclic factors of exponent at least
    /// `min_exponent` exist beyond `group`.
    pub unresolved: Option<(u64, u32)>,
}

/// `log_ℓ #H^j_tors[ℓ^n]` for all `j`, `n = 0..=N`, by one induction direction.
fn solve_torsion_logs(table: &SizeTable, levels: u32, ascending: bool) -> Result<Vec<Vec<i64>>, GalmodError> {
    let top = table.betti.len();
    // a[j][n] for j in 0..=top (j = top is the vanishing degree above the range)
    let mut a = vec![vec![0i64; levels as usize + 1]; top + 1];
    for n in 1..=levels {
        let rhs = |j: usize| table.get(j as i64, n) as i64 - n as i64 * table.betti[j] as i64;
        if ascending {
            // a_0 = 0, then a_{j+1} = rhs_j - a_j
            for j in 0..top {
                a[j + 1][n as usize] = rhs(j) - a[j][n as usize];
            }
            if a[top][n as usize] != 0 {
                return Err(GalmodError::InconsistentTable(format!(
                    "ascending induction leaves torsion above the top degree at n = {n}"
                )));
            }
        } else {
            for j in (0..top).rev() {
                a[j][n as usize] = rhs(j) - a[j + 1][n as usize];
            }
            if a[0][n as usize] != 0 {
                return Err(GalmodError::InconsistentTable(format!("descending induction gives torsion in degree 0 at n = {n}")));
            }
        }
    }
    Ok(a)
}

/// Recover `H^i_tors` from the sizes of `H^j(Z/ℓ^n)`, using
/// `#H^j(Z/ℓ^n) = ℓ^{n b_j} #H^j_tors[ℓ^n] #H^{j+1}_tors[ℓ^n]`.
pub fn torsion_from_sizes(table: &SizeTable, i: u32) -> Result<TorsionResult, GalmodError> {
    if i as usize >= table.betti.len() {
        return Err(GalmodError::InconsistentTable(format!("degree {i} out of range")));
    }
    let levels = table.levels();
    if levels == 0 {
        return Err(GalmodError::InconsistentTable(String::from("no complete level")));
    }
    let up = solve_torsion_logs(table, levels, true)?;
    let down = solve_torsion_logs(table, levels, false)?;
    if up != down {
        return Err(GalmodError::InconsistentTable(String::from("ascending and descending inductions disagree")));
    }
    for (j, row) in up.iter().enumerate() {
        for n in 1..row.len() {
            if row[n] < 0 {
                return Err(GalmodError::InconsistentTable(format!("negative size in degree {j} at n = {n}")));
            }
            if row[n] < row[n - 1] {
                return Err(GalmodError::InconsistentTable(format!("sizes decrease in degree {j} at n = {n}")));
            }
            if n >= 2 && row[n] - row[n - 1] > row[n - 1] - row[n - 2] {
                return Err(GalmodError::InconsistentTable(format!("not the size of a finite group in degree {j}")));
            }
        }
    }
    let a = &up[i as usize];
    let stable = (0..levels as usize).find(|&n| a[n] == a[n + 1]);
    let last = match stable {
        Some(n) => n,
        None => levels as usize - 1,
    };
    let mut exponents = Vec::new();
    for n in (1..=last).rev() {
        let r = 2 * a[n] - a[n - 1] - a[n + 1];
        for _ in 0..r {
            exponents.push(n as u32);
        }
    }
    let log_order: u64 = exponents.iter().map(|&e| e as u64).sum();
    let group = LGroup { ell: table.ell, log_order, exponents };
    match stable {
        Some(_) => Ok(TorsionResult { group, complete: true, unresolved: None }),
        None => {
            let l = levels as usize;
            let remaining = (a[l] - a[l - 1]) as u64;
            Ok(TorsionResult { group, complete: false, unresolved: Some((remaining, levels)) })
        }
    }
}

/// Check the size identity for every entry of the table against a full
/// profile: Betti numbers and torsion exponents per degree.
pub fn kummer_size_check(table: &SizeTable, betti: &[u64], torsion: &[Vec<u32>]) -> bool {
    let tors_log = |j: usize, n: u32| -> u64 {
        torsion.get(j).map_or(0, |t| t.iter().map(|&e| e.min(n) as u64).sum())
    };
    table.sizes.iter().all(|(&(j, n), &s)| {
        let j = j as usize;
        let b = betti.get(j).copied().unwrap_or(0);
        s == n as u64 * b + tors_log(j, n) + tors_log(j + 1, n)
    })
}

/// True if `M ≡ I (mod lprime(ℓ))`.
pub fn minkowski_trivial(m: &[Vec<i64>], ell: u64) -> bool {
    let lp = lprime(ell) as i64;
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| (x - if i == j { 1 } else { 0 }).rem_euclid(lp) == 0))
}
