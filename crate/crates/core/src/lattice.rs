//! Integer lattices: Smith normal form, saturation, independence
//! certificates, lattices with a finite group action, and the rank pipeline
//! that closes the gap between certified lower bounds and the Tate bound.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::qmat;

pub type IntMatrix = Vec<Vec<BigInt>>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("rank of the pairing matrix is {got}, expected {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("generator {0} is not invertible over Z")]
    NotUnimodular(usize),
    #[error("relation `{0}` does not hold")]
    RelationViolated(String),
    #[error("cannot parse relation `{0}`")]
    BadRelation(String),
    #[error("the saturated span is not stable under generator {0}")]
    NotStable(usize),
    #[error("vector is not in the lattice")]
    NotInLattice,
    #[error("invalid certificate: {0}")]
    CertificateInvalid(String),
}

pub fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(k: usize) -> IntMatrix {
    (0..k).map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn zeros(r: usize, c: usize) -> IntMatrix {
    vec![vec![BigInt::zero(); c]; r]
}

fn ncols(m: &[Vec<BigInt>]) -> usize {
    m.first().map_or(0, |r| r.len())
}

pub fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let c = ncols(b);
    a.iter()
        .map(|row| {
            (0..c)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for t in 0..inner {
                        if !row[t].is_zero() {
                            acc += &row[t] * &b[t][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<BigInt>]) -> IntMatrix {
    let c = ncols(a);
    (0..c).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn rank(m: &[Vec<BigInt>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    qmat::rank(&qmat::from_int_rows(m))
}

/// `U M V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`.
/// `v_inv` is the inverse of `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.len().min(ncols(&self.d)))
            .map(|i| self.d[i][i].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

struct SnfState {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfState {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut().chain(self.v.iter_mut()) {
            r.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// row_i -= f * row_j
    fn row_op(&mut self, i: usize, j: usize, f: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                *x -= f * y;
            }
        }
    }

    /// col_i -= f * col_j; `V^{-1}` gets row_j += f * row_i
    fn col_op(&mut self, i: usize, j: usize, f: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for r in m.iter_mut() {
                let y = r[j].clone();
                r[i] -= f * y;
            }
        }
        let src = self.v_inv[i].clone();
        for (x, y) in self.v_inv[j].iter_mut().zip(&src) {
            *x += f * y;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

/// Smith normal form with smallest-absolute-value pivoting; ties go to the
/// lowest row, then the lowest column.
pub fn snf(m: &[Vec<BigInt>]) -> Snf {
    let r = m.len();
    let c = ncols(m);
    let mut s = SnfState { a: m.to_vec(), u: identity(r), v: identity(c), v_inv: identity(c) };
    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry of the remaining block
            let mut best: Option<(BigInt, usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = s.a[i][j].abs();
                    if !x.is_zero() && best.as_ref().is_none_or(|(b, _, _)| x < *b) {
                        best = Some((x, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                return finish(s);
            };
            if pi != t {
                s.swap_rows(pi, t);
            }
            if pj != t {
                s.swap_cols(pj, t);
            }
            let mut clean = true;
            for i in t + 1..r {
                if !s.a[i][t].is_zero() {
                    let f = s.a[i][t].div_floor(&s.a[t][t]);
                    s.row_op(i, t, &f);
                    clean &= s.a[i][t].is_zero();
                }
            }
            for j in t + 1..c {
                if !s.a[t][j].is_zero() {
                    let f = s.a[t][j].div_floor(&s.a[t][t]);
                    s.col_op(j, t, &f);
                    clean &= s.a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let p = s.a[t][t].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&s.a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => s.row_op(t, i, &-BigInt::one()),
                None => break,
            }
        }
        if s.a[t][t].is_negative() {
            s.negate_row(t);
        }
    }
    finish(s)
}

fn finish(s: SnfState) -> Snf {
    Snf { u: s.u, d: s.a, v: s.v, v_inv: s.v_inv }
}

/// Basis (as rows) of `{x in Z^n : m x in span for some m != 0}`.
pub fn saturate(span: &[Vec<BigInt>], ambient_rank: usize) -> Result<IntMatrix, LatticeError> {
    if span.iter().any(|r| r.len() != ambient_rank) {
        return Err(LatticeError::Shape(format!("rows must have length {ambient_rank}")));
    }
    if span.is_empty() {
        return Ok(Vec::new());
    }
    let s = snf(span);
    let r = s.invariant_factors().len();
    Ok(s.v_inv[..r].to_vec())
}

/// `[saturation : span]`, the product of the nonzero invariant factors.
pub fn saturation_index(span: &[Vec<BigInt>]) -> BigInt {
    if span.is_empty() {
        return BigInt::one();
    }
    snf(span).invariant_factors().iter().fold(BigInt::one(), |a, b| a * b)
}

/// Row and column indices of a maximal nonsingular square minor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceCertificate {
    pub rank: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub det: BigInt,
}

impl IndependenceCertificate {
    pub fn minor(&self, m: &[Vec<BigInt>]) -> IntMatrix {
        self.rows.iter().map(|&i| self.cols.iter().map(|&j| m[i][j].clone()).collect()).collect()
    }
}

pub fn independence_certificate(m: &[Vec<BigInt>]) -> IndependenceCertificate {
    // greedy independent rows, then pivot columns of those rows
    let mut rows = Vec::new();
    let mut chosen: IntMatrix = Vec::new();
    for (i, row) in m.iter().enumerate() {
        chosen.push(row.clone());
        if rank(&chosen) == chosen.len() {
            rows.push(i);
        } else {
            chosen.pop();
        }
    }
    let mut q = qmat::from_int_rows(&chosen);
    let cols = if chosen.is_empty() { Vec::new() } else { qmat::rref(&mut q) };
    let cert = IndependenceCertificate { rank: rows.len(), rows, cols, det: BigInt::zero() };
    let det = determinant(&cert.minor(m));
    IndependenceCertificate { det, ..cert }
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &[Vec<BigInt>]) -> Option<IntMatrix> {
    let k = m.len();
    let d = determinant(m);
    if !d.abs().is_one() {
        return None;
    }
    let mut aug: qmat::QMatrix = qmat::from_int_rows(m)
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.extend((0..k).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    qmat::rref(&mut aug);
    Some(aug.iter().map(|r| r[k..].iter().map(|x| x.to_integer()).collect()).collect())
}

/// Matrix of `y_i -> y_{perm[i]}` acting on column vectors.
pub fn permutation_matrix(perm: &[usize]) -> IntMatrix {
    let k = perm.len();
    let mut m = zeros(k, k);
    for (i, &p) in perm.iter().enumerate() {
        m[p][i] = BigInt::one();
    }
    m
}

/// `g0^2`, `g0*g1*g0^-1`, or `lhs = rhs`; generators are `g<index>`.
fn parse_word(word: &str, ngens: usize) -> Result<Vec<(usize, i64)>, LatticeError> {
    let bad = || LatticeError::BadRelation(word.to_string());
    let mut out = Vec::new();
    for tok in word.split('*') {
        let tok = tok.trim();
        if tok == "1" || tok == "e" {
            continue;
        }
        let (g, e) = match tok.split_once('^') {
            Some((g, e)) => (g.trim(), e.trim().parse::<i64>().map_err(|_| bad())?),
            None => (tok, 1),
        };
        let idx: usize = g.strip_prefix('g').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if idx >= ngens {
            return Err(bad());
        }
        out.push((idx, e));
    }
    Ok(out)
}

/// Free lattice `Z^k` with a finite group acting by the generator matrices
/// (on column vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLattice {
    pub rank: usize,
    pub generators: Vec<IntMatrix>,
    pub relations: Vec<String>,
    pub markers: Vec<String>,
    inverses: Vec<IntMatrix>,
}

impl GLattice {
    pub fn new(rank: usize, generators: Vec<IntMatrix>, relations: Vec<String>) -> Result<Self, LatticeError> {
        let mut inverses = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            if g.len() != rank || g.iter().any(|r| r.len() != rank) {
                return Err(LatticeError::Shape(format!("generator {i} is not {rank}x{rank}")));
            }
            inverses.push(unimodular_inverse(g).ok_or(LatticeError::NotUnimodular(i))?);
        }
        let l = GLattice { rank, generators, relations, markers: Vec::new(), inverses };
        for rel in &l.relations {
            let (lhs, rhs) = match rel.split_once('=') {
                Some((a, b)) => (a, b),
                None => (rel.as_str(), "1"),
            };
            if l.eval_word(lhs)? != l.eval_word(rhs)? {
                return Err(LatticeError::RelationViolated(rel.clone()));
            }
        }
        Ok(l)
    }

    pub fn with_markers(mut self, markers: Vec<String>) -> Self {
        self.markers = markers;
        self
    }

    pub fn trivial(rank: usize) -> Self {
        GLattice { rank, generators: Vec::new(), relations: Vec::new(), markers: Vec::new(), inverses: Vec::new() }
    }

    fn eval_word(&self, word: &str) -> Result<IntMatrix, LatticeError> {
        let mut acc = identity(self.rank);
        for (g, e) in parse_word(word, self.generators.len())? {
            let m = if e < 0 { &self.inverses[g] } else { &self.generators[g] };
            for _ in 0..e.unsigned_abs() {
                acc = mul(&acc, m);
            }
        }
        Ok(acc)
    }

    /// All group elements, by closing the generators under multiplication.
    /// Stops with `None` after `limit` elements.
    pub fn group_elements(&self, limit: usize) -> Option<Vec<IntMatrix>> {
        let mut seen: BTreeSet<IntMatrix> = BTreeSet::new();
        let mut queue = VecDeque::new();
        let e = identity(self.rank);
        seen.insert(e.clone());
        queue.push_back(e);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = mul(g, &x);
                if seen.insert(y.clone()) {
                    if seen.len() > limit {
                        return None;
                    }
                    queue.push_back(y);
                }
            }
        }
        Some(seen.into_iter().collect())
    }
}

/// Rank of the fixed sublattice: the kernel of the stacked `g - I`.
pub fn invariants_rank(l: &GLattice) -> usize {
    let mut stacked: IntMatrix = Vec::new();
    for g in &l.generators {
        for i in 0..l.rank {
            stacked.push((0..l.rank).map(|j| &g[i][j] - if i == j { BigInt::one() } else { BigInt::zero() }).collect());
        }
    }
    l.rank - rank(&stacked)
}

/// The saturated lattice `N` with its group action and a map from pairing
/// vectors to `N`-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltN {
    pub lattice: GLattice,
    /// Rows form a basis of `N` inside `Hom(Y, Z)`.
    pub basis: IntMatrix,
}

impl BuiltN {
    /// Coordinates of a pairing vector in the basis of `N`.
    pub fn class_map(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        let a = qmat::from_int_rows(&transpose(&self.basis));
        let b: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        if b.len() != a.len() {
            return Err(LatticeError::Shape(String::from("pairing vector has the wrong length")));
        }
        let x = qmat::solve(&a, &b).ok_or(LatticeError::NotInLattice)?;
        if x.iter().any(|c| !c.is_integer()) {
            return Err(LatticeError::NotInLattice);
        }
        Ok(x.iter().map(|c| c.to_integer()).collect())
    }
}

/// Saturate the span of the pairing rows inside `Hom(Y, Z)` and transport
/// the action on `Y` to it: `φ ↦ φ ∘ g^{-1}`.
pub fn build_n(
    pairings: &[Vec<BigInt>],
    y_action: &GLattice,
    rho: Option<usize>,
) -> Result<BuiltN, LatticeError> {
    let ny = y_action.rank;
    let got = rank(pairings);
    if let Some(expected) = rho {
        if got != expected {
            return Err(LatticeError::RankMismatch { expected, got });
        }
    }
    let basis = saturate(pairings, ny)?;
    let proto = BuiltN { lattice: GLattice::trivial(basis.len()), basis: basis.clone() };
    let mut gens = Vec::new();
    for (gi, inv) in y_action.inverses.iter().enumerate() {
        let moved = mul(&basis, inv);
        // rows of C with C B = B A^{-1}; the column-vector action is C^T
        let mut c = Vec::new();
        for row in &moved {
            c.push(proto.class_map(row).map_err(|_| LatticeError::NotStable(gi))?);
        }
        gens.push(transpose(&c));
    }
    let lattice = GLattice::new(basis.len(), gens, y_action.relations.clone())?;
    Ok(BuiltN { lattice, basis })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Intersection numbers of cycles `labels` against `partners`.
    Minor { labels: Vec<String>, partners: Vec<String>, matrix: IntMatrix },
    Tate { p: u32, v_mu: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub kind: CertificateKind,
    pub value: u64,
    pub witness: Witness,
}

impl RankCertificate {
    /// A lower-bound certificate from a pairing matrix and its certificate.
    pub fn lower_from(m: &[Vec<BigInt>], row_labels: &[String], col_labels: &[String]) -> Self {
        let c = independence_certificate(m);
        RankCertificate {
            kind: CertificateKind::Lower,
            value: c.rank as u64,
            witness: Witness::Minor {
                labels: c.rows.iter().map(|&i| row_labels[i].clone()).collect(),
                partners: c.cols.iter().map(|&j| col_labels[j].clone()).collect(),
                matrix: c.minor(m),
            },
        }
    }

    /// Re-check the witness.
    pub fn verify(&self) -> Result<(), LatticeError> {
        match (&self.kind, &self.witness) {
            (CertificateKind::Lower, Witness::Minor { labels, partners, matrix }) => {
                let k = self.value as usize;
                if matrix.len() != k || matrix.iter().any(|r| r.len() != k) || labels.len() != k || partners.len() != k {
                    return Err(LatticeError::CertificateInvalid(format!("witness is not {k}x{k}")));
                }
                if determinant(matrix).is_zero() {
                    return Err(LatticeError::CertificateInvalid(String::from("witness minor is singular")));
                }
                Ok(())
            }
            (CertificateKind::Upper, Witness::Tate { v_mu, .. }) if *v_mu == self.value => Ok(()),
            _ => Err(LatticeError::CertificateInvalid(String::from("witness does not match the certificate kind"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineStatus {
    Running { lower: u64, upper: u64 },
    Halted { rank: u64 },
}

/// Lower bounds arrive one certificate at a time; the pipeline halts once
/// they reach the Tate bound. Whether that ever happens is exactly the Tate
/// conjecture for the input, so the state is meant to be checkpointed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgorithmB {
    pub p: u32,
    pub v_mu: u64,
    pub best: Option<RankCertificate>,
    pub history: Vec<u64>,
    pub inputs_digest: String,
}

impl AlgorithmB {
    pub fn new(p: u32, v_mu: u64, inputs_digest: String) -> Self {
        AlgorithmB { p, v_mu, best: None, history: Vec::new(), inputs_digest }
    }

    pub fn lower(&self) -> u64 {
        self.best.as_ref().map_or(0, |c| c.value)
    }

    pub fn status(&self) -> PipelineStatus {
        if self.lower() == self.v_mu {
            PipelineStatus::Halted { rank: self.v_mu }
        } else {
            PipelineStatus::Running { lower: self.lower(), upper: self.v_mu }
        }
    }

    pub fn offer(&mut self, cert: RankCertificate) -> Result<PipelineStatus, LatticeError> {
        if cert.kind != CertificateKind::Lower {
            return Err(LatticeError::CertificateInvalid(String::from("only lower bounds can be offered")));
        }
        cert.verify()?;
        if cert.value > self.v_mu {
            return Err(LatticeError::CertificateInvalid(format!(
                "lower bound {} exceeds the upper bound {}",
                cert.value, self.v_mu
            )));
        }
        if cert.value > self.lower() {
            self.best = Some(cert);
        }
        self.history.push(self.lower());
        Ok(self.status())
    }
}
