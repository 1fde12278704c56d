//! Hilbert series and Hilbert polynomials of `S/I` from the initial ideal.
//!
//! The numerator `K(t)` of `HS(t) = K(t) / (1-t)^n` is computed for the
//! monomial ideal of leading terms with the pivot recursion
//! `K(I) = K(I + (p)) + t^deg(p) K(I : p)`, where `p` is a pure power of a
//! variable taken from a generator that is not itself a pure power.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{divides, monomial_degree, HomIdeal, Monomial};
use crate::field::Field;

type TPoly = Vec<BigInt>;

fn tp_trim(mut a: TPoly) -> TPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn tp_add(a: &[BigInt], b: &[BigInt]) -> TPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    tp_trim(out)
}

fn tp_shift(a: &[BigInt], k: usize) -> TPoly {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); k];
    out.extend(a.iter().cloned());
    out
}

/// `prod (1 - t^d_i)`
fn tp_product_of_one_minus(degs: &[u32]) -> TPoly {
    let mut acc: TPoly = vec![BigInt::one()];
    for &d in degs {
        let shifted = tp_shift(&acc, d as usize);
        let neg: TPoly = shifted.into_iter().map(|c| -c).collect();
        acc = tp_add(&acc, &neg);
    }
    acc
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| monomial_degree(m));
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in gens {
        if !out.iter().any(|g| divides(g, &m)) {
            out.push(m);
        }
    }
    out
}

fn pairwise_coprime(gens: &[Monomial]) -> bool {
    let n = gens.first().map_or(0, |g| g.len());
    let mut seen = vec![false; n];
    for g in gens {
        for (i, &e) in g.iter().enumerate() {
            if e > 0 {
                if seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
    }
    true
}

fn quotient(gens: &[Monomial], p: &[u32]) -> Vec<Monomial> {
    gens.iter()
        .map(|g| g.iter().zip(p).map(|(a, b)| a.saturating_sub(*b)).collect())
        .collect()
}

/// Numerator of the Hilbert series of `S / (gens)` over `(1-t)^n`.
fn monomial_numerator(gens: Vec<Monomial>) -> TPoly {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return vec![BigInt::one()];
    }
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return Vec::new();
    }
    if pairwise_coprime(&gens) {
        let degs: Vec<u32> = gens.iter().map(|g| monomial_degree(g)).collect();
        return tp_product_of_one_minus(&degs);
    }
    // Pivot on the variable occurring in the most generators that are not pure powers.
    let n = gens[0].len();
    let mut counts = vec![0usize; n];
    for g in gens.iter().filter(|g| g.iter().filter(|&&e| e > 0).count() > 1) {
        for (i, &e) in g.iter().enumerate() {
            if e > 0 {
                counts[i] += 1;
            }
        }
    }
    let var = (0..n).max_by_key(|&i| (counts[i], core::cmp::Reverse(i))).unwrap();
    let mut exps: Vec<u32> = gens
        .iter()
        .filter(|g| g[var] > 0 && g.iter().filter(|&&e| e > 0).count() > 1)
        .map(|g| g[var])
        .collect();
    exps.sort_unstable();
    let e = exps[(exps.len() - 1) / 2];
    let mut p = vec![0u32; n];
    p[var] = e;

    let mut plus = gens.clone();
    plus.push(p.clone());
    let left = monomial_numerator(plus);
    let right = monomial_numerator(quotient(&gens, &p));
    tp_add(&left, &tp_shift(&right, e as usize))
}

fn binomial(n: &BigInt, k: usize) -> BigInt {
    if n.is_negative() {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

/// The Hilbert series of a graded quotient `S/I`, kept in both the
/// `K(t)/(1-t)^n` and reduced `h(t)/(1-t)^D` forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    pub nvars: usize,
    /// `K(t)`, lowest degree first; empty for the unit ideal.
    pub numerator: Vec<BigInt>,
    /// `h(t)` with `h(1) != 0`, lowest degree first.
    pub reduced: Vec<BigInt>,
    /// Krull dimension `D` of `S/I`.
    pub krull_dim: usize,
}

impl HilbertSeries {
    fn from_numerator(nvars: usize, numerator: TPoly) -> Self {
        let mut h = numerator.clone();
        let mut d = nvars;
        // divide by (1 - t) while h(1) = 0
        while !h.is_empty() && h.iter().fold(BigInt::zero(), |a, c| a + c).is_zero() && d > 0 {
            let mut q = vec![BigInt::zero(); h.len() - 1];
            // h = (1 - t) q  =>  q_k = sum_{i <= k} h_i
            let mut run = BigInt::zero();
            for k in 0..h.len() - 1 {
                run += &h[k];
                q[k] = run.clone();
            }
            h = tp_trim(q);
            d -= 1;
        }
        let krull_dim = if h.is_empty() { 0 } else { d };
        HilbertSeries { nvars, numerator, reduced: h, krull_dim }
    }

    /// `dim_k (S/I)_d`.
    pub fn hilbert_function(&self, d: i64) -> BigInt {
        if d < 0 {
            return BigInt::zero();
        }
        let n = self.nvars;
        if n == 0 {
            return if d == 0 { self.numerator.first().cloned().unwrap_or_default() } else { BigInt::zero() };
        }
        let mut acc = BigInt::zero();
        for (k, c) in self.numerator.iter().enumerate() {
            let top = BigInt::from(d - k as i64 + n as i64 - 1);
            if d - (k as i64) < 0 {
                continue;
            }
            acc += c * binomial(&top, n - 1);
        }
        acc
    }

    /// The Hilbert function agrees with the Hilbert polynomial from this
    /// degree on.
    pub fn regularity_index(&self) -> i64 {
        if self.reduced.is_empty() {
            return 0;
        }
        let deg_h = (self.reduced.len() - 1) as i64;
        (deg_h - self.krull_dim as i64 + 1).max(0)
    }

    pub fn hilbert_polynomial(&self) -> HilbertPoly {
        let dd = self.krull_dim;
        if self.reduced.is_empty() || dd == 0 {
            return HilbertPoly { coeffs: Vec::new() };
        }
        // HP(t) = sum_k h_k C(t - k + D - 1, D - 1)
        let mut fact = BigInt::one();
        for i in 1..dd {
            fact *= BigInt::from(i);
        }
        let mut total: Vec<BigRational> = Vec::new();
        for (k, hk) in self.reduced.iter().enumerate() {
            if hk.is_zero() {
                continue;
            }
            let mut poly: Vec<BigRational> = vec![BigRational::from_integer(hk.clone())];
            for j in 1..dd {
                let c = BigRational::from_integer(BigInt::from(j as i64 - k as i64));
                // multiply by (t + c)
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (i, a) in poly.iter().enumerate() {
                    next[i + 1] += a;
                    next[i] += a * &c;
                }
                poly = next;
            }
            if total.len() < poly.len() {
                total.resize(poly.len(), BigRational::zero());
            }
            for (i, a) in poly.into_iter().enumerate() {
                total[i] += a / BigRational::from_integer(fact.clone());
            }
        }
        while total.last().is_some_and(|c| c.is_zero()) {
            total.pop();
        }
        HilbertPoly { coeffs: total }
    }
}

/// A polynomial in `t` with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPoly {
    pub coeffs: Vec<BigRational>,
}

impl HilbertPoly {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_int(&self, t: i64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(t)))
    }

    /// `deg! * leading coefficient`, the degree of the projective scheme.
    pub fn scheme_degree(&self) -> Option<BigInt> {
        let d = self.degree()?;
        let mut f = BigInt::one();
        for i in 1..=d {
            f *= BigInt::from(i);
        }
        let v = self.leading_coefficient()? * BigRational::from_integer(f);
        debug_assert!(v.is_integer());
        Some(v.to_integer())
    }

    /// Integer-valued check on `deg + 1` consecutive points starting at `start`.
    pub fn is_integer_valued_from(&self, start: i64) -> bool {
        let n = self.degree().map_or(1, |d| d + 1);
        (0..n as i64).all(|k| self.eval_int(start + k).is_integer())
    }
}

impl core::fmt::Display for HilbertPoly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.denom().is_one() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "{}/{}", mag.numer(), mag.denom())?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "{}t", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}t^{}", if show_coeff { "*" } else { "" }, i)?,
            }
        }
        Ok(())
    }
}

/// Hilbert series of `S/I` computed from the leading terms of a Gröbner basis.
pub fn hilbert_series_numerator<F: Field>(ideal: &HomIdeal<F>) -> HilbertSeries {
    let basis = ideal.groebner_basis();
    let lead: Vec<Monomial> = basis.iter().filter_map(|g| g.leading_monomial().cloned()).collect();
    let k = monomial_numerator(lead);
    HilbertSeries::from_numerator(ideal.ring().nvars, k)
}

pub fn hilbert_polynomial<F: Field>(ideal: &HomIdeal<F>) -> HilbertPoly {
    hilbert_series_numerator(ideal).hilbert_polynomial()
}
