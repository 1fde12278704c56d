//! Zeta functions as exact rational functions, reconstructed from point counts.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::counting::CountSeries;
use crate::qmat;
use crate::weil;
use crate::zpoly::{self, ZPoly};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("need {needed} counts, got {got}")]
    InsufficientCounts { needed: usize, got: usize },
    #[error("no rational function of degree at most {0} matches the counts")]
    NoSolution(u32),
    #[error("reconstructed coefficients are not integers")]
    NonIntegral,
    #[error("neither functional-equation sign gives a consistent factor")]
    NoConsistentSign,
    #[error("no degree budget: supply one or declare a smooth hypersurface")]
    MissingBudget,
    #[error("degree budget must be positive")]
    InvalidBudget,
}

/// `Z(T) = numerator / denominator`, both with constant term 1, coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaFunction {
    pub q: u64,
    pub dim: u32,
    pub numerator: ZPoly,
    pub denominator: ZPoly,
}

impl ZetaFunction {
    /// `deg den - deg num`, which equals `sum (-1)^i b_i`.
    pub fn euler_characteristic(&self) -> i64 {
        zpoly::degree(&self.denominator).unwrap_or(0) as i64 - zpoly::degree(&self.numerator).unwrap_or(0) as i64
    }

    pub fn display(&self) -> String {
        alloc::format!("({}) / ({})", zpoly::format(&self.numerator, "T"), zpoly::format(&self.denominator, "T"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BudgetSource {
    UserConfig,
    HypersurfaceFormula,
}

/// Upper bound `B` on the sum of the Betti numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeBudget {
    pub b: u32,
    pub source: BudgetSource,
}

/// What is known about a variety for choosing a budget.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BudgetDescriptor {
    pub user_budget: Option<u32>,
    /// `(degree D, dimension m)` of a smooth hypersurface in `P^{m+1}`.
    pub hypersurface: Option<(u32, u32)>,
}

/// Betti numbers `b_0..b_{2m}` of a smooth degree-`D` hypersurface in `P^{m+1}`.
pub fn hypersurface_betti(degree: u32, dim: u32) -> Vec<u64> {
    let d = degree as i128;
    let m = dim;
    let sign: i128 = if m % 2 == 0 { 1 } else { -1 };
    let prim = ((d - 1).pow(m + 2) + sign * (d - 1)) / d;
    (0..=2 * m)
        .map(|i| {
            let hyperplane = if i % 2 == 0 { 1 } else { 0 };
            if i == m {
                (prim + hyperplane) as u64
            } else {
                hyperplane as u64
            }
        })
        .collect()
}

pub fn betti_budget(desc: &BudgetDescriptor) -> Result<DegreeBudget, ZetaError> {
    if let Some(b) = desc.user_budget {
        if b == 0 {
            return Err(ZetaError::InvalidBudget);
        }
        return Ok(DegreeBudget { b, source: BudgetSource::UserConfig });
    }
    if let Some((deg, dim)) = desc.hypersurface {
        let total: u64 = hypersurface_betti(deg, dim).iter().sum();
        return Ok(DegreeBudget { b: total as u32, source: BudgetSource::HypersurfaceFormula });
    }
    Err(ZetaError::MissingBudget)
}

/// `exp(sum N_n T^n / n)` to order `T^len`.
fn exp_series(counts: &[u64], len: usize) -> Vec<BigRational> {
    let mut s = vec![BigRational::one()];
    for k in 1..len {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let n = BigRational::from_integer(BigInt::from(counts[i - 1]));
            acc += n * &s[k - i];
        }
        s.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    s
}

fn to_integer_poly(a: &[BigRational]) -> Result<ZPoly, ZetaError> {
    a.iter()
        .map(|c| if c.is_integer() { Ok(c.to_integer()) } else { Err(ZetaError::NonIntegral) })
        .collect::<Result<Vec<_>, _>>()
        .map(zpoly::trim)
}

/// Normalize so that the constant term is one.
fn unit_constant(a: &[BigRational]) -> Vec<BigRational> {
    let c = a[0].clone();
    a.iter().map(|x| x / &c).collect()
}

/// The rational function of degree at most `B` matching `N_1..N_{2B}`,
/// validated against every supplied count.
pub fn reconstruct(counts: &CountSeries, budget: &DegreeBudget, dim: u32) -> Result<ZetaFunction, ZetaError> {
    let big_b = budget.b as usize;
    if big_b == 0 {
        return Err(ZetaError::InvalidBudget);
    }
    if counts.counts.len() < 2 * big_b {
        return Err(ZetaError::InsufficientCounts { needed: 2 * big_b, got: counts.counts.len() });
    }
    let s = exp_series(&counts.counts, 2 * big_b + 1);
    for b in 0..=big_b {
        let a = big_b - b;
        // unknowns q_1..q_b with [Q S]_k = 0 for k = a+1..2B
        let rows: Vec<Vec<BigRational>> = (a + 1..=2 * big_b)
            .map(|k| (1..=b).map(|j| if j <= k { s[k - j].clone() } else { BigRational::zero() }).collect())
            .collect();
        let rhs: Vec<BigRational> = (a + 1..=2 * big_b).map(|k| -s[k].clone()).collect();
        let sol = if b == 0 {
            if rhs.iter().all(|x| x.is_zero()) {
                Some(Vec::new())
            } else {
                None
            }
        } else {
            qmat::solve(&rows, &rhs)
        };
        let Some(sol) = sol else { continue };
        let mut den = vec![BigRational::one()];
        den.extend(sol);
        let mut num = vec![BigRational::zero(); a + 1];
        for (k, slot) in num.iter_mut().enumerate() {
            for j in 0..=k.min(b) {
                *slot += &den[j] * &s[k - j];
            }
        }
        let num = zpoly::trim(num);
        let den = zpoly::trim(den);
        // reduce to lowest terms
        let g = zpoly::gcd(&zpoly::q_to_primitive(&num), &zpoly::q_to_primitive(&den));
        let gq = zpoly::to_q(&g);
        let (num_r, _) = zpoly::q_divrem(&num, &gq);
        let (den_r, _) = zpoly::q_divrem(&den, &gq);
        let z = ZetaFunction {
            q: counts.q,
            dim,
            numerator: to_integer_poly(&unit_constant(&num_r))?,
            denominator: to_integer_poly(&unit_constant(&den_r))?,
        };
        let back = expand(&z, counts.counts.len());
        if back.iter().zip(&counts.counts).any(|(x, &y)| *x != BigInt::from(y)) {
            return Err(ZetaError::NoSolution(budget.b));
        }
        return Ok(z);
    }
    Err(ZetaError::NoSolution(budget.b))
}

/// `N_1..N_{n_max}`: the coefficients of `T Z'(T) / Z(T)`.
pub fn expand(z: &ZetaFunction, n_max: usize) -> Vec<BigInt> {
    let log_deriv = |p: &[BigInt]| -> ZPoly {
        // T p'/p as a power series, coefficients 1..=n_max
        let tp: ZPoly = p.iter().enumerate().map(|(i, c)| c * BigInt::from(i)).collect();
        zpoly::series_div(&tp, p, n_max + 1).expect("constant term 1")
    };
    let a = log_deriv(&z.numerator);
    let b = log_deriv(&z.denominator);
    (1..=n_max).map(|n| &a[n] - &b[n]).collect()
}

/// Outcome of testing `Z(1/(q^d T)) = ± q^{dχ/2} T^χ Z(T)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctionalEquation {
    pub holds: bool,
    pub sign: Option<i8>,
    pub chi: i64,
}

/// `T^m Q^m F(1/(Q T))` for `F` of degree `m`.
fn q_reverse(f: &[BigInt], big_q: &BigInt) -> ZPoly {
    let m = f.len() - 1;
    let mut out = vec![BigInt::zero(); m + 1];
    for (j, c) in f.iter().enumerate() {
        out[m - j] = c * big_q.pow((m - j) as u32);
    }
    zpoly::trim(out)
}

pub fn functional_equation_check(z: &ZetaFunction) -> FunctionalEquation {
    let chi = z.euler_characteristic();
    let d = z.dim as i64;
    if (d * chi) % 2 != 0 {
        return FunctionalEquation { holds: false, sign: None, chi };
    }
    let k = d * chi / 2;
    let q = BigInt::from(z.q);
    let big_q = q.pow(z.dim);
    let lhs = zpoly::scale(
        &zpoly::mul(&q_reverse(&z.numerator, &big_q), &z.denominator),
        &q.pow(k.max(0) as u32),
    );
    let rhs = zpoly::scale(
        &zpoly::mul(&z.numerator, &q_reverse(&z.denominator, &big_q)),
        &q.pow((-k).max(0) as u32),
    );
    let sign = if lhs == rhs {
        Some(1)
    } else if lhs == zpoly::scale(&rhs, &BigInt::from(-1)) {
        Some(-1)
    } else {
        None
    };
    FunctionalEquation { holds: sign.is_some(), sign, chi }
}

/// One sign choice in [`reconstruct_surface`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceCandidate {
    pub sign: i8,
    pub p2: ZPoly,
    pub zeta: ZetaFunction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceZeta {
    pub candidates: Vec<SurfaceCandidate>,
    pub ambiguous: bool,
}

impl SurfaceZeta {
    /// The zeta function when the sign was determined.
    pub fn unique(&self) -> Option<&ZetaFunction> {
        if self.ambiguous {
            None
        } else {
            self.candidates.first().map(|c| &c.zeta)
        }
    }
}

/// `Z = 1 / ((1-T) P_2(T) (1-q^2 T))` for a smooth surface with `b_1 = b_3 = 0`,
/// from `ceil(b2/2)` or more counts and the functional equation of `P_2`.
///
/// Each sign is kept if `P_2` has integer coefficients, all its reciprocal
/// roots certify to modulus `q`, and the zeta function reproduces every
/// supplied count.
pub fn reconstruct_surface(counts: &CountSeries, b2: u32, precision_bits: u64) -> Result<SurfaceZeta, ZetaError> {
    let b = b2 as usize;
    let m = counts.counts.len();
    let needed = b.div_ceil(2);
    if m < needed {
        return Err(ZetaError::InsufficientCounts { needed, got: m });
    }
    let q = BigInt::from(counts.q);
    let q2 = &q * &q;
    // power sums of the weight-2 reciprocal roots
    let s: Vec<BigInt> = (1..=m)
        .map(|n| BigInt::from(counts.counts[n - 1]) - BigInt::one() - q2.pow(n as u32))
        .collect();
    let known = m.min(b);
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=known {
        let acc: BigInt = (1..=k).map(|i| &s[i - 1] * &c[k - i]).sum();
        let (quot, rem) = (-acc).div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(ZetaError::NonIntegral);
        }
        c.push(quot);
    }
    let mut candidates = Vec::new();
    for eps in [1i8, -1] {
        let e = BigInt::from(eps);
        let mut full: Vec<Option<BigInt>> = vec![None; b + 1];
        for (k, v) in c.iter().enumerate() {
            full[k] = Some(v.clone());
        }
        let mut ok = true;
        // c_{b-k} = eps q^{b-2k} c_k for 2k <= b
        for k in 0..=b / 2 {
            let ck = full[k].clone().expect("enough counts for the lower half");
            let mirror = &e * q.pow((b - 2 * k) as u32) * &ck;
            match &full[b - k] {
                Some(v) if *v != mirror => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => full[b - k] = Some(mirror),
            }
        }
        if !ok {
            continue;
        }
        let p2: ZPoly = zpoly::trim(full.into_iter().map(|x| x.unwrap()).collect());
        if !weil::all_roots_of_weight(&p2, counts.q, 2, precision_bits) {
            continue;
        }
        let denominator = zpoly::product(&[
            zpoly::from_i64(&[1, -1]),
            p2.clone(),
            vec![BigInt::one(), -q2.clone()],
        ]);
        let zeta = ZetaFunction { q: counts.q, dim: 2, numerator: vec![BigInt::one()], denominator };
        let back = expand(&zeta, m);
        if back.iter().zip(&counts.counts).any(|(x, &y)| *x != BigInt::from(y)) {
            continue;
        }
        candidates.push(SurfaceCandidate { sign: eps, p2, zeta });
    }
    if candidates.is_empty() {
        return Err(ZetaError::NoConsistentSign);
    }
    let ambiguous = candidates.len() > 1;
    Ok(SurfaceZeta { candidates, ambiguous })
}

/// Small helper for reports: coefficients as `i64` when they fit.
pub fn coefficients_i64(p: &[BigInt]) -> Option<Vec<i64>> {
    p.iter().map(|c| c.to_i64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(q: u64, counts: &[u64]) -> CountSeries {
        CountSeries { q, counts: counts.to_vec(), variety_hash: String::new() }
    }

    fn user(b: u32) -> DegreeBudget {
        DegreeBudget { b, source: BudgetSource::UserConfig }
    }

    #[test]
    fn projective_plane_over_f2() {
        let z = reconstruct(&series(2, &[7, 21, 73, 273, 1057, 4161]), &user(3), 2).unwrap();
        assert_eq!(z.numerator, zpoly::from_i64(&[1]));
        assert_eq!(z.denominator, zpoly::from_i64(&[1, -7, 14, -8]));
        let fe = functional_equation_check(&z);
        assert!(fe.holds);
        assert_eq!(fe.chi, 3);
    }

    #[test]
    fn projective_line_over_f3() {
        let z = reconstruct(&series(3, &[4, 10, 28, 82]), &user(2), 1).unwrap();
        assert_eq!(z.denominator, zpoly::from_i64(&[1, -4, 3]));
        assert_eq!(functional_equation_check(&z).sign, Some(1));
    }

    #[test]
    fn expand_examples() {
        let z = ZetaFunction { q: 2, dim: 1, numerator: zpoly::from_i64(&[1]), denominator: zpoly::from_i64(&[1, -3, 2]) };
        assert_eq!(expand(&z, 4), [3, 5, 9, 17].map(BigInt::from).to_vec());
    }

    #[test]
    fn budgets() {
        assert_eq!(betti_budget(&BudgetDescriptor { user_budget: Some(4), hypersurface: None }).unwrap().b, 4);
        assert_eq!(hypersurface_betti(4, 2), vec![1, 0, 22, 0, 1]);
        assert_eq!(hypersurface_betti(3, 2), vec![1, 0, 7, 0, 1]);
        assert_eq!(hypersurface_betti(3, 1), vec![1, 2, 1]);
        assert_eq!(betti_budget(&BudgetDescriptor::default()), Err(ZetaError::MissingBudget));
    }

    #[test]
    fn quadric_surface_sign_is_forced() {
        let sz = reconstruct_surface(&series(2, &[9]), 2, 4096).unwrap();
        assert!(!sz.ambiguous);
        assert_eq!(sz.candidates[0].p2, zpoly::from_i64(&[1, -4, 4]));
    }

    #[test]
    fn norm_form_quadric_needs_a_second_count() {
        // P_2 = 1 - 4T^2 over F_2: N_1 = 5, N_2 = 1 + 16 + 8 = 25
        let one = reconstruct_surface(&series(2, &[5]), 2, 4096).unwrap();
        assert!(one.ambiguous);
        let two = reconstruct_surface(&series(2, &[5, 25]), 2, 4096).unwrap();
        assert!(!two.ambiguous);
        assert_eq!(two.candidates[0].p2, zpoly::from_i64(&[1, 0, -4]));
    }

    #[test]
    fn trivial_b2() {
        let sz = reconstruct_surface(&series(2, &[5]), 0, 4096).unwrap();
        assert_eq!(sz.candidates[0].p2, zpoly::from_i64(&[1]));
    }
}
