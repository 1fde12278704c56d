//! Weight decomposition of zeta functions, Betti numbers, and the
//! cyclotomic bound on the rank of algebraic classes.
//!
//! Every factor is certified exactly: an integer polynomial whose reciprocal
//! roots all have absolute value `sqrt(s)` is `s`-reciprocal, and after the
//! substitution `y = x + s/x` it becomes a polynomial `h` of half the degree
//! whose roots are real and lie in `(-2 sqrt(s), 2 sqrt(s))`. Both facts are
//! checked with Sturm sequences, so no floating point is involved.

mod factor;
mod sturm;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use factor::{factor_z_poly, Factorization};
pub use sturm::{PrecisionExceeded, Point, Sturm};

use crate::arith::euler_phi;
use crate::zeta::ZetaFunction;
use crate::zpoly::{self, ZPoly};

/// Default cap on Sturm-sequence coefficient size, in bits.
pub const DEFAULT_PRECISION_BITS: u64 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WeilError {
    #[error("factor {0} is not pure of any weight")]
    Unclassifiable(String),
    #[error("certifying factor {0} needs more than the allowed precision")]
    PrecisionExceeded(String),
    #[error("factor {poly} has weight {weight}, wrong parity for the {side}")]
    WeightParity { poly: String, weight: u32, side: &'static str },
    #[error("weight {weight} is outside 0..={max}")]
    WeightOutOfRange { weight: u32, max: u32 },
    #[error("factor {0} does not have constant term 1 or -1")]
    BadConstant(String),
    #[error("{0}")]
    Inconsistent(String),
}

/// Certify that every reciprocal root of the irreducible `f` (constant term
/// `±1`) has absolute value `sqrt(s)`. `Ok(false)` means at least one root is
/// off that circle.
pub fn roots_on_circle(f: &[BigInt], s: &BigInt, bits: u64) -> Result<bool, PrecisionExceeded> {
    let f = zpoly::trim(f.to_vec());
    let Some(m) = zpoly::degree(&f) else { return Ok(false) };
    if m == 0 {
        return Ok(true);
    }
    // g(x) = x^m f(1/x), normalized so its leading coefficient is 1
    let mut g = zpoly::reverse(&f);
    if f[0].is_negative() {
        g = g.iter().map(|c| -c).collect();
    }
    if !g.last().unwrap().is_one() {
        return Ok(false);
    }
    if m == 1 {
        let alpha = -&g[0];
        return Ok(&alpha * &alpha == *s);
    }
    if m % 2 == 1 {
        // odd degree needs a real root ±sqrt(s), so f has a rational linear factor
        return Ok(false);
    }
    if m == 2 && g[1].is_zero() && g[0] == -s.clone() {
        // the only irreducible case with real roots ±sqrt(s)
        return Ok(true);
    }
    let half = m / 2;
    let mut spow = BigInt::one();
    for j in 0..=half {
        if g[half - j] != &spow * &g[half + j] {
            return Ok(false);
        }
        spow *= s;
    }
    // h(y) = g_half + sum_j g_{half+j} D_j(y), with x^j + (s/x)^j = D_j(x + s/x)
    let mut d_prev: ZPoly = vec![BigInt::from(2)];
    let mut d_cur: ZPoly = vec![BigInt::zero(), BigInt::one()];
    let mut h: ZPoly = vec![g[half].clone()];
    for j in 1..=half {
        h = zpoly::add(&h, &zpoly::scale(&d_cur, &g[half + j]));
        let next = zpoly::sub(
            &zpoly::mul(&d_cur, &[BigInt::zero(), BigInt::one()]),
            &zpoly::scale(&d_prev, s),
        );
        d_prev = d_cur;
        d_cur = next;
    }
    let st = Sturm::new(&h, bits)?;
    if st.count(&Point::NegInf, &Point::PosInf) != half {
        return Ok(false);
    }
    // H(x^2) = h(x) h(-x): its roots are the squares of the roots of h
    let h_neg: ZPoly = h.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
    let prod = zpoly::mul(&h, &h_neg);
    let big_h: ZPoly = zpoly::trim(prod.iter().step_by(2).cloned().collect());
    let four_s = BigRational::from_integer(s * BigInt::from(4));
    if sturm::eval_sign(&big_h, &four_s) == num_bigint::Sign::NoSign {
        return Ok(false);
    }
    let st_h = Sturm::new(&big_h, bits)?;
    Ok(st_h.count(&Point::At(four_s), &Point::PosInf) == 0)
}

/// Weight `i` of an irreducible factor `f` with `f(0) = ±1`: all reciprocal
/// roots have absolute value `q^{i/2}`.
pub fn classify_factor(f: &[BigInt], q: u64, bits: u64) -> Result<u32, WeilError> {
    let name = zpoly::format(f, "T");
    let m = zpoly::degree(f).ok_or_else(|| WeilError::BadConstant(name.clone()))?;
    if !f[0].abs().is_one() {
        return Err(WeilError::BadConstant(name));
    }
    if m == 0 {
        return Err(WeilError::Unclassifiable(name));
    }
    let lead = f[m].abs();
    let target = &lead * &lead;
    let qb = BigInt::from(q);
    let step = qb.pow(m as u32);
    let mut i = 0u32;
    let mut acc = BigInt::one();
    while acc < target {
        acc *= &step;
        i += 1;
    }
    if acc != target {
        return Err(WeilError::Unclassifiable(name));
    }
    match roots_on_circle(f, &qb.pow(i), bits) {
        Ok(true) => Ok(i),
        Ok(false) => Err(WeilError::Unclassifiable(name)),
        Err(PrecisionExceeded) => Err(WeilError::PrecisionExceeded(name)),
    }
}

/// True if every reciprocal root of `p` has absolute value `q^{w/2}`, as
/// certified factor by factor. A constant polynomial qualifies vacuously.
pub fn all_roots_of_weight(p: &[BigInt], q: u64, weight: u32, bits: u64) -> bool {
    let p = zpoly::trim(p.to_vec());
    if p.is_empty() {
        return false;
    }
    if p.len() == 1 {
        return true;
    }
    let fac = factor_z_poly(&p);
    let s = BigInt::from(q).pow(weight);
    fac.factors.iter().all(|(f, _)| f[0].abs().is_one() && roots_on_circle(f, &s, bits) == Ok(true))
}

/// The factor `P_i` of weight `i`, with its irreducible pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPiece {
    pub weight: u32,
    /// Normalized to constant term 1.
    pub poly: ZPoly,
    pub factors: Vec<(ZPoly, u32)>,
}

fn normalize_constant(f: &[BigInt]) -> ZPoly {
    if f[0].is_negative() {
        f.iter().map(|c| -c).collect()
    } else {
        f.to_vec()
    }
}

/// Split numerator and denominator of `Z` into the weight pieces
/// `P_0, ..., P_{2d}`: odd weights on top, even weights below.
pub fn classify_weights(z: &ZetaFunction, bits: u64) -> Result<Vec<WeightPiece>, WeilError> {
    let max = 2 * z.dim;
    let mut pieces: Vec<WeightPiece> =
        (0..=max).map(|w| WeightPiece { weight: w, poly: vec![BigInt::one()], factors: Vec::new() }).collect();
    for (poly, side, parity) in [(&z.numerator, "numerator", 1u32), (&z.denominator, "denominator", 0u32)] {
        let fac = factor_z_poly(poly);
        for (f, e) in fac.factors {
            let f = normalize_constant(&f);
            let w = classify_factor(&f, z.q, bits)?;
            if w > max {
                return Err(WeilError::WeightOutOfRange { weight: w, max });
            }
            if w % 2 != parity {
                return Err(WeilError::WeightParity { poly: zpoly::format(&f, "T"), weight: w, side });
            }
            let piece = &mut pieces[w as usize];
            piece.poly = zpoly::mul(&piece.poly, &zpoly::pow(&f, e));
            piece.factors.push((f, e));
        }
    }
    Ok(pieces)
}

/// `b_i = deg P_i`, checked against `b_0 = b_{2d} = 1` and the Euler
/// characteristic of `Z`.
pub fn betti_numbers(z: &ZetaFunction, bits: u64) -> Result<Vec<u64>, WeilError> {
    let pieces = classify_weights(z, bits)?;
    let b: Vec<u64> = pieces.iter().map(|p| (p.poly.len() - 1) as u64).collect();
    if b[0] != 1 || b[b.len() - 1] != 1 {
        return Err(WeilError::Inconsistent(alloc::format!(
            "b_0 = {} and b_top = {} should both be 1",
            b[0],
            b[b.len() - 1]
        )));
    }
    let chi: i64 = b.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
    if chi != z.euler_characteristic() {
        return Err(WeilError::Inconsistent(alloc::format!(
            "alternating sum {chi} differs from Euler characteristic {}",
            z.euler_characteristic()
        )));
    }
    Ok(b)
}

/// `Phi_m(T)`.
pub fn cyclotomic(m: u64) -> ZPoly {
    // T^m - 1 divided by Phi_d for every proper divisor d
    let mut num: ZPoly = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            num = zpoly::exact_div(&num, &cyclotomic(d)).expect("Phi_d divides T^m - 1");
        }
    }
    num
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicPart {
    pub m: u64,
    pub phi: u64,
    pub multiplicity: u32,
}

/// Total degree of the cyclotomic part of `p`, with the contributing
/// `Phi_m` and their multiplicities.
pub fn cyclotomic_multiplicity(p: &[BigInt]) -> (u64, Vec<CyclotomicPart>) {
    let mut rest = zpoly::trim(p.to_vec());
    let deg = zpoly::degree(&rest).unwrap_or(0) as u64;
    let mut parts = Vec::new();
    let mut total = 0;
    if deg == 0 {
        return (0, parts);
    }
    // phi(m) >= sqrt(m/2), so phi(m) <= deg forces m <= 2 deg^2
    let bound = 2 * deg * deg + 2;
    for m in 1..=bound {
        let phi = euler_phi(m);
        if phi > deg || phi as usize >= rest.len() {
            continue;
        }
        let cm = cyclotomic(m);
        let mut mult = 0;
        while let Some(qt) = zpoly::exact_div(&rest, &cm) {
            rest = qt;
            mult += 1;
        }
        if mult > 0 {
            total += phi * mult as u64;
            parts.push(CyclotomicPart { m, phi, multiplicity: mult });
        }
    }
    (total, parts)
}

/// Upper bound on the rank of the algebraic classes in codimension `p`:
/// the number of reciprocal roots of `P_{2p}` equal to `q^p` times a root
/// of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateBound {
    pub p: u32,
    pub v_mu: u64,
    pub b_2p: u64,
    pub per_factor: Vec<CyclotomicPart>,
}

/// Count the reciprocal roots of `P_{2p}` of the form `q^p ζ`.
pub fn dim_v_mu(z: &ZetaFunction, p: u32, bits: u64) -> Result<TateBound, WeilError> {
    if p > z.dim {
        return Err(WeilError::WeightOutOfRange { weight: 2 * p, max: 2 * z.dim });
    }
    let pieces = classify_weights(z, bits)?;
    let p2p = &pieces[2 * p as usize].poly;
    let deg = p2p.len() - 1;
    // R(T) = T^deg-scaled P_{2p}(T / q^p), integral after clearing q^{p deg}
    let qp = BigInt::from(z.q).pow(p);
    let r: ZPoly = p2p.iter().enumerate().map(|(k, c)| c * qp.pow((deg - k) as u32)).collect();
    let (v_mu, per_factor) = cyclotomic_multiplicity(&r);
    Ok(TateBound { p, v_mu, b_2p: deg as u64, per_factor })
}

/// `dim V_mu` for divisors, an upper bound on the Picard number.
pub fn picard_upper_bound(z: &ZetaFunction, bits: u64) -> Result<TateBound, WeilError> {
    dim_v_mu(z, 1, bits)
}

/// `sum_i (-1)^i deg P_i`, used as a consistency check on reports.
pub fn euler_characteristic(pieces: &[WeightPiece]) -> i64 {
    pieces
        .iter()
        .map(|p| {
            let d = (p.poly.len() - 1) as i64;
            if p.weight % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .sum()
}

/// Coefficients as `i64`, for reporting.
pub fn to_i64(p: &[BigInt]) -> Option<Vec<i64>> {
    p.iter().map(|c| c.to_i64()).collect()
}
