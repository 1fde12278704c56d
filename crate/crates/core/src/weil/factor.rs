//! Factorization of integer polynomials: squarefree decomposition, factoring
//! modulo a small prime, Hensel lifting and subset recombination.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_prime, SplitMix};
use crate::fp_poly::{self, FpPoly};
use crate::zpoly::{self, QPoly, ZPoly};

/// `unit * prod f^e`, factors primitive with positive leading coefficient,
/// sorted by degree and then coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: BigInt,
    pub factors: Vec<(ZPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> ZPoly {
        let mut acc = vec![self.unit.clone()];
        for (f, e) in &self.factors {
            acc = zpoly::mul(&acc, &zpoly::pow(f, *e));
        }
        acc
    }
}

fn q_monic(a: &[BigRational]) -> QPoly {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let l = l.clone();
            a.iter().map(|c| c / &l).collect()
        }
    }
}

fn q_gcd(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut x = zpoly::trim(a.to_vec());
    let mut y = zpoly::trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = zpoly::q_divrem(&x, &y);
        x = y;
        y = r;
    }
    q_monic(&x)
}

fn q_derivative(a: &[BigRational]) -> QPoly {
    zpoly::trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
}

fn q_sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    zpoly::trim(out)
}

/// Yun's algorithm over Q: `(g_i, i)` with `f = c * prod g_i^i`, `g_i`
/// squarefree, pairwise coprime, primitive.
fn squarefree(f: &[BigInt]) -> Vec<(ZPoly, u32)> {
    let a = zpoly::to_q(f);
    let b = q_derivative(&a);
    let c = q_gcd(&a, &b);
    let (mut w, _) = zpoly::q_divrem(&a, &c);
    let (mut y, _) = zpoly::q_divrem(&b, &c);
    let mut z = q_sub(&y, &q_derivative(&w));
    let mut out = Vec::new();
    let mut i = 1;
    while w.len() > 1 {
        let g = q_gcd(&w, &z);
        if g.len() > 1 {
            out.push((zpoly::q_to_primitive(&g), i));
        }
        w = zpoly::q_divrem(&w, &g).0;
        y = zpoly::q_divrem(&z, &g).0;
        z = q_sub(&y, &q_derivative(&w));
        i += 1;
    }
    out
}

fn reduce_mod_p(f: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let mut out: FpPoly = f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    fp_poly::trim(&mut out);
    out
}

fn fp_to_z(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn random_poly(rng: &mut SplitMix, deg_bound: usize, p: u64) -> FpPoly {
    let mut a: FpPoly = (0..deg_bound).map(|_| rng.below(p)).collect();
    fp_poly::trim(&mut a);
    a
}

/// Split a squarefree monic product of irreducibles of degree `d`.
fn equal_degree(g: &FpPoly, d: usize, p: u64, rng: &mut SplitMix, out: &mut Vec<FpPoly>) {
    let n = g.len() - 1;
    if n == d {
        out.push(g.clone());
        return;
    }
    let exp_limbs = {
        let pd = BigUint::from(p).pow(d as u32);
        ((pd - BigUint::one()) / BigUint::from(2u32)).to_u64_digits()
    };
    loop {
        let a = random_poly(rng, n, p);
        if a.len() < 2 {
            continue;
        }
        let b = if p == 2 {
            // trace a + a^2 + ... + a^(2^(d-1))
            let mut acc: FpPoly = Vec::new();
            let mut t = fp_poly::rem(&a, g, p);
            for _ in 0..d {
                acc = fp_poly::add(&acc, &t, p);
                t = fp_poly::mulmod(&t, &t, g, p);
            }
            acc
        } else {
            let t = fp_poly::powmod_limbs(&a, &exp_limbs, g, p);
            fp_poly::sub(&t, &[1], p)
        };
        let h = fp_poly::gcd(g, &b, p);
        let dh = h.len().saturating_sub(1);
        if dh > 0 && dh < n {
            let (other, _) = fp_poly::divrem(g, &h, p);
            equal_degree(&h, d, p, rng, out);
            equal_degree(&fp_poly::monic(&other, p), d, p, rng, out);
            return;
        }
    }
}

/// Monic irreducible factors of a squarefree monic polynomial over F_p.
pub(crate) fn factor_mod_p(f: &FpPoly, p: u64, seed: u64) -> Vec<FpPoly> {
    let mut rng = SplitMix(seed);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x: FpPoly = vec![0, 1];
    let mut h = fp_poly::rem(&x, &rest, p);
    let mut i = 1;
    while rest.len() > 2 * i {
        h = fp_poly::powmod(&h, p as u128, &rest, p);
        let g = fp_poly::gcd(&rest, &fp_poly::sub(&h, &x, p), p);
        if g.len() > 1 {
            equal_degree(&g, i, p, &mut rng, &mut out);
            rest = fp_poly::divrem(&rest, &g, p).0;
            h = fp_poly::rem(&h, &rest, p);
        }
        i += 1;
    }
    if rest.len() > 1 {
        out.push(fp_poly::monic(&rest, p));
    }
    out.sort();
    out
}

fn mod_pk(a: &[BigInt], m: &BigInt) -> ZPoly {
    zpoly::trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    zpoly::trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Lift `f ≡ g h (mod p)`, `g` monic, to `f ≡ G H (mod p^k)`.
fn hensel_pair(f: &[BigInt], g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, s, t) = fp_poly::xgcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let _ = s;
    let mut big_g = fp_to_z(g);
    let mut big_h = fp_to_z(h);
    let pb = BigInt::from(p);
    let mut pj = pb.clone();
    for _ in 1..k {
        let e = zpoly::sub(f, &zpoly::mul(&big_g, &big_h));
        let e: ZPoly = e
            .iter()
            .map(|c| {
                debug_assert!((c % &pj).is_zero());
                c / &pj
            })
            .collect();
        let ep = reduce_mod_p(&e, p);
        let tau = fp_poly::rem(&fp_poly::mul(&t, &ep, p), g, p);
        let (sigma, r) = fp_poly::divrem(&fp_poly::sub(&ep, &fp_poly::mul(&tau, h, p), p), g, p);
        debug_assert!(r.is_empty());
        big_g = zpoly::add(&big_g, &zpoly::scale(&fp_to_z(&tau), &pj));
        big_h = zpoly::add(&big_h, &zpoly::scale(&fp_to_z(&sigma), &pj));
        pj *= &pb;
        big_g = mod_pk(&big_g, &pj);
        big_h = mod_pk(&big_h, &pj);
    }
    (big_g, big_h)
}

/// Monic lifts mod `p^k` of the modular factors `us` of `f`.
fn lift_all(f: &[BigInt], us: &[FpPoly], p: u64, k: u32, pk: &BigInt) -> Vec<ZPoly> {
    if us.len() == 1 {
        let lc = f.last().unwrap().mod_floor(pk);
        let inv = lc.modinv(pk).expect("leading coefficient is a unit mod p");
        return vec![mod_pk(&zpoly::scale(f, &inv), pk)];
    }
    let lc_p = reduce_mod_p(&[f.last().unwrap().clone()], p);
    let mut h: FpPoly = lc_p;
    for u in &us[1..] {
        h = fp_poly::mul(&h, u, p);
    }
    let (g_lift, h_lift) = hensel_pair(f, &us[0], &h, p, k);
    let mut out = vec![g_lift];
    out.extend(lift_all(&h_lift, &us[1..], p, k, pk));
    out
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
    }
}

/// Irreducible factors of a primitive squarefree polynomial of positive degree.
fn zassenhaus(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    // pick the good prime with the fewest modular factors among the first few
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 6 {
        p += 1;
        if !is_prime(p) || (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce_mod_p(f, p);
        let monic = fp_poly::monic(&fp, p);
        if fp_poly::gcd(&monic, &fp_poly::derivative(&monic, p), p).len() != 1 {
            continue;
        }
        tried += 1;
        let fac = factor_mod_p(&monic, p, 0x5eed ^ p);
        if fac.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| fac.len() < b.len()) {
            best = Some((p, fac));
        }
    }
    let (p, us) = best.unwrap();
    // coefficient bound for factors of f, times |lc|
    let max = f.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = (BigInt::one() << n) * BigInt::from(n + 1) * max * lc.abs();
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= &bound * 2 {
        pk *= &pb;
        k += 1;
    }
    let mut lifted = lift_all(f, &us, p, k, &pk);
    let mut cur: ZPoly = f.to_vec();
    let mut found = Vec::new();
    let mut d = 1;
    while 2 * d <= lifted.len() {
        let mut hit = None;
        for s in subsets_of_size(lifted.len(), d) {
            let lc_cur = cur.last().unwrap().clone();
            let mut g = vec![lc_cur];
            for &i in &s {
                g = mod_pk(&zpoly::mul(&g, &lifted[i]), &pk);
            }
            let g = zpoly::primitive_part(&symmetric(&g, &pk));
            if let Some(qt) = zpoly::exact_div(&cur, &g) {
                hit = Some((s, g, qt));
                break;
            }
        }
        match hit {
            Some((s, g, qt)) => {
                found.push(g);
                cur = qt;
                for &i in s.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => d += 1,
        }
    }
    if cur.len() > 1 {
        found.push(zpoly::primitive_part(&cur));
    }
    found
}

/// Complete factorization over Z.
pub fn factor_z_poly(p: &[BigInt]) -> Factorization {
    let p = zpoly::trim(p.to_vec());
    assert!(!p.is_empty(), "cannot factor the zero polynomial");
    let mut factors: Vec<(ZPoly, u32)> = Vec::new();
    let shift = p.iter().take_while(|c| c.is_zero()).count();
    if shift > 0 {
        factors.push((zpoly::from_i64(&[0, 1]), shift as u32));
    }
    let core_poly: ZPoly = p[shift..].to_vec();
    let prim = zpoly::primitive_part(&core_poly);
    if prim.len() > 1 {
        for (g, mult) in squarefree(&prim) {
            for f in zassenhaus(&g) {
                factors.push((zpoly::primitive_part(&f), mult));
            }
        }
    }
    factors.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    // merge equal factors
    let mut merged: Vec<(ZPoly, u32)> = Vec::new();
    for (f, e) in factors {
        match merged.last_mut() {
            Some((g, m)) if *g == f => *m += e,
            _ => merged.push((f, e)),
        }
    }
    let mut prod = vec![BigInt::one()];
    for (f, e) in &merged {
        prod = zpoly::mul(&prod, &zpoly::pow(f, *e));
    }
    let unit = p.last().unwrap() / prod.last().unwrap();
    debug_assert_eq!(zpoly::scale(&prod, &unit), p);
    let _ = Sign::Plus;
    Factorization { unit, factors: merged }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: &[i64]) -> ZPoly {
        zpoly::from_i64(c)
    }

    #[test]
    fn modular_factorization_multiplies_back() {
        let p = 7;
        // (x+1)(x+2)(x^2+1) mod 7 ... x^2 + 1 is irreducible mod 7
        let f = fp_poly::mul(&fp_poly::mul(&[1, 1], &[2, 1], p), &[1, 0, 1], p);
        let fac = factor_mod_p(&f, p, 1);
        assert_eq!(fac.len(), 3);
        let prod = fac.iter().fold(vec![1u64], |a, b| fp_poly::mul(&a, b, p));
        assert_eq!(prod, f);
        let f2 = fp_poly::mul(&[1, 1, 1], &[1, 0, 1, 1], 2);
        assert_eq!(factor_mod_p(&f2, 2, 3).len(), 2);
    }

    #[test]
    fn small_examples() {
        let f = factor_z_poly(&z(&[1, 0, -1]));
        assert_eq!(f.factors, vec![(z(&[-1, 1]), 1), (z(&[1, 1]), 1)]);
        assert_eq!(f.expand(), z(&[1, 0, -1]));
        // (1 - 2T)^2 (1 - T)
        let p = zpoly::mul(&zpoly::pow(&z(&[1, -2]), 2), &z(&[1, -1]));
        let f = factor_z_poly(&p);
        assert_eq!(f.factors, vec![(z(&[-1, 1]), 1), (z(&[-1, 2]), 2)]);
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn swinnerton_dyer_style_irreducible() {
        // x^4 - 10x^2 + 1 is irreducible but splits modulo every prime
        let f = factor_z_poly(&z(&[1, 0, -10, 0, 1]));
        assert_eq!(f.factors.len(), 1);
    }

    #[test]
    fn content_and_power_of_t() {
        let p = z(&[0, 0, 6, 6]);
        let f = factor_z_poly(&p);
        assert_eq!(f.unit, BigInt::from(6));
        assert_eq!(f.expand(), p);
    }
}
