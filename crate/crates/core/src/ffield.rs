//! Finite fields `F_{p^e}` in the power basis of an explicit irreducible
//! modulus, and embeddings of a field into its extensions.
//!
//! Elements are coordinate vectors `c_0 + c_1 a + ... + c_{e-1} a^{e-1}` where
//! `a` is the class of `x` modulo the modulus. The integer
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` is the element's *index*; enumeration
//! and the irreducible-modulus search both follow increasing index.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::arith::{self, inv_mod_prime, is_prime, mul_mod};
use crate::field::{CoeffLiteral, Field};
use crate::fp_poly;

/// Largest field size accepted by [`make_field`].
pub const MAX_FIELD_SIZE: u64 = 1 << 62;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field of size {p}^{e} exceeds 2^62")]
    TooLarge { p: u64, e: u32 },
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    InvalidModulus(u32),
    #[error("element has {got} coordinates, expected {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("division by zero")]
    DivisionByZero,
}

/// A finite field `F_p[x]/(modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    p: u64,
    e: u32,
    /// Monic, low degree first, length `e + 1`.
    modulus: Vec<u64>,
    size: u64,
}

/// Coordinates in the power basis; always exactly `e` residues in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub coeffs: Vec<u64>,
}

/// `F_{p^e}` with the first irreducible monic modulus of degree `e` in index order.
pub fn make_field(p: u64, e: u32) -> Result<FieldDesc, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if e == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let size = match arith::checked_pow(p, e as u64) {
        Some(s) if s <= MAX_FIELD_SIZE => s,
        _ => return Err(FieldError::TooLarge { p, e }),
    };
    for idx in 0..size {
        let mut modulus = digits(idx, p, e as usize);
        modulus.push(1);
        if fp_poly::is_irreducible(&modulus, p) {
            return Ok(FieldDesc { p, e, modulus, size });
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits(mut idx: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(idx % p);
        idx /= p;
    }
    out
}

impl FieldDesc {
    /// Field from an explicit modulus (monic, low degree first); checks irreducibility.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let e = modulus.len().saturating_sub(1) as u32;
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if modulus.last() != Some(&1)
            || modulus.iter().any(|&c| c >= p)
            || !fp_poly::is_irreducible(&modulus, p)
        {
            return Err(FieldError::InvalidModulus(e));
        }
        let size = match arith::checked_pow(p, e as u64) {
            Some(s) if s <= MAX_FIELD_SIZE => s,
            _ => return Err(FieldError::TooLarge { p, e }),
        };
        Ok(FieldDesc { p, e, modulus, size })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `q = p^e`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.e as usize {
            return Err(FieldError::BadLength { got: coeffs.len(), expected: self.e as usize });
        }
        Ok(FieldElement { coeffs: coeffs.into_iter().map(|c| c % self.p).collect() })
    }

    pub fn zero_elem(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.e as usize] }
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_u64(&self, c: u64) -> FieldElement {
        let mut coeffs = vec![0; self.e as usize];
        coeffs[0] = c % self.p;
        FieldElement { coeffs }
    }

    /// The class `a` of `x`.
    pub fn generator(&self) -> FieldElement {
        self.from_poly(&[0, 1])
    }

    pub fn from_index(&self, idx: u64) -> FieldElement {
        debug_assert!(idx < self.size);
        FieldElement { coeffs: digits(idx, self.p, self.e as usize) }
    }

    pub fn index_of(&self, a: &FieldElement) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// All `q` elements in index order.
    pub fn enumerate(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size).map(move |i| self.from_index(i))
    }

    /// Reduce an arbitrary `F_p` polynomial modulo the modulus.
    pub fn from_poly(&self, poly: &[u64]) -> FieldElement {
        let reduced: Vec<u64> = poly.iter().map(|&c| c % self.p).collect();
        let r = fp_poly::rem(&reduced, &self.modulus, self.p);
        self.pad(r)
    }

    fn pad(&self, mut v: Vec<u64>) -> FieldElement {
        v.resize(self.e as usize, 0);
        FieldElement { coeffs: v }
    }

    pub fn is_zero_elem(&self, a: &FieldElement) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add_elem(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + y) % p).collect() }
    }

    pub fn sub_elem(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + p - y) % p).collect(),
        }
    }

    pub fn neg_elem(&self, a: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement { coeffs: a.coeffs.iter().map(|&x| (p - x) % p).collect() }
    }

    pub fn mul_elem(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let prod = fp_poly::mul(&a.coeffs, &b.coeffs, self.p);
        self.pad(fp_poly::rem(&prod, &self.modulus, self.p))
    }

    pub fn inv_elem(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        let mut a_poly = a.coeffs.clone();
        fp_poly::trim(&mut a_poly);
        if a_poly.is_empty() {
            return Err(FieldError::DivisionByZero);
        }
        let (g, s, _) = fp_poly::xgcd(&a_poly, &self.modulus, self.p);
        debug_assert_eq!(g, vec![1]);
        Ok(self.pad(fp_poly::rem(&s, &self.modulus, self.p)))
    }

    pub fn pow_elem(&self, a: &FieldElement, exp: u128) -> FieldElement {
        let mut acc = self.from_u64(1);
        let mut base = a.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_elem(&acc, &base);
            }
            base = self.mul_elem(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `x -> x^p`.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow_elem(a, self.p as u128)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &FieldElement) -> u64 {
        let n = self.size - 1;
        let mut ord = n;
        for r in arith::prime_factors(n) {
            while ord % r == 0 && self.pow_elem(a, (ord / r) as u128) == self.from_u64(1) {
                ord /= r;
            }
        }
        ord
    }

    /// The first element (in index order) of multiplicative order `q - 1`.
    pub fn primitive_element(&self) -> FieldElement {
        let one = self.from_u64(1);
        let n = self.size - 1;
        let factors = arith::prime_factors(n);
        (1..self.size)
            .map(|i| self.from_index(i))
            .find(|g| factors.iter().all(|&r| self.pow_elem(g, (n / r) as u128) != one))
            .expect("multiplicative group is cyclic")
    }

    /// Evaluate an `F_p`-coefficient polynomial at an element.
    pub fn eval_fp_poly(&self, poly: &[u64], x: &FieldElement) -> FieldElement {
        poly.iter().rev().fold(self.zero_elem(), |acc, &c| {
            self.add_elem(&self.mul_elem(&acc, x), &self.from_u64(c))
        })
    }
}

/// `F_{q^n}` built over the prime field, with the embedding of `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub base: FieldDesc,
    pub field: FieldDesc,
    /// Image of the base generator `a`: a root of the base modulus.
    pub generator_image: FieldElement,
}

/// Degree-`n` extension of `base`, as a degree `e*n` extension of `F_p`.
pub fn extend(base: &FieldDesc, n: u32) -> Result<Extension, FieldError> {
    if n == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let field = if n == 1 { base.clone() } else { make_field(base.p, base.e * n)? };
    let generator_image = if n == 1 {
        base.generator()
    } else if base.e == 1 {
        // modulus x + c0 has the root -c0 in the prime field
        field.from_u64((base.p - base.modulus[0]) % base.p)
    } else {
        find_root(&field, &base.modulus, base.size)
    };
    Ok(Extension { base: base.clone(), field, generator_image })
}

/// A root of `poly` lying in the subfield of size `q`, searched in the
/// order `h^0, h^1, ...` for `h` a generator of that subfield's units.
fn find_root(field: &FieldDesc, poly: &[u64], q: u64) -> FieldElement {
    let gamma = field.primitive_element();
    let h = field.pow_elem(&gamma, ((field.size - 1) / (q - 1)) as u128);
    let mut x = field.from_u64(1);
    for _ in 0..q - 1 {
        if field.is_zero_elem(&field.eval_fp_poly(poly, &x)) {
            return x;
        }
        x = field.mul_elem(&x, &h);
    }
    unreachable!("irreducible modulus of degree e splits in F_(p^(e n))")
}

impl Extension {
    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        self.field.eval_fp_poly(&x.coeffs, &self.generator_image)
    }

    /// Extension degree `n = [F_Q : F_q]`.
    pub fn degree(&self) -> u32 {
        self.field.e / self.base.e
    }
}

impl Field for FieldDesc {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        self.zero_elem()
    }
    fn one(&self) -> FieldElement {
        self.from_u64(1)
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        self.is_zero_elem(a)
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add_elem(a, b)
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.sub_elem(a, b)
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        self.neg_elem(a)
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.mul_elem(a, b)
    }
    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        self.inv_elem(a).ok()
    }
    fn from_i64(&self, n: i64) -> FieldElement {
        self.from_u64(n.rem_euclid(self.p as i64) as u64)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn from_literal(&self, lit: &CoeffLiteral) -> Option<FieldElement> {
        match lit {
            CoeffLiteral::Rational(r) => {
                let p = num_bigint::BigInt::from(self.p);
                let num = r.numer().mod_floor(&p).to_u64()?;
                let den = r.denom().mod_floor(&p).to_u64()?;
                if den == 0 {
                    return None;
                }
                Some(self.from_u64(mul_mod(num, inv_mod_prime(den, self.p), self.p)))
            }
            CoeffLiteral::Vector(v) => {
                if v.len() > self.e as usize || v.is_empty() {
                    return None;
                }
                let p = self.p as i64;
                let coeffs = v.iter().map(|&c| c.rem_euclid(p) as u64).collect();
                Some(self.pad(coeffs))
            }
        }
    }
    fn format_elem(&self, a: &FieldElement) -> String {
        if a.coeffs.iter().skip(1).all(|&c| c == 0) {
            format!("{}", a.coeffs[0])
        } else {
            let parts: Vec<String> = a.coeffs.iter().map(|c| format!("{c}")).collect();
            format!("[{}]", parts.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn irreducible_by_brute_force(p: u64, coeffs: &[u64]) -> bool {
        // degree 2: no roots in F_p
        (0..p).all(|x| fp_poly::eval(coeffs, x, p) != 0)
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.size(), 2);
    }

    #[test]
    fn f4_modulus_and_arithmetic() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let x = f.generator();
        assert_eq!(f.mul_elem(&x, &x).coeffs, vec![1, 1]);
    }

    #[test]
    fn f9_first_irreducible_matches_exhaustive_search() {
        let expected = (0..9u64)
            .map(|i| vec![i % 3, i / 3, 1])
            .find(|m| irreducible_by_brute_force(3, m))
            .unwrap();
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus(), expected.as_slice());
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn inverse_in_f5() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.inv_elem(&f.from_u64(2)).unwrap(), f.from_u64(3));
        assert_eq!(f.inv_elem(&f.zero_elem()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(make_field(4, 1), Err(FieldError::NotPrime(4)));
        assert_eq!(make_field(2, 0), Err(FieldError::ZeroDegree));
    }

    #[test]
    fn frobenius_squared_is_identity_on_f9() {
        let f = make_field(3, 2).unwrap();
        for a in f.enumerate() {
            assert_eq!(f.frobenius(&f.frobenius(&a)), a);
        }
    }

    #[test]
    fn enumeration_is_distinct_and_ordered() {
        let f2 = make_field(2, 1).unwrap();
        let v: Vec<_> = f2.enumerate().collect();
        assert_eq!(v, vec![f2.from_u64(0), f2.from_u64(1)]);
        let f8 = make_field(2, 3).unwrap();
        let all: Vec<_> = f8.enumerate().collect();
        assert_eq!(all.len(), 8);
        for i in 0..8 {
            for j in 0..i {
                assert_ne!(all[i], all[j]);
            }
        }
        let f4 = make_field(2, 2).unwrap();
        let v: Vec<_> = f4.enumerate().take(2).collect();
        assert_eq!(v, vec![f4.zero_elem(), f4.from_u64(1)]);
    }

    #[test]
    fn unit_groups_are_cyclic_up_to_64() {
        for (p, e) in [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2)] {
            let f = make_field(p, e).unwrap();
            let found = (1..f.size()).any(|i| f.order(&f.from_index(i)) == f.size() - 1);
            assert!(found, "no generator in F_{p}^{e}");
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_prime_field() {
        for (p, e) in [(2, 1), (2, 3), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = make_field(p, e).unwrap();
            let fixed: Vec<_> = f.enumerate().filter(|a| f.frobenius(a) == *a).collect();
            let prime: Vec<_> = (0..p).map(|c| f.from_u64(c)).collect();
            assert_eq!(fixed, prime);
        }
    }

    #[test]
    fn extension_identity_and_prime_subfield() {
        let f2 = make_field(2, 1).unwrap();
        let same = extend(&f2, 1).unwrap();
        assert_eq!(same.field, f2);
        assert_eq!(same.embed(&f2.from_u64(1)), f2.from_u64(1));
        let f4 = extend(&f2, 2).unwrap();
        assert_eq!(f4.field.size(), 4);
        assert_eq!(f4.embed(&f2.from_u64(0)), f4.field.zero_elem());
        assert_eq!(f4.embed(&f2.from_u64(1)), f4.field.from_u64(1));
    }

    #[test]
    fn f16_over_f4_image_satisfies_base_modulus() {
        let f4 = make_field(2, 2).unwrap();
        let ext = extend(&f4, 2).unwrap();
        assert_eq!(ext.field.size(), 16);
        let r = ext.field.eval_fp_poly(f4.modulus(), &ext.generator_image);
        assert!(ext.field.is_zero_elem(&r));
    }

    #[test]
    fn embeddings_are_ring_homomorphisms() {
        for (p, e, n) in [(2, 2, 2), (2, 1, 4), (3, 1, 2), (2, 2, 1), (3, 2, 1)] {
            let base = make_field(p, e).unwrap();
            let ext = extend(&base, n).unwrap();
            for a in base.enumerate() {
                for b in base.enumerate() {
                    let s = ext.embed(&base.add_elem(&a, &b));
                    assert_eq!(s, ext.field.add_elem(&ext.embed(&a), &ext.embed(&b)));
                    let m = ext.embed(&base.mul_elem(&a, &b));
                    assert_eq!(m, ext.field.mul_elem(&ext.embed(&a), &ext.embed(&b)));
                }
            }
        }
    }

    #[test]
    fn literal_round_trip() {
        let f = make_field(3, 2).unwrap();
        for a in f.enumerate() {
            let s = f.format_elem(&a);
            let lit = if s.starts_with('[') {
                let inner = &s[1..s.len() - 1];
                CoeffLiteral::Vector(inner.split(',').map(|t| t.parse().unwrap()).collect())
            } else {
                CoeffLiteral::Rational(num_rational::BigRational::from_integer(s.parse().unwrap()))
            };
            assert_eq!(f.from_literal(&lit).unwrap(), a);
        }
    }
}
