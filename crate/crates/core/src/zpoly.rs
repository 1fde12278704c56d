//! Dense univariate polynomials over Z and Q, lowest degree first, with no
//! trailing zeros.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type ZPoly = Vec<BigInt>;
pub type QPoly = Vec<BigRational>;

pub fn from_i64(c: &[i64]) -> ZPoly {
    trim(c.iter().map(|&x| BigInt::from(x)).collect())
}

pub fn trim<T: Zero>(mut a: Vec<T>) -> Vec<T> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

/// `None` for the zero polynomial.
pub fn degree<T>(a: &[T]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let nb: ZPoly = b.iter().map(|c| -c).collect();
    add(a, &nb)
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn scale(a: &[BigInt], c: &BigInt) -> ZPoly {
    trim(a.iter().map(|x| x * c).collect())
}

pub fn pow(a: &[BigInt], k: u32) -> ZPoly {
    let mut acc = vec![BigInt::one()];
    for _ in 0..k {
        acc = mul(&acc, a);
    }
    acc
}

pub fn product(polys: &[ZPoly]) -> ZPoly {
    polys.iter().fold(vec![BigInt::one()], |acc, p| mul(&acc, p))
}

pub fn eval(a: &[BigInt], x: &BigInt) -> BigInt {
    a.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

pub fn derivative(a: &[BigInt]) -> ZPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

/// Nonnegative gcd of the coefficients; zero for the zero polynomial.
pub fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Divide by the content and make the leading coefficient positive.
pub fn primitive_part(a: &[BigInt]) -> ZPoly {
    if a.is_empty() {
        return Vec::new();
    }
    let mut c = content(a);
    if a.last().unwrap().is_negative() {
        c = -c;
    }
    a.iter().map(|x| x / &c).collect()
}

/// `a / b` when `b` divides `a` exactly over Z.
pub fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = degree(b)?;
    let lead = b.last().unwrap();
    let mut r: ZPoly = a.to_vec();
    if r.len() < b.len() {
        return if r.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() >= b.len() {
        let top = r.len() - 1;
        let (f, rem) = r[top].div_rem(lead);
        if !rem.is_zero() {
            return None;
        }
        let shift = top - db;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r = trim(r);
    }
    if r.is_empty() {
        Some(trim(q))
    } else {
        None
    }
}

pub fn to_q(a: &[BigInt]) -> QPoly {
    a.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// Clear denominators: the primitive integer polynomial proportional to `a`.
pub fn q_to_primitive(a: &[BigRational]) -> ZPoly {
    let l = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let z: ZPoly = a.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    primitive_part(&trim(z))
}

pub fn q_divrem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r: QPoly = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let top = r.len() - 1;
        let f = &r[top] / &lead;
        let shift = top - db;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r = trim(r);
    }
    (trim(q), r)
}

/// Gcd over Q, returned as a primitive integer polynomial with positive
/// leading coefficient (empty if both inputs are zero).
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut x = primitive_part(a);
    let mut y = primitive_part(b);
    while !y.is_empty() {
        let (_, r) = q_divrem(&to_q(&x), &to_q(&y));
        x = y;
        y = q_to_primitive(&r);
    }
    x
}

/// `a(c T)`.
pub fn scale_variable(a: &[BigInt], c: &BigInt) -> ZPoly {
    let mut pw = BigInt::one();
    let mut out = Vec::with_capacity(a.len());
    for x in a {
        out.push(x * &pw);
        pw *= c;
    }
    trim(out)
}

/// Reversed coefficient list, `T^deg a(1/T)`.
pub fn reverse(a: &[BigInt]) -> ZPoly {
    trim(a.iter().rev().cloned().collect())
}

/// The first `n` coefficients of `a / b` as a power series; `None` unless
/// `b(0) = ±1` or the division stays integral.
pub fn series_div(a: &[BigInt], b: &[BigInt], n: usize) -> Option<ZPoly> {
    let b0 = b.first()?;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = a.get(k).cloned().unwrap_or_default();
        for i in 1..=k.min(b.len().saturating_sub(1)) {
            acc -= &b[i] * &out[k - i];
        }
        let (q, r) = acc.div_rem(b0);
        if !r.is_zero() {
            return None;
        }
        out.push(q);
    }
    Some(out)
}

/// Human-readable form in the variable `var`, e.g. `1 - 2*T + 4*T^2`.
pub fn format(a: &[BigInt], var: &str) -> String {
    if a.is_empty() {
        return String::from("0");
    }
    let mut s = String::new();
    for (i, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let coeff = if i > 0 && mag.is_one() { String::new() } else { format!("{mag}") };
        let mono = match i {
            0 => String::new(),
            1 => String::from(var),
            _ => format!("{var}^{i}"),
        };
        match (coeff.is_empty(), mono.is_empty()) {
            (false, false) => s.push_str(&format!("{coeff}*{mono}")),
            (true, _) => s.push_str(&mono),
            (_, true) => s.push_str(&coeff),
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = from_i64(&[1, -1]);
        let b = from_i64(&[1, 1]);
        assert_eq!(mul(&a, &b), from_i64(&[1, 0, -1]));
        assert_eq!(exact_div(&from_i64(&[1, 0, -1]), &a), Some(b.clone()));
        assert_eq!(exact_div(&from_i64(&[1, 0, 1]), &a), None);
        assert_eq!(gcd(&from_i64(&[2, 0, -2]), &from_i64(&[3, 3])), from_i64(&[1, 1]));
        assert_eq!(format(&from_i64(&[1, -2, 4]), "T"), "1 - 2*T + 4*T^2");
        assert_eq!(format(&from_i64(&[0, 1]), "T"), "T");
    }

    #[test]
    fn series_division() {
        // 1/(1 - 2T) = 1 + 2T + 4T^2 + ...
        assert_eq!(series_div(&from_i64(&[1]), &from_i64(&[1, -2]), 4), Some(from_i64(&[1, 2, 4, 8])));
    }
}
