//! Exact real-root counting with Sturm sequences over Z.

use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::zpoly::{self, ZPoly};

/// Raised when a Sturm sequence needs coefficients wider than allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionExceeded;

/// Clear denominators and content by a positive factor only, so signs at
/// every point are preserved.
fn positive_primitive(a: &[BigRational]) -> ZPoly {
    let l = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let z: ZPoly = a.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = zpoly::content(&z);
    if g.is_zero() {
        return Vec::new();
    }
    zpoly::trim(z.iter().map(|c| c / &g).collect())
}

pub struct Sturm {
    seq: Vec<ZPoly>,
}

#[derive(Clone, Debug)]
pub enum Point {
    NegInf,
    At(BigRational),
    PosInf,
}

fn sign_at(p: &[BigInt], x: &Point) -> Sign {
    let Some(lead) = p.last() else { return Sign::NoSign };
    match x {
        Point::PosInf => lead.sign(),
        Point::NegInf => {
            if (p.len() - 1) % 2 == 0 {
                lead.sign()
            } else {
                -lead.sign()
            }
        }
        Point::At(r) => {
            // sign of b^n p(a/b) with b > 0
            let (a, b) = (r.numer(), r.denom());
            let n = p.len() - 1;
            let mut acc = BigInt::zero();
            let mut bpow = BigInt::one();
            let mut terms = Vec::with_capacity(p.len());
            for _ in 0..=n {
                terms.push(bpow.clone());
                bpow *= b;
            }
            let mut apow = BigInt::one();
            for (i, c) in p.iter().enumerate() {
                acc += c * &apow * &terms[n - i];
                apow *= a;
            }
            acc.sign()
        }
    }
}

impl Sturm {
    pub fn new(p: &[BigInt], max_bits: u64) -> Result<Self, PrecisionExceeded> {
        let p0 = zpoly::trim(p.to_vec());
        let p1 = zpoly::derivative(&p0);
        let mut seq = Vec::new();
        seq.push(p0);
        if !p1.is_empty() {
            seq.push(p1);
        }
        while seq.len() >= 2 {
            let a = &seq[seq.len() - 2];
            let b = &seq[seq.len() - 1];
            let (_, r) = zpoly::q_divrem(&zpoly::to_q(a), &zpoly::to_q(b));
            if r.is_empty() {
                break;
            }
            let neg: Vec<BigRational> = r.iter().map(|c| -c).collect();
            let next = positive_primitive(&neg);
            if next.iter().any(|c| c.bits() > max_bits) {
                return Err(PrecisionExceeded);
            }
            seq.push(next);
        }
        Ok(Sturm { seq })
    }

    fn variations(&self, x: &Point) -> usize {
        let mut last = Sign::NoSign;
        let mut v = 0;
        for p in &self.seq {
            let s = sign_at(p, x);
            if s == Sign::NoSign {
                continue;
            }
            if last != Sign::NoSign && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Point, hi: &Point) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

pub fn eval_sign(p: &[BigInt], x: &BigRational) -> Sign {
    sign_at(p, &Point::At(x.clone()))
}
