//! Finite field arithmetic on discrete logarithms with a Zech table.
//!
//! A nonzero element `g^k` is stored as `k`, zero as [`ZERO`]. Products are
//! sums of logs; `g^a + g^b = g^a (1 + g^(b-a)) = g^(a + Z(b-a))`.

use alloc::vec;
use alloc::vec::Vec;

use crate::ffield::{FieldDesc, FieldElement};

pub const ZERO: u32 = u32::MAX;

/// Largest field for which tables are built (three `u32` tables of this length).
pub const MAX_TABLE_FIELD: u64 = 1 << 22;

pub type Code = u32;

#[derive(Clone, Debug)]
pub struct ZechField {
    p: u64,
    size: u64,
    order: u32,
    /// `zech[k] = log(1 + g^k)`, `ZERO` when `g^k = -1`.
    zech: Vec<u32>,
    /// `log[index]` for nonzero indices.
    log: Vec<u32>,
    /// `antilog[k] = index of g^k`.
    antilog: Vec<u32>,
    neg_one: u32,
    desc: FieldDesc,
}

impl ZechField {
    /// `None` when the field exceeds [`MAX_TABLE_FIELD`].
    pub fn new(desc: &FieldDesc) -> Option<Self> {
        let size = desc.size();
        if size > MAX_TABLE_FIELD {
            return None;
        }
        let p = desc.p();
        let order = (size - 1) as u32;
        let g = desc.primitive_element();
        let mut antilog = vec![0u32; order as usize];
        let mut log = vec![ZERO; size as usize];
        let mut x = desc.from_u64(1);
        for k in 0..order {
            let idx = desc.index_of(&x) as u32;
            antilog[k as usize] = idx;
            log[idx as usize] = k;
            x = desc.mul_elem(&x, &g);
        }
        let mut zech = vec![ZERO; order as usize];
        for k in 0..order as usize {
            // adding one changes only the constant coordinate of the index
            let idx = antilog[k] as u64;
            let c0 = idx % p;
            let next = if c0 + 1 == p { idx - c0 } else { idx + 1 };
            zech[k] = log[next as usize];
        }
        let neg_one = if p == 2 { 0 } else { order / 2 };
        Some(ZechField { p, size, order, zech, log, antilog, neg_one, desc: desc.clone() })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.desc
    }

    pub fn encode(&self, a: &FieldElement) -> Code {
        self.log[self.desc.index_of(a) as usize]
    }

    pub fn decode(&self, c: Code) -> FieldElement {
        if c == ZERO {
            self.desc.zero_elem()
        } else {
            self.desc.from_index(self.antilog[c as usize] as u64)
        }
    }

    /// Element `i` of the enumeration `0, g^0, g^1, ...`.
    #[inline]
    pub fn nth(&self, i: u64) -> Code {
        if i == 0 {
            ZERO
        } else {
            (i - 1) as u32
        }
    }

    #[inline]
    pub fn one(&self) -> Code {
        0
    }

    #[inline]
    pub fn mul(&self, a: Code, b: Code) -> Code {
        if a == ZERO || b == ZERO {
            return ZERO;
        }
        let s = a as u64 + b as u64;
        (s % self.order as u64) as u32
    }

    /// `a^e` for `e >= 0`; `0^0 = 1`.
    #[inline]
    pub fn pow(&self, a: Code, e: u32) -> Code {
        if e == 0 {
            return 0;
        }
        if a == ZERO {
            return ZERO;
        }
        ((a as u64 * e as u64) % self.order as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: Code, b: Code) -> Code {
        if a == ZERO {
            return b;
        }
        if b == ZERO {
            return a;
        }
        let d = if b >= a { b - a } else { b + self.order - a };
        let z = self.zech[d as usize];
        if z == ZERO {
            ZERO
        } else {
            self.mul(a, z)
        }
    }

    #[inline]
    pub fn neg(&self, a: Code) -> Code {
        self.mul(a, self.neg_one)
    }

    #[inline]
    pub fn sub(&self, a: Code, b: Code) -> Code {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn inv(&self, a: Code) -> Option<Code> {
        if a == ZERO {
            None
        } else if a == 0 {
            Some(0)
        } else {
            Some(self.order - a)
        }
    }

    // Univariate polynomials: low degree first, no trailing ZERO.

    fn trim(a: &mut Vec<Code>) {
        while a.last() == Some(&ZERO) {
            a.pop();
        }
    }

    pub fn poly_eval(&self, a: &[Code], x: Code) -> Code {
        a.iter().rev().fold(ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    pub fn poly_rem(&self, a: &[Code], m: &[Code]) -> Vec<Code> {
        let mut r = a.to_vec();
        Self::trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = self.inv(m[dm]).expect("nonzero leading coefficient");
        while r.len() > dm {
            let top = r.len() - 1;
            let f = self.mul(r[top], lead_inv);
            let shift = top - dm;
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = self.sub(r[shift + i], self.mul(f, c));
            }
            r[top] = ZERO;
            Self::trim(&mut r);
        }
        r
    }

    pub fn poly_mulmod(&self, a: &[Code], b: &[Code], m: &[Code]) -> Vec<Code> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.poly_rem(&out, m)
    }

    pub fn poly_monic(&self, a: &[Code]) -> Vec<Code> {
        match a.last() {
            None => Vec::new(),
            Some(&l) => {
                let li = self.inv(l).unwrap();
                a.iter().map(|&c| self.mul(c, li)).collect()
            }
        }
    }

    pub fn poly_gcd(&self, a: &[Code], b: &[Code]) -> Vec<Code> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        Self::trim(&mut a);
        Self::trim(&mut b);
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.poly_monic(&a)
    }

    /// `y^e mod m`.
    pub fn poly_pow_y(&self, e: u64, m: &[Code]) -> Vec<Code> {
        let mut acc = self.poly_rem(&[0], m);
        let mut base = self.poly_rem(&[ZERO, 0], m);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mulmod(&acc, &base, m);
            }
            base = self.poly_mulmod(&base, &base, m);
            e >>= 1;
        }
        acc
    }

    /// Number of distinct roots in this field of a nonzero polynomial:
    /// `deg gcd(a, y^Q - y)`.
    pub fn count_roots(&self, a: &[Code]) -> u64 {
        let m = self.poly_monic(a);
        match m.len() {
            0 => panic!("zero polynomial has every element as a root"),
            1 => 0,
            2 => 1,
            // odd characteristic: a nonzero element is a square iff its log is even
            3 if self.p != 2 => {
                let four = self.add(self.add(0, 0), self.add(0, 0));
                let disc = self.sub(self.mul(m[1], m[1]), self.mul(four, m[0]));
                if disc == ZERO {
                    1
                } else if disc % 2 == 0 {
                    2
                } else {
                    0
                }
            }
            _ => {
                let mut yq = self.poly_pow_y(self.size, &m);
                // subtract y
                if yq.len() < 2 {
                    yq.resize(2, ZERO);
                }
                yq[1] = self.sub(yq[1], 0);
                Self::trim(&mut yq);
                let g = self.poly_gcd(&m, &yq);
                (g.len() - 1) as u64
            }
        }
    }
}
