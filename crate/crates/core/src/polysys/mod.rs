//! Multivariate polynomials over a [`Field`], homogeneous ideals, Gröbner
//! bases and the projective invariants derived from them.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::field::Field;

mod geometry;
mod groebner;
mod hilbert;
mod parse;

pub use geometry::{dimension_degree, jacobian_minors, proper_intersection_number, smoothness_check, DimDeg};
pub use groebner::{groebner, is_groebner_basis, reduce};
pub use hilbert::{hilbert_polynomial, hilbert_series_numerator, HilbertPoly, HilbertSeries};
pub use parse::{format_poly, parse_poly, parse_terms, ParseError};

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("generator {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("polynomial uses {got} variables but the ring has {expected}")]
    VariableCount { got: usize, expected: usize },
    #[error("cycles of dimensions {dim_z} and {dim_y} are not complementary in a variety of dimension {dim_x}")]
    DimensionMismatch { dim_x: i64, dim_z: i64, dim_y: i64 },
    #[error("supports intersect in dimension {0}; a moving-lemma search would be required")]
    ImproperIntersection(i64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TermOrder {
    #[default]
    DegRevLex,
    Lex,
}

impl TermOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            TermOrder::Lex => a.cmp(b),
            TermOrder::DegRevLex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn monomial_degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

/// A polynomial as a list of `(exponents, coefficient)` with nonzero
/// coefficients, sorted strictly decreasing in the owning ring's term order.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<E> {
    terms: Vec<(Monomial, E)>,
}

impl<E> MultiPoly<E> {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, E)] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&(Monomial, E)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| monomial_degree(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(m, _)| monomial_degree(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Indices of variables with a positive exponent somewhere.
    pub fn support_variables(&self, nvars: usize) -> Vec<bool> {
        let mut used = vec![false; nvars];
        for (m, _) in &self.terms {
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        used
    }
}

/// Polynomial ring `k[x_0, ..., x_{n-1}]` with a fixed term order.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    pub field: F,
    pub nvars: usize,
    pub order: TermOrder,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, nvars: usize, order: TermOrder) -> Self {
        PolyRing { field, nvars, order }
    }

    /// Same field and variables, different term order.
    pub fn with_order(&self, order: TermOrder) -> Self {
        PolyRing { field: self.field.clone(), nvars: self.nvars, order }
    }

    /// Builds a polynomial from arbitrary terms: combines duplicates, drops
    /// zeros and sorts.
    pub fn from_terms(&self, terms: Vec<(Monomial, F::Elem)>) -> MultiPoly<F::Elem> {
        let mut terms = terms;
        for (m, _) in terms.iter_mut() {
            m.resize(self.nvars, 0);
        }
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, F::Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = self.field.add(&last.1, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !self.field.is_zero(c));
        MultiPoly { terms: out }
    }

    pub fn constant(&self, c: F::Elem) -> MultiPoly<F::Elem> {
        self.from_terms(vec![(vec![0; self.nvars], c)])
    }

    pub fn one(&self) -> MultiPoly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn var(&self, i: usize) -> MultiPoly<F::Elem> {
        let mut m = vec![0; self.nvars];
        m[i] = 1;
        self.from_terms(vec![(m, self.field.one())])
    }

    /// Re-sorts a polynomial produced under another order of the same ring.
    pub fn convert(&self, p: &MultiPoly<F::Elem>) -> MultiPoly<F::Elem> {
        self.from_terms(p.terms.clone())
    }

    fn merge(
        &self,
        a: &MultiPoly<F::Elem>,
        b: &MultiPoly<F::Elem>,
        combine: impl Fn(&F::Elem, &F::Elem) -> F::Elem,
        only_b: impl Fn(&F::Elem) -> F::Elem,
    ) -> MultiPoly<F::Elem> {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            match self.order.cmp(&a.terms[i].0, &b.terms[j].0) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.terms[j].0.clone(), only_b(&b.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = combine(&a.terms[i].1, &b.terms[j].1);
                    if !self.field.is_zero(&c) {
                        out.push((a.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a.terms[i..].iter().cloned());
        out.extend(b.terms[j..].iter().map(|(m, c)| (m.clone(), only_b(c))));
        MultiPoly { terms: out }
    }

    pub fn add(&self, a: &MultiPoly<F::Elem>, b: &MultiPoly<F::Elem>) -> MultiPoly<F::Elem> {
        self.merge(a, b, |x, y| self.field.add(x, y), |y| y.clone())
    }

    pub fn sub(&self, a: &MultiPoly<F::Elem>, b: &MultiPoly<F::Elem>) -> MultiPoly<F::Elem> {
        self.merge(a, b, |x, y| self.field.sub(x, y), |y| self.field.neg(y))
    }

    pub fn neg(&self, a: &MultiPoly<F::Elem>) -> MultiPoly<F::Elem> {
        MultiPoly { terms: a.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect() }
    }

    pub fn scale(&self, a: &MultiPoly<F::Elem>, c: &F::Elem) -> MultiPoly<F::Elem> {
        if self.field.is_zero(c) {
            return MultiPoly::zero();
        }
        MultiPoly { terms: a.terms.iter().map(|(m, x)| (m.clone(), self.field.mul(x, c))).collect() }
    }

    /// `c * x^m * a`; multiplying by a monomial preserves the term order.
    pub fn mul_term(&self, a: &MultiPoly<F::Elem>, m: &[u32], c: &F::Elem) -> MultiPoly<F::Elem> {
        if self.field.is_zero(c) {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: a
                .terms
                .iter()
                .map(|(am, x)| (am.iter().zip(m).map(|(u, v)| u + v).collect(), self.field.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul(&self, a: &MultiPoly<F::Elem>, b: &MultiPoly<F::Elem>) -> MultiPoly<F::Elem> {
        let mut acc = MultiPoly::zero();
        for (m, c) in &b.terms {
            acc = self.add(&acc, &self.mul_term(a, m, c));
        }
        acc
    }

    pub fn pow(&self, a: &MultiPoly<F::Elem>, k: u32) -> MultiPoly<F::Elem> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Scale so that the leading coefficient is one.
    pub fn monic(&self, a: &MultiPoly<F::Elem>) -> MultiPoly<F::Elem> {
        match a.terms.first() {
            None => MultiPoly::zero(),
            Some((_, c)) => {
                let ci = self.field.inv(c).expect("nonzero leading coefficient");
                self.scale(a, &ci)
            }
        }
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn derivative(&self, a: &MultiPoly<F::Elem>, i: usize) -> MultiPoly<F::Elem> {
        let terms = a
            .terms
            .iter()
            .filter(|(m, _)| m[i] > 0)
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2[i] -= 1;
                (m2, self.field.scale_int(c, m[i] as u64))
            })
            .collect();
        self.from_terms(terms)
    }

    pub fn eval(&self, a: &MultiPoly<F::Elem>, point: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        a.terms.iter().fold(f.zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t = f.mul(&t, x);
                }
            }
            f.add(&acc, &t)
        })
    }

    pub fn parse(&self, text: &str) -> Result<MultiPoly<F::Elem>, PolyError> {
        parse_poly(self, text)
    }

    pub fn format(&self, a: &MultiPoly<F::Elem>) -> alloc::string::String {
        format_poly(self, a)
    }
}

/// A homogeneous ideal given by generators, with a lazily computed reduced
/// Gröbner basis.
#[derive(Clone, Debug)]
pub struct HomIdeal<F: Field> {
    ring: PolyRing<F>,
    generators: Vec<MultiPoly<F::Elem>>,
    cached_basis: Option<Vec<MultiPoly<F::Elem>>>,
}

impl<F: Field> HomIdeal<F> {
    /// Zero generators are dropped; an empty list is the zero ideal.
    pub fn new(ring: PolyRing<F>, generators: Vec<MultiPoly<F::Elem>>) -> Result<Self, PolyError> {
        let generators: Vec<_> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        for (i, g) in generators.iter().enumerate() {
            if let Some((m, _)) = g.terms.first() {
                if m.len() != ring.nvars {
                    return Err(PolyError::VariableCount { got: m.len(), expected: ring.nvars });
                }
            }
            if !g.is_homogeneous() {
                return Err(PolyError::NotHomogeneous(i));
            }
        }
        Ok(HomIdeal { ring, generators, cached_basis: None })
    }

    /// Parse generators in the text grammar of [`parse_poly`].
    pub fn parse(ring: PolyRing<F>, generators: &[&str]) -> Result<Self, PolyError> {
        let gens = generators.iter().map(|g| ring.parse(g)).collect::<Result<Vec<_>, _>>()?;
        Self::new(ring, gens)
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn generators(&self) -> &[MultiPoly<F::Elem>] {
        &self.generators
    }

    /// Number of homogeneous coordinates minus one.
    pub fn ambient_dim(&self) -> usize {
        self.ring.nvars - 1
    }

    pub fn basis(&mut self) -> &[MultiPoly<F::Elem>] {
        if self.cached_basis.is_none() {
            self.cached_basis = Some(groebner(&self.ring, &self.generators));
        }
        self.cached_basis.as_deref().unwrap()
    }

    /// Reduced Gröbner basis without mutating (recomputes if not cached).
    pub fn groebner_basis(&self) -> Vec<MultiPoly<F::Elem>> {
        match &self.cached_basis {
            Some(b) => b.clone(),
            None => groebner(&self.ring, &self.generators),
        }
    }

    /// The ideal generated by both generator lists.
    pub fn sum(&self, other: &HomIdeal<F>) -> HomIdeal<F> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().map(|g| self.ring.convert(g)));
        HomIdeal { ring: self.ring.clone(), generators: gens, cached_basis: None }
    }

    pub fn with_order(&self, order: TermOrder) -> HomIdeal<F> {
        let ring = self.ring.with_order(order);
        let generators = self.generators.iter().map(|g| ring.convert(g)).collect();
        HomIdeal { ring, generators, cached_basis: None }
    }
}
